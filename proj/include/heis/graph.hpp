#pragma once
/// @file graph.hpp
/// @brief Discrete intrinsic calculus on sampled intrinsic graphs.
///
/// The intrinsic gradient is evaluated in divergence form, nabla_f f = d_x f - d_z(f^2/2). For smooth
/// f this is the usual (d_x - f d_z) f; for piecewise-C1 f it is the distributional gradient away from
/// masked cells, and it is exact wherever f^2 is locally polynomial of degree <= 2 along z.

#include <heis/core.hpp>
#include <heis/grid.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace heis {

inline ScalarField intrinsic_gradient(const GraphGrid& g) {
    std::vector<double> half_sq(g.values.size());
    for (std::size_t n = 0; n < half_sq.size(); ++n) half_sq[n] = 0.5 * g.values[n] * g.values[n];
    auto fx = partial(g, g.values, Axis::x);
    auto flux_z = partial(g, half_sq, Axis::z);
    for (std::size_t n = 0; n < fx.size(); ++n) fx[n] -= flux_z[n];
    return {g.grid, std::move(fx)};
}

/// d_x w - f d_z w.
inline ScalarField nabla_f(const GraphGrid& g, const ScalarField& w) {
    require_same_grid(g.grid, w.grid);
    auto wx = partial(g, w.values, Axis::x);
    auto wz = partial(g, w.values, Axis::z);
    for (std::size_t n = 0; n < wx.size(); ++n) wx[n] -= g.values[n] * wz[n];
    return {g.grid, std::move(wx)};
}

/// nabla_f[d_x w] - f nabla_f[d_z w] - (nabla_f f) d_z w.
inline ScalarField delta_f(const GraphGrid& g, const ScalarField& w) {
    require_same_grid(g.grid, w.grid);
    const ScalarField wx = partial(g, w, Axis::x);
    const ScalarField wz = partial(g, w, Axis::z);
    const ScalarField a = nabla_f(g, wx);
    const ScalarField b = nabla_f(g, wz);
    const ScalarField grad = intrinsic_gradient(g);
    ScalarField out{g.grid, std::vector<double>(g.values.size())};
    for (std::size_t n = 0; n < out.values.size(); ++n)
        out.values[n] = a.values[n] - g.values[n] * b.values[n] - grad.values[n] * wz.values[n];
    return out;
}

/// Cell-based quadrature of phi(nabla_f f). Unmasked cells use phi of the corner mean; masked cells
/// use the corner mean of phi, so the two one-sided limits are kept apart.
template <class Phi>
double gradient_quadrature(const GraphGrid& g, const ScalarField& grad, const std::optional<Rect>& region, Phi phi) {
    const Grid& grid = g.grid;
    double sum = 0.0;
    const std::size_t n = for_each_cell(grid, region, [&](int i, int k) {
        const double t[4] = {grad(i, k), grad(i + 1, k), grad(i, k + 1), grad(i + 1, k + 1)};
        if (g.masked(i, k))
            sum += 0.25 * (phi(t[0]) + phi(t[1]) + phi(t[2]) + phi(t[3]));
        else
            sum += phi(0.25 * (t[0] + t[1] + t[2] + t[3]));
    });
    if (n == 0) throw std::domain_error("integration region contains no cells");
    return sum * grid.cell_area();
}

inline double energy(const GraphGrid& g, const std::optional<Rect>& region = {}) {
    return gradient_quadrature(g, intrinsic_gradient(g), region, [](double t) { return 0.5 * t * t; });
}

inline double area(const GraphGrid& g, const std::optional<Rect>& region = {}) {
    return gradient_quadrature(g, intrinsic_gradient(g), region, [](double t) { return std::sqrt(1.0 + t * t); });
}

/// area - mu(region), evaluated without cancellation.
inline double area_excess(const GraphGrid& g, const std::optional<Rect>& region = {}) {
    return gradient_quadrature(g, intrinsic_gradient(g), region,
                               [](double t) { return t * t / (std::sqrt(1.0 + t * t) + 1.0); });
}

/// Psi_f(v) = v Y^{f(v)} with f interpolated bilinearly.
inline Point psi_f(const GraphGrid& g, const Point& v) {
    const double f = interpolate(g, v.x, v.z);
    return mul(v, Point{0.0, f, 0.0});
}

inline HorizontalVector unit_normal(const GraphGrid& g, const ScalarField& grad, const Point& v) {
    const double t = interpolate(grad, v.x, v.z);
    const double s = std::sqrt(1.0 + t * t);
    return {-t / s, 1.0 / s, psi_f(g, v)};
}

inline HorizontalVector unit_normal(const GraphGrid& g, const Point& v) {
    return unit_normal(g, intrinsic_gradient(g), v);
}

/// M_Gamma = -t X + (1 - t^2/2) Y with t = nabla_f f.
inline HorizontalVector m_gamma(const GraphGrid& g, const ScalarField& grad, const Point& v) {
    const double t = interpolate(grad, v.x, v.z);
    return {-t, 1.0 - 0.5 * t * t, psi_f(g, v)};
}

inline HorizontalVector m_gamma(const GraphGrid& g, const Point& v) { return m_gamma(g, intrinsic_gradient(g), v); }

/// RK4 for dz/dx = -f(x, z) starting at a point of V0. Stops before the first step that would
/// leave the domain.
inline std::vector<Point> characteristic_curve(const GraphGrid& g, const Point& start, double x_span, int steps) {
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    if (!g.grid.contains(start.x, start.z)) throw std::domain_error("start point outside domain");
    const double h = x_span / steps;
    auto rhs = [&](double x, double z) -> std::optional<double> {
        if (!g.grid.contains(x, z)) return std::nullopt;
        return -interpolate(g, x, z);
    };
    std::vector<Point> curve{{start.x, 0.0, start.z}};
    double x = start.x, z = start.z;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = rhs(x, z);
        if (!k1) break;
        const auto k2 = rhs(x + 0.5 * h, z + 0.5 * h * *k1);
        if (!k2) break;
        const auto k3 = rhs(x + 0.5 * h, z + 0.5 * h * *k2);
        if (!k3) break;
        const auto k4 = rhs(x + h, z + h * *k3);
        if (!k4) break;
        const double zn = z + h / 6.0 * (*k1 + 2 * *k2 + 2 * *k3 + *k4);
        if (!g.grid.contains(x + h, zn)) break;
        x = s + 1 == steps ? start.x + x_span : x + h;
        z = zn;
        curve.push_back({x, 0.0, z});
    }
    if (curve.size() < 2) throw std::domain_error("characteristic curve leaves the domain immediately");
    return curve;
}

inline std::vector<Point> lift_characteristic(const GraphGrid& g, const std::vector<Point>& curve) {
    std::vector<Point> out;
    out.reserve(curve.size());
    for (const auto& v : curve) out.push_back(psi_f(g, v));
    return out;
}

/// Largest |z(p_j^{-1} p_{j+1})| / |pi(p_{j+1}) - pi(p_j)| along a polyline; zero for horizontal
/// segments and O(step^2) for a sampled horizontal curve.
inline double horizontality_residual(const std::vector<Point>& curve) {
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < curve.size(); ++j) {
        const Point d = mul(inverse(curve[j]), curve[j + 1]);
        const double len = std::hypot(d.x, d.y);
        if (len > 0.0) worst = std::max(worst, std::abs(d.z) / len);
    }
    return worst;
}

/// Scale-normalized L2 deviation of the graph's horizontal normal from nu over the ball-box ball
/// B(p, r). With no nu, the minimizing unit direction (normalized mean normal) is used.
inline double excess(const GraphGrid& g, const Point& p, double r, const std::optional<HorizontalVector>& nu = {}) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    const ScalarField grad = intrinsic_gradient(g);
    const Grid& grid = g.grid;
    struct Sample {
        double w, a, b;
    };
    std::vector<Sample> samples;
    for_each_cell(grid, std::nullopt, [&](int i, int k) {
        const double xc = grid.x0 + (i + 0.5) * grid.hx();
        const double zc = grid.z0 + (k + 0.5) * grid.hz();
        const double f = 0.25 * (g(i, k) + g(i + 1, k) + g(i, k + 1) + g(i + 1, k + 1));
        const double t = 0.25 * (grad(i, k) + grad(i + 1, k) + grad(i, k + 1) + grad(i + 1, k + 1));
        const Point q = mul(Point{xc, 0.0, zc}, Point{0.0, f, 0.0});
        if (ballbox_dist(p, q) >= r) return;
        const double s = std::sqrt(1.0 + t * t);
        samples.push_back({s * grid.cell_area(), -t / s, 1.0 / s});
    });
    if (samples.empty()) throw std::domain_error("ball does not meet the graph");
    double na, nb;
    if (nu) {
        na = nu->a;
        nb = nu->b;
    } else {
        double sa = 0.0, sb = 0.0;
        for (const auto& s : samples) {
            sa += s.w * s.a;
            sb += s.w * s.b;
        }
        const double len = std::hypot(sa, sb);
        na = sa / len;
        nb = sb / len;
    }
    double sum = 0.0;
    for (const auto& s : samples) sum += s.w * ((s.a - na) * (s.a - na) + (s.b - nb) * (s.b - nb));
    return sum / (r * r * r);
}

/// |int_U nabla_f g - (oint (f g, g) . d(x,z) + int_U g d_z f)|, boundary counterclockwise in (x, z).
inline double ibp_residual(const GraphGrid& g, const ScalarField& gfield) {
    require_same_grid(g.grid, gfield.grid);
    if (g.has_mask()) throw std::invalid_argument("integration by parts needs an unmasked graph");
    const Grid& grid = g.grid;
    const double lhs = integrate(nabla_f(g, gfield));
    const auto fz = partial(g, g.values, Axis::z);
    std::vector<double> gfz(fz.size());
    for (std::size_t n = 0; n < fz.size(); ++n) gfz[n] = gfield.values[n] * fz[n];
    const double bulk = integrate(grid, gfz);

    auto trap = [](auto&& val, int n, double h) {
        double s = 0.5 * (val(0) + val(n - 1));
        for (int j = 1; j < n - 1; ++j) s += val(j);
        return s * h;
    };
    const int nx = grid.nx, nz = grid.nz;
    const double bottom = trap([&](int i) { return g(i, 0) * gfield(i, 0); }, nx, grid.hx());
    const double top = trap([&](int i) { return g(i, nz - 1) * gfield(i, nz - 1); }, nx, grid.hx());
    const double right = trap([&](int k) { return gfield(nx - 1, k); }, nz, grid.hz());
    const double left = trap([&](int k) { return gfield(0, k); }, nz, grid.hz());
    const double boundary = bottom + right - top - left;
    return std::abs(lhs - (boundary + bulk));
}

/// Samples the graph of h(Gamma_f) on `grid`: u = Pi(h(v)) pulls back to v = Pi(h^-1(u)), and the
/// value is y(h(Psi_f(v))). Cosets of Y map to cosets of Y, so the V0 map is independent of f.
template <class F>
GraphGrid push_forward(const GraphAutomorphism& aut, F&& f, const Grid& grid) {
    const GraphAutomorphism inv = inverse_auto(aut);
    return sample_graph(grid, [&](double x, double z) {
        const Point v = induced_v0_map(inv, {x, 0.0, z});
        return apply_auto(aut, mul(v, Point{0.0, f(v.x, v.z), 0.0})).y;
    });
}

struct LipschitzResult {
    bool ok = true;
    std::size_t i = 0, j = 0;  ///< pair with the largest cone ratio
    double worst_ratio = 0.0;  ///< ok iff worst_ratio <= 1
};

/// Checks that no p_i^{-1} p_j lies in the open double cone of parameter c.
inline LipschitzResult lipschitz_check(const std::vector<Point>& points, double c) {
    if (points.size() < 2) throw std::invalid_argument("lipschitz_check needs at least two points");
    const LipschitzCone cone{c};
    LipschitzResult res;
    res.worst_ratio = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const Point d = mul(inverse(points[i]), points[j]);
            const double ratio = cone_ratio(cone, d);
            if (ratio > res.worst_ratio) {
                res.worst_ratio = ratio;
                res.i = i;
                res.j = j;
            }
            if (cone_contains(cone, d)) res.ok = false;
        }
    }
    return res;
}

}  // namespace heis
