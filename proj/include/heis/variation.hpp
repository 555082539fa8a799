#pragma once
/// @file variation.hpp
/// @brief Contact variations of intrinsic graphs, first-variation functionals, singular fits and
/// stretch limits.

#include <heis/core.hpp>
#include <heis/dual.hpp>
#include <heis/graph.hpp>
#include <heis/grid.hpp>
#include <heis/zoo.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace heis {

/// psi(h) = u0(Pi(h)) + y(h) u1(Pi(h)), the extension of a potential with YY psi = 0.
struct ContactPotential {
    ScalarFn u0;
    ScalarFn u1;
    std::optional<Rect> support;  ///< compact support of u0 and u1 in V0, when known

    double psi(const Point& p) const {
        const Point u = proj_Pi(p);
        return eval(u0, u.x, u.z).v + p.y * eval(u1, u.x, u.z).v;
    }
};

/// Coefficients of aX + bY + cZ.
struct ContactVector {
    double a = 0.0, b = 0.0, c = 0.0;
    Vec3 euclidean(const Point& p) const { return {a, b, c + 0.5 * (b * p.x - a * p.y)}; }
};

/// V_psi = (Y psi) X - (X psi) Y + psi Z.
inline ContactVector contact_field(const ContactPotential& pot, const Point& p) {
    const Point u = proj_Pi(p);
    const Dual w0 = eval(pot.u0, u.x, u.z);
    const Dual w1 = eval(pot.u1, u.x, u.z);
    const double y = p.y;
    const double Ypsi = w1.v;
    const double Xpsi = (w0.dx - y * w0.dz) + y * (w1.dx - y * w1.dz);
    return {Ypsi, -Xpsi, w0.v + y * w1.v};
}

/// RK4 flow of V_psi for time t.
inline Point flow(const ContactPotential& pot, const Point& p, double t, int steps = 8) {
    if (steps < 1) throw std::invalid_argument("steps must be positive");
    const double h = t / steps;
    auto F = [&](const Point& q) { return contact_field(pot, q).euclidean(q); };
    auto add = [](const Point& q, const Vec3& v, double s) { return Point{q.x + s * v[0], q.y + s * v[1], q.z + s * v[2]}; };
    Point q = p;
    for (int s = 0; s < steps; ++s) {
        const Vec3 k1 = F(q);
        const Vec3 k2 = F(add(q, k1, 0.5 * h));
        const Vec3 k3 = F(add(q, k2, 0.5 * h));
        const Vec3 k4 = F(add(q, k3, h));
        for (int c = 0; c < 3; ++c) {
            const double d = h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
            if (c == 0) q.x += d;
            else if (c == 1) q.y += d;
            else q.z += d;
        }
    }
    return q;
}

struct FlowEnergyOptions {
    int steps = 8;
    double companion = 1e-4;  ///< epsilon of the companion points p (X + t Y)^{+-eps}
    double jacobian_step = 1e-4;
};

/// Energy of the flowed graph over the flowed region, by change of variables to U: each cell center
/// u contributes N_u(t)^2 J(u) / 2, where N_u(t) is the slope of the flowed pair of companions of
/// Psi_f(u) and J is the Jacobian of Pi o flow on V0 by central differences. Cells whose center is
/// farther than 4 cell widths from the potential's support are not flowed.
inline double flow_energy(const GraphGrid& g, const ContactPotential& pot, double t, const std::optional<Rect>& region = {},
                          const FlowEnergyOptions& opt = {}) {
    const ScalarField grad = intrinsic_gradient(g);
    const Grid& grid = g.grid;
    const double margin = 4 * std::max(grid.hx(), grid.hz());
    auto near_support = [&](double x, double z) {
        if (!pot.support) return true;
        const Rect& s = *pot.support;
        return x >= s.x0 - margin && x <= s.x1 + margin && z >= s.z0 - margin && z <= s.z1 + margin;
    };
    const double eps = opt.companion, d = opt.jacobian_step;
    auto vmap = [&](double x, double z) {
        const Point q = proj_Pi(flow(pot, Point{x, 0.0, z}, t, opt.steps));
        return Vec2{q.x, q.z};
    };
    double sum = 0.0;
    const std::size_t n = for_each_cell(grid, region, [&](int i, int k) {
        const double xc = grid.x0 + (i + 0.5) * grid.hx(), zc = grid.z0 + (k + 0.5) * grid.hz();
        const double f = 0.25 * (g(i, k) + g(i + 1, k) + g(i, k + 1) + g(i + 1, k + 1));
        const double s = 0.25 * (grad(i, k) + grad(i + 1, k) + grad(i, k + 1) + grad(i + 1, k + 1));
        if (t == 0.0 || !near_support(xc, zc)) {
            sum += 0.5 * s * s;
            return;
        }
        const Point p = mul(Point{xc, 0.0, zc}, Point{0.0, f, 0.0});
        const Point qp = flow(pot, mul(p, horizontal(1.0, s, eps)), t, opt.steps);
        const Point qm = flow(pot, mul(p, horizontal(1.0, s, -eps)), t, opt.steps);
        const double dx = qp.x - qm.x;
        if (dx == 0.0) throw std::domain_error("flowed companions became vertical");
        const double N = (qp.y - qm.y) / dx;
        const Vec2 ex1 = vmap(xc + d, zc), ex0 = vmap(xc - d, zc);
        const Vec2 ez1 = vmap(xc, zc + d), ez0 = vmap(xc, zc - d);
        const double J = ((ex1.x - ex0.x) * (ez1.y - ez0.y) - (ex1.y - ex0.y) * (ez1.x - ez0.x)) / (4 * d * d);
        sum += 0.5 * N * N * J;
    });
    if (n == 0) throw std::domain_error("integration region contains no cells");
    return sum * grid.cell_area();
}

/// Samples w1 = u1 and w2 = u1 f + u0 of a potential on the nodes of g.
inline std::pair<ScalarField, ScalarField> potential_fields(const GraphGrid& g, const ContactPotential& pot) {
    ScalarField w1{g.grid, std::vector<double>(g.grid.size())}, w2 = w1;
    for (int i = 0; i < g.grid.nx; ++i)
        for (int k = 0; k < g.grid.nz; ++k) {
            const double x = g.grid.x(i), z = g.grid.z(k);
            const double u1 = eval(pot.u1, x, z).v, u0 = eval(pot.u0, x, z).v;
            w1(i, k) = u1;
            w2(i, k) = u1 * g(i, k) + u0;
        }
    return {w1, w2};
}

namespace detail {

inline void require_unmasked(const GraphGrid& g, const std::optional<Rect>& region) {
    for_each_cell(g.grid, region, [&](int i, int k) {
        if (g.masked(i, k)) throw std::invalid_argument("region contains masked cells");
    });
}

template <class Fn>
ScalarField pointwise(const Grid& grid, Fn&& fn) {
    ScalarField out{grid, std::vector<double>(grid.size())};
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] = fn(n);
    return out;
}

}  // namespace detail

/// int_U w1 nabla_f f nabla_f^2 f + (nabla_f f)^2 (d_x w1 - d_z[f w1]) / 2.
inline double A1(const GraphGrid& g, const ScalarField& w1, const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, w1.grid);
    detail::require_unmasked(g, U);
    const ScalarField t = intrinsic_gradient(g);
    const ScalarField tt = nabla_f(g, t);
    const auto w1x = partial(g, w1.values, Axis::x);
    std::vector<double> fw(w1.values.size());
    for (std::size_t n = 0; n < fw.size(); ++n) fw[n] = g.values[n] * w1.values[n];
    const auto fwz = partial(g, fw, Axis::z);
    return integrate(detail::pointwise(g.grid, [&](std::size_t n) {
                         const double s = t.values[n];
                         return w1.values[n] * s * tt.values[n] + 0.5 * s * s * (w1x[n] - fwz[n]);
                     }),
                     U);
}

/// int_U -nabla_f^2 w2 nabla_f f + (nabla_f f)^2 d_z w2 / 2.
inline double A2(const GraphGrid& g, const ScalarField& w2, const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, w2.grid);
    detail::require_unmasked(g, U);
    const ScalarField t = intrinsic_gradient(g);
    const ScalarField ww = nabla_f(g, nabla_f(g, w2));
    const auto w2z = partial(g, w2.values, Axis::z);
    return integrate(detail::pointwise(g.grid, [&](std::size_t n) {
                         const double s = t.values[n];
                         return -ww.values[n] * s + 0.5 * s * s * w2z[n];
                     }),
                     U);
}

/// int_U (w2 d_z f + nabla_f w2) nabla_f^2 f, over unmasked cells only.
inline double A2_compact(const GraphGrid& g, const ScalarField& w2, const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, w2.grid);
    const ScalarField tt = nabla_f(g, intrinsic_gradient(g));
    const auto fz = partial(g, g.values, Axis::z);
    const ScalarField nw = nabla_f(g, w2);
    const Grid& grid = g.grid;
    double sum = 0.0;
    const std::size_t cells = for_each_cell(grid, U, [&](int i, int k) {
        if (g.masked(i, k)) return;
        for (int di = 0; di <= 1; ++di)
            for (int dk = 0; dk <= 1; ++dk) {
                const std::size_t n = grid.idx(i + di, k + dk);
                sum += 0.25 * (w2.values[n] * fz[n] + nw.values[n]) * tt.values[n];
            }
    });
    if (cells == 0) throw std::domain_error("integration region contains no cells");
    return sum * grid.cell_area();
}

/// Integrand of B2(f, w) = -Delta_f w nabla_f f + (nabla_f f)^2 d_z w / 2.
inline ScalarField B2_density(const GraphGrid& g, const ScalarField& w) {
    const ScalarField t = intrinsic_gradient(g);
    const ScalarField lap = delta_f(g, w);
    const auto wz = partial(g, w.values, Axis::z);
    return detail::pointwise(g.grid, [&](std::size_t n) {
        const double s = t.values[n];
        return -lap.values[n] * s + 0.5 * s * s * wz[n];
    });
}

/// Integrand of B1(f, w) = f B2(f, w) - (3/2) (nabla_f f)^2 nabla_f w.
inline ScalarField B1_density(const GraphGrid& g, const ScalarField& w) {
    const ScalarField t = intrinsic_gradient(g);
    const ScalarField b2 = B2_density(g, w);
    const ScalarField nw = nabla_f(g, w);
    return detail::pointwise(g.grid, [&](std::size_t n) {
        const double s = t.values[n];
        return g.values[n] * b2.values[n] - 1.5 * s * s * nw.values[n];
    });
}

inline double B1(const GraphGrid& g, const ScalarField& w, const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, w.grid);
    return integrate(B1_density(g, w), U);
}

inline double B2(const GraphGrid& g, const ScalarField& w, const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, w.grid);
    return integrate(B2_density(g, w), U);
}

/// 2 d_z f nabla_f^2 f - nabla_f^3 f.
inline ScalarField harmonic_residual(const GraphGrid& g) {
    const ScalarField t1 = intrinsic_gradient(g);
    const ScalarField t2 = nabla_f(g, t1);
    const ScalarField t3 = nabla_f(g, t2);
    const auto fz = partial(g, g.values, Axis::z);
    return detail::pointwise(g.grid, [&](std::size_t n) { return 2 * fz[n] * t2.values[n] - t3.values[n]; });
}

/// Largest |residual| over nodes that are not corners of masked cells.
inline double max_abs_unmasked(const GraphGrid& g, const ScalarField& r) {
    double worst = 0.0;
    for (int i = 0; i < g.grid.nx; ++i)
        for (int k = 0; k < g.grid.nz; ++k)
            if (!g.node_masked(i, k)) worst = std::max(worst, std::abs(r(i, k)));
    return worst;
}

struct VariationReport {
    std::vector<double> t_values;
    std::vector<double> energies;
    double analytic_slope = 0.0;
    double fd_slope = 0.0;
    double second_order_bound = 0.0;  ///< max over t of |E(t) - E(0) - t analytic| / t^2
};

namespace detail {

/// Slope from energies on the schedule {-t, -t/2, t/2, t} by Richardson extrapolation.
inline void fill_report(VariationReport& rep, double t, double e0, const std::function<double(double)>& energy_at) {
    rep.t_values = {-t, -t / 2, 0.0, t / 2, t};
    rep.energies.clear();
    for (double s : rep.t_values) rep.energies.push_back(s == 0.0 ? e0 : energy_at(s));
    const double d_full = (rep.energies[4] - rep.energies[0]) / (2 * t);
    const double d_half = (rep.energies[3] - rep.energies[1]) / t;
    rep.fd_slope = (4 * d_half - d_full) / 3;
    rep.second_order_bound = 0.0;
    for (std::size_t j = 0; j < rep.t_values.size(); ++j) {
        const double s = rep.t_values[j];
        if (s == 0.0) continue;
        rep.second_order_bound =
            std::max(rep.second_order_bound, std::abs(rep.energies[j] - e0 - s * rep.analytic_slope) / (s * s));
    }
}

}  // namespace detail

/// Compares the slope of E(f + t h) with -int nabla_f^2 f h.
inline VariationReport fvf_perturbation(const GraphGrid& g, const ScalarField& h, double t,
                                        const std::optional<Rect>& U = {}) {
    require_same_grid(g.grid, h.grid);
    if (!(t > 0)) throw std::invalid_argument("t must be positive");
    detail::require_unmasked(g, U);
    const ScalarField tt = nabla_f(g, intrinsic_gradient(g));
    VariationReport rep;
    rep.analytic_slope =
        -integrate(detail::pointwise(g.grid, [&](std::size_t n) { return tt.values[n] * h.values[n]; }), U);
    auto energy_at = [&](double s) {
        GraphGrid gs = g;
        for (std::size_t n = 0; n < gs.values.size(); ++n) gs.values[n] += s * h.values[n];
        return energy(gs, U);
    };
    detail::fill_report(rep, t, energy(g, U), energy_at);
    return rep;
}

/// Compares the slope of the flowed energy with A1 + A2.
inline VariationReport contact_variation(const GraphGrid& g, const ContactPotential& pot, double t,
                                         const std::optional<Rect>& U = {}, const FlowEnergyOptions& opt = {}) {
    if (!(t > 0)) throw std::invalid_argument("t must be positive");
    const auto [w1, w2] = potential_fields(g, pot);
    VariationReport rep;
    rep.analytic_slope = A1(g, w1, U) + A2(g, w2, U);
    detail::fill_report(rep, t, flow_energy(g, pot, 0.0, U, opt), [&](double s) { return flow_energy(g, pot, s, U, opt); });
    return rep;
}

struct HerringboneA2 {
    double total = 0.0;
    double boundary_term = 0.0;  ///< (1/2) int w2(gamma(s)) delta(s) ds
    double bulk_term = 0.0;      ///< int (w2 d_z f + nabla_f w2) nabla_f^2 f over unmasked cells
    double direct = 0.0;         ///< int B2(f, w2) over all cells with masked stencils
};

/// Boundary-plus-bulk decomposition of A2 for a graph with a singular curve. The boundary term
/// uses the trapezoid rule along gamma at the grid's x-resolution over the x-range of U.
inline HerringboneA2 herringbone_A2(const PiecewiseGraph& pg, const ScalarField& w2, const std::optional<Rect>& U = {}) {
    const GraphGrid& g = pg.grid;
    require_same_grid(g.grid, w2.grid);
    const Grid& grid = g.grid;
    const double xa = U ? std::max(U->x0, grid.x0) : grid.x0;
    const double xb = U ? std::min(U->x1, grid.x1) : grid.x1;
    const int n = std::max(1, static_cast<int>(std::ceil((xb - xa) / grid.hx() - 1e-9)));
    double line = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double s = xa + (xb - xa) * j / n;
        const double gz = pg.gamma_z(s);
        if (!grid.contains(s, gz) || (U && !(gz >= U->z0 && gz <= U->z1))) continue;
        const double v = interpolate(w2, s, gz) * pg.delta(s);
        line += (j == 0 || j == n) ? 0.5 * v : v;
    }
    HerringboneA2 out;
    out.boundary_term = 0.5 * line * (xb - xa) / n;
    out.bulk_term = A2_compact(g, w2, U);
    out.total = out.boundary_term + out.bulk_term;
    out.direct = B2(g, w2, U);
    return out;
}

struct PowerFit {
    double exponent = 0.0;
    double coefficient = 0.0;
};

/// Least-squares fit of log y = log C + p log x.
inline PowerFit power_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("power fit needs >= 2 pairs");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (!(xs[j] > 0) || !(ys[j] > 0)) throw std::domain_error("power fit needs positive data");
        const double lx = std::log(xs[j]), ly = std::log(ys[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {p, std::exp((sy - p * sx) / n)};
}

struct NearSingFit {
    PowerFit value;  ///< |f(gamma(s) Z^nu) - f(gamma(s))| ~ C nu^p
    PowerFit dz;     ///< |d_z f(gamma(s) Z^nu)| ~ C nu^p
};

/// Fits the growth of f and d_z f just above the singular curve, using the exact evaluator.
inline NearSingFit near_sing_fit(const PiecewiseGraph& pg, double s, const std::vector<double>& nus) {
    const double gz = pg.gamma_z(s);
    const double base = pg.f(s, gz);
    std::vector<double> dv, dd;
    for (double nu : nus) {
        if (!(nu > 0) || !pg.grid.grid.contains(s, gz + nu)) throw std::domain_error("nu outside the domain");
        dv.push_back(std::abs(pg.f(s, gz + nu) - base));
        const double e = 1e-3 * nu;
        dd.push_back(std::abs(pg.f(s, gz + nu + e) - pg.f(s, gz + nu - e)) / (2 * e));
    }
    return {power_fit(nus, dv), power_fit(nus, dd)};
}

/// Image of a graph under s_{r, 1/r}: the domain stretches by r in x and keeps z, values scale by 1/r.
inline GraphGrid stretch_graph(const GraphGrid& g, double r) {
    if (!(r > 0)) throw std::invalid_argument("r must be positive");
    GraphGrid out = g;
    out.grid.x0 = r * g.grid.x0;
    out.grid.x1 = r * g.grid.x1;
    for (double& v : out.values) v /= r;
    return out;
}

struct StretchFit {
    double mu_D = 0.0;
    double energy = 0.0;           ///< E_W of the unstretched graph
    double E_fit = 0.0;            ///< fitted coefficient of r^-3
    double higher_fit = 0.0;       ///< fitted coefficient of r^-7
    double remainder_order = 0.0;  ///< log-log slope of S(r) - r mu(D) - E r^-3
    std::vector<double> r_values, excess;
};

/// S(r) = area of s_{r,1/r}(Gamma) over the image of D. Fits S(r) - r mu(D) = beta r^-3 + gamma r^-7.
inline StretchFit stretch_energy_fit(const GraphGrid& g, const std::vector<double>& rs, const std::optional<Rect>& D = {}) {
    if (rs.size() < 3) throw std::invalid_argument("stretch fit needs at least three r values");
    StretchFit out;
    out.mu_D = measure(g.grid, D);
    out.energy = energy(g, D);
    out.r_values = rs;
    for (double r : rs) {
        if (r < 2) throw std::invalid_argument("r values must be >= 2");
        std::optional<Rect> Dr;
        if (D) Dr = Rect{r * D->x0, r * D->x1, D->z0, D->z1};
        out.excess.push_back(area_excess(stretch_graph(g, r), Dr));
    }
    // Normal equations for excess = beta r^-3 + gamma r^-7.
    double s33 = 0, s37 = 0, s77 = 0, b3 = 0, b7 = 0;
    for (std::size_t j = 0; j < rs.size(); ++j) {
        const double p3 = std::pow(rs[j], -3), p7 = std::pow(rs[j], -7);
        s33 += p3 * p3;
        s37 += p3 * p7;
        s77 += p7 * p7;
        b3 += p3 * out.excess[j];
        b7 += p7 * out.excess[j];
    }
    const double det = s33 * s77 - s37 * s37;
    out.E_fit = (b3 * s77 - b7 * s37) / det;
    out.higher_fit = (s33 * b7 - s37 * b3) / det;
    std::vector<double> rem;
    for (std::size_t j = 0; j < rs.size(); ++j) rem.push_back(std::abs(out.excess[j] - out.energy * std::pow(rs[j], -3)));
    out.remainder_order = power_fit(rs, rem).exponent;
    return out;
}

/// Membership in the positive side of a surface.
using Epigraph = std::function<bool(const Point&)>;

/// {y >= m x + c} for the plane graph f = m x + c.
inline Epigraph plane_epigraph(double m = 0.0, double c = 0.0) {
    return [m, c](const Point& p) { return p.y >= m * p.x + c; };
}

/// {z >= height(x, y)}, the side of the fan containing large y.
inline Epigraph fan_epigraph(const RayFan& fan) {
    auto eval = std::make_shared<FanEvaluator>(fan);
    return [eval](const Point& p) { return p.z >= eval->height(p.x, p.y); };
}

/// Checks that every vertical line {(x, y, .)} in the box meets the fan and that each Y-coset over
/// the box's x-range crosses it once from the positive side, i.e. height(x, y) - xy/2 decreases
/// from +inf to -inf in y. Throws std::domain_error otherwise.
inline void check_fan_graph(const RayFan& fan, const Box3& box, int samples = 16) {
    const FanEvaluator eval(fan);
    const double L = 1e6;
    for (int i = 0; i <= samples; ++i) {
        const double x = box.x0 + (box.x1 - box.x0) * i / samples;
        const double lo = eval.height(x, -L) + 0.5 * x * L, hi = eval.height(x, L) - 0.5 * x * L;
        if (!(lo > 0 && hi < 0)) throw std::domain_error("non-graph configuration");
    }
}

/// Volume of the symmetric difference of two positive sides inside the box, by voxel centers.
inline double indicator_L1_distance(const Epigraph& A, const Epigraph& B, const Box3& box, int res) {
    if (res < 1) throw std::invalid_argument("resolution must be positive");
    const double dx = (box.x1 - box.x0) / res, dy = (box.y1 - box.y0) / res, dz = (box.z1 - box.z0) / res;
    std::size_t differ = 0;
    for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j)
            for (int k = 0; k < res; ++k) {
                const Point p{box.x0 + (i + 0.5) * dx, box.y0 + (j + 0.5) * dy, box.z0 + (k + 0.5) * dz};
                if (A(p) != B(p)) ++differ;
            }
    return static_cast<double>(differ) * dx * dy * dz;
}

}  // namespace heis
