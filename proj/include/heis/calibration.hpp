#pragma once
/// @file calibration.hpp
/// @brief Slope fields tau, the field bar M = -tau X + (1 - tau^2/2) Y, and conservativity checks.

#include <heis/core.hpp>
#include <heis/graph.hpp>
#include <heis/grid.hpp>
#include <heis/zoo.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

/// A closed region of the (x, y)-plane and the slope field on it; lifted to H as z-independent.
struct TauRegion {
    std::string name;
    std::function<bool(double, double)> contains;
    std::function<double(double, double)> tau;
};

struct TauField {
    std::vector<TauRegion> regions;

    std::vector<int> regions_at(double x, double y) const {
        std::vector<int> out;
        for (std::size_t r = 0; r < regions.size(); ++r)
            if (regions[r].contains(x, y)) out.push_back(static_cast<int>(r));
        return out;
    }

    /// Region used at (x, y); where closed regions overlap the larger tau wins.
    std::optional<int> region_at(double x, double y) const {
        std::optional<int> best;
        double best_tau = -INFINITY;
        for (std::size_t r = 0; r < regions.size(); ++r) {
            if (!regions[r].contains(x, y)) continue;
            const double t = regions[r].tau(x, y);
            if (!best || t > best_tau) {
                best = static_cast<int>(r);
                best_tau = t;
            }
        }
        return best;
    }

    double operator()(double x, double y) const {
        const auto r = region_at(x, y);
        if (!r) throw std::domain_error("point outside every tau region");
        return regions[*r].tau(x, y);
    }
    double operator()(const Point& p) const { return (*this)(p.x, p.y); }
};

/// Curve s -> curve(s) in the (x, y)-plane separating region `plus` from region `minus`.
struct Interface {
    std::function<Vec2(double)> curve;
    std::function<double(double)> sigma;  ///< slope of the curve's tangent
    int plus = 0, minus = 0;
    double s0 = 0.0, s1 = 1.0;
};

/// Slope field of Lambda_K. Gap i is split by its nexus into W_i^- (tau = a_i) and W_i^+
/// (tau = b_i); W_0 (the complement of |y| <= alpha x) carries +-alpha; P_K carries y/x.
inline TauField tau_K(const IntervalComplement& K) {
    K.validate();
    TauField T;
    for (std::size_t i = 0; i < K.intervals.size(); ++i) {
        const auto [a, b] = K.intervals[i];
        const double m = IntervalComplement::midpoint(K.intervals[i]);
        const std::string id = std::to_string(i + 1);
        T.regions.push_back({"W" + id + "-",
                             [a, m](double x, double y) { return x >= 0 && y >= a * x && y <= m * x; },
                             [a](double, double) { return a; }});
        T.regions.push_back({"W" + id + "+",
                             [m, b](double x, double y) { return x >= 0 && y >= m * x && y <= b * x; },
                             [b](double, double) { return b; }});
    }
    const double al = K.alpha;
    T.regions.push_back({"W0+", [al](double x, double y) { return y >= 0 && y >= al * x; },
                         [al](double, double) { return al; }});
    T.regions.push_back({"W0-", [al](double x, double y) { return y <= 0 && y <= -al * x; },
                         [al](double, double) { return -al; }});
    const auto comps = K.components();
    for (std::size_t c = 0; c < comps.size(); ++c) {
        const auto [lo, hi] = comps[c];
        T.regions.push_back({"P" + std::to_string(c),
                             [lo, hi](double x, double y) { return x >= 0 && y >= lo * x && y <= hi * x; },
                             [lo](double x, double y) { return x == 0.0 ? lo : y / x; }});
    }
    return T;
}

namespace detail {

inline Interface ray_interface(Vec2 dir, int plus, int minus, double length) {
    return {[dir](double s) { return Vec2{s * dir.x, s * dir.y}; },
            [dir](double) { return dir.x == 0.0 ? INFINITY : dir.y / dir.x; }, plus, minus, 0.0, length};
}

inline int find_region(const TauField& T, const std::string& name) {
    for (std::size_t r = 0; r < T.regions.size(); ++r)
        if (T.regions[r].name == name) return static_cast<int>(r);
    throw std::logic_error("missing region " + name);
}

}  // namespace detail

/// All interfaces of tau_K, as rays from the origin of the given length. `plus` is the side with
/// the larger angle.
inline std::vector<Interface> interfaces_K(const IntervalComplement& K, const TauField& T, double length = 1.0) {
    std::vector<Interface> out;
    const auto comps = K.components();
    auto p_region = [&](std::size_t c) {
        return detail::find_region(T, "P" + std::to_string(c));
    };
    for (std::size_t i = 0; i < K.intervals.size(); ++i) {
        const auto [a, b] = K.intervals[i];
        const double m = IntervalComplement::midpoint(K.intervals[i]);
        const std::string id = std::to_string(i + 1);
        const int wm = detail::find_region(T, "W" + id + "-"), wp = detail::find_region(T, "W" + id + "+");
        out.push_back(detail::ray_interface({1.0, m}, wp, wm, length));
        out.push_back(detail::ray_interface({1.0, a}, wm, p_region(i), length));
        out.push_back(detail::ray_interface({1.0, b}, p_region(i + 1), wp, length));
    }
    const int up = detail::find_region(T, "W0+"), dn = detail::find_region(T, "W0-");
    out.push_back(detail::ray_interface({-1.0, 0.0}, dn, up, length));
    out.push_back(detail::ray_interface({1.0, K.alpha}, up, p_region(comps.size() - 1), length));
    out.push_back(detail::ray_interface({1.0, -K.alpha}, p_region(0), dn, length));
    return out;
}

/// Slope field of a flex surface: the slope of the leaf through (x, y), sigma + delta above the
/// directrix and sigma - delta below it.
inline TauField tau_flex(const FlexSurface& fs) {
    fs.validate();
    auto leaf_slope = [fs](double x, double y, bool upper) {
        auto k = [&](double s) { return upper ? fs.sigma(s) + fs.delta(s) : fs.sigma(s) - fs.delta(s); };
        auto phi = [&](double T) {
            const double s = x - T;
            return fs.cy(s) + k(s) * T - y;
        };
        const double lo = std::max(0.0, x - fs.s1), hi = std::min(fs.eps, x - fs.s0);
        if (!(hi >= lo)) throw std::domain_error("point not covered by the flex surface");
        const double plo = phi(lo);
        if (plo == 0.0 || hi == lo) return k(x - lo);
        if ((plo > 0) == (phi(hi) > 0)) throw std::domain_error("point not covered by the flex surface");
        return k(x - detail::bracket_root(phi, lo, hi));
    };
    auto inside = [fs](double x) { return x >= fs.s0 && x <= fs.s1 + fs.eps; };
    TauField T;
    T.regions.push_back({"above", [fs, inside](double x, double y) { return inside(x) && y >= fs.cy(std::min(x, fs.s1)); },
                         [leaf_slope](double x, double y) { return leaf_slope(x, y, true); }});
    T.regions.push_back({"below", [fs, inside](double x, double y) { return inside(x) && y <= fs.cy(std::min(x, fs.s1)); },
                         [leaf_slope](double x, double y) { return leaf_slope(x, y, false); }});
    return T;
}

inline std::vector<Interface> interfaces_flex(const FlexSurface& fs) {
    return {{[fs](double s) { return Vec2{s, fs.cy(s)}; }, fs.sigma, 0, 1, fs.s0, fs.s1}};
}

inline HorizontalVector bar_M(double tau, const Point& p) { return {-tau, 1.0 - 0.5 * tau * tau, p}; }
inline HorizontalVector bar_M(const TauField& T, const Point& p) { return bar_M(T(p), p); }

/// -X[tau](p) - tau(p) Y[tau](p) by fourth-order central differences along the flows of X and Y.
/// Throws if the stencil meets a second region.
inline double div_residual(const TauField& T, const Point& p, double h) {
    if (!(h > 0)) throw std::invalid_argument("step must be positive");
    const auto here = T.regions_at(p.x, p.y);
    if (here.size() != 1) throw std::domain_error("point lies on an interface");
    const TauRegion& R = T.regions[here.front()];
    auto sample = [&](const Point& q) {
        const auto at = T.regions_at(q.x, q.y);
        if (at.size() != 1 || at.front() != here.front()) throw std::domain_error("stencil crosses an interface");
        return R.tau(q.x, q.y);
    };
    auto derivative = [&](double a, double b) {
        auto v = [&](double t) { return sample(mul(p, horizontal(a, b, t))); };
        return (-v(2 * h) + 8 * v(h) - 8 * v(-h) + v(-2 * h)) / (12 * h);
    };
    return -derivative(1, 0) - R.tau(p.x, p.y) * derivative(0, 1);
}

/// (tau+ - tau-) (sigma - (tau+ + tau-)/2) at curve(s); zero iff the interface is conservative.
inline double jump_residual(const TauField& T, const Interface& iface, double s) {
    const Vec2 q = iface.curve(s);
    const double tp = T.regions.at(iface.plus).tau(q.x, q.y);
    const double tm = T.regions.at(iface.minus).tau(q.x, q.y);
    return (tp - tm) * (iface.sigma(s) - 0.5 * (tp + tm));
}

/// Field of horizontal vectors on H.
using HorizontalField = std::function<HorizontalVector(const Point&)>;

inline HorizontalField bar_M_field(const TauField& T) {
    return [T](const Point& p) { return bar_M(T, p); };
}

/// Region label used by flux_box to refine face cells that see more than one region.
using RegionLabel = std::function<int(const Point&)>;

inline RegionLabel region_label(const TauField& T) {
    return [T](const Point& p) {
        const auto r = T.region_at(p.x, p.y);
        return r ? *r : -1;
    };
}

/// Outward flux of the R^3 field v1 X + v2 Y through the boundary of a box, by the midpoint rule
/// on a res x res grid per face. Face cells whose corners and center carry different region labels
/// are bisected up to `refine` times.
inline double flux_box(const HorizontalField& V, const Box3& box, int res, const RegionLabel& label = {},
                       int refine = 8) {
    if (res < 1) throw std::invalid_argument("resolution must be positive");
    if (!(box.x1 > box.x0 && box.y1 > box.y0 && box.z1 > box.z0)) throw std::invalid_argument("degenerate box");
    // Euclidean components of v1 X + v2 Y at p.
    auto F = [&](const Point& p) {
        const HorizontalVector v = V(p);
        return Vec3{v.a, v.b, 0.5 * (v.b * p.x - v.a * p.y)};
    };
    // Integrates component c of F over the rectangle [u0,u1] x [w0,w1] of a face.
    std::function<double(const std::function<Point(double, double)>&, int, double, double, double, double, int)>
        cell = [&](const auto& at, int c, double u0, double u1, double w0, double w1, int depth) -> double {
        const double um = 0.5 * (u0 + u1), wm = 0.5 * (w0 + w1);
        if (label && depth > 0) {
            const int l = label(at(um, wm));
            const bool mixed = label(at(u0, w0)) != l || label(at(u1, w0)) != l || label(at(u0, w1)) != l ||
                               label(at(u1, w1)) != l;
            if (mixed)
                return cell(at, c, u0, um, w0, wm, depth - 1) + cell(at, c, um, u1, w0, wm, depth - 1) +
                       cell(at, c, u0, um, wm, w1, depth - 1) + cell(at, c, um, u1, wm, w1, depth - 1);
        }
        return F(at(um, wm))[c] * (u1 - u0) * (w1 - w0);
    };
    auto face = [&](const std::function<Point(double, double)>& at, int c, double u0, double u1, double w0,
                    double w1) {
        double sum = 0.0;
        const double du = (u1 - u0) / res, dw = (w1 - w0) / res;
        for (int i = 0; i < res; ++i)
            for (int j = 0; j < res; ++j)
                sum += cell(at, c, u0 + i * du, u0 + (i + 1) * du, w0 + j * dw, w0 + (j + 1) * dw, refine);
        return sum;
    };
    double flux = 0.0;
    flux += face([&](double y, double z) { return Point{box.x1, y, z}; }, 0, box.y0, box.y1, box.z0, box.z1);
    flux -= face([&](double y, double z) { return Point{box.x0, y, z}; }, 0, box.y0, box.y1, box.z0, box.z1);
    flux += face([&](double x, double z) { return Point{x, box.y1, z}; }, 1, box.x0, box.x1, box.z0, box.z1);
    flux -= face([&](double x, double z) { return Point{x, box.y0, z}; }, 1, box.x0, box.x1, box.z0, box.z1);
    flux += face([&](double x, double y) { return Point{x, y, box.z1}; }, 2, box.x0, box.x1, box.y0, box.y1);
    flux -= face([&](double x, double y) { return Point{x, y, box.z0}; }, 2, box.x0, box.x1, box.y0, box.y1);
    return flux;
}

/// M_Gamma of a sampled graph as a field on H, evaluated at Pi(p).
inline HorizontalField m_gamma_field(const GraphGrid& g) {
    auto grad = std::make_shared<ScalarField>(intrinsic_gradient(g));
    return [g, grad](const Point& p) {
        const Point v = proj_Pi(p);
        HorizontalVector m = m_gamma(g, *grad, v);
        m.base = p;
        return m;
    };
}

/// int_D <V(Psi_f(v)), -nabla_f f X + Y> dmu. Unmasked cells are sampled at their center with the
/// cell-mean slope; masked cells average the four corners.
inline double flux_graph(const GraphGrid& g, const HorizontalField& V, const std::optional<Rect>& region = {}) {
    const ScalarField grad = intrinsic_gradient(g);
    const Grid& grid = g.grid;
    auto integrand = [&](double x, double z, double f, double t) {
        const HorizontalVector v = V(mul(Point{x, 0.0, z}, Point{0.0, f, 0.0}));
        return -t * v.a + v.b;
    };
    double sum = 0.0;
    const std::size_t n = for_each_cell(grid, region, [&](int i, int k) {
        if (g.masked(i, k)) {
            double s = 0.0;
            for (int di = 0; di <= 1; ++di)
                for (int dk = 0; dk <= 1; ++dk)
                    s += integrand(grid.x(i + di), grid.z(k + dk), g(i + di, k + dk), grad(i + di, k + dk));
            sum += 0.25 * s;
        } else {
            const double xc = grid.x0 + (i + 0.5) * grid.hx(), zc = grid.z0 + (k + 0.5) * grid.hz();
            const double f = 0.25 * (g(i, k) + g(i + 1, k) + g(i, k + 1) + g(i + 1, k + 1));
            const double t = 0.25 * (grad(i, k) + grad(i + 1, k) + grad(i, k + 1) + grad(i + 1, k + 1));
            sum += integrand(xc, zc, f, t);
        }
    });
    if (n == 0) throw std::domain_error("integration region contains no cells");
    return sum * grid.cell_area();
}

}  // namespace heis
