#pragma once
/// @file zoo.hpp
/// @brief Constructors for planes, the parabola, herringbones, flex surfaces and the ray fans
/// Lambda_K and Sigma_K.

#include <heis/core.hpp>
#include <heis/graph.hpp>
#include <heis/grid.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heis {

// ---------------------------------------------------------------------------------------------
// Slope sets

/// K = [-alpha, alpha] minus finitely many disjoint open intervals.
struct IntervalComplement {
    double alpha = 1.0;
    std::vector<std::pair<double, double>> intervals;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
        double prev = -alpha;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const auto [a, b] = intervals[i];
            if (!(a < b)) throw std::invalid_argument("interval must satisfy a < b");
            if (a < -alpha || b > alpha) throw std::invalid_argument("interval must lie in [-alpha, alpha]");
            if (i > 0 && a < prev) throw std::invalid_argument("intervals must be sorted and disjoint");
            prev = b;
        }
    }

    static double midpoint(const std::pair<double, double>& I) { return (I.first + I.second) / 2; }
    static double half_width(const std::pair<double, double>& I) { return (I.second - I.first) / 2; }

    /// Closed components of K, in increasing order; single points appear as [k, k].
    std::vector<std::pair<double, double>> components() const {
        std::vector<std::pair<double, double>> out;
        double lo = -alpha;
        for (const auto& [a, b] : intervals) {
            out.emplace_back(lo, a);
            lo = b;
        }
        out.emplace_back(lo, alpha);
        return out;
    }

    bool contains(double k) const {
        if (k < -alpha || k > alpha) return false;
        for (const auto& [a, b] : intervals)
            if (k > a && k < b) return false;
        return true;
    }
};

/// Middle-thirds gaps of [-alpha, alpha] down to the given depth.
inline IntervalComplement make_cantor(int depth, double alpha) {
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    IntervalComplement K{alpha, {}};
    std::vector<std::pair<double, double>> segments{{-alpha, alpha}};
    for (int level = 0; level < depth; ++level) {
        std::vector<std::pair<double, double>> next;
        for (const auto& [l, r] : segments) {
            const double third = (r - l) / 3;
            K.intervals.emplace_back(l + third, r - third);
            next.emplace_back(l, l + third);
            next.emplace_back(r - third, r);
        }
        segments = std::move(next);
    }
    std::sort(K.intervals.begin(), K.intervals.end());
    K.validate();
    return K;
}

// ---------------------------------------------------------------------------------------------
// Graph constructors

/// Flags the cells met by the curve z = gamma_z(x), x in [xmin, xmax].
template <class G>
std::vector<std::uint8_t> mask_along_curve(const Grid& grid, G&& gamma_z,
                                           double xmin = -std::numeric_limits<double>::infinity(),
                                           double xmax = std::numeric_limits<double>::infinity(),
                                           int samples_per_cell = 8) {
    std::vector<std::uint8_t> mask(grid.cells(), 0);
    for (int i = 0; i < grid.nx - 1; ++i) {
        const double a = std::max(grid.x(i), xmin), b = std::min(grid.x(i + 1), xmax);
        if (a > b) continue;
        double lo = INFINITY, hi = -INFINITY;
        for (int s = 0; s <= samples_per_cell; ++s) {
            const double g = gamma_z(a + (b - a) * s / samples_per_cell);
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        for (int k = 0; k < grid.nz - 1; ++k)
            if (hi >= grid.z(k) && lo <= grid.z(k + 1)) mask[grid.cell(i, k)] = 1;
    }
    return mask;
}

inline GraphGrid make_plane(double m, double c, const Grid& grid) {
    return sample_graph(grid, [&](double x, double) { return m * x + c; });
}

inline GraphGrid make_parabola(const Grid& grid) {
    return sample_graph(grid, [](double x, double) { return x * x; });
}

/// A graph that is smooth on both sides of a singular curve z = gamma_z(s) in V0.
struct PiecewiseGraph {
    GraphGrid grid;                                ///< samples, with the singular curve masked
    std::function<double(double)> gamma_z;         ///< the curve is s -> (s, 0, gamma_z(s))
    std::function<double(double, double)> f;      ///< exact evaluation on either side
    std::function<double(double)> sigma0;          ///< slope of pi(C)
    std::function<double(double)> sigma_plus;      ///< limit of nabla_f f from above
    std::function<double(double)> sigma_minus;     ///< limit of nabla_f f from below

    /// (sigma+ - sigma0)^2 - (sigma0 - sigma-)^2
    double delta(double s) const {
        const double p = sigma_plus(s) - sigma0(s), m = sigma0(s) - sigma_minus(s);
        return p * p - m * m;
    }
};

namespace detail {

inline PiecewiseGraph x_axis_piecewise(const Grid& grid, std::function<double(double, double)> f, double sp,
                                       double sm) {
    grid.validate();
    if (!(grid.z0 < 0.0 && grid.z1 > 0.0)) throw std::invalid_argument("domain must straddle z = 0");
    PiecewiseGraph pg;
    pg.grid = sample_graph(grid, f);
    pg.grid.singular_mask = mask_along_curve(grid, [](double) { return 0.0; });
    pg.gamma_z = [](double) { return 0.0; };
    pg.f = std::move(f);
    pg.sigma0 = [](double) { return 0.0; };
    pg.sigma_plus = [sp](double) { return sp; };
    pg.sigma_minus = [sm](double) { return sm; };
    return pg;
}

}  // namespace detail

/// f_a(x, z) = -a sqrt|z| sign(z); slopes -a^2/2 above and +a^2/2 below the x-axis.
inline PiecewiseGraph make_herringbone(double a, const Grid& grid) {
    if (a == 0.0 || !std::isfinite(a)) throw std::invalid_argument("herringbone needs a finite nonzero a");
    auto f = [a](double, double z) { return z > 0 ? -a * std::sqrt(z) : z < 0 ? a * std::sqrt(-z) : 0.0; };
    return detail::x_axis_piecewise(grid, f, -a * a / 2, a * a / 2);
}

/// Ruled graph branching along the x-axis with slope sigma_plus < 0 above and sigma_minus > 0 below.
inline PiecewiseGraph make_broken_herringbone(double sigma_plus, double sigma_minus, const Grid& grid) {
    if (!(sigma_plus < 0.0 && sigma_minus > 0.0))
        throw std::invalid_argument("broken herringbone needs sigma_plus < 0 < sigma_minus");
    auto f = [sp = sigma_plus, sm = sigma_minus](double, double z) {
        return z > 0 ? -std::sqrt(-2 * sp * z) : z < 0 ? std::sqrt(-2 * sm * z) : 0.0;
    };
    return detail::x_axis_piecewise(grid, f, sigma_plus, sigma_minus);
}

/// The surface rho(s, t) = gamma(s) (X + (sigma(s) +- delta(s)) Y)^{|t|} around a horizontal
/// directrix gamma(s) = (s, cy(s), cz(s)) with sigma = cy'.
struct FlexSurface {
    std::function<double(double)> cy;
    std::function<double(double)> sigma;
    std::function<double(double)> delta;
    double s0 = 0.0, s1 = 1.0;
    double eps = 0.5;
    /// Optional cz; otherwise cz(s) = int_{s0}^{s} (u sigma(u) - cy(u))/2 du.
    std::function<double(double)> cz;

    void validate() const {
        if (!cy || !sigma || !delta) throw std::invalid_argument("flex surface needs cy, sigma and delta");
        if (!(s1 > s0) || !(eps > 0.0)) throw std::invalid_argument("flex surface needs s1 > s0 and eps > 0");
    }

    double cz_at(double s) const {
        if (cz) return cz(s);
        if (s == s0) return 0.0;
        auto integrand = [this](double u) { return 0.5 * (u * sigma(u) - cy(u)); };
        return boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, s0, s, 5, 1e-14);
    }
    Point gamma(double s) const { return {s, cy(s), cz_at(s)}; }
    /// z-coordinate of Pi(gamma(s)).
    double gamma_z(double s) const { return cz_at(s) - 0.5 * s * cy(s); }
    /// rho(s, t); t > 0 follows slope sigma + delta, t < 0 follows sigma - delta.
    Point rho(double s, double t) const {
        const double k = t >= 0 ? sigma(s) + delta(s) : sigma(s) - delta(s);
        return mul(gamma(s), horizontal(1.0, k, std::abs(t)));
    }
};

namespace detail {

inline bool segments_cross(Vec2 p, Vec2 p2, Vec2 q, Vec2 q2) {
    const Vec2 r{p2.x - p.x, p2.y - p.y}, s{q2.x - q.x, q2.y - q.y};
    const double den = cross(r, s);
    if (den == 0.0) return false;
    const Vec2 qp{q.x - p.x, q.y - p.y};
    const double t = cross(qp, s) / den, u = cross(qp, r) / den;
    constexpr double tol = 1e-12;
    return t > tol && t < 1 - tol && u > tol && u < 1 - tol;
}

template <class F>
double bracket_root(F&& fn, double lo, double hi) {
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(fn, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

}  // namespace detail

struct FlexResult {
    std::vector<Point> cloud;
    PiecewiseGraph piecewise;
};

/// Exact value of the flex graph function at (x, z) in V0; throws where the surface does not reach.
inline double flex_value(const FlexSurface& fs, double x, double z) {
    const double gz = fs.gamma_z(x);
    if (z == gz && x >= fs.s0 && x <= fs.s1) return fs.cy(x);
    const bool upper = z > gz;
    auto slope = [&](double s) { return upper ? fs.sigma(s) - fs.delta(s) : fs.sigma(s) + fs.delta(s); };
    auto phi = [&](double T) {
        const double s = x - T;
        return fs.gamma_z(s) - fs.cy(s) * T - 0.5 * slope(s) * T * T - z;
    };
    const double lo = std::max(0.0, x - fs.s1), hi = std::min(fs.eps, x - fs.s0);
    if (!(hi > lo)) throw std::domain_error("point not covered by the flex surface");
    const double plo = phi(lo), phi_hi = phi(hi);
    if (plo == 0.0) return fs.cy(x - lo) + slope(x - lo) * lo;
    if ((plo > 0) == (phi_hi > 0)) throw std::domain_error("point not covered by the flex surface");
    const double T = detail::bracket_root(phi, lo, hi);
    return fs.cy(x - T) + slope(x - T) * T;
}

/// Samples rho on an (ns x nt) lattice, checks that projected leaves do not cross, and grids the
/// surface as an intrinsic graph over `grid` with the singular curve masked.
inline FlexResult make_flex(const FlexSurface& fs, const Grid& grid, int ns = 64, int nt = 16) {
    fs.validate();
    if (ns < 2 || nt < 1) throw std::invalid_argument("flex sampling needs ns >= 2 and nt >= 1");
    FlexResult out;
    std::vector<std::pair<Vec2, Vec2>> leaves;
    std::vector<int> leaf_s;
    for (int j = 0; j < ns; ++j) {
        const double s = fs.s0 + (fs.s1 - fs.s0) * j / (ns - 1);
        for (int q = -nt; q <= nt; ++q) out.cloud.push_back(fs.rho(s, fs.eps * q / nt));
        for (double sign : {1.0, -1.0}) {
            const Point a = fs.rho(s, 0.0), b = fs.rho(s, sign * fs.eps);
            leaves.push_back({{a.x, a.y}, {b.x, b.y}});
            leaf_s.push_back(j);
        }
    }
    for (std::size_t i = 0; i < leaves.size(); ++i)
        for (std::size_t j = i + 1; j < leaves.size(); ++j)
            if (leaf_s[i] != leaf_s[j] &&
                detail::segments_cross(leaves[i].first, leaves[i].second, leaves[j].first, leaves[j].second))
                throw std::domain_error("flex leaves cross: the sampled surface is not injective");

    PiecewiseGraph& pg = out.piecewise;
    pg.gamma_z = [fs](double s) { return fs.gamma_z(s); };
    pg.f = [fs](double x, double z) { return flex_value(fs, x, z); };
    pg.sigma0 = fs.sigma;
    pg.sigma_plus = [fs](double s) { return fs.sigma(s) - fs.delta(s); };
    pg.sigma_minus = [fs](double s) { return fs.sigma(s) + fs.delta(s); };
    pg.grid = sample_graph(grid, pg.f);
    pg.grid.singular_mask = mask_along_curve(grid, pg.gamma_z, fs.s0, fs.s1);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Ray fans

enum class RayKind { nexus, branch, fan };

inline const char* to_string(RayKind k) {
    switch (k) {
        case RayKind::nexus: return "nexus";
        case RayKind::branch: return "branch";
        case RayKind::fan: return "fan";
    }
    return "fan";
}

/// Horizontal ray t -> origin (t dir)^1, t >= 0. Directions have unit x-speed when not vertical.
struct Ray {
    Point origin;
    Vec2 dir;
    RayKind kind = RayKind::fan;
    int parent = -1;  ///< index of the nexus ray a branch starts on

    Point at(double t) const { return mul(origin, horizontal(dir.x, dir.y, t)); }
    std::optional<double> slope() const {
        if (dir.x == 0.0) return std::nullopt;
        return dir.y / dir.x;
    }
};

/// One gap of K: the wedge swept counterclockwise from `lower` to `upper`, split by the nexus ray.
/// Points between lower and nexus lie on branch rays parallel to lower; the rest on rays parallel
/// to upper.
struct FanGap {
    Vec2 lower, nexus, upper;
};

/// A closed arc of K, swept counterclockwise from lo to hi (lo == hi for a single direction).
struct FanArc {
    Vec2 lo, hi;
};

struct FanSampling {
    double extent = 2.0;          ///< length of sampled rays and of the sampled part of each nexus
    double branch_spacing = 0.1;  ///< distance between branch origins along a nexus
    double fan_angle_step = 0.05; ///< angular resolution of fan rays across arcs of positive length
};

/// Union of horizontal rays described by its gaps and arcs, plus a finite sample of its rays.
struct RayFan {
    std::vector<FanGap> gaps;
    std::vector<FanArc> arcs;
    std::vector<Ray> rays;
};

inline Vec2 unit_x_speed(Vec2 d) {
    const double s = d.x != 0.0 ? std::abs(d.x) : std::abs(d.y);
    if (s == 0.0) throw std::invalid_argument("zero ray direction");
    return {d.x / s, d.y / s};
}

/// Cosines at the round-off level of pi/2 multiples snap to 0 so vertical rays stay vertical.
inline Vec2 direction(double angle) {
    double c = std::cos(angle);
    if (std::abs(c) < 1e-15) c = 0.0;
    return unit_x_speed({c, std::sin(angle)});
}

inline double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

/// Counterclockwise angle from a to b in [0, 2 pi).
inline double ccw_angle(double a, double b) {
    constexpr double two_pi = 2 * std::numbers::pi;
    double d = std::fmod(b - a, two_pi);
    if (d < 0) d += two_pi;
    return d;
}

inline void populate_rays(RayFan& fan, const FanSampling& s) {
    if (!(s.extent > 0 && s.branch_spacing > 0 && s.fan_angle_step > 0))
        throw std::invalid_argument("fan sampling parameters must be positive");
    fan.rays.clear();
    for (const auto& gap : fan.gaps) {
        const Vec2 u = unit_x_speed(gap.nexus);
        const double ulen = std::hypot(u.x, u.y);
        const int parent = static_cast<int>(fan.rays.size());
        fan.rays.push_back({Point{}, u, RayKind::nexus, -1});
        const int count = static_cast<int>(std::floor(s.extent / s.branch_spacing + 1e-9));
        for (int j = 1; j <= count; ++j) {
            const Point p = horizontal(u.x, u.y, j * s.branch_spacing / ulen);
            fan.rays.push_back({p, unit_x_speed(gap.lower), RayKind::branch, parent});
            fan.rays.push_back({p, unit_x_speed(gap.upper), RayKind::branch, parent});
        }
    }
    for (const auto& arc : fan.arcs) {
        const double a0 = angle_of(arc.lo);
        const double width = ccw_angle(a0, angle_of(arc.hi));
        const int n = width > 0 ? static_cast<int>(std::ceil(width / s.fan_angle_step)) : 0;
        for (int j = 0; j <= n; ++j) {
            const Vec2 d = j == 0 ? arc.lo : j == n ? arc.hi : direction(a0 + width * j / n);
            fan.rays.push_back({Point{}, unit_x_speed(d), RayKind::fan, -1});
        }
    }
}

/// Lambda_K: R0 (negative x-axis) with slope +-alpha branches, fan rays of slopes in K, and for each
/// gap (a_i, b_i) a nexus of slope m_i with branches of slopes a_i and b_i.
inline RayFan make_lambda_K(const IntervalComplement& K, const FanSampling& sampling = {}) {
    K.validate();
    RayFan fan;
    for (const auto& I : K.intervals)
        fan.gaps.push_back({{1.0, I.first}, {1.0, IntervalComplement::midpoint(I)}, {1.0, I.second}});
    fan.gaps.push_back({{1.0, K.alpha}, {-1.0, 0.0}, {1.0, -K.alpha}});
    for (const auto& [lo, hi] : K.components()) fan.arcs.push_back({{1.0, lo}, {1.0, hi}});
    populate_rays(fan, sampling);
    return fan;
}

/// Sigma_K for a finite set of directions (angles in radians); at least two distinct directions.
inline RayFan make_sigma_K(std::vector<double> angles, const FanSampling& sampling = {}) {
    constexpr double pi = std::numbers::pi;
    for (double& a : angles) {
        if (!std::isfinite(a)) throw std::invalid_argument("angles must be finite");
        a = std::remainder(a, 2 * pi);
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    if (angles.size() < 2) throw std::invalid_argument("Sigma_K needs at least two distinct directions");
    RayFan fan;
    for (std::size_t j = 0; j < angles.size(); ++j) {
        const double a = angles[j];
        const bool last = j + 1 == angles.size();
        const double b = last ? angles[0] + 2 * pi : angles[j + 1];
        // The closing gap ends on the first direction; reuse its exact vector.
        fan.gaps.push_back({direction(a), direction(0.5 * (a + b)), direction(last ? angles[0] : b)});
        fan.arcs.push_back({direction(a), direction(a)});
    }
    populate_rays(fan, sampling);
    return fan;
}

/// Sigma_{scale K} where K is read as a set of angles; requires scale * alpha < pi.
inline RayFan make_sigma_K(const IntervalComplement& K, double scale, const FanSampling& sampling = {}) {
    K.validate();
    if (!(scale > 0) || !(scale * K.alpha < std::numbers::pi))
        throw std::invalid_argument("scaled K must stay inside (-pi, pi)");
    RayFan fan;
    for (const auto& I : K.intervals)
        fan.gaps.push_back({direction(scale * I.first), direction(scale * IntervalComplement::midpoint(I)),
                            direction(scale * I.second)});
    fan.gaps.push_back({direction(scale * K.alpha), {-1.0, 0.0}, direction(-scale * K.alpha)});
    for (const auto& [lo, hi] : K.components()) fan.arcs.push_back({direction(scale * lo), direction(scale * hi)});
    populate_rays(fan, sampling);
    return fan;
}

/// Image of a fan under s_{a,b}.
inline RayFan stretch_fan(const RayFan& fan, double a, double b) {
    validate(GraphAutomorphism{Stretch{a, b}});
    auto map = [&](Vec2 v) { return unit_x_speed({a * v.x, b * v.y}); };
    const bool flip = a * b < 0;
    RayFan out;
    for (const auto& g : fan.gaps) {
        FanGap h{map(g.lower), map(g.nexus), map(g.upper)};
        if (flip) std::swap(h.lower, h.upper);
        out.gaps.push_back(h);
    }
    for (const auto& arc : fan.arcs) {
        FanArc h{map(arc.lo), map(arc.hi)};
        if (flip) std::swap(h.lo, h.hi);
        out.arcs.push_back(h);
    }
    for (const auto& r : fan.rays)
        out.rays.push_back({apply_auto(Stretch{a, b}, r.origin), map(r.dir), r.kind, r.parent});
    return out;
}

/// Evaluates a fan as a Z-graph z = height(x, y). Gap angles are precomputed once.
class FanEvaluator {
public:
    explicit FanEvaluator(const RayFan& fan) {
        for (const auto& g : fan.gaps) {
            const double a = angle_of(g.lower);
            gaps_.push_back({g, a, ccw_angle(a, angle_of(g.nexus)), ccw_angle(a, angle_of(g.upper))});
        }
    }

    double height(double x, double y) const {
        if (x == 0.0 && y == 0.0) return 0.0;
        const Vec2 v{x, y};
        const double av = std::atan2(y, x);
        for (const auto& g : gaps_) {
            const double d = ccw_angle(g.a_lower, av);
            if (!(d > 0.0 && d < g.w_upper)) continue;
            if (d == g.w_nexus) return 0.0;
            const Vec2 u = g.gap.nexus;
            const Vec2 dir = d < g.w_nexus ? g.gap.lower : g.gap.upper;
            return cross(v, dir) * cross(u, v) / (2 * cross(u, dir));
        }
        return 0.0;
    }

    /// Value of the intrinsic graph function at (x, z) in V0: the y with height(x,y) - xy/2 = z.
    double graph_value(double x, double z) const {
        auto phi = [&](double y) { return height(x, y) - 0.5 * x * y - z; };
        double lo = -1.0, hi = 1.0;
        int n = 0;
        while (!(phi(lo) >= 0.0 && phi(hi) <= 0.0)) {
            lo *= 2;
            hi *= 2;
            if (++n > 60) throw std::domain_error("fan is not an intrinsic graph over this point");
        }
        if (phi(lo) == 0.0) return lo;
        if (phi(hi) == 0.0) return hi;
        return detail::bracket_root(phi, lo, hi);
    }

private:
    struct Prepared {
        FanGap gap;
        double a_lower, w_nexus, w_upper;
    };
    std::vector<Prepared> gaps_;
};

inline double fan_height(const RayFan& fan, double x, double y) { return FanEvaluator(fan).height(x, y); }

struct Box3 {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1, z0 = 0, z1 = 1;
    double volume() const { return (x1 - x0) * (y1 - y0) * (z1 - z0); }
    double surface_area() const {
        const double a = x1 - x0, b = y1 - y0, c = z1 - z0;
        return 2 * (a * b + b * c + a * c);
    }
    bool contains(const Point& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1 && p.z >= z0 && p.z <= z1;
    }
};

/// Points on the sampled rays inside the box, spaced 1/density in arc length.
inline std::vector<Point> rayfan_sample(const RayFan& fan, const Box3& box, double density) {
    if (!(density > 0)) throw std::invalid_argument("density must be positive");
    std::vector<Point> out;
    for (const auto& r : fan.rays) {
        const double len = std::hypot(r.dir.x, r.dir.y);
        const Vec2 d{r.dir.x / len, r.dir.y / len};
        // Every coordinate of origin (t d) is affine in t.
        const double o[3] = {r.origin.x, r.origin.y, r.origin.z};
        const double v[3] = {d.x, d.y, 0.5 * (r.origin.x * d.y - r.origin.y * d.x)};
        const double lo[3] = {box.x0, box.y0, box.z0}, hi[3] = {box.x1, box.y1, box.z1};
        double t0 = 0.0, t1 = INFINITY;
        for (int c = 0; c < 3; ++c) {
            if (v[c] == 0.0) {
                if (o[c] < lo[c] || o[c] > hi[c]) t1 = -1.0;
                continue;
            }
            double ta = (lo[c] - o[c]) / v[c], tb = (hi[c] - o[c]) / v[c];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
        }
        if (!(t1 >= t0)) continue;
        const int n = static_cast<int>(std::floor((t1 - t0) * density));
        for (int j = 0; j <= n; ++j) {
            const double t = t0 + j / density;
            out.push_back(mul(r.origin, horizontal(d.x, d.y, t)));
        }
    }
    if (out.empty()) throw std::domain_error("box does not meet the fan");
    return out;
}

/// Grids a fan as an intrinsic graph over V0, masking cells met by the projected nexus rays.
inline GraphGrid rayfan_to_graph(const RayFan& fan, const Grid& grid) {
    const FanEvaluator eval(fan);
    GraphGrid g = sample_graph(grid, [&](double x, double z) { return eval.graph_value(x, z); });
    g.singular_mask.assign(grid.cells(), 0);
    for (const auto& gap : fan.gaps) {
        const Vec2 u = gap.nexus;
        std::vector<std::uint8_t> m;
        if (u.x == 0.0) {
            m = mask_along_curve(grid, [](double) { return 0.0; }, 0.0, 0.0);
            for (int i = 0; i < grid.nx - 1; ++i)
                for (int k = 0; k < grid.nz - 1; ++k)
                    if (grid.x(i) <= 0.0 && grid.x(i + 1) >= 0.0) m[grid.cell(i, k)] = 1;
        } else {
            // Pi(t u) = (t u_x, 0, -t^2 u_x u_y / 2), i.e. z = -(u_y/u_x) x^2 / 2 on the side of u.
            const double slope = u.y / u.x;
            auto curve = [slope](double x) { return -0.5 * slope * x * x; };
            m = u.x > 0 ? mask_along_curve(grid, curve, 0.0) : mask_along_curve(grid, curve, -INFINITY, 0.0);
        }
        for (std::size_t c = 0; c < m.size(); ++c) g.singular_mask[c] |= m[c];
    }
    return g;
}

/// Smallest and largest slope among rays heading in the +x direction.
inline std::pair<double, double> fan_slope_bounds(const RayFan& fan) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& r : fan.rays) {
        if (r.dir.x <= 0.0 || r.kind == RayKind::nexus) continue;
        lo = std::min(lo, r.dir.y / r.dir.x);
        hi = std::max(hi, r.dir.y / r.dir.x);
    }
    return {lo, hi};
}

}  // namespace heis
