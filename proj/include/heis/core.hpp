#pragma once
/// @file core.hpp
/// @brief Coordinate arithmetic of the first Heisenberg group in exponential coordinates.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <variant>

namespace heis {

using Vec3 = std::array<double, 3>;

struct Point {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Group product (x,y,z)(x',y',z') = (x+x', y+y', z+z'+(xy'-yx')/2).
inline Point mul(const Point& p, const Point& q) {
    return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - p.y * q.x)};
}

inline Point inverse(const Point& p) { return {-p.x, -p.y, -p.z}; }

/// The one-parameter subgroup (aX+bY)^t, i.e. the point (ta, tb, 0).
inline Point horizontal(double a, double b, double t = 1.0) { return {t * a, t * b, 0.0}; }

struct Frame {
    Vec3 X;
    Vec3 Y;
    Vec3 Z;
};

/// Left-invariant frame at p, as Euclidean vectors.
inline Frame frame(const Point& p) {
    return {{1.0, 0.0, -0.5 * p.y}, {0.0, 1.0, 0.5 * p.x}, {0.0, 0.0, 1.0}};
}

inline Vec2 proj_pi(const Point& p) { return {p.x, p.y}; }

/// Projection to V0 = {y = 0} along Y-cosets.
inline Point proj_Pi(const Point& p) { return {p.x, 0.0, p.z - 0.5 * p.x * p.y}; }

struct HorizontalVector {
    double a = 0.0;  ///< X coefficient
    double b = 0.0;  ///< Y coefficient
    Point base{};

    double norm() const { return std::hypot(a, b); }
    double slope() const { return b / a; }
    /// Euclidean components of aX + bY at the base point.
    Vec3 euclidean() const { return {a, b, 0.5 * (b * base.x - a * base.y)}; }
};

struct Stretch {
    double a = 1.0;
    double b = 1.0;
};

struct Shear {
    double b = 0.0;
};

struct LeftTranslate {
    Point h{};
};

using GraphAutomorphism = std::variant<Stretch, Shear, LeftTranslate>;

inline void validate(const GraphAutomorphism& aut) {
    if (const auto* s = std::get_if<Stretch>(&aut)) {
        if (s->a == 0.0 || s->b == 0.0 || !std::isfinite(s->a) || !std::isfinite(s->b))
            throw std::invalid_argument("stretch requires finite nonzero a and b");
    }
}

inline Point apply_auto(const GraphAutomorphism& aut, const Point& p) {
    validate(aut);
    return std::visit(
        [&](const auto& h) -> Point {
            using T = std::decay_t<decltype(h)>;
            if constexpr (std::is_same_v<T, Stretch>)
                return {h.a * p.x, h.b * p.y, h.a * h.b * p.z};
            else if constexpr (std::is_same_v<T, Shear>)
                return {p.x, p.y + h.b * p.x, p.z};
            else
                return mul(h.h, p);
        },
        aut);
}

inline GraphAutomorphism inverse_auto(const GraphAutomorphism& aut) {
    validate(aut);
    if (const auto* s = std::get_if<Stretch>(&aut)) return Stretch{1.0 / s->a, 1.0 / s->b};
    if (const auto* s = std::get_if<Shear>(&aut)) return Shear{-s->b};
    return LeftTranslate{inverse(std::get<LeftTranslate>(aut).h)};
}

/// The map q-hat = Pi o h on V0.
inline Point induced_v0_map(const GraphAutomorphism& aut, const Point& v) {
    if (v.y != 0.0) throw std::invalid_argument("induced_v0_map expects a point of V0");
    return proj_Pi(apply_auto(aut, v));
}

/// Jacobian determinant of induced_v0_map (constant for every automorphism).
inline double v0_jacobian(const GraphAutomorphism& aut) {
    validate(aut);
    if (const auto* s = std::get_if<Stretch>(&aut)) return s->a * s->a * s->b;
    return 1.0;
}

/// Ball-box quasi-norm max(|x|, |y|, sqrt|z|); comparable to the CC norm up to constants.
inline double ballbox_norm(const Point& p) {
    return std::max({std::abs(p.x), std::abs(p.y), std::sqrt(std::abs(p.z))});
}

inline double ballbox_dist(const Point& p, const Point& q) { return ballbox_norm(mul(inverse(p), q)); }

struct LipschitzCone {
    double c = 1.0;
};

/// Strict membership |y| > max(4c|x|, sqrt(32c|z|)).
inline bool cone_contains(const LipschitzCone& cone, const Point& p) {
    if (!(cone.c > 0.0)) throw std::invalid_argument("cone parameter must be positive");
    return std::abs(p.y) > std::max(4.0 * cone.c * std::abs(p.x), std::sqrt(32.0 * cone.c * std::abs(p.z)));
}

/// |y| / max(4c|x|, sqrt(32c|z|)); exceeds 1 exactly when the point is in the cone.
inline double cone_ratio(const LipschitzCone& cone, const Point& p) {
    const double bound = std::max(4.0 * cone.c * std::abs(p.x), std::sqrt(32.0 * cone.c * std::abs(p.z)));
    if (bound == 0.0) return p.y == 0.0 ? 0.0 : INFINITY;
    return std::abs(p.y) / bound;
}

}  // namespace heis
