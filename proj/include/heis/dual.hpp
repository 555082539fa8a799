#pragma once
/// @file dual.hpp
/// @brief Forward-mode dual numbers carrying the gradient with respect to (x, z).

#include <cmath>
#include <functional>

namespace heis {

struct Dual {
    double v = 0.0;
    double dx = 0.0;
    double dz = 0.0;

    Dual() = default;
    Dual(double value) : v(value) {}  // NOLINT: constants promote implicitly
    Dual(double value, double ddx, double ddz) : v(value), dx(ddx), dz(ddz) {}
};

inline Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.dx + b.dx, a.dz + b.dz}; }
inline Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, a.dx - b.dx, a.dz - b.dz}; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.dx, -a.dz}; }
inline Dual operator*(const Dual& a, const Dual& b) {
    return {a.v * b.v, a.dx * b.v + a.v * b.dx, a.dz * b.v + a.v * b.dz};
}
inline Dual operator/(const Dual& a, const Dual& b) {
    const double inv = 1.0 / b.v;
    return {a.v * inv, (a.dx * b.v - a.v * b.dx) * inv * inv, (a.dz * b.v - a.v * b.dz) * inv * inv};
}

inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.dx, std::cos(a.v) * a.dz}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.dx, -std::sin(a.v) * a.dz}; }
inline Dual exp(const Dual& a) {
    const double e = std::exp(a.v);
    return {e, e * a.dx, e * a.dz};
}
inline Dual sqrt(const Dual& a) {
    const double s = std::sqrt(a.v);
    return {s, 0.5 * a.dx / s, 0.5 * a.dz / s};
}
inline Dual pow(const Dual& a, double p) {
    if (p == 0.0) return {1.0};
    const double d = p * std::pow(a.v, p - 1.0);
    return {std::pow(a.v, p), d * a.dx, d * a.dz};
}
/// a^b with a variable exponent; needs a > 0 unless b is constant.
inline Dual pow(const Dual& a, const Dual& b) {
    if (b.dx == 0.0 && b.dz == 0.0) return pow(a, b.v);
    const double r = std::pow(a.v, b.v);
    const double la = std::log(a.v);
    return {r, r * (b.dx * la + b.v * a.dx / a.v), r * (b.dz * la + b.v * a.dz / a.v)};
}

/// A scalar function on V0 returning its value and first partials.
using ScalarFn = std::function<Dual(const Dual& x, const Dual& z)>;

inline Dual eval(const ScalarFn& fn, double x, double z) { return fn(Dual{x, 1.0, 0.0}, Dual{z, 0.0, 1.0}); }

inline ScalarFn constant_fn(double c) {
    return [c](const Dual&, const Dual&) { return Dual{c}; };
}

}  // namespace heis
