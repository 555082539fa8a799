#pragma once
// Shared fixtures for the unit tests and the acceptance runner.

#include <heis/heis.hpp>

#include <cmath>
#include <random>

namespace heis::testing {

/// amp * (1 - q)^4 on the ellipse q = ((x-x0)/rx)^2 + ((z-z0)/rz)^2 < 1, zero outside. C^3.
struct Bump {
    double x0 = 0, z0 = 0, rx = 0.5, rz = 0.5, amp = 1;

    Dual operator()(const Dual& x, const Dual& z) const {
        const Dual u = (x - Dual{x0}) / Dual{rx}, v = (z - Dual{z0}) / Dual{rz};
        const Dual q = u * u + v * v;
        if (q.v >= 1.0) return Dual{};
        const Dual w = Dual{1.0} - q;
        return Dual{amp} * w * w * w * w;
    }
    double operator()(double x, double z) const { return (*this)(Dual{x}, Dual{z}).v; }
    Rect support() const { return {x0 - rx, x0 + rx, z0 - rz, z0 + rz}; }
};

/// c0 + c1 x + c2 z + c3 sin(k1 x + p) cos(k2 z) + c4 x z with random coefficients.
struct SmoothFn {
    double c[5]{}, k1 = 1, k2 = 1, p = 0;

    template <class Rng>
    static SmoothFn random(Rng& rng, double scale = 0.5) {
        std::uniform_real_distribution<double> coef(-scale, scale), freq(0.5, 2.0), phase(0.0, 3.0);
        SmoothFn f;
        for (double& ci : f.c) ci = coef(rng);
        f.k1 = freq(rng);
        f.k2 = freq(rng);
        f.p = phase(rng);
        return f;
    }
    Dual operator()(const Dual& x, const Dual& z) const {
        return Dual{c[0]} + Dual{c[1]} * x + Dual{c[2]} * z +
               Dual{c[3]} * sin(Dual{k1} * x + Dual{p}) * cos(Dual{k2} * z) + Dual{c[4]} * x * z;
    }
    double operator()(double x, double z) const { return (*this)(Dual{x}, Dual{z}).v; }
    /// (d_x - f d_z) f from the exact partials.
    double grad(double x, double z) const {
        const Dual f = (*this)(Dual{x, 1, 0}, Dual{z, 0, 1});
        return f.dx - f.v * f.dz;
    }
};

inline Grid square(double x0, double x1, double z0, double z1, int nx, int nz) { return {x0, x1, z0, z1, nx, nz}; }

/// Flex surface cy = 0.1 s^2, sigma = 0.2 s, delta = 0.5 on s in [0, 1] with leaves of length 1,
/// and a V0 rectangle it covers.
inline FlexSurface demo_flex() {
    FlexSurface fs;
    fs.cy = [](double s) { return 0.1 * s * s; };
    fs.sigma = [](double s) { return 0.2 * s; };
    fs.delta = [](double) { return 0.5; };
    fs.s0 = 0.0;
    fs.s1 = 1.0;
    fs.eps = 1.0;
    return fs;
}
inline Grid demo_flex_grid(int n) { return {0.5, 1.0, -0.06, 0.025, n, n}; }

}  // namespace heis::testing
