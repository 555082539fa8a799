#pragma once
/// @file grid.hpp
/// @brief Sampled functions on rectangles of V0 and the finite-difference stencil policy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

/// Node lattice on [x0,x1] x [z0,z1]; node (i,k) sits at (x0 + i hx, z0 + k hz).
struct Grid {
    double x0 = 0.0, x1 = 1.0, z0 = 0.0, z1 = 1.0;
    int nx = 2, nz = 2;

    double hx() const { return (x1 - x0) / (nx - 1); }
    double hz() const { return (z1 - z0) / (nz - 1); }
    double x(int i) const { return i == nx - 1 ? x1 : x0 + i * hx(); }
    double z(int k) const { return k == nz - 1 ? z1 : z0 + k * hz(); }
    std::size_t size() const { return static_cast<std::size_t>(nx) * nz; }
    std::size_t cells() const { return static_cast<std::size_t>(nx - 1) * (nz - 1); }
    /// Row-major with x as the slow index.
    std::size_t idx(int i, int k) const { return static_cast<std::size_t>(i) * nz + k; }
    std::size_t cell(int i, int k) const { return static_cast<std::size_t>(i) * (nz - 1) + k; }
    double cell_area() const { return hx() * hz(); }

    void validate() const {
        if (nx < 2 || nz < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
        if (!(x1 > x0) || !(z1 > z0)) throw std::invalid_argument("grid rectangle must have x1 > x0 and z1 > z0");
        if (!std::isfinite(x0) || !std::isfinite(x1) || !std::isfinite(z0) || !std::isfinite(z1))
            throw std::invalid_argument("grid rectangle must be finite");
    }

    bool contains(double x, double z, double rel_tol = 1e-12) const {
        const double tx = rel_tol * (x1 - x0), tz = rel_tol * (z1 - z0);
        return x >= x0 - tx && x <= x1 + tx && z >= z0 - tz && z <= z1 + tz;
    }

    bool operator==(const Grid& o) const {
        return x0 == o.x0 && x1 == o.x1 && z0 == o.z0 && z1 == o.z1 && nx == o.nx && nz == o.nz;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

struct ScalarField {
    Grid grid;
    std::vector<double> values;

    double operator()(int i, int k) const { return values[grid.idx(i, k)]; }
    double& operator()(int i, int k) { return values[grid.idx(i, k)]; }
};

/// Samples of f on V0 plus an optional per-cell flag marking cells met by a singular curve.
struct GraphGrid {
    Grid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> singular_mask;  ///< empty, or one flag per cell (Grid::cell order)

    double operator()(int i, int k) const { return values[grid.idx(i, k)]; }
    bool has_mask() const {
        for (auto m : singular_mask)
            if (m) return true;
        return false;
    }
    bool masked(int i, int k) const { return !singular_mask.empty() && singular_mask[grid.cell(i, k)] != 0; }
    /// A node is masked when it is a corner of a masked cell.
    bool node_masked(int i, int k) const {
        if (singular_mask.empty()) return false;
        for (int ci = i - 1; ci <= i; ++ci)
            for (int ck = k - 1; ck <= k; ++ck)
                if (ci >= 0 && ck >= 0 && ci < grid.nx - 1 && ck < grid.nz - 1 && masked(ci, ck)) return true;
        return false;
    }
    ScalarField field() const { return {grid, values}; }

    void validate() const {
        grid.validate();
        if (values.size() != grid.size()) throw std::invalid_argument("values must have nx*nz entries");
        for (double v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("graph values must be finite");
        if (!singular_mask.empty() && singular_mask.size() != grid.cells())
            throw std::invalid_argument("singular_mask must have (nx-1)*(nz-1) entries");
    }
};

/// Axis-aligned sub-rectangle of V0; a cell belongs to it when its center does.
struct Rect {
    double x0 = 0.0, x1 = 1.0, z0 = 0.0, z1 = 1.0;
    bool contains(double x, double z) const { return x >= x0 && x <= x1 && z >= z0 && z <= z1; }
    double area() const { return (x1 - x0) * (z1 - z0); }
};

inline Rect rect_of(const Grid& g) { return {g.x0, g.x1, g.z0, g.z1}; }

template <class F>
ScalarField sample_field(const Grid& grid, F&& fn) {
    grid.validate();
    ScalarField out{grid, std::vector<double>(grid.size())};
    for (int i = 0; i < grid.nx; ++i)
        for (int k = 0; k < grid.nz; ++k) out(i, k) = fn(grid.x(i), grid.z(k));
    return out;
}

template <class F>
GraphGrid sample_graph(const Grid& grid, F&& fn) {
    auto f = sample_field(grid, fn);
    GraphGrid g{grid, std::move(f.values), {}};
    g.validate();
    return g;
}

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("grid mismatch");
}

/// Bilinear interpolation of node values; throws outside the rectangle.
inline double interpolate(const Grid& grid, const std::vector<double>& v, double x, double z) {
    if (!grid.contains(x, z)) throw std::out_of_range("point outside grid domain");
    const double u = std::clamp((x - grid.x0) / grid.hx(), 0.0, double(grid.nx - 1));
    const double w = std::clamp((z - grid.z0) / grid.hz(), 0.0, double(grid.nz - 1));
    const int i = std::min(int(u), grid.nx - 2);
    const int k = std::min(int(w), grid.nz - 2);
    const double s = u - i, t = w - k;
    return (1 - s) * (1 - t) * v[grid.idx(i, k)] + s * (1 - t) * v[grid.idx(i + 1, k)] +
           (1 - s) * t * v[grid.idx(i, k + 1)] + s * t * v[grid.idx(i + 1, k + 1)];
}

inline double interpolate(const ScalarField& f, double x, double z) { return interpolate(f.grid, f.values, x, z); }
inline double interpolate(const GraphGrid& g, double x, double z) { return interpolate(g.grid, g.values, x, z); }

enum class Axis { x, z };

namespace detail {

/// Derivative of a line of samples v[0..n) at index j. `open(e)` tells whether the edge (e, e+1)
/// may be used. Centered where both neighbours are reachable, otherwise a one-sided stencil
/// (second order when two reachable neighbours exist on that side).
template <class Line, class Open>
double line_derivative(const Line& v, int j, int n, double h, const Open& open) {
    bool back = j > 0 && open(j - 1);
    bool fwd = j < n - 1 && open(j);
    bool ignore_mask = false;
    if (!back && !fwd) {
        back = j > 0;
        fwd = j < n - 1;
        ignore_mask = true;
    }
    auto ok = [&](int e) { return ignore_mask || open(e); };
    if (back && fwd) return (v(j + 1) - v(j - 1)) / (2 * h);
    if (fwd) {
        if (j + 2 < n && ok(j + 1)) return (-3 * v(j) + 4 * v(j + 1) - v(j + 2)) / (2 * h);
        return (v(j + 1) - v(j)) / h;
    }
    if (j - 2 >= 0 && ok(j - 2)) return (3 * v(j) - 4 * v(j - 1) + v(j - 2)) / (2 * h);
    return (v(j) - v(j - 1)) / h;
}

}  // namespace detail

/// Edge (i,k)-(i+1,k) is blocked when every cell touching it is masked.
inline bool x_edge_open(const GraphGrid& g, int i, int k) {
    if (g.singular_mask.empty()) return true;
    const int nz = g.grid.nz;
    bool any_open = false;
    if (k > 0) any_open |= !g.masked(i, k - 1);
    if (k < nz - 1) any_open |= !g.masked(i, k);
    return any_open;
}

/// Edge (i,k)-(i,k+1) is blocked when every cell touching it is masked.
inline bool z_edge_open(const GraphGrid& g, int i, int k) {
    if (g.singular_mask.empty()) return true;
    const int nx = g.grid.nx;
    bool any_open = false;
    if (i > 0) any_open |= !g.masked(i - 1, k);
    if (i < nx - 1) any_open |= !g.masked(i, k);
    return any_open;
}

/// Partial derivative of node values along an axis with the stencil policy of g's mask.
inline std::vector<double> partial(const GraphGrid& g, const std::vector<double>& w, Axis axis) {
    const Grid& grid = g.grid;
    if (w.size() != grid.size()) throw std::invalid_argument("grid mismatch");
    std::vector<double> out(grid.size());
    for (int i = 0; i < grid.nx; ++i) {
        for (int k = 0; k < grid.nz; ++k) {
            if (axis == Axis::x) {
                auto line = [&](int j) { return w[grid.idx(j, k)]; };
                auto open = [&](int e) { return x_edge_open(g, e, k); };
                out[grid.idx(i, k)] = detail::line_derivative(line, i, grid.nx, grid.hx(), open);
            } else {
                auto line = [&](int j) { return w[grid.idx(i, j)]; };
                auto open = [&](int e) { return z_edge_open(g, i, e); };
                out[grid.idx(i, k)] = detail::line_derivative(line, k, grid.nz, grid.hz(), open);
            }
        }
    }
    return out;
}

inline ScalarField partial(const GraphGrid& g, const ScalarField& w, Axis axis) {
    require_same_grid(g.grid, w.grid);
    return {g.grid, partial(g, w.values, axis)};
}

/// Calls fn(i, k) for every cell whose center lies in the region (whole grid when absent).
template <class Fn>
std::size_t for_each_cell(const Grid& grid, const std::optional<Rect>& region, Fn&& fn) {
    std::size_t count = 0;
    const double hx = grid.hx(), hz = grid.hz();
    for (int i = 0; i < grid.nx - 1; ++i) {
        const double xc = grid.x0 + (i + 0.5) * hx;
        for (int k = 0; k < grid.nz - 1; ++k) {
            const double zc = grid.z0 + (k + 0.5) * hz;
            if (region && !region->contains(xc, zc)) continue;
            fn(i, k);
            ++count;
        }
    }
    return count;
}

/// Midpoint rule with the cell value taken as the mean of the four corner values.
inline double integrate(const Grid& grid, const std::vector<double>& v, const std::optional<Rect>& region = {}) {
    double sum = 0.0;
    const std::size_t n = for_each_cell(grid, region, [&](int i, int k) {
        sum += 0.25 * (v[grid.idx(i, k)] + v[grid.idx(i + 1, k)] + v[grid.idx(i, k + 1)] + v[grid.idx(i + 1, k + 1)]);
    });
    if (n == 0) throw std::domain_error("integration region contains no cells");
    return sum * grid.cell_area();
}

inline double integrate(const ScalarField& f, const std::optional<Rect>& region = {}) {
    return integrate(f.grid, f.values, region);
}

inline double measure(const Grid& grid, const std::optional<Rect>& region = {}) {
    const std::size_t n = for_each_cell(grid, region, [](int, int) {});
    if (n == 0) throw std::domain_error("integration region contains no cells");
    return n * grid.cell_area();
}

}  // namespace heis
