#pragma once
/// @file mesh_io.hpp
/// @brief Triangle meshes of graphs and fans, .obj and CSV output.

#include <heis/core.hpp>
#include <heis/graph.hpp>
#include <heis/grid.hpp>
#include <heis/zoo.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace heis {

struct Mesh {
    std::vector<Point> vertices;
    std::vector<std::array<int, 3>> triangles;

    void validate() const {
        const int n = static_cast<int>(vertices.size());
        for (const auto& t : triangles) {
            for (int v : t)
                if (v < 0 || v >= n) throw std::invalid_argument("triangle index out of range");
            if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw std::invalid_argument("degenerate triangle");
        }
    }
};

/// Vertices Psi_f(node), two triangles per unmasked cell; masked cells are left out.
inline Mesh mesh_from_grid(const GraphGrid& g) {
    g.validate();
    const Grid& grid = g.grid;
    Mesh m;
    m.vertices.reserve(grid.size());
    for (int i = 0; i < grid.nx; ++i)
        for (int k = 0; k < grid.nz; ++k) m.vertices.push_back(mul(Point{grid.x(i), 0.0, grid.z(k)}, Point{0.0, g(i, k), 0.0}));
    for (int i = 0; i + 1 < grid.nx; ++i)
        for (int k = 0; k + 1 < grid.nz; ++k) {
            if (g.masked(i, k)) continue;
            const int a = static_cast<int>(grid.idx(i, k)), b = static_cast<int>(grid.idx(i + 1, k));
            const int c = static_cast<int>(grid.idx(i + 1, k + 1)), d = static_cast<int>(grid.idx(i, k + 1));
            m.triangles.push_back({a, b, c});
            m.triangles.push_back({a, c, d});
        }
    return m;
}

struct FanMesh {
    Mesh mesh;
    int strip_regions = 0;  ///< ruled strips, two per gap
    int flat_regions = 0;   ///< flat sectors, one per arc of positive length
};

namespace detail {

class VertexPool {
public:
    explicit VertexPool(Mesh& m) : mesh_(m) {}
    int add(const Point& p) {
        const auto key = std::make_tuple(p.x, p.y, p.z);
        const auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        const int id = static_cast<int>(mesh_.vertices.size());
        mesh_.vertices.push_back(p);
        index_.emplace(key, id);
        return id;
    }
    void quad(int a, int b, int c, int d) {
        tri(a, b, c);
        tri(a, c, d);
    }
    void tri(int a, int b, int c) {
        if (a != b && b != c && a != c) mesh_.triangles.push_back({a, b, c});
    }

private:
    Mesh& mesh_;
    std::map<std::tuple<double, double, double>, int> index_;
};

inline Vec2 unit(Vec2 v) {
    const double n = std::hypot(v.x, v.y);
    return {v.x / n, v.y / n};
}

}  // namespace detail

/// Meshes a fan up to distance `extent` from the origin. Each half-gap becomes a ruled strip of
/// branch rays hung off the nexus; each arc of K becomes a flat sector. Boundary rays are sampled
/// identically on both sides and vertices are shared, so the mesh is watertight along rays.
inline FanMesh mesh_from_rayfan(const RayFan& fan, double extent, int samples_per_ray, double rays_per_unit) {
    if (fan.gaps.empty() && fan.arcs.empty()) throw std::invalid_argument("empty fan");
    if (!(extent > 0) || samples_per_ray < 1 || !(rays_per_unit > 0))
        throw std::invalid_argument("mesh parameters must be positive");
    FanMesh out;
    detail::VertexPool pool(out.mesh);
    const int m = samples_per_ray;
    auto radius = [&](int j) { return extent * j / m; };
    const int origin = pool.add(Point{});

    for (const auto& gap : fan.gaps) {
        const Vec2 u = detail::unit(gap.nexus);
        const int nb = std::max(1, static_cast<int>(std::ceil(extent * rays_per_unit)));
        for (const Vec2 side : {gap.lower, gap.upper}) {
            const Vec2 d = detail::unit(side);
            // rows[i][j]: point j along the branch starting at nexus parameter tau_i.
            std::vector<std::vector<int>> rows(nb + 1, std::vector<int>(m + 1));
            for (int i = 0; i <= nb; ++i) {
                const Point start = i == 0 ? Point{} : horizontal(u.x, u.y, extent * i / nb);
                for (int j = 0; j <= m; ++j)
                    rows[i][j] = (i == 0 && j == 0) ? origin : j == 0 ? pool.add(start) : pool.add(mul(start, horizontal(d.x, d.y, radius(j))));
            }
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < m; ++j) pool.quad(rows[i][j], rows[i + 1][j], rows[i + 1][j + 1], rows[i][j + 1]);
            ++out.strip_regions;
        }
    }
    for (const auto& arc : fan.arcs) {
        const double a0 = angle_of(arc.lo);
        const double width = ccw_angle(a0, angle_of(arc.hi));
        if (width == 0.0) continue;
        const int na = std::max(1, static_cast<int>(std::ceil(width * extent * rays_per_unit)));
        std::vector<std::vector<int>> rays(na + 1, std::vector<int>(m + 1));
        for (int q = 0; q <= na; ++q) {
            const Vec2 d = q == 0 ? detail::unit(arc.lo)
                           : q == na ? detail::unit(arc.hi)
                                     : Vec2{std::cos(a0 + width * q / na), std::sin(a0 + width * q / na)};
            for (int j = 0; j <= m; ++j) rays[q][j] = j == 0 ? origin : pool.add(horizontal(d.x, d.y, radius(j)));
        }
        for (int q = 0; q < na; ++q) {
            pool.tri(origin, rays[q][1], rays[q + 1][1]);
            for (int j = 1; j < m; ++j) pool.quad(rays[q][j], rays[q][j + 1], rays[q + 1][j + 1], rays[q + 1][j]);
        }
        ++out.flat_regions;
    }
    return out;
}

namespace detail {

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

/// Writes via a temporary file in the same directory and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& data) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string());
        os.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename into " + path.string() + ": " + ec.message());
    }
}

}  // namespace detail

inline std::string obj_string(const Mesh& mesh) {
    mesh.validate();
    std::string s;
    for (const auto& v : mesh.vertices)
        s += "v " + detail::format_number(v.x) + " " + detail::format_number(v.y) + " " + detail::format_number(v.z) + "\n";
    for (const auto& t : mesh.triangles)
        s += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
    return s;
}

inline void write_obj(const Mesh& mesh, const std::filesystem::path& path) { detail::atomic_write(path, obj_string(mesh)); }

/// Reads the "v" and "f" lines of an .obj file; other lines are ignored.
inline Mesh read_obj(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    Mesh m;
    std::string line;
    auto number = [&](const std::string& tok) {
        double v = 0.0;
        const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || end != tok.data() + tok.size()) throw std::runtime_error("bad number '" + tok + "'");
        return v;
    };
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag, a, b, c;
        ls >> tag;
        if (tag == "v") {
            ls >> a >> b >> c;
            m.vertices.push_back({number(a), number(b), number(c)});
        } else if (tag == "f") {
            ls >> a >> b >> c;
            // Keep only the vertex index of "i/t/n" references.
            auto index = [&](const std::string& tok) { return static_cast<int>(number(tok.substr(0, tok.find('/')))) - 1; };
            m.triangles.push_back({index(a), index(b), index(c)});
        }
    }
    m.validate();
    return m;
}

/// Plane of a cross-section: x = value or z = value.
struct Section {
    enum Axis { x, z } axis = x;
    double value = 0.0;
};

struct SectionPoint {
    double s, y, z;
};

/// Section of a graph by a plane of V0-coordinates. For x = c the parameter s is the V0 z
/// coordinate; for z = c it is x. Points are Psi_f of the grid nodes on the section (bilinear in
/// the transverse direction when the plane falls between nodes).
inline std::vector<SectionPoint> cross_section(const GraphGrid& g, const Section& sec) {
    const Grid& grid = g.grid;
    std::vector<SectionPoint> out;
    if (sec.axis == Section::x) {
        if (sec.value < grid.x0 || sec.value > grid.x1) throw std::domain_error("empty section");
        for (int k = 0; k < grid.nz; ++k) {
            const double z = grid.z(k), f = interpolate(g, sec.value, z);
            const Point p = mul(Point{sec.value, 0.0, z}, Point{0.0, f, 0.0});
            out.push_back({z, p.y, p.z});
        }
    } else {
        if (sec.value < grid.z0 || sec.value > grid.z1) throw std::domain_error("empty section");
        for (int i = 0; i < grid.nx; ++i) {
            const double x = grid.x(i), f = interpolate(g, x, sec.value);
            const Point p = mul(Point{x, 0.0, sec.value}, Point{0.0, f, 0.0});
            out.push_back({x, p.y, p.z});
        }
    }
    return out;
}

/// Section of a fan by the vertical plane x = c, sampled at n + 1 values of y in [y0, y1]; s = y.
inline std::vector<SectionPoint> cross_section(const RayFan& fan, const Section& sec, double y0, double y1, int n) {
    if (sec.axis != Section::x) throw std::invalid_argument("fan sections need an x = const plane");
    if (n < 1 || !(y1 > y0)) throw std::domain_error("empty section");
    const FanEvaluator eval(fan);
    std::vector<SectionPoint> out;
    for (int j = 0; j <= n; ++j) {
        const double y = j == n ? y1 : y0 + (y1 - y0) * j / n;
        out.push_back({y, y, eval.height(sec.value, y)});
    }
    return out;
}

inline std::string csv_string(const std::vector<SectionPoint>& pts) {
    if (pts.empty()) throw std::domain_error("empty section");
    std::string s = "s,y,z\n";
    for (const auto& p : pts)
        s += detail::format_number(p.s) + "," + detail::format_number(p.y) + "," + detail::format_number(p.z) + "\n";
    return s;
}

inline void write_cross_section(const GraphGrid& g, const Section& sec, const std::filesystem::path& path) {
    detail::atomic_write(path, csv_string(cross_section(g, sec)));
}

inline void write_cross_section(const RayFan& fan, const Section& sec, double y0, double y1, int n,
                                const std::filesystem::path& path) {
    detail::atomic_write(path, csv_string(cross_section(fan, sec, y0, y1, n)));
}

}  // namespace heis
