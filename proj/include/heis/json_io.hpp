#pragma once
/// @file json_io.hpp
/// @brief JSON mirrors of grids, fans, meshes, slope-field reports and variation reports.

#include <heis/calibration.hpp>
#include <heis/core.hpp>
#include <heis/grid.hpp>
#include <heis/mesh_io.hpp>
#include <heis/variation.hpp>
#include <heis/zoo.hpp>

#include <json.hpp>

#include <optional>
#include <string>

namespace heis {

using nlohmann::json;

inline void to_json(json& j, const Point& p) { j = json::array({p.x, p.y, p.z}); }
inline void from_json(const json& j, Point& p) { p = {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

inline void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }
inline void from_json(const json& j, Vec2& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline void to_json(json& j, const Grid& g) {
    j = json{{"x0", g.x0}, {"x1", g.x1}, {"z0", g.z0}, {"z1", g.z1}, {"nx", g.nx}, {"nz", g.nz}};
}
inline void from_json(const json& j, Grid& g) {
    j.at("x0").get_to(g.x0);
    j.at("x1").get_to(g.x1);
    j.at("z0").get_to(g.z0);
    j.at("z1").get_to(g.z1);
    j.at("nx").get_to(g.nx);
    j.at("nz").get_to(g.nz);
    g.validate();
}

inline void to_json(json& j, const Rect& r) { j = json{{"x0", r.x0}, {"x1", r.x1}, {"z0", r.z0}, {"z1", r.z1}}; }
inline void from_json(const json& j, Rect& r) {
    j.at("x0").get_to(r.x0);
    j.at("x1").get_to(r.x1);
    j.at("z0").get_to(r.z0);
    j.at("z1").get_to(r.z1);
}

inline void to_json(json& j, const Box3& b) {
    j = json{{"x0", b.x0}, {"x1", b.x1}, {"y0", b.y0}, {"y1", b.y1}, {"z0", b.z0}, {"z1", b.z1}};
}
inline void from_json(const json& j, Box3& b) {
    j.at("x0").get_to(b.x0);
    j.at("x1").get_to(b.x1);
    j.at("y0").get_to(b.y0);
    j.at("y1").get_to(b.y1);
    j.at("z0").get_to(b.z0);
    j.at("z1").get_to(b.z1);
}

inline void to_json(json& j, const GraphGrid& g) {
    j = json{{"grid", g.grid}, {"values", g.values}};
    if (!g.singular_mask.empty()) j["singular_mask"] = g.singular_mask;
}
inline void from_json(const json& j, GraphGrid& g) {
    j.at("grid").get_to(g.grid);
    j.at("values").get_to(g.values);
    g.singular_mask.clear();
    if (j.contains("singular_mask")) j.at("singular_mask").get_to(g.singular_mask);
    g.validate();
}

inline void to_json(json& j, const IntervalComplement& K) { j = json{{"alpha", K.alpha}, {"intervals", K.intervals}}; }
inline void from_json(const json& j, IntervalComplement& K) {
    j.at("alpha").get_to(K.alpha);
    K.intervals.clear();
    if (j.contains("intervals")) j.at("intervals").get_to(K.intervals);
    K.validate();
}

inline RayKind ray_kind_from_string(const std::string& s) {
    if (s == "nexus") return RayKind::nexus;
    if (s == "branch") return RayKind::branch;
    if (s == "fan") return RayKind::fan;
    throw std::invalid_argument("unknown ray kind '" + s + "'");
}

inline void to_json(json& j, const Ray& r) {
    j = json{{"origin", r.origin}, {"direction", r.dir}, {"kind", to_string(r.kind)}};
    const auto s = r.slope();
    j["slope"] = s ? json(*s) : json(nullptr);
    if (r.parent >= 0) j["parent"] = r.parent;
}
inline void from_json(const json& j, Ray& r) {
    j.at("origin").get_to(r.origin);
    j.at("direction").get_to(r.dir);
    r.kind = ray_kind_from_string(j.at("kind").get<std::string>());
    r.parent = j.value("parent", -1);
}

inline void to_json(json& j, const FanGap& g) { j = json{{"lower", g.lower}, {"nexus", g.nexus}, {"upper", g.upper}}; }
inline void from_json(const json& j, FanGap& g) {
    j.at("lower").get_to(g.lower);
    j.at("nexus").get_to(g.nexus);
    j.at("upper").get_to(g.upper);
}

inline void to_json(json& j, const FanArc& a) { j = json{{"lo", a.lo}, {"hi", a.hi}}; }
inline void from_json(const json& j, FanArc& a) {
    j.at("lo").get_to(a.lo);
    j.at("hi").get_to(a.hi);
}

inline void to_json(json& j, const RayFan& f) { j = json{{"gaps", f.gaps}, {"arcs", f.arcs}, {"rays", f.rays}}; }
inline void from_json(const json& j, RayFan& f) {
    j.at("gaps").get_to(f.gaps);
    j.at("arcs").get_to(f.arcs);
    j.at("rays").get_to(f.rays);
}

inline json mesh_json(const Mesh& m) {
    json v = json::array(), t = json::array();
    for (const auto& p : m.vertices) v.push_back(p);
    for (const auto& tri : m.triangles) t.push_back(tri);
    return json{{"vertices", v}, {"triangles", t}};
}

inline void to_json(json& j, const VariationReport& r) {
    j = json{{"t", r.t_values},
             {"E_t", r.energies},
             {"analytic_slope", r.analytic_slope},
             {"fd_slope", r.fd_slope},
             {"C_fit", r.second_order_bound}};
}

inline void to_json(json& j, const LipschitzResult& r) {
    j = json{{"ok", r.ok}, {"i", r.i}, {"j", r.j}, {"worst_ratio", r.worst_ratio}};
}

/// Diagnostic record {residual_type, location, value, h}.
inline json residual_json(const std::string& type, const Point& where, double value, double h) {
    return json{{"residual_type", type}, {"location", where}, {"value", value}, {"h", h}};
}

}  // namespace heis
