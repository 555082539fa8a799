// heis: command-line front end. Every command reads a JSON config and writes fixed-name files into
// the --out directory. Exit codes: 0 pass, 1 diagnostic failure, 2 usage or config error.

#include <heis/heis.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace heis;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    fs::path config_path;
    fs::path out = ".";
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::optional<int> resolution;
};

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get_or(const json& obj, const std::string& key, T fallback) {
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

void write_json(const fs::path& path, const json& j) { detail::atomic_write(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------------------------------------
// Surfaces

struct Surface {
    std::string type;
    std::optional<GraphGrid> graph;
    std::optional<PiecewiseGraph> piecewise;
    std::optional<RayFan> fan;
    std::optional<FlexSurface> flex;
    double extent = 2.0;

    const GraphGrid& grid() const { return piecewise ? piecewise->grid : *graph; }
};

const std::set<std::string> kSurfaceKeys = {"type",   "domain",      "resolution", "m",     "c",       "a",
                                            "sigma_plus", "sigma_minus", "cy",     "sigma", "delta",   "s0",
                                            "s1",     "eps",         "f",          "path",  "alpha",   "intervals",
                                            "depth",  "angles",      "scale",      "extent", "branch_spacing"};

Grid domain_of(const json& s, const Options& opt, Grid fallback) {
    Grid g = fallback;
    if (s.contains("domain")) {
        const json& d = s.at("domain");
        check_keys(d, {"x0", "x1", "z0", "z1"}, "surface.domain");
        g.x0 = d.at("x0").get<double>();
        g.x1 = d.at("x1").get<double>();
        g.z0 = d.at("z0").get<double>();
        g.z1 = d.at("z1").get<double>();
    }
    const int n = opt.resolution ? *opt.resolution : get_or(s, "resolution", 65);
    g.nx = g.nz = n;
    g.validate();
    return g;
}

IntervalComplement read_K(const json& s) {
    IntervalComplement K;
    K.alpha = get_or(s, "alpha", 1.0);
    if (s.contains("depth")) {
        if (s.contains("intervals")) throw ConfigError("give either depth or intervals, not both");
        return make_cantor(s.at("depth").get<int>(), K.alpha);
    }
    if (s.contains("intervals")) s.at("intervals").get_to(K.intervals);
    K.validate();
    return K;
}

std::function<double(double)> expr_of_x(const std::string& text) {
    const Expr e = Expr::parse(text);
    return [e](double x) { return e(x, 0.0); };
}

Surface build_surface(const json& s, const Options& opt) {
    check_keys(s, kSurfaceKeys, "surface");
    Surface out;
    out.type = s.at("type").get<std::string>();
    const std::string& t = out.type;
    if (t == "plane") {
        out.graph = make_plane(get_or(s, "m", 0.0), get_or(s, "c", 0.0), domain_of(s, opt, {0, 1, 0, 1}));
    } else if (t == "parabola") {
        out.graph = make_parabola(domain_of(s, opt, {-1, 1, -1, 1}));
    } else if (t == "expression") {
        const Expr f = Expr::parse(s.at("f").get<std::string>());
        out.graph = sample_graph(domain_of(s, opt, {-1, 1, -1, 1}), [&](double x, double z) { return f(x, z); });
    } else if (t == "grid_file") {
        std::ifstream is(s.at("path").get<std::string>());
        if (!is) throw ConfigError("cannot open grid file");
        GraphGrid g = json::parse(is).get<GraphGrid>();
        out.graph = std::move(g);
    } else if (t == "herringbone") {
        Grid g = domain_of(s, opt, {0, 1, -1, 1});
        if (!opt.resolution && !s.contains("resolution")) g.nz = 64;
        out.piecewise = make_herringbone(get_or(s, "a", 1.0), g);
    } else if (t == "broken_herringbone") {
        Grid g = domain_of(s, opt, {0, 1, -1, 1});
        if (!opt.resolution && !s.contains("resolution")) g.nz = 64;
        out.piecewise = make_broken_herringbone(get_or(s, "sigma_plus", -0.1), get_or(s, "sigma_minus", 0.3), g);
    } else if (t == "flex") {
        FlexSurface f;
        const Expr cy = Expr::parse(s.at("cy").get<std::string>());
        f.cy = [cy](double x) { return cy(x, 0.0); };
        if (s.contains("sigma")) {
            f.sigma = expr_of_x(s.at("sigma").get<std::string>());
        } else {
            f.sigma = [cy](double x) { return cy(Dual{x, 1, 0}, Dual{0.0}).dx; };
        }
        f.delta = expr_of_x(s.at("delta").get<std::string>());
        f.s0 = get_or(s, "s0", 0.0);
        f.s1 = get_or(s, "s1", 1.0);
        f.eps = get_or(s, "eps", 0.5);
        out.piecewise = make_flex(f, domain_of(s, opt, {0.5, 1.0, -0.06, 0.025})).piecewise;
        out.flex = f;
    } else if (t == "lambda_k" || t == "cantor" || t == "sigma_k") {
        FanSampling fs;
        out.extent = get_or(s, "extent", 2.0);
        fs.extent = out.extent;
        fs.branch_spacing = get_or(s, "branch_spacing", 0.1);
        if (t == "sigma_k" && s.contains("angles")) {
            out.fan = make_sigma_K(s.at("angles").get<std::vector<double>>(), fs);
        } else if (t == "sigma_k") {
            out.fan = make_sigma_K(read_K(s), get_or(s, "scale", 1.0), fs);
        } else {
            if (t == "cantor" && !s.contains("depth")) throw ConfigError("cantor needs depth");
            out.fan = make_lambda_K(read_K(s), fs);
        }
        out.graph = rayfan_to_graph(*out.fan, domain_of(s, opt, {-1, 1, -1, 1}));
    } else {
        throw ConfigError("unknown surface type '" + t + "'");
    }
    return out;
}

json base_report(const json& config, const Options& opt, double tol) {
    return json{{"command", opt.command}, {"config_hash", fnv1a(config.dump())}, {"seed", opt.seed}, {"tol", tol}};
}

// ---------------------------------------------------------------------------------------------
// Commands

int cmd_construct(const json& cfg, const Options& opt) {
    check_keys(cfg, {"surface", "mesh", "section"}, "config");
    const Surface s = build_surface(cfg.at("surface"), opt);
    json rep = base_report(cfg, opt, opt.tol.value_or(0.0));
    rep["surface"] = s.type;
    const json mcfg = cfg.value("mesh", json::object());
    check_keys(mcfg, {"samples_per_ray", "rays_per_unit"}, "mesh");
    const json scfg = cfg.value("section", json::object());
    check_keys(scfg, {"x", "samples"}, "section");
    Mesh mesh;
    if (s.fan) {
        const FanMesh fm = mesh_from_rayfan(*s.fan, s.extent, get_or(mcfg, "samples_per_ray", 16),
                                            get_or(mcfg, "rays_per_unit", 8.0));
        mesh = fm.mesh;
        rep["strip_regions"] = fm.strip_regions;
        rep["flat_regions"] = fm.flat_regions;
        rep["rays"] = s.fan->rays.size();
        write_json(opt.out / "fan.json", json(*s.fan));
        write_cross_section(*s.fan, {Section::x, get_or(scfg, "x", 1.0)}, -s.extent, s.extent,
                            get_or(scfg, "samples", 400), opt.out / "section.csv");
    } else {
        const GraphGrid& g = s.grid();
        mesh = mesh_from_grid(g);
        std::size_t masked = 0;
        for (auto m : g.singular_mask) masked += m != 0;
        rep["masked_cells"] = masked;
        write_cross_section(g, {Section::x, get_or(scfg, "x", 0.5 * (g.grid.x0 + g.grid.x1))},
                            opt.out / "section.csv");
    }
    write_json(opt.out / "surface.json", json(s.grid()));
    write_obj(mesh, opt.out / "surface.obj");
    rep["vertices"] = mesh.vertices.size();
    rep["triangles"] = mesh.triangles.size();
    write_json(opt.out / "report.json", rep);
    return 0;
}

int cmd_analyze(const json& cfg, const Options& opt) {
    check_keys(cfg, {"surface", "lipschitz_c", "lipschitz_samples"}, "config");
    const Surface s = build_surface(cfg.at("surface"), opt);
    const GraphGrid& g = s.grid();
    const double tol = opt.tol.value_or(INFINITY);
    json rep = base_report(cfg, opt, opt.tol.value_or(0.0));
    rep["energy"] = energy(g);
    rep["area"] = area(g);
    const double res = max_abs_unmasked(g, harmonic_residual(g));
    rep["harmonic_residual_max"] = res;
    const int stride_n = get_or(cfg, "lipschitz_samples", 16);
    std::vector<Point> pts;
    for (int a = 0; a < stride_n; ++a)
        for (int b = 0; b < stride_n; ++b) {
            const int i = a * (g.grid.nx - 1) / std::max(1, stride_n - 1);
            const int k = b * (g.grid.nz - 1) / std::max(1, stride_n - 1);
            pts.push_back(mul(Point{g.grid.x(i), 0.0, g.grid.z(k)}, Point{0.0, g(i, k), 0.0}));
        }
    const double c = get_or(cfg, "lipschitz_c", 1.0);
    const LipschitzResult lip = lipschitz_check(pts, c);
    rep["lipschitz_check"] = lip;
    rep["lipschitz_check"]["c"] = c;
    const bool pass = lip.ok && res <= tol;
    rep["pass"] = pass;
    write_json(opt.out / "analysis.json", rep);
    return pass ? 0 : 1;
}

int cmd_calibrate(const json& cfg, const Options& opt) {
    check_keys(cfg, {"K", "perturb", "boxes", "box_resolution", "div_h", "surface"}, "config");
    const json kcfg = cfg.value("K", json::object());
    check_keys(kcfg, {"alpha", "intervals", "depth"}, "K");
    const IntervalComplement K = read_K(kcfg);
    TauField T = tau_K(K);
    if (cfg.contains("perturb")) {
        const json& p = cfg.at("perturb");
        check_keys(p, {"gap", "amount"}, "perturb");
        const int gap = p.at("gap").get<int>();
        const double amount = p.at("amount").get<double>();
        if (gap < 1 || gap > static_cast<int>(K.intervals.size())) throw ConfigError("perturb.gap out of range");
        const double b = K.intervals[gap - 1].second + amount;
        T.regions[2 * (gap - 1) + 1].tau = [b](double, double) { return b; };
    }
    const double tol = opt.tol.value_or(1e-6);
    const double div_h = get_or(cfg, "div_h", 1e-3);
    json rep = base_report(cfg, opt, tol);
    bool pass = true;

    json divs = json::array();
    double div_max = 0.0;
    for (std::size_t r = 0; r < T.regions.size(); ++r) {
        // Sample point at radius 0.5 on the bisector of the region's angular range.
        const std::string& name = T.regions[r].name;
        std::optional<Point> p;
        for (int q = 1; q < 720 && !p; ++q) {
            const double th = -std::numbers::pi + 2 * std::numbers::pi * q / 720;
            const Point c{0.5 * std::cos(th), 0.5 * std::sin(th), 0.0};
            if (T.regions_at(c.x, c.y) == std::vector<int>{static_cast<int>(r)}) {
                // Walk to the middle of this run of angles.
                int q1 = q;
                while (q1 + 1 < 720) {
                    const double t1 = -std::numbers::pi + 2 * std::numbers::pi * (q1 + 1) / 720;
                    if (T.regions_at(0.5 * std::cos(t1), 0.5 * std::sin(t1)) != std::vector<int>{static_cast<int>(r)}) break;
                    ++q1;
                }
                const double tm = -std::numbers::pi + std::numbers::pi * (q + q1) / 720;
                p = Point{0.5 * std::cos(tm), 0.5 * std::sin(tm), 0.0};
            }
        }
        if (!p) continue;
        try {
            const double v = div_residual(T, *p, div_h);
            div_max = std::max(div_max, std::abs(v));
            json d = residual_json("div", *p, v, div_h);
            d["region"] = name;
            divs.push_back(d);
        } catch (const std::domain_error&) {
            // Region too thin for the stencil at this radius.
        }
    }
    rep["div_residuals"] = divs;
    pass = pass && div_max <= tol;

    const auto ifaces = interfaces_K(K, T);
    json jumps = json::array();
    double jump_max = 0.0;
    for (const auto& f : ifaces)
        for (int e = 0; e <= 10; ++e) {
            const double s = std::ldexp(1.0, -e);
            const double v = jump_residual(T, f, s);
            jump_max = std::max(jump_max, std::abs(v));
            const Vec2 q = f.curve(s);
            jumps.push_back(residual_json("jump", {q.x, q.y, 0.0}, v, 0.0));
        }
    rep["jump_residuals"] = jumps;
    rep["jump_max"] = jump_max;
    pass = pass && jump_max == 0.0;

    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    const int nbox = get_or(cfg, "boxes", 20);
    const int res = opt.resolution ? *opt.resolution : get_or(cfg, "box_resolution", 16);
    json boxes = json::array();
    double worst_ratio = 0.0;
    const auto V = bar_M_field(T);
    const auto label = region_label(T);
    for (int b = 0; b < nbox; ++b) {
        const auto& f = ifaces[static_cast<std::size_t>(U01(rng) * ifaces.size()) % ifaces.size()];
        const Vec2 c = f.curve(0.3 + 0.6 * U01(rng));
        const double side = 0.05 + 0.1 * U01(rng);
        const double ox = (U01(rng) - 0.5) * side, oy = (U01(rng) - 0.5) * side, zc = U01(rng) - 0.5;
        Box3 box{c.x + ox - side / 2, c.x + ox + side / 2, c.y + oy - side / 2, c.y + oy + side / 2,
                 zc - side / 2, zc + side / 2};
        const double flux = flux_box(V, box, res, label);
        const double h = side / res;
        const double ratio = std::abs(flux) / (box.surface_area() * h);
        worst_ratio = std::max(worst_ratio, ratio);
        json d = residual_json("box_flux", {0.5 * (box.x0 + box.x1), 0.5 * (box.y0 + box.y1), zc}, flux, h);
        d["box"] = box;
        boxes.push_back(d);
    }
    rep["box_fluxes"] = boxes;
    rep["box_flux_ratio_max"] = worst_ratio;
    pass = pass && worst_ratio <= 0.05;

    if (cfg.contains("surface")) {
        const Surface s = build_surface(cfg.at("surface"), opt);
        const GraphGrid& g = s.grid();
        const double lhs = flux_graph(g, m_gamma_field(g));
        const double rhs = measure(g.grid) + energy(g);
        rep["flux_energy_identity"] = {{"flux", lhs}, {"mu_plus_energy", rhs}, {"relative_error", std::abs(lhs - rhs) / rhs}};
        pass = pass && std::abs(lhs - rhs) <= 0.01 * rhs;
    }
    rep["pass"] = pass;
    write_json(opt.out / "calibration.json", rep);
    return pass ? 0 : 1;
}

ContactPotential read_potential(const json& p) {
    check_keys(p, {"u0", "u1", "support"}, "potential");
    ContactPotential pot;
    pot.u0 = p.contains("u0") ? Expr::parse(p.at("u0").get<std::string>()).fn() : constant_fn(0.0);
    pot.u1 = p.contains("u1") ? Expr::parse(p.at("u1").get<std::string>()).fn() : constant_fn(0.0);
    if (p.contains("support")) {
        check_keys(p.at("support"), {"x0", "x1", "z0", "z1"}, "potential.support");
        pot.support = p.at("support").get<Rect>();
        // The expressions apply inside the support rectangle and the potential vanishes outside it.
        const Rect r = *pot.support;
        auto cut = [r](ScalarFn fn) -> ScalarFn {
            return [r, fn](const Dual& x, const Dual& z) { return r.contains(x.v, z.v) ? fn(x, z) : Dual{}; };
        };
        pot.u0 = cut(pot.u0);
        pot.u1 = cut(pot.u1);
    }
    return pot;
}

int cmd_vary(const json& cfg, const Options& opt) {
    check_keys(cfg, {"surface", "potential", "t", "mode", "h", "region"}, "config");
    const Surface s = build_surface(cfg.at("surface"), opt);
    const GraphGrid& g = s.grid();
    const double t = get_or(cfg, "t", 1e-3);
    const std::string mode = get_or<std::string>(cfg, "mode", "contact");
    std::optional<Rect> U;
    if (cfg.contains("region")) U = cfg.at("region").get<Rect>();
    const double tol = opt.tol.value_or(1e-3);
    json rep = base_report(cfg, opt, tol);
    VariationReport vr;
    if (mode == "perturbation") {
        const Expr h = Expr::parse(cfg.at("h").get<std::string>());
        vr = fvf_perturbation(g, sample_field(g.grid, [&](double x, double z) { return h(x, z); }), t, U);
    } else if (mode == "contact") {
        const ContactPotential pot = read_potential(cfg.at("potential"));
        if (!pot.support) throw ConfigError("potential.support is required for contact variations");
        const Rect dom = U ? *U : rect_of(g.grid);
        const Rect& sp = *pot.support;
        if (!(sp.x0 > dom.x0 && sp.x1 < dom.x1 && sp.z0 > dom.z0 && sp.z1 < dom.z1))
            throw ConfigError("potential support must be compactly contained in the region");
        if (s.piecewise) {
            const auto [w1, w2] = potential_fields(g, pot);
            for (double v : w1.values)
                if (v != 0.0) throw ConfigError("graphs with a singular curve take vertical potentials only (u1 = 0)");
            const HerringboneA2 hb = herringbone_A2(*s.piecewise, w2, U);
            vr.analytic_slope = hb.total;
            rep["boundary_term"] = hb.boundary_term;
            rep["bulk_term"] = hb.bulk_term;
            const double e0 = flow_energy(g, pot, 0.0, U);
            detail::fill_report(vr, t, e0, [&](double x) { return flow_energy(g, pot, x, U); });
        } else {
            vr = contact_variation(g, pot, t, U);
        }
    } else {
        throw ConfigError("mode must be 'contact' or 'perturbation'");
    }
    json v = vr;
    for (auto& [k, val] : v.items()) rep[k] = val;
    const bool pass = std::abs(vr.fd_slope - vr.analytic_slope) <= tol;
    rep["pass"] = pass;
    write_json(opt.out / "variation.json", rep);
    return pass ? 0 : 1;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t j = 1; j < v.size(); ++j)
        if (!(v[j] < v[j - 1])) return false;
    return true;
}

int cmd_limits(const json& cfg, const Options& opt) {
    check_keys(cfg, {"sigma_plane", "cantor_limit", "stretch"}, "config");
    const double tol = opt.tol.value_or(0.02);
    json rep = base_report(cfg, opt, tol);
    bool pass = true;
    json dists = json::object();
    if (cfg.contains("sigma_plane")) {
        const json& c = cfg.at("sigma_plane");
        check_keys(c, {"eps", "box", "voxels"}, "sigma_plane");
        const Box3 box = c.contains("box") ? c.at("box").get<Box3>() : Box3{};
        const int vox = opt.resolution ? *opt.resolution : get_or(c, "voxels", 64);
        std::vector<double> d;
        for (double e : c.at("eps").get<std::vector<double>>()) {
            const RayFan fan = make_sigma_K(std::vector<double>{-e, 0.0, e});
            check_fan_graph(fan, box);
            d.push_back(indicator_L1_distance(fan_epigraph(fan), plane_epigraph(), box, vox));
        }
        dists["sigma_plane"] = {{"eps", c.at("eps")}, {"distance", d}, {"decreasing", strictly_decreasing(d)}};
        pass = pass && strictly_decreasing(d);
    }
    if (cfg.contains("cantor_limit")) {
        const json& c = cfg.at("cantor_limit");
        check_keys(c, {"alpha", "depth", "n", "box", "voxels"}, "cantor_limit");
        const IntervalComplement K = make_cantor(get_or(c, "depth", 2), get_or(c, "alpha", 1.0));
        const Box3 box = c.contains("box") ? c.at("box").get<Box3>() : Box3{-0.5, 0.5, -0.5, 0.5, -0.5, 0.5};
        const int vox = opt.resolution ? *opt.resolution : get_or(c, "voxels", 64);
        const RayFan lambda = make_lambda_K(K);
        check_fan_graph(lambda, box);
        std::vector<double> d;
        for (double n : c.at("n").get<std::vector<double>>()) {
            const RayFan S = stretch_fan(make_sigma_K(K, 1.0 / (n * n)), 1.0 / n, n);
            check_fan_graph(S, box);
            d.push_back(indicator_L1_distance(fan_epigraph(S), fan_epigraph(lambda), box, vox));
        }
        dists["cantor_limit"] = {{"n", c.at("n")}, {"distance", d}, {"decreasing", strictly_decreasing(d)}};
        pass = pass && strictly_decreasing(d);
    }
    rep["indicator_distances"] = dists;
    if (cfg.contains("stretch")) {
        const json& c = cfg.at("stretch");
        check_keys(c, {"surface", "r"}, "stretch");
        const Surface s = build_surface(c.at("surface"), opt);
        const StretchFit fit =
            stretch_energy_fit(s.grid(), get_or(c, "r", std::vector<double>{2, 4, 8, 16}));
        const double rel = std::abs(fit.E_fit - fit.energy) / std::abs(fit.energy);
        rep["stretch_energy_fit"] = {{"mu_D", fit.mu_D},          {"energy", fit.energy},
                                     {"E_fit", fit.E_fit},        {"higher_fit", fit.higher_fit},
                                     {"remainder_order", fit.remainder_order}, {"r", fit.r_values},
                                     {"excess", fit.excess},      {"relative_error", rel}};
        pass = pass && rel <= tol;
    }
    rep["pass"] = pass;
    write_json(opt.out / "limits.json", rep);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for intrinsic graphs in the Heisenberg group"};
    app.require_subcommand(1);
    Options opt;
    std::string config;
    std::string out = ".";
    std::optional<double> tol;
    std::optional<int> resolution;
    std::uint64_t seed = 0;
    for (const char* name : {"construct", "analyze", "calibrate", "vary", "limits"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "seed for randomized samples");
        sub->add_option("--tol", tol, "pass/fail tolerance");
        sub->add_option("--resolution", resolution, "grid nodes per axis (or voxels / face cells)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    opt.command = app.get_subcommands().front()->get_name();
    opt.config_path = config;
    opt.out = out;
    opt.seed = seed;
    opt.tol = tol;
    opt.resolution = resolution;
    try {
        if (opt.resolution && *opt.resolution < 2) throw ConfigError("--resolution must be at least 2");
        std::ifstream is(opt.config_path);
        const json cfg = json::parse(is);
        fs::create_directories(opt.out);
        if (opt.command == "construct") return cmd_construct(cfg, opt);
        if (opt.command == "analyze") return cmd_analyze(cfg, opt);
        if (opt.command == "calibrate") return cmd_calibrate(cfg, opt);
        if (opt.command == "vary") return cmd_vary(cfg, opt);
        return cmd_limits(cfg, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
