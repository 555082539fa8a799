// Acceptance runner: evaluates every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failing criteria.

#include "common.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace heis;
using heis::testing::Bump;
using heis::testing::SmoothFn;
using heis::testing::square;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [fail]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ContactPotential potential(const Bump& u0, const Bump& u1) {
    const Rect a = u0.support(), b = u1.support();
    return {[u0](const Dual& x, const Dual& z) { return u0(x, z); }, [u1](const Dual& x, const Dual& z) { return u1(x, z); },
            Rect{std::min(a.x0, b.x0), std::max(a.x1, b.x1), std::min(a.z0, b.z0), std::max(a.z1, b.z1)}};
}

ScalarField bump_field(const Grid& grid, const Bump& b) {
    return sample_field(grid, [&](double x, double z) { return b(x, z); });
}

Bump random_bump(std::mt19937& rng, double amp) {
    std::uniform_real_distribution<double> c(-0.25, 0.25), r(0.3, 0.55), s(-1.0, 1.0);
    return {c(rng), c(rng), r(rng), r(rng), amp * s(rng)};
}

// 1. Parabola harmonicity.
Outcome parabola_harmonicity() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {129, 257}) {
        const Grid grid = square(-1, 1, -1, 1, n, n);
        const double h = grid.hx();
        const GraphGrid g = make_parabola(grid);
        const ScalarField lap = nabla_f(g, intrinsic_gradient(g));
        double worst = 0.0;
        for (double v : lap.values) worst = std::max(worst, std::abs(v - 2.0));
        const double res = max_abs_unmasked(g, harmonic_residual(g));
        o.check(worst <= 5 * h, "h=1/" + std::to_string(n - 1) + " |lap-2|=" + fmt("%.2e", worst));
        o.check(res <= 10 * h, "residual=" + fmt("%.2e", res));
    }
    const Grid grid = square(-1, 1, -1, 1, 129, 129);
    const ContactPotential pot = potential({0.1, 0.0, 0.5, 0.5, 0.3}, {-0.1, 0.1, 0.4, 0.5, 0.2});
    const VariationReport rep = contact_variation(make_parabola(grid), pot, 1e-3);
    o.check(std::abs(rep.analytic_slope) <= 1e-4, "analytic slope=" + fmt("%.2e", rep.analytic_slope));
    o.check(std::abs(rep.fd_slope) <= 1e-4, "fd slope=" + fmt("%.2e", rep.fd_slope));
    const double secs = seconds_since(t0);
    o.check(secs < 10.0, "runtime=" + fmt("%.1fs", secs));
    return o;
}

// 2. Herringbone slopes and energy.
Outcome herringbone_slopes() {
    Outcome o;
    for (double a : {0.5, 1.0, 2.0}) {
        const PiecewiseGraph pg = make_herringbone(a, square(0, 1, -1, 1, 65, 128));
        const ScalarField t = intrinsic_gradient(pg.grid);
        double worst = 0.0;
        for (int i = 0; i < pg.grid.grid.nx; ++i)
            for (int k = 0; k < pg.grid.grid.nz; ++k) {
                if (pg.grid.node_masked(i, k)) continue;
                const double expect = pg.grid.grid.z(k) > 0 ? -a * a / 2 : a * a / 2;
                worst = std::max(worst, std::abs(t(i, k) - expect));
            }
        o.check(worst <= 1e-10, "a=" + fmt("%g", a) + " max slope error=" + fmt("%.1e", worst));
    }
    const double e = energy(make_herringbone(1.0, square(0, 1, -1, 1, 65, 128)).grid);
    o.check(std::abs(e - 0.25) <= 0.02 * 0.25, "energy(a=1)=" + fmt("%.5f", e));
    return o;
}

// 3. Transformation laws under s_{a,b} and P_b.
Outcome transformation_laws() {
    Outcome o;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ab(0.5, 2.0);
    const int n = 129;
    const double h = 1.0 / (n - 1);
    double grad_worst = 0.0, factor_worst = 0.0, cube_worst = 0.0, shear_worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SmoothFn f = SmoothFn::random(rng, 0.3);
        const double a = ab(rng), b = ab(rng);
        const Grid U = square(-0.5, 0.5, -0.5, 0.5, n, n);
        const Grid img = square(-0.5 * a, 0.5 * a, -0.5 * a * b, 0.5 * a * b, n, n);
        const GraphGrid pushed = push_forward(Stretch{a, b}, f, img);
        const ScalarField t = intrinsic_gradient(pushed);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const double expect = (b / a) * f.grad(img.x(i) / a, img.z(k) / (a * b));
                grad_worst = std::max(grad_worst, std::abs(t(i, k) - expect) / (1 + std::abs(expect)));
            }
        const double e0 = energy(sample_graph(U, f)), e1 = energy(pushed);
        factor_worst = std::max(factor_worst, std::abs(e1 / e0 - b * b / a) / (b * b / a));
        cube_worst = std::max(cube_worst, std::abs(e1 / e0 - b * b * b) / (b * b * b));

        const Shear sh{b - 1.25};
        const GraphGrid sheared = push_forward(sh, f, U);
        const ScalarField ts = intrinsic_gradient(sheared);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Point v = induced_v0_map(Shear{-sh.b}, {U.x(i), 0, U.z(k)});
                shear_worst = std::max(shear_worst, std::abs(ts(i, k) - f.grad(v.x, v.z) - sh.b));
            }
    }
    o.check(grad_worst <= 10 * h, "gradient (b/a) scaling rel err=" + fmt("%.2e", grad_worst));
    o.check(factor_worst <= 0.01, "energy factor b^2/a rel err=" + fmt("%.3f", factor_worst));
    o.detail += "; energy factor b^3 rel err=" + fmt("%.2e", cube_worst) + " (reference)";
    o.check(shear_worst <= 10 * h, "shear shift err=" + fmt("%.2e", shear_worst));
    return o;
}

// 4. Calibration of Lambda_K.
Outcome calibration() {
    Outcome o;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    double jump_worst = 0.0, div_worst = 0.0, ratio_worst = 0.0;
    int divs = 0;
    for (int depth = 1; depth <= 3; ++depth) {
        const IntervalComplement K = make_cantor(depth, 1.0);
        const TauField T = tau_K(K);
        const auto ifaces = interfaces_K(K, T, 2.0);
        for (const auto& f : ifaces)
            for (int e = 0; e <= 10; ++e) jump_worst = std::max(jump_worst, std::abs(jump_residual(T, f, std::ldexp(1.0, -e))));
        for (int j = 0; j < 400; ++j) {
            const double r = 0.3 + 1.2 * U01(rng), th = 2 * std::numbers::pi * U01(rng);
            try {
                const double v = div_residual(T, {r * std::cos(th), r * std::sin(th), U01(rng) - 0.5}, 1e-3);
                div_worst = std::max(div_worst, std::abs(v));
                ++divs;
            } catch (const std::domain_error&) {
                // Stencil straddles an interface.
            }
        }
        const auto V = bar_M_field(T);
        const auto label = region_label(T);
        const int res = 16;
        for (int b = 0; b < 50; ++b) {
            const auto& f = ifaces[static_cast<std::size_t>(U01(rng) * ifaces.size()) % ifaces.size()];
            const Vec2 c = f.curve(0.3 + 0.6 * U01(rng));
            const double side = 0.05 + 0.1 * U01(rng);
            const double ox = (U01(rng) - 0.5) * side, oy = (U01(rng) - 0.5) * side, zc = U01(rng) - 0.5;
            const Box3 box{c.x + ox - side / 2, c.x + ox + side / 2, c.y + oy - side / 2, c.y + oy + side / 2,
                           zc - side / 2, zc + side / 2};
            const double hb = side / res;
            ratio_worst = std::max(ratio_worst, std::abs(flux_box(V, box, res, label)) / (box.surface_area() * hb));
        }
    }
    o.check(jump_worst == 0.0, "max jump=" + fmt("%g", jump_worst));
    o.check(div_worst <= 1e-6 && divs > 100, "max div=" + fmt("%.1e", div_worst) + " over " + std::to_string(divs) + " points");
    o.check(ratio_worst <= 0.05, "max |flux|/(area h)=" + fmt("%.2e", ratio_worst));

    const IntervalComplement K = make_cantor(2, 1.0);
    TauField T = tau_K(K);
    const int r = detail::find_region(T, "W1+");
    const double b = K.intervals[0].second + 0.05;
    T.regions[r].tau = [b](double, double) { return b; };
    double control = 0.0;
    for (const auto& f : interfaces_K(K, T)) control = std::max(control, std::abs(jump_residual(T, f, 0.5)));
    o.check(control >= 1e-3, "perturbed control jump=" + fmt("%.3f", control));
    return o;
}

// 5. Flux-energy identity.
Outcome flux_energy() {
    Outcome o;
    const Grid grid = square(-1, 1, -1, 1, 129, 129);
    const FlexResult fx = make_flex(heis::testing::demo_flex(), heis::testing::demo_flex_grid(129));
    const std::pair<const char*, GraphGrid> cases[] = {
        {"plane", make_plane(0.6, 0.1, grid)}, {"parabola", make_parabola(grid)}, {"flex", fx.piecewise.grid}};
    for (const auto& [name, g] : cases) {
        const double lhs = flux_graph(g, m_gamma_field(g)), rhs = measure(g.grid) + energy(g);
        const double rel = std::abs(lhs - rhs) / rhs;
        o.check(rel <= 0.01, std::string(name) + " rel err=" + fmt("%.1e", rel));
    }
    return o;
}

// 6. First variation under contact flows.
Outcome first_variation() {
    Outcome o;
    std::mt19937 rng(6);
    const Grid grid = square(-1, 1, -1, 1, 129, 129);
    const std::vector<double> ts{1e-2, 5e-3, 2.5e-3};
    double spread_worst = 0.0, c_worst = 0.0, a1_worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const GraphGrid g = sample_graph(grid, SmoothFn::random(rng, 0.4));
        const ContactPotential pot = potential(random_bump(rng, 0.3), random_bump(rng, 0.3));
        const auto [w1, w2] = potential_fields(g, pot);
        const double a1 = A1(g, w1), slope = a1 + A2(g, w2);
        a1_worst = std::max(a1_worst, std::abs(a1));
        const double e0 = flow_energy(g, pot, 0.0);
        std::vector<double> cs;
        for (double t : ts) cs.push_back(std::abs(flow_energy(g, pot, t) - e0 - t * slope) / (t * t));
        double mean = 0.0;
        for (double c : cs) mean += c / cs.size();
        for (double c : cs) spread_worst = std::max(spread_worst, std::abs(c - mean) / mean);
        c_worst = std::max(c_worst, mean);
    }
    o.check(std::isfinite(c_worst), "max C=" + fmt("%.3g", c_worst));
    o.check(spread_worst <= 0.2, "max C spread=" + fmt("%.1f%%", 100 * spread_worst));
    o.check(a1_worst <= 1e-3, "max |A1|=" + fmt("%.1e", a1_worst));
    return o;
}

// 7. Lipschitz and smooth forms agree.
Outcome lipschitz_forms() {
    Outcome o;
    std::mt19937 rng(7);
    const Grid grid = square(-1, 1, -1, 1, 129, 129);
    const double h = grid.hx();
    double d1 = 0.0, d2 = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        const GraphGrid g = sample_graph(grid, SmoothFn::random(rng, 0.5));
        const ScalarField w = bump_field(grid, random_bump(rng, 1.0));
        ScalarField fw = w;
        for (std::size_t n = 0; n < fw.values.size(); ++n) fw.values[n] *= g.values[n];
        d1 = std::max(d1, std::abs(B1(g, w) - B2(g, fw)));
        const ContactPotential pot = potential(random_bump(rng, 0.5), random_bump(rng, 0.5));
        const auto [w1, w2] = potential_fields(g, pot);
        ScalarField zw = w2;
        for (std::size_t n = 0; n < zw.values.size(); ++n) zw.values[n] -= g.values[n] * w1.values[n];
        d2 = std::max(d2, std::abs(A2(g, w2) - B1(g, w1) - B2(g, zw)));
    }
    o.check(d1 <= 20 * h, "|B1(w) - B2(fw)|=" + fmt("%.1e", d1));
    o.check(d2 <= 20 * h, "|A2 - B1 - B2|=" + fmt("%.1e", d2));
    return o;
}

// 8. Herringbone boundary term and near-singularity growth.
Outcome herringbone_boundary() {
    Outcome o;
    const Grid grid = square(-1, 1, -1, 1, 129, 129);
    const PiecewiseGraph hb = make_herringbone(1.0, grid);
    bool zero = true;
    for (int i = 0; i < grid.nx; ++i) zero = zero && hb.delta(grid.x(i)) == 0.0;
    const ScalarField w2 = bump_field(grid, {0.0, 0.0, 0.6, 0.6, 1.0});
    zero = zero && herringbone_A2(hb, w2).boundary_term == 0.0;
    o.check(zero, "herringbone delta identically 0");

    const PiecewiseGraph br = make_broken_herringbone(-0.1, 0.3, grid);
    const double bt = herringbone_A2(br, w2).boundary_term;
    // Independent line integral of w2 along the x-axis by a fine midpoint rule.
    const Bump b{0.0, 0.0, 0.6, 0.6, 1.0};
    double line = 0.0;
    const int m = 20000;
    for (int j = 0; j < m; ++j) line += b(-1.0 + (j + 0.5) * 2.0 / m, 0.0) * 2.0 / m;
    const double expect = -0.04 * line;
    o.check(std::abs(bt - expect) <= 0.02 * std::abs(expect),
            "broken boundary term=" + fmt("%.5f", bt) + " vs " + fmt("%.5f", expect));

    const std::vector<double> nus{1e-8, 4e-8, 1.6e-7, 6.4e-7};
    const FlexResult fx = make_flex(heis::testing::demo_flex(), heis::testing::demo_flex_grid(9));
    const std::pair<const char*, NearSingFit> fits[] = {{"herringbone", near_sing_fit(hb, 0.5, nus)},
                                                        {"broken", near_sing_fit(br, 0.5, nus)},
                                                        {"flex", near_sing_fit(fx.piecewise, 0.75, nus)}};
    for (const auto& [name, fit] : fits) {
        o.check(std::abs(fit.value.exponent - 0.5) <= 0.02, std::string(name) + " value exp=" + fmt("%.4f", fit.value.exponent));
        o.check(std::abs(fit.dz.exponent + 0.5) <= 0.02, std::string(name) + " d_z exp=" + fmt("%.4f", fit.dz.exponent));
    }
    return o;
}

// 9. Stretch-limit expansion.
Outcome stretch_limit() {
    Outcome o;
    const std::vector<double> rs{2, 4, 8, 16};
    const std::pair<const char*, GraphGrid> cases[] = {
        {"plane", make_plane(0.6, 0.0, square(0, 1, 0, 1, 65, 65))},
        {"herringbone", make_herringbone(1.0, square(0, 1, -1, 1, 65, 128)).grid}};
    for (const auto& [name, g] : cases) {
        const StretchFit fit = stretch_energy_fit(g, rs);
        const double rel = std::abs(fit.E_fit - fit.energy) / fit.energy;
        o.check(rel <= 0.02, std::string(name) + " E fit rel err=" + fmt("%.1e", rel));
        o.check(fit.remainder_order >= -8 && fit.remainder_order <= -6,
                std::string(name) + " remainder order=" + fmt("%.2f", fit.remainder_order));
    }
    return o;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t j = 1; j < v.size(); ++j)
        if (!(v[j] < v[j - 1])) return false;
    return true;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t j = 0; j < v.size(); ++j) s += (j ? ", " : "") + fmt("%.2e", v[j]);
    return s + "]";
}

// 10. Stretched convergence of indicator functions.
Outcome stretched_convergence() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Box3 box{0, 1, 0, 1, 0, 1};
    const int vox = 128;
    std::vector<double> de;
    for (double eps : {0.4, 0.2, 0.1}) {
        const RayFan fan = make_sigma_K({-eps, 0.0, eps});
        check_fan_graph(fan, box);
        de.push_back(indicator_L1_distance(fan_epigraph(fan), plane_epigraph(), box, vox));
    }
    o.check(strictly_decreasing(de), "Sigma vs plane " + list(de) + " decreasing");
    o.check(de.back() < 0.05, "eps=0.1 distance below 0.05");

    const IntervalComplement K = make_cantor(2, 1.0);
    const RayFan lambda = make_lambda_K(K);
    std::vector<double> dn;
    for (double n : {2.0, 4.0, 8.0}) {
        const RayFan S = stretch_fan(make_sigma_K(K, 1.0 / (n * n)), 1.0 / n, n);
        check_fan_graph(S, box);
        dn.push_back(indicator_L1_distance(fan_epigraph(S), fan_epigraph(lambda), box, vox));
    }
    o.check(strictly_decreasing(dn), "stretched Sigma_Kn vs Lambda_K " + list(dn) + " decreasing");
    const double secs = seconds_since(t0);
    o.check(secs < 120.0, "runtime=" + fmt("%.1fs", secs));
    return o;
}

int run_cli(const std::string& cmd, const fs::path& config, const fs::path& out) {
    const std::string line = std::string(HEIS_CLI_PATH) + " " + cmd + " --config " + config.string() + " --out " +
                             out.string() + " --seed 11 >/dev/null 2>&1";
    const int status = std::system(line.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

// 11. Byte-identical CLI outputs across repeated runs.
Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "heis_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::pair<const char*, json> runs[] = {
        {"construct", {{"surface", {{"type", "herringbone"}, {"a", 1.0}, {"resolution", 33}}}}},
        {"construct", {{"surface", {{"type", "cantor"}, {"depth", 2}}}}},
        {"analyze", {{"surface", {{"type", "parabola"}, {"resolution", 33}}}}},
        {"calibrate", {{"K", {{"depth", 2}}}, {"boxes", 5}, {"box_resolution", 8}}},
        {"vary",
         {{"surface", {{"type", "parabola"}, {"resolution", 33}}},
          {"potential",
           {{"u0", "0.1*pow(1 - 4*x*x, 4)*pow(1 - 4*z*z, 4)"},
            {"u1", "0"},
            {"support", {{"x0", -0.5}, {"x1", 0.5}, {"z0", -0.5}, {"z1", 0.5}}}}}}},
        {"limits", {{"sigma_plane", {{"eps", {0.4, 0.2}}, {"voxels", 16}}}}}};
    int idx = 0;
    for (const auto& [cmd, cfg] : runs) {
        const fs::path dir = root / std::to_string(idx++);
        fs::create_directories(dir);
        std::ofstream(dir / "config.json") << cfg.dump();
        const int c1 = run_cli(cmd, dir / "config.json", dir / "a");
        const int c2 = run_cli(cmd, dir / "config.json", dir / "b");
        bool same = c1 == c2 && (c1 == 0 || c1 == 1) && fs::exists(dir / "a");
        int files = 0;
        if (same)
            for (const auto& e : fs::directory_iterator(dir / "a")) {
                ++files;
                same = same && fs::exists(dir / "b" / e.path().filename()) &&
                       slurp(e.path()) == slurp(dir / "b" / e.path().filename());
            }
        o.check(same && files > 0, std::string(cmd) + " (" + std::to_string(files) + " files)");
    }
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"parabola harmonicity", parabola_harmonicity},
        {"herringbone slopes", herringbone_slopes},
        {"transformation laws", transformation_laws},
        {"calibration of Lambda_K", calibration},
        {"flux-energy identity", flux_energy},
        {"first variation", first_variation},
        {"Lipschitz/smooth consistency", lipschitz_forms},
        {"herringbone boundary term", herringbone_boundary},
        {"stretch-limit expansion", stretch_limit},
        {"stretched convergence", stretched_convergence},
        {"determinism", determinism},
    };
    int failures = 0, id = 0;
    for (const auto& [name, run] : criteria) {
        ++id;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
