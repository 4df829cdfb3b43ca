#include "hypent/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hypent/ccentropy.hpp"
#include "hypent/fixtures.hpp"
#include "hypent/groups.hpp"
#include "hypent/hypcore.hpp"
#include "hypent/limitset.hpp"
#include "hypent/pantsgraph.hpp"

namespace hypent::acceptance {

namespace {

using nlohmann::json;

const double kCantorDim = std::log(2.0) / std::log(3.0);

// Tolerances and budgets, pinned here.
constexpr double kHexTol = 1e-9, kHexLimitTol = 1e-6;
constexpr double kHoroSlopeTol = 0.02, kHoroClosedTol = 1e-8;
constexpr double kLattice1Tol = 0.03, kLattice2Tol = 0.03;
constexpr double kSchottkyTol = 0.05;
constexpr double kCantorTol = 0.03, kCantorPairTol = 0.04;
constexpr double kWhitneyTol = 0.03, kWhitneySlack = 0.05;
constexpr double kPorosityFloor = 1.0 / 6;
constexpr double kPhiFloor = 1.0 / 3;
constexpr double kRobustTol = 0.03;
constexpr std::uint64_t kDeletionSeed = 2024;

struct Check {
    json& measured;
    bool ok = true;
    void require(const std::string& key, bool cond) {
        measured["checks"][key] = cond;
        ok = ok && cond;
    }
};

// Right-angled hexagon with alternate sides a on the hyperboloid, walked side
// by side with right turns; the remaining sides come from the cosh rule.
struct Hexagon {
    std::array<std::array<double, 3>, 6> mid{};
    double closure = 0;
};

double mink(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    return -x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

double hyperboloid_dist(const std::array<double, 3>& x, const std::array<double, 3>& y) {
    const std::array<double, 3> d{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    return 2 * std::asinh(std::sqrt(std::max(0.0, mink(d, d))) / 2);
}

Hexagon solve_hexagon(double a) {
    const double ca = std::cosh(a), sa = std::sinh(a);
    const double b = std::acosh((ca * ca + ca) / (sa * sa));
    std::array<double, 3> p{1, 0, 0}, v{0, 1, 0};
    const auto start = p;
    Hexagon h;
    const double sides[6] = {a, b, a, b, a, b};
    for (std::size_t i = 0; i < 6; ++i) {
        std::array<double, 3> q{}, w{};
        for (std::size_t j = 0; j < 3; ++j) {
            h.mid[i][j] = std::cosh(sides[i] / 2) * p[j] + std::sinh(sides[i] / 2) * v[j];
            q[j] = std::cosh(sides[i]) * p[j] + std::sinh(sides[i]) * v[j];
            w[j] = std::sinh(sides[i]) * p[j] + std::cosh(sides[i]) * v[j];
        }
        p = q;
        std::array<double, 3> n{-(p[1] * w[2] - p[2] * w[1]), p[2] * w[0] - p[0] * w[2], p[0] * w[1] - p[1] * w[0]};
        const double s = std::sqrt(mink(n, n));
        for (auto& c : n) c /= s;
        v = n;
    }
    h.closure = hyperboloid_dist(p, start);
    return h;
}

// Volume of B_R intersected with a horoball through the centre, n = 1.
double closed_form_volume(double R) {
    const double c = std::cosh(R);
    const double a = std::atan(std::sqrt((c - 1) / 2));
    const double pi2 = std::numbers::pi / 2;
    return 2 * c * (pi2 - a) + 2 * std::sqrt(2 * (c - 1)) - 2 * (pi2 + a);
}

UDSet drop_tenth(const UDSet& u, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution drop(0.1);
    UDSet v;
    v.n = u.n;
    v.density_M = u.density_M;
    v.separation_m = u.separation_m;
    for (std::size_t i = 0; i < u.points.size(); ++i) {
        const bool keep = i == u.origin_index || !drop(rng);
        if (!keep) continue;
        if (i == u.origin_index) v.origin_index = v.points.size();
        v.points.push_back(u.points[i]);
    }
    return v;
}

int finest_level(const PointCloud& c) { return static_cast<int>(std::floor(-std::log2(c.resolution))); }

bool c1_hexagon(json& m) {
    Check ck{m};
    double worst = 0;
    for (double ell : {1.0, 2.0, 4.0, 8.0}) {
        const auto h = solve_hexagon(ell / 2);
        std::array<double, 3> c{};
        for (std::size_t i : {0, 2, 4})
            for (std::size_t j = 0; j < 3; ++j) c[j] += h.mid[i][j];
        const double s = std::sqrt(-mink(c, c));
        for (auto& x : c) x /= s;
        const double er = std::abs(hexagon_r(ell) - hyperboloid_dist(c, h.mid[0]));
        const double ed = std::abs(hexagon_d(ell) - hyperboloid_dist(h.mid[0], h.mid[2]));
        m["oracle"].push_back({{"ell", ell}, {"r", hexagon_r(ell)}, {"d", hexagon_d(ell)}, {"r_error", er},
                               {"d_error", ed}, {"closure", h.closure}});
        worst = std::max({worst, er, ed});
    }
    m["tolerance"] = kHexTol;
    ck.require("oracle", worst < kHexTol);
    const double lr = std::abs(hexagon_r(60) - std::log(3.0) / 2);
    const double ld = std::abs(hexagon_d(60) - 2 * std::acosh(std::sqrt(5.0) / 2));
    m["limit_error_r"] = lr;
    m["limit_error_d"] = ld;
    ck.require("limits", lr < kHexLimitTol && ld < kHexLimitTol);
    return ck.ok;
}

bool c2_horoball(json& m) {
    Check ck{m};
    for (int n : {1, 2}) {
        std::vector<double> xs, ys;
        for (double R = 10; R <= 30 + 1e-9; R += 0.5) {
            xs.push_back(R);
            ys.push_back(std::log(horoball_ball_volume(R, n)));
        }
        const double slope = fit_line(xs, ys).slope;
        m["slope_n" + std::to_string(n)] = slope;
        ck.require("slope_n" + std::to_string(n), std::abs(slope - n / 2.0) < kHoroSlopeTol);
    }
    double worst = 0;
    for (double R : {0.5, 2.0, 5.0, 10.0, 20.0, 30.0})
        worst = std::max(worst, std::abs(horoball_ball_volume(R, 1) / closed_form_volume(R) - 1));
    m["closed_form_relative_error"] = worst;
    ck.require("closed_form", worst < kHoroClosedTol);
    return ck.ok;
}

bool c3_lattice(json& m) {
    Check ck{m};
    const auto e1 = lattice_entropy(horoball_lattice(1, 20, {20}));
    const auto e2 = lattice_entropy(horoball_lattice(2, 16, {12}));
    m["n1"] = {{"k_max", 20}, {"ball_radius", 20}, {"delta", e1.value}};
    m["n2"] = {{"k_max", 16}, {"ball_radius", 12}, {"delta", e2.value}};
    ck.require("n1", std::abs(e1.value - 0.5) < kLattice1Tol);
    ck.require("n2", std::abs(e2.value - 1.0) < kLattice2Tol);
    return ck.ok;
}

bool c4_schottky(json& m) {
    Check ck{m};
    const auto spec = fixtures::symmetric_schottky();
    const auto rec = enumerate_orbit(schottky_group(spec), fixtures::schottky_base(), 15);
    const auto d = delta_estimate(rec, 7.5, 15, 1);
    const int depth = 10;
    const auto cloud = sample_limit_set(spec, depth, SampleMode::FixedPoints);
    const auto box = upper_box_dim(box_counts(cloud, -2, 40));
    const auto uds = build_dyadic_uds(cloud, 0, finest_level(cloud));
    const auto dx = delta_X(uds);
    m["orbit_R"] = 15;
    m["orbit_records"] = rec.size();
    m["delta_estimate"] = d.value;
    m["sampling_depth"] = depth;
    m["upper_box_dim"] = box.value;
    m["delta_X"] = dx.value;
    m["tolerance"] = kSchottkyTol;
    ck.require("box_dim", std::abs(d.value - box.value) <= kSchottkyTol);
    ck.require("delta_X", std::abs(d.value - dx.value) <= kSchottkyTol);
    return ck.ok;
}

bool c5_cantor(json& m) {
    Check ck{m};
    const auto cloud = fixtures::cantor_cloud(12);
    const auto counts = box_counts(cloud, 0, 24);
    const auto box = upper_box_dim(counts);
    const auto uds = build_dyadic_uds(cloud, 0, 18);
    const auto dx = delta_X(uds);
    m["upper_box_dim"] = box.value;
    m["delta_X"] = dx.value;
    m["target"] = kCantorDim;
    ck.require("box_dim", std::abs(box.value - kCantorDim) < kCantorTol);
    ck.require("delta_X", std::abs(dx.value - kCantorDim) < kCantorTol);
    ck.require("agreement", std::abs(box.value - dx.value) < kCantorPairTol);
    bool factor = true;
    double worst = 1;
    for (const auto& [k, c] : uds_level_counts(uds)) {
        for (const auto& [kk, N] : counts.counts)
            if (kk == k) {
                const double r = static_cast<double>(c) / static_cast<double>(N);
                worst = std::max({worst, r, 1 / r});
                factor = factor && r <= 3 && r >= 1.0 / 3;
            }
    }
    m["worst_level_ratio"] = worst;
    ck.require("level_counts_within_3", factor);
    return ck.ok;
}

bool c6_whitney(json& m) {
    Check ck{m};
    const auto cantor = fixtures::cantor_cloud(12);
    const auto wc = whitney_exponent(cantor, 1, 30);
    const auto bc = upper_box_dim(box_counts(cantor, 0, 24));
    m["cantor"] = {{"whitney", wc.value}, {"box_dim", bc.value}};
    ck.require("cantor", std::abs(wc.value - bc.value) < kWhitneyTol);
    const auto prod = fixtures::cantor_product_cloud(8);
    const auto wp = whitney_exponent(prod, 2, 30);
    const auto bp = upper_box_dim(box_counts(prod, 0, 24));
    m["cantor_product"] = {{"whitney", wp.value}, {"box_dim", bp.value}};
    ck.require("cantor_product", wp.value <= bp.value + kWhitneySlack);
    const auto sch = sample_limit_set(fixtures::symmetric_schottky(), 10, SampleMode::FixedPoints);
    const auto ws = whitney_exponent(sch, 1, 30);
    const auto bs = upper_box_dim(box_counts(sch, -2, 40));
    m["schottky"] = {{"whitney", ws.value}, {"box_dim", bs.value}};
    ck.require("schottky", ws.value <= bs.value + kWhitneySlack);
    return ck.ok;
}

bool c7_porosity(json& m) {
    Check ck{m};
    struct Fixture {
        std::string name;
        PointCloud cloud;
        int n;
    };
    const std::vector<Fixture> fx{{"cantor", fixtures::cantor_cloud(12), 1},
                                  {"cantor_product", fixtures::cantor_product_cloud(6), 2},
                                  {"schottky", sample_limit_set(fixtures::symmetric_schottky(), 10, SampleMode::FixedPoints), 1}};
    for (const auto& f : fx) {
        const auto p = porosity_estimate(f.cloud);
        const double dim = upper_box_dim(box_counts(f.cloud, -2, 40)).value;
        const double C = default_porosity_constant(f.n);
        const double bound = porosity_dim_bound(p.c, f.n, C);
        m[f.name] = {{"c", p.c}, {"C_n", C}, {"bound", bound}, {"dimension", dim}};
        ck.require(f.name + "_bound", bound > dim);
        if (f.name == "cantor") ck.require("cantor_c", p.c >= kPorosityFloor);
    }
    return ck.ok;
}

bool c8_amenability(json& m) {
    Check ck{m};
    const auto tree = PantsGraph::binary_tree(20, 1);
    const auto t = iso_profile(tree, tree.root(), {14, 4096});
    const auto grid = PantsGraph::grid(121, 2, 1);
    const auto g = iso_profile(grid, grid.root(), {8, 4096});
    double phi_min = 1;
    for (double p : t.exact) phi_min = std::min(phi_min, p);
    m["tree"] = {{"verdict", to_string(t.verdict)}, {"exact_up_to", t.exact_up_to}, {"exact_min_phi", phi_min},
                 {"heuristic_final", t.final_ratio}};
    m["grid"] = {{"verdict", to_string(g.verdict)}, {"heuristic_final", g.final_ratio}};
    ck.require("tree_nonamenable", t.verdict == AmenabilityTrend::Nonamenable);
    ck.require("grid_amenable", g.verdict == AmenabilityTrend::Amenable);
    ck.require("tree_exact_14", t.exact_up_to == 14 && phi_min >= kPhiFloor - 1e-12);
    return ck.ok;
}

bool c9_gap(json& m) {
    Check ck{m};
    GapOptions opts;  // b = 2, B = 10
    std::vector<double> grid;
    for (int l = 4; l <= 40; ++l) grid.push_back(l);
    const auto scan = gap_scan(GapExample::Panty, grid, opts);
    bool hp_ok = true;
    for (const auto& r : scan.rows) {
        hp_ok = hp_ok && r.hP <= 2 * std::numbers::pi / r.ell;
        m["table"].push_back({{"ell", r.ell}, {"Delta_low", r.Delta_low}, {"hP", r.hP}, {"delta_high", r.delta_high},
                              {"gap", r.gap}});
    }
    m["b"] = opts.b;
    m["B"] = opts.B;
    ck.require("hP_bound", hp_ok);
    const double d12 = std::log(2.0) / (2 * hexagon_r(12));
    m["Delta_low_12"] = d12;
    bool half = true;
    for (const auto& r : scan.rows)
        if (r.ell >= 12) half = half && r.Delta_low > 0.5;
    ck.require("Delta_low_above_half", half);
    m["first_positive_gap"] = scan.first_positive ? json(*scan.first_positive) : json(nullptr);
    ck.require("gap_found", scan.first_positive.has_value());
    return ck.ok;
}

bool c10_shadow(json& m) {
    Check ck{m};
    auto ladder = [](double D) { return std::vector<double>{D + 0.2, D + 0.15, D + 0.1, D + 0.05}; };
    const auto interval = build_dyadic_uds(fixtures::interval_cloud(std::ldexp(1.0, -16)), 0, 14);
    const auto cantor = build_dyadic_uds(fixtures::cantor_cloud(12), 0, 18);
    auto summarize = [](const ShadowReport& r) {
        json j{{"spread", r.spread}, {"stable", r.stable}, {"drifting", r.drifting}};
        for (const auto& s : r.steps) j["steps"].push_back({{"s", s.s}, {"A_fit", s.A_fit}, {"violations", s.violations}});
        return j;
    };
    auto violations = [](const ShadowReport& r) {
        std::size_t v = 0;
        for (const auto& s : r.steps) v += s.violations;
        return v;
    };
    const auto ri = shadow_check(interval, 1.0, 1.0, ladder(1.0), 400);
    const auto rc = shadow_check(cantor, 1.0, kCantorDim, ladder(kCantorDim), 400);
    const auto rw = shadow_check(cantor, 1.0, kCantorDim + 0.3, ladder(kCantorDim), 400);
    m["interval"] = summarize(ri);
    m["cantor"] = summarize(rc);
    m["wrong_delta"] = summarize(rw);
    ck.require("interval", ri.stable && violations(ri) == 0);
    ck.require("cantor", rc.stable && violations(rc) == 0);
    ck.require("negative_control_drifts", rw.drifting);
    return ck.ok;
}

bool c11_robustness(json& m) {
    Check ck{m};
    const auto sch = sample_limit_set(fixtures::symmetric_schottky(), 10, SampleMode::FixedPoints);
    const auto prod = fixtures::cantor_product_cloud(8);
    const std::vector<std::pair<std::string, UDSet>> sets{
        {"cantor", build_dyadic_uds(fixtures::cantor_cloud(12), 0, 18)},
        {"cantor_product", build_dyadic_uds(prod, 0, 12)},
        {"interval", build_dyadic_uds(fixtures::interval_cloud(std::ldexp(1.0, -16)), 0, 14)},
        {"schottky", build_dyadic_uds(sch, 0, finest_level(sch))}};
    for (const auto& [name, u] : sets) {
        const auto [lo, hi] = default_R_window(u);
        const double before = delta_X(u, lo, hi).value;
        const double after = delta_X(drop_tenth(u, kDeletionSeed), lo, hi).value;
        m[name] = {{"before", before}, {"after", after}, {"change", std::abs(after - before)}};
        ck.require(name, std::abs(after - before) < kRobustTol);
    }
    return ck.ok;
}

bool c12_determinism(json& m) {
    Check ck{m};
    const int saved = thread_count();
    set_thread_count(1);
    std::vector<int> ids;
    for (int i = 1; i <= 11; ++i) ids.push_back(i);
    const auto a = report(run(ids)).dump(2);
    const auto b = report(run(ids)).dump(2);
    set_thread_count(saved);
    m["report_bytes"] = a.size();
    ck.require("byte_identical", a == b);
    return ck.ok;
}

struct Entry {
    int id;
    const char* name;
    double budget;
    bool (*fn)(json&);
};

const Entry kEntries[] = {
    {1, "hexagon trigonometry", 1, c1_hexagon},
    {2, "horoball volume entropy", 5, c2_horoball},
    {3, "horoball lattice entropy", 30, c3_lattice},
    {4, "geometrically finite coincidence", 300, c4_schottky},
    {5, "box dimension identity", 60, c5_cantor},
    {6, "Whitney exponent", 60, c6_whitney},
    {7, "porosity bound", 60, c7_porosity},
    {8, "amenability verdicts", 120, c8_amenability},
    {9, "binary tree dimension gap", 60, c9_gap},
    {10, "shadow lemma", 120, c10_shadow},
    {11, "deletion robustness", 60, c11_robustness},
    {12, "determinism", 0, c12_determinism},
};

const Entry& entry(int id) {
    for (const auto& e : kEntries)
        if (e.id == id) return e;
    throw DomainError("no acceptance criterion " + std::to_string(id));
}

}  // namespace

std::vector<int> criterion_ids() {
    std::vector<int> ids;
    for (const auto& e : kEntries) ids.push_back(e.id);
    return ids;
}

std::string criterion_name(int id) { return entry(id).name; }

CriterionResult run_criterion(int id) {
    const auto& e = entry(id);
    CriterionResult r;
    r.id = id;
    r.name = e.name;
    r.budget_seconds = e.budget;
    r.measured = json::object();
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.checks_passed = e.fn(r.measured);
    } catch (const std::exception& ex) {
        r.checks_passed = false;
        r.measured["error"] = ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.within_budget = e.budget <= 0 || r.seconds <= e.budget;
    r.passed = r.checks_passed && r.within_budget;
    if (!r.within_budget) r.note = "over runtime budget";
    if (r.note.empty() && !r.passed) {
        std::string failed;
        if (r.measured.contains("checks"))
            for (const auto& [k, v] : r.measured["checks"].items())
                if (!v.get<bool>()) failed += (failed.empty() ? "" : ", ") + k;
        r.note = r.measured.contains("error") ? r.measured["error"].get<std::string>() : "failed: " + failed;
    }
    return r;
}

std::vector<CriterionResult> run(const std::vector<int>& ids, const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<CriterionResult> out;
    for (int id : ids) {
        out.push_back(run_criterion(id));
        if (on_result) on_result(out.back());
    }
    return out;
}

json report(const std::vector<CriterionResult>& results) {
    json j;
    j["schema_version"] = 1;
    j["criteria"] = json::array();
    bool all = true;
    for (const auto& r : results) {
        j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"checks_passed", r.checks_passed}, {"measured", r.measured}});
        all = all && r.checks_passed;
    }
    j["all_checks_passed"] = all;
    return j;
}

std::string summary_line(const CriterionResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "[%s] %2d %-34s %7.2fs", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
    std::string line = buf;
    if (!r.note.empty()) line += "  " + r.note;
    return line;
}

}  // namespace hypent::acceptance
