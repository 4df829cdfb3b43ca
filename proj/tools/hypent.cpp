#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypent/acceptance.hpp"
#include "hypent/ccentropy.hpp"
#include "hypent/common.hpp"
#include "hypent/fixtures.hpp"
#include "hypent/groups.hpp"
#include "hypent/hypcore.hpp"
#include "hypent/io.hpp"
#include "hypent/limitset.hpp"
#include "hypent/pantsgraph.hpp"

using json = nlohmann::json;
using namespace hypent;

namespace {

constexpr int kSchemaVersion = 1;

struct Common {
    int threads = 0;  // 0: HYPENT_THREADS or hardware concurrency
    bool sequential = false;
    std::string report_path;  // empty: stdout
};

void log_line(const std::string& s) { std::cerr << "hypent: " << s << '\n'; }

void emit(const Common& c, const std::string& command, json config, json result) {
    config["threads"] = thread_count();
    config["sequential"] = c.sequential;
    json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = command;
    r["config"] = std::move(config);
    r["result"] = std::move(result);
    const std::string text = r.dump(2) + "\n";
    if (c.report_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(c.report_path, std::ios::binary);
        if (!f) throw ParseError("cannot write " + c.report_path, 0);
        f << text;
    }
}

template <class F>
void write_file(const std::string& path, F&& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write " + path, 0);
    body(f);
}

json exponent_json(const ExponentEstimate& e) {
    return {{"value", e.value},         {"raw_slope", e.raw_slope}, {"window", {e.R_min, e.R_max}},
            {"stderr", e.stderr_value}, {"endpoint", e.endpoint}};
}

json dimension_json(const DimensionEstimate& e) {
    return {{"value", e.value},
            {"method", e.method},
            {"raw_slope", e.raw_slope},
            {"window", {e.window_lo, e.window_hi}},
            {"stderr", e.stderr_value}};
}

// Median nearest-neighbour distance; used when a CSV cloud carries no resolution.
double median_spacing(const PointCloud& cloud) {
    auto pts = cloud.points;
    if (pts.size() < 2) return 0;
    std::sort(pts.begin(), pts.end());
    std::vector<double> nn(pts.size(), INFINITY);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size() && pts[j][0] - pts[i][0] < nn[i]; ++j) {
            const double d = std::hypot(pts[j][0] - pts[i][0], pts[j][1] - pts[i][1]);
            nn[i] = std::min(nn[i], d);
            nn[j] = std::min(nn[j], d);
        }
    }
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    return nn[nn.size() / 2];
}

PointCloud load_cloud(const std::string& path, const std::string& resolution, json& config) {
    PointCloud cloud = io::read_cloud_csv(path);
    if (resolution == "auto") {
        cloud.resolution = median_spacing(cloud);
    } else {
        try {
            cloud.resolution = std::stod(resolution);
        } catch (const std::exception&) {
            throw InvalidSpecError("--resolution must be 'auto' or a number, got " + resolution);
        }
    }
    config["cloud"] = path;
    config["dimension"] = cloud.n;
    config["points"] = cloud.points.size();
    config["resolution"] = cloud.resolution;
    return cloud;
}

int finest_level(const PointCloud& c) {
    if (c.resolution <= 0) throw ResolutionError("cloud resolution unknown; pass --resolution");
    return static_cast<int>(std::floor(-std::log2(c.resolution)));
}

std::vector<double> grid(double lo, double hi, double step) {
    if (!(step > 0) || hi < lo) throw InvalidSpecError("bad grid");
    std::vector<double> g;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i) g.push_back(lo + i * step);
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypent: entropy and dimension experiments on hyperbolic point sets"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--threads", common.threads, "worker threads (0: HYPENT_THREADS or all cores)");
    app.add_flag("--sequential", common.sequential, "single thread, for byte-identical reports");
    app.add_option("--report", common.report_path, "report file (default: stdout)");

    // orbit
    auto* orbit = app.add_subcommand("orbit", "orbit enumeration and critical exponent");
    std::string group_path, group_fixture = "symmetric", orbit_csv;
    double orbit_R = 15;
    std::vector<double> orbit_window;
    orbit->add_option("--group", group_path, "group JSON; optional \"base\": [x, t]");
    orbit->add_option("--fixture", group_fixture, "symmetric | cyclic, when --group is absent");
    orbit->add_option("--R", orbit_R, "orbit radius");
    orbit->add_option("--window", orbit_window, "R window for the fit (default R/2 R)")->expected(2);
    orbit->add_option("--orbit-csv", orbit_csv, "write the orbit records here");

    // boxdim
    auto* boxdim = app.add_subcommand("boxdim", "upper box dimension of a cloud");
    std::string cloud_path, resolution = "auto";
    int k_min = 0, k_max = 24, offsets = 4;
    std::vector<int> box_window;
    boxdim->add_option("cloud", cloud_path, "cloud CSV")->required();
    boxdim->add_option("--resolution", resolution, "sampling resolution or 'auto'");
    boxdim->add_option("--k-min", k_min);
    boxdim->add_option("--k-max", k_max);
    boxdim->add_option("--offsets", offsets, "grid translations averaged per scale");
    boxdim->add_option("--window", box_window, "fit window k_lo k_hi (default automatic)")->expected(2);

    // ucd
    auto* ucd = app.add_subcommand("ucd", "dyadic uniformly distributed set, Delta(X) and bounded type");
    std::string uds_csv;
    int uds_k_min = 0;
    std::optional<int> uds_k_max;
    double separation = 0.5;
    std::size_t bt_samples = 50;
    std::uint64_t seed = 1;
    ucd->add_option("cloud", cloud_path, "cloud CSV")->required();
    ucd->add_option("--resolution", resolution, "sampling resolution or 'auto'");
    ucd->add_option("--k-min", uds_k_min);
    ucd->add_option("--k-max", uds_k_max, "finest level (default from the resolution)");
    ucd->add_option("--separation", separation);
    ucd->add_option("--uds-csv", uds_csv, "write the set here, origin first");
    ucd->add_option("--samples", bt_samples, "base points sampled for bounded type");
    ucd->add_option("--seed", seed);

    // horoball
    auto* horo = app.add_subcommand("horoball", "volume growth of balls in a horoball");
    int horo_n = 1;
    double horo_lo = 10, horo_hi = 30, horo_step = 0.5;
    horo->add_option("--n", horo_n, "boundary dimension (1 or 2)");
    horo->add_option("--R-min", horo_lo);
    horo->add_option("--R-max", horo_hi);
    horo->add_option("--step", horo_step);

    // whitney
    auto* whit = app.add_subcommand("whitney", "Whitney exponent of the complement of a cloud");
    int wh_k_max = 30, wh_sub = 8;
    whit->add_option("cloud", cloud_path, "cloud CSV")->required();
    whit->add_option("--resolution", resolution, "sampling resolution or 'auto'");
    whit->add_option("--k-max", wh_k_max);
    whit->add_option("--subdivisions", wh_sub, "grid rescalings per octave");

    // pants
    auto* pants = app.add_subcommand("pants", "isoperimetric profile, spectral chain and gap bounds");
    std::string kind = "binary", graph_path;
    double ell = 12, b = 2, B = 10;
    int depth = 16, side = 41, dim = 2, gens = 2, m_exact = 12;
    std::uint64_t m_heur = 4096, budget = 0;
    pants->add_option("--kind", kind, "binary | pruned | grid | cayley | file");
    pants->add_option("--graph", graph_path, "edge list for --kind file");
    pants->add_option("--l", ell, "cuff length");
    pants->add_option("--b", b);
    pants->add_option("--B", B);
    pants->add_option("--depth", depth, "tree window depth");
    pants->add_option("--side", side, "grid side");
    pants->add_option("--dim", dim, "grid dimension");
    pants->add_option("--generators", gens, "free group rank for --kind cayley");
    pants->add_option("--m-exact", m_exact, "exact enumeration size");
    pants->add_option("--m-heur", m_heur, "heuristic search size");
    pants->add_option("--budget", budget, "enumeration node budget (0: HYPENT_ISO_BUDGET or 2e8)");

    // shadow
    auto* shadow = app.add_subcommand("shadow", "shadow lemma check on a UDS");
    std::string uds_path;
    int uds_n = 1;
    double sh_ell = 1;
    std::optional<double> sh_delta;
    std::vector<double> s_ladder;
    std::size_t sh_samples = 400;
    std::uint64_t sh_seed = 7;
    shadow->add_option("uds", uds_path, "UDS CSV, origin first")->required();
    shadow->add_option("--n", uds_n, "boundary dimension");
    shadow->add_option("--l", sh_ell, "shadow radius");
    shadow->add_option("--delta", sh_delta, "exponent (default: delta_X of the set)");
    shadow->add_option("--s", s_ladder, "s ladder (default delta + 0.2, 0.15, 0.1, 0.05)");
    shadow->add_option("--samples", sh_samples);
    shadow->add_option("--seed", sh_seed);

    // verify
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    std::vector<int> ids;
    verify->add_option("--criteria", ids, "criterion ids (default all)");

    CLI11_PARSE(app, argc, argv);

    if (common.sequential) common.threads = 1;
    if (common.threads > 0) set_thread_count(common.threads);

    try {
        json config, result;
        if (*orbit) {
            SchottkySpec spec;
            HalfSpacePoint base(Complex(0, 0), 1.0);
            if (!group_path.empty()) {
                spec = io::read_group_json(group_path);
                std::ifstream f(group_path);
                const json j = json::parse(f, nullptr, false);
                if (j.is_object() && j.contains("base")) {
                    const auto& v = j["base"];
                    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number() ||
                        !(v[1].get<double>() > 0))
                        throw InvalidSpecError("base must be [x, t] with t > 0");
                    base = HalfSpacePoint(Complex(v[0].get<double>(), 0), v[1].get<double>());
                }
                config["group"] = group_path;
            } else if (group_fixture == "symmetric") {
                spec = fixtures::symmetric_schottky();
                base = fixtures::schottky_base();
                config["fixture"] = group_fixture;
            } else if (group_fixture == "cyclic") {
                spec = fixtures::cyclic_schottky();
                config["fixture"] = group_fixture;
            } else {
                throw InvalidSpecError("unknown group fixture " + group_fixture);
            }
            const double lo = orbit_window.empty() ? orbit_R / 2 : orbit_window[0];
            const double hi = orbit_window.empty() ? orbit_R : orbit_window[1];
            config["R"] = orbit_R;
            config["window"] = {lo, hi};
            config["base"] = {base.base.real(), base.height};
            const auto rec = enumerate_orbit(schottky_group(spec), base, orbit_R);
            log_line("orbit: " + std::to_string(rec.size()) + " records");
            if (!orbit_csv.empty()) write_file(orbit_csv, [&](std::ostream& o) { io::write_orbit_csv(o, rec); });
            config["orbit_csv"] = orbit_csv;
            result["records"] = rec.size();
            result["delta"] = exponent_json(delta_estimate(rec, lo, hi, spec.n));
            emit(common, "orbit", config, result);
        } else if (*boxdim) {
            const auto cloud = load_cloud(cloud_path, resolution, config);
            config["k_range"] = {k_min, k_max};
            config["offsets"] = offsets;
            const auto counts = box_counts(cloud, k_min, k_max, offsets);
            std::optional<std::pair<int, int>> w;
            if (!box_window.empty()) w = std::make_pair(box_window[0], box_window[1]);
            config["window"] = box_window.empty() ? json("auto") : json(box_window);
            result = dimension_json(upper_box_dim(counts, w));
            result["counts"] = counts.counts;
            emit(common, "boxdim", config, result);
        } else if (*ucd) {
            const auto cloud = load_cloud(cloud_path, resolution, config);
            const int kmax = uds_k_max ? *uds_k_max : finest_level(cloud);
            config["k_range"] = {uds_k_min, kmax};
            config["separation"] = separation;
            config["samples"] = bt_samples;
            config["seed"] = seed;
            config["uds_csv"] = uds_csv;
            const auto uds = build_dyadic_uds(cloud, uds_k_min, kmax, separation);
            log_line("ucd: " + std::to_string(uds.points.size()) + " points");
            if (!uds_csv.empty()) write_file(uds_csv, [&](std::ostream& o) { io::write_uds_csv(o, uds); });
            const auto dx = delta_X(uds);
            result["points"] = uds.points.size();
            result["density_M"] = uds.density_M;
            result["delta_X"] = exponent_json(dx);
            const auto [lo, hi] = default_R_window(uds);
            const auto R_grid = grid(std::max(1.0, std::floor(lo / 2)), std::floor(hi), 1);
            config["bounded_type_R_grid"] = R_grid;
            BoundedTypeOptions bo;
            bo.seed = seed;
            bo.delta = dx.value;
            const auto bt = bounded_type_report(uds, R_grid, bt_samples, bo);
            result["bounded_type"] = {{"verdict", to_string(bt.verdict)},
                                      {"rho_hat", bt.rho_hat},
                                      {"growth_rate", bt.growth_rate},
                                      {"rho_hat_excised", bt.rho_hat_excised},
                                      {"growth_rate_excised", bt.growth_rate_excised},
                                      {"K_hat", bt.K_hat},
                                      {"table", bt.table}};
            emit(common, "ucd", config, result);
        } else if (*horo) {
            config["n"] = horo_n;
            config["R_grid"] = {horo_lo, horo_hi, horo_step};
            std::vector<double> xs, ys;
            json table = json::array();
            for (double R : grid(horo_lo, horo_hi, horo_step)) {
                const double v = horoball_ball_volume(R, horo_n);
                xs.push_back(R);
                ys.push_back(std::log(v));
                table.push_back({R, v});
            }
            const auto f = fit_line(xs, ys);
            result["slope"] = f.slope;
            result["stderr"] = f.stderr_slope;
            result["expected"] = horo_n / 2.0;
            result["volumes"] = table;
            emit(common, "horoball", config, result);
        } else if (*whit) {
            const auto cloud = load_cloud(cloud_path, resolution, config);
            config["k_max"] = wh_k_max;
            config["subdivisions"] = wh_sub;
            WhitneyOptions wo;
            wo.subdivisions = wh_sub;
            result = dimension_json(whitney_exponent(cloud, cloud.n, wh_k_max, wo));
            emit(common, "whitney", config, result);
        } else if (*pants) {
            PantsGraph g = [&] {
                if (kind == "binary") return PantsGraph::binary_tree(depth, ell);
                if (kind == "pruned") return PantsGraph::pruned_tree(depth, ell);
                if (kind == "grid") return PantsGraph::grid(side, dim, ell);
                if (kind == "cayley") return PantsGraph::free_cayley(gens, depth, ell);
                if (kind == "file") {
                    if (graph_path.empty()) throw InvalidSpecError("--kind file needs --graph");
                    return io::read_graph(graph_path, ell);
                }
                throw InvalidSpecError("unknown graph kind " + kind);
            }();
            g.validate();
            config["kind"] = kind;
            config["graph"] = graph_path;
            config["l"] = ell;
            config["b"] = b;
            config["B"] = B;
            config["depth"] = depth;
            config["side"] = side;
            config["dim"] = dim;
            config["generators"] = gens;
            config["m_exact"] = m_exact;
            config["m_heur"] = m_heur;
            config["budget"] = budget;
            IsoOptions io_opts{m_exact, m_heur, 0.05, budget};
            const auto prof = iso_profile(g, g.root(), io_opts);
            result["profile"] = {{"exact_up_to", prof.exact_up_to}, {"partial", prof.partial},
                                 {"exact", prof.exact},             {"enumerated", prof.enumerated},
                                 {"final_ratio", prof.final_ratio}, {"min_ratio", prof.min_ratio},
                                 {"verdict", to_string(prof.verdict)}};
            const auto hp = hP_estimate(g, io_opts);
            result["hP"] = {{"value", hp.value},
                            {"best_size", hp.best_size},
                            {"unbounded", hp.unbounded},
                            {"upper_bound", 2 * M_PI / ell}};
            if (!hp.unbounded) {
                const auto ch = spectral_chain(hp.value, b, B);
                result["spectral_chain"] = {{"h_low", ch.h_low},
                                            {"h_high", ch.h_high},
                                            {"lambda0_low", ch.lambda0_low},
                                            {"lambda0_high", ch.lambda0_high},
                                            {"delta_low", ch.delta_low},
                                            {"delta_high", ch.delta_high}};
            }
            if (kind == "binary" || kind == "pruned") {
                GapOptions go;
                go.b = b;
                go.B = B;
                go.tree_depth = depth;
                go.iso = io_opts;
                const auto row = gap_bounds(kind == "binary" ? GapExample::Panty : GapExample::Pruned, ell, go);
                result["gap"] = {{"Delta_low", row.Delta_low},
                                 {"delta_high", row.delta_high},
                                 {"gap", row.gap},
                                 {"hexagon_r", hexagon_r(ell)},
                                 {"hexagon_d", hexagon_d(ell)}};
            }
            emit(common, "pants", config, result);
        } else if (*shadow) {
            const auto uds = io::read_uds_csv(uds_path, uds_n);
            const double delta = sh_delta ? *sh_delta : delta_X(uds).value;
            if (s_ladder.empty())
                for (double e : {0.2, 0.15, 0.1, 0.05}) s_ladder.push_back(delta + e);
            config["uds"] = uds_path;
            config["n"] = uds_n;
            config["l"] = sh_ell;
            config["delta"] = delta;
            config["delta_source"] = sh_delta ? "given" : "delta_X";
            config["s_ladder"] = s_ladder;
            config["samples"] = sh_samples;
            config["seed"] = sh_seed;
            ShadowOptions so;
            so.seed = sh_seed;
            const auto rep = shadow_check(uds, sh_ell, delta, s_ladder, sh_samples, so);
            json steps = json::array();
            for (const auto& s : rep.steps)
                steps.push_back({{"s", s.s},
                                 {"A_fit", s.A_fit},
                                 {"A_median", s.A_median},
                                 {"violations", s.violations},
                                 {"empty_shadows", s.empty_shadows}});
            result = {{"samples", rep.samples},
                      {"steps", steps},
                      {"spread", rep.spread},
                      {"stable", rep.stable},
                      {"drifting", rep.drifting}};
            emit(common, "shadow", config, result);
        } else if (*verify) {
            if (ids.empty()) ids = acceptance::criterion_ids();
            config["criteria"] = ids;
            const auto results = acceptance::run(ids, [](const acceptance::CriterionResult& r) {
                std::cerr << acceptance::summary_line(r) << '\n';
            });
            const json rep = acceptance::report(results);
            emit(common, "verify", config, rep);
            const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
            return ok ? 0 : 1;
        }
    } catch (const ParseError& e) {
        std::cerr << json{{"error", {{"type", "ParseError"}, {"message", e.what()}, {"line", e.line}}}}.dump() << '\n';
        return 2;
    } catch (const PartialResultError& e) {
        std::cerr << json{{"error", {{"type", "PartialResultError"}, {"message", e.what()}, {"completed_depth", e.completed_depth}}}}.dump()
                  << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::string type = "Error";
        if (dynamic_cast<const DomainError*>(&e)) type = "DomainError";
        else if (dynamic_cast<const InvalidSpecError*>(&e)) type = "InvalidSpecError";
        else if (dynamic_cast<const EstimationError*>(&e)) type = "EstimationError";
        else if (dynamic_cast<const ResolutionError*>(&e)) type = "ResolutionError";
        else if (dynamic_cast<const DivergenceError*>(&e)) type = "DivergenceError";
        std::cerr << json{{"error", {{"type", type}, {"message", e.what()}}}}.dump() << '\n';
        return 3;
    }
    return 0;
}
