#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hypent/groups.hpp"
#include "hypent/limitset.hpp"

namespace hypent {

struct UDSet {
    int n = 1;
    std::vector<HalfSpacePoint> points;
    // Nonzero entries mark points inside declared horoball number tag - 1.
    std::vector<std::uint32_t> horoball_tag;
    double density_M = 0;
    double separation_m = 0;
    std::size_t origin_index = 0;

    const HalfSpacePoint& origin() const { return points.at(origin_index); }
    bool in_horoball(std::size_t i) const { return !horoball_tag.empty() && horoball_tag[i] != 0; }
};

struct DyadicCuboid {
    int k = 0;
    std::array<std::int64_t, 2> m{};

    // ((m + 1/2) 2^-k, 2^-k); the cuboid spans heights [2^-(k+1), 2^-k].
    HalfSpacePoint upper_centre(int n) const;
};

// Smallest pairwise distance below `bound`, found by bucketed neighbour search;
// returns `bound` when every pair is at least that far apart.
double min_pair_distance(const std::vector<HalfSpacePoint>& pts, double bound);

// Greedy thinning in the given order: keep a point unless it lies within m of
// an already kept one. Returns kept indices in order.
std::vector<std::size_t> thin_indices(const std::vector<HalfSpacePoint>& pts, double m);

// Upper centres of the dyadic cuboids above boxes meeting the cloud, levels
// k_min..k_max, thinned to separation m.
UDSet build_dyadic_uds(const PointCloud& cloud, int k_min, int k_max, double separation_m = 0.5);

// Points per dyadic level (k = round(-log2 height)), as (k, count).
std::vector<std::pair<int, std::uint64_t>> uds_level_counts(const UDSet& uds);

// Largest distance from a sampled point (xi, t), xi in the cloud and t in the
// UDS height range, to the nearest UDS point. Spot check of density_M.
double density_spot_check(const UDSet& uds, const PointCloud& cloud, std::size_t samples, std::uint64_t seed);

std::vector<double> distances_from(const UDSet& uds, const HalfSpacePoint& z);

// [R_hi / 2, R_hi] with R_hi = log(height of o / half the lowest height).
std::pair<double, double> default_R_window(const UDSet& uds);

ExponentEstimate delta_X(const UDSet& uds, double R_min, double R_max, double step = 0.05);
ExponentEstimate delta_X(const UDSet& uds);

struct LatticeWindow {
    double ball_radius = 20;  // keep points within this distance of (0, 1)
    double half_width = std::numeric_limits<double>::infinity();  // and with |x_i| <= half_width
};

struct HoroballLattice {
    int n = 1;
    int k_max = 0;
    LatticeWindow window;
    std::vector<HalfSpacePoint> points;
};

// ((2^k Z)^n, 2^k) for 0 <= k <= k_max, clipped to the window.
HoroballLattice horoball_lattice(int n, int k_max, const LatticeWindow& window);
UDSet lattice_uds(const HoroballLattice& lattice);
// delta_X over [ball_radius / 2, ball_radius].
ExponentEstimate lattice_entropy(const HoroballLattice& lattice);

enum class BoundedVerdict { Bounded, WeaklyBounded, Unbounded };
std::string to_string(BoundedVerdict v);

struct BoundedTypeReport {
    double rho_hat = 0;
    std::size_t worst_index = 0;
    std::vector<std::pair<double, double>> table;  // (R, max ratio over samples)
    double growth_rate = 0;                        // fitted slope of log rho(R)
    bool unbounded_trend = false;
    // Same report restricted to points outside declared horoballs.
    double rho_hat_excised = 0;
    double growth_rate_excised = 0;
    bool excised_unbounded_trend = false;
    BoundedVerdict verdict = BoundedVerdict::Bounded;
    double K_hat = 0;  // rho_hat * e^{Delta M}, reported only
};

struct BoundedTypeOptions {
    double growth_threshold = 0.1;  // slope of log rho(R) counted as unbounded growth
    std::uint64_t seed = 1;
    double delta = 0;  // used for K_hat only
};

BoundedTypeReport bounded_type_report(const UDSet& uds, const std::vector<double>& R_grid, std::size_t sample_size,
                                      const BoundedTypeOptions& opts = {});

struct AtomicMeasure {
    std::vector<double> weights;  // aligned with uds.points
    double s = 0;
    HalfSpacePoint z;
    double total = 0;
    double normaliser = 0;  // P^s(X, o)
    TailVerdict tail;
};

// mu_z^s = sum e^{-s d(x, z)} / P^s(X, o) delta_x. `delta` is the exponent of
// the set; when absent it is estimated with delta_X over the default window.
AtomicMeasure atomic_measure(const UDSet& uds, double s, const HalfSpacePoint& z,
                             std::optional<double> delta = std::nullopt);

struct PattersonFunction {
    enum class Family { Constant, LogPower };
    Family family = Family::Constant;
    double beta = 0;

    static PattersonFunction constant();
    static PattersonFunction log_power(double beta);
    double operator()(double t) const;
    // Smallest r0 on the sampled grid with h(t + r) <= e^{eps t} h(r) for r >= r0.
    double slow_growth_threshold(double eps, double r_max = 200) const;
    // Sampled sup of h(r + t) / (h(r) h(t)).
    double submultiplicative_constant(double r_max = 100) const;
};

double modified_poincare(const UDSet& uds, const PattersonFunction& h, double s, const HalfSpacePoint& z);

struct ShadowStep {
    double s = 0;
    double A_fit = 0;
    double A_median = 0;
    std::size_t violations = 0;
    std::size_t empty_shadows = 0;
};

struct ShadowReport {
    double ell = 0;
    double delta = 0;
    std::size_t samples = 0;
    std::vector<ShadowStep> steps;
    double spread = 0;     // max A_fit / min A_fit along the ladder
    bool stable = false;   // spread <= 3
    bool drifting = false; // A_fit rises at every step and by more than 1.5x overall
};

struct ShadowOptions {
    std::uint64_t seed = 7;
    double stable_factor = 3;
    double drift_factor = 1.5;
    double violation_factor = 10;
};

ShadowReport shadow_check(const UDSet& uds, double ell, double delta, const std::vector<double>& s_list,
                          std::size_t sample_size, const ShadowOptions& opts = {});

struct TightnessReport {
    double ell_hat = 0;  // deepest estimated depth among points outside declared horoballs
    double ell_tight = std::numeric_limits<double>::infinity();  // smallest grid value covering them
    bool weak_flag = false;
    std::vector<std::uint32_t> horoball_list;  // declared horoballs holding deeper points
    double horoball_depth = 0;
};

// Depth of (x, t) in the hull: with c the largest hole ratio in D_t(x), the
// porosity relation c = 2 e^{-2 depth} gives depth = log(2 / c) / 2.
double hull_depth(const HoleFinder& holes, const HalfSpacePoint& p, double c_floor = 1e-6);

TightnessReport tightness_audit(const UDSet& uds, const PointCloud& cloud, const std::vector<double>& ell_grid);

}  // namespace hypent
