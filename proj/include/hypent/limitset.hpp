#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypent/groups.hpp"

namespace hypent {

struct PointCloud {
    int n = 1;
    std::vector<Point2> points;  // second coordinate is zero when n = 1
    std::string generator;
    int depth = 0;
    std::uint64_t seed = 0;
    // Scale below which the cloud stops resolving the set it samples; 0 means
    // the points are the set itself.
    double resolution = 0;
    bool elementary = false;  // limit set of a cyclic group: two points

    void validate() const;
    std::pair<Point2, Point2> bounding_box() const;
};

enum class SampleMode { FixedPoints, Projections };

// Mode FixedPoints: attracting fixed points of all reduced words of length
// `depth`. Mode Projections: radial projections from `base` of the orbit
// points of those words lying at distance >= min_distance.
PointCloud sample_limit_set(const SchottkySpec& spec, int depth, SampleMode mode,
                            const HalfSpacePoint& base = HalfSpacePoint(Complex(0, 0), 1.0),
                            double min_distance = 0);

struct GridCounts {
    int n = 1;
    std::vector<std::pair<int, std::uint64_t>> counts;  // (k, N_k) on the grid through the origin
    // Per scale, mean of log N_k over grid translations by multiples of
    // 2^-k / offsets along the diagonal; what the dimension fit uses.
    std::vector<double> mean_log_counts;
    int offsets = 1;
    std::size_t points = 0;
    double resolution = 0;
    double extent = 0;  // largest side of the cloud's bounding box
};

GridCounts box_counts(const PointCloud& cloud, int k_min, int k_max, int offsets = 4);

struct DimensionEstimate {
    double value = 0;
    double raw_slope = 0;
    double window_lo = 0, window_hi = 0;
    double stderr_value = 0;
    std::string method;
    // Information only: smallest and largest log N_k / (k log 2) in the window.
    double ratio_min = 0, ratio_max = 0;
    std::vector<std::pair<double, double>> table;  // (scale index, count)
};

// Scales with N_k > #points / 4, or finer than the cloud resolution, are dropped
// from the automatic window [k_hi / 2, k_hi].
DimensionEstimate upper_box_dim(const GridCounts& counts, std::optional<std::pair<int, int>> window = std::nullopt);

// Nearest-point distance queries against a cloud.
class NearestIndex {
public:
    explicit NearestIndex(const PointCloud& cloud);
    ~NearestIndex();
    NearestIndex(const NearestIndex&) = delete;
    NearestIndex& operator=(const NearestIndex&) = delete;

    double distance(const Point2& q) const;
    double distance_to_box(const Point2& lo, const Point2& hi) const;
    std::size_t size() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Largest distance to the cloud attained on the closed disk D_r(x): exact for
// n = 1, a grid search with local refinement (a lower bound) for n = 2.
class HoleFinder {
public:
    explicit HoleFinder(const PointCloud& cloud, int grid_subdivision = 4);
    ~HoleFinder();
    HoleFinder(const HoleFinder&) = delete;
    HoleFinder& operator=(const HoleFinder&) = delete;

    // The n = 2 search may stop as soon as the hole reaches `enough`.
    double max_hole(const Point2& x, double r, double enough = std::numeric_limits<double>::infinity()) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct PorosityOptions {
    double min_radius_factor = 64;  // smallest radius, in median nearest-neighbour spacings
    std::size_t max_centers = 0;    // 0: 2000 for n = 1, 150 for n = 2
    int grid_subdivision = 4;       // hole candidates every r * 2^-subdivision (n = 2)
};

struct PorosityResult {
    double c = 0;
    bool low_confidence = false;
    Point2 worst_center{};
    double worst_radius = 0;
    double r_min = 0, r_max = 0;
    std::size_t centers = 0;
};

PorosityResult porosity_estimate(const PointCloud& cloud, const PorosityOptions& opts = {});

double default_porosity_constant(int n);
// max(0, n - C_n c^n).
double porosity_dim_bound(double c, int n, double C_n);

struct WhitneyOptions {
    int subdivisions = 8;  // grid rescalings per octave averaged into the fit
};

DimensionEstimate whitney_exponent(const PointCloud& cloud, int n, int k_max, const WhitneyOptions& opts = {});

// Whitney cube counts per level for one grid placement (diagnostic).
std::vector<std::uint64_t> whitney_level_counts(const PointCloud& cloud, int j_max);

}  // namespace hypent
