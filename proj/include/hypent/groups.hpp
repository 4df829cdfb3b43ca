#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hypent/hypcore.hpp"

namespace hypent {

// Disk D = (center, radius) is sent by its generator onto the complement of
// D' = (center2, radius2): g(ext D) = int D'.
struct DiskPair {
    Complex center{};
    double radius = 1;
    Complex center2{};
    double radius2 = 1;
};

struct SchottkySpec {
    int n = 1;
    std::vector<DiskPair> pairs;

    // Throws InvalidSpecError unless the 2k closed disks are pairwise disjoint.
    void validate() const;
};

// Signed 1-based generator indices; -i is the inverse of generator i.
using Word = std::vector<int>;

bool is_reduced(const Word& w);
std::string word_to_string(const Word& w);  // "e" for the identity, a/A, b/B, ...
Word word_from_string(const std::string& s);
// Lexicographic order with letters ranked g1 < g1^-1 < g2 < g2^-1 < ...
bool word_less(const Word& a, const Word& b);

std::vector<Isometry> schottky_group(const SchottkySpec& spec);

// Ping-pong disk containing everything starting with `letter`: D'_i for g_i, D_i for g_i^-1.
std::pair<Complex, double> letter_disk(const SchottkySpec& spec, int letter);

Isometry word_isometry(const std::vector<Isometry>& gens, const Word& w);

struct OrbitRecord {
    Word word;
    HalfSpacePoint image;
    double distance = 0;
};

struct EnumOptions {
    double hard_cap_R = 25;
    // Global record cap; HYPENT_MAX_RECORDS overrides the default.
    std::uint64_t max_records = 0;
};

double pruning_slack(const std::vector<Isometry>& gens, const HalfSpacePoint& base);

// Every reduced word w with d(w(base), base) <= R, in lexicographic order.
std::vector<OrbitRecord> enumerate_orbit(const std::vector<Isometry>& gens, const HalfSpacePoint& base, double R,
                                         const EnumOptions& opts = {});

struct ExponentEstimate {
    double value = 0;
    double raw_slope = 0;
    double R_min = 0, R_max = 0;
    double stderr_value = 0;
    double endpoint = 0;  // log N(R_max) / R_max
    std::vector<std::pair<double, std::uint64_t>> counts;
};

// Slope of log N(R) over the R grid [R_min, R_max]; grid points with N < 10 are skipped.
ExponentEstimate growth_exponent(std::vector<double> distances, double R_min, double R_max, double step, int n);

ExponentEstimate delta_estimate(const std::vector<OrbitRecord>& records, double R_min, double R_max, int n,
                                double step = 0.1);

double poincare_partial(const std::vector<OrbitRecord>& records, double s);

struct TailOptions {
    double increment_tol = 1e-6;  // absolute increment over the final tenth of the R range
    double decay_tol = -0.05;     // fitted growth rate of increments at or below this is flat
    double step = 0.5;
};

struct TailVerdict {
    bool flat = false;
    double last_increment = 0;
    double decay_rate = 0;
    std::vector<std::pair<double, double>> partial_sums;
};

// Partial sums sum h(d) e^{-s d} over d <= R for a grid of R up to R_max.
TailVerdict poincare_tail(std::vector<double> distances, double s, double R_max,
                          const std::function<double(double)>& h = nullptr, const TailOptions& opts = {});

}  // namespace hypent
