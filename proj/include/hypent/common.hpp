#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hypent {

// Error taxonomy shared by every module.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct InvalidSpecError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};
struct PartialResultError : std::runtime_error {
    PartialResultError(const std::string& what, int completed_depth)
        : std::runtime_error(what), completed_depth(completed_depth) {}
    int completed_depth;
};

using Point2 = std::array<double, 2>;

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    std::size_t samples = 0;
};

// Ordinary least squares y = a + b x. Needs at least two distinct x.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Worker count used by the parallel helpers. 1 means strictly sequential.
// Initialised from HYPENT_THREADS, otherwise hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Calls body(i) for i in [0, n) on up to thread_count() workers with static
// contiguous chunks. body must only write to per-index state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Reads a non-negative integer override from the environment.
std::uint64_t env_u64(const char* name, std::uint64_t fallback);

}  // namespace hypent
