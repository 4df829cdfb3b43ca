// Acceptance suite: one pass/fail line per criterion. With arguments, runs
// only the listed criterion ids.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "hypent/acceptance.hpp"

int main(int argc, char** argv) {
    using namespace hypent::acceptance;
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    if (ids.empty()) ids = criterion_ids();
    bool all = true;
    run(ids, [&](const CriterionResult& r) {
        std::printf("%s\n", summary_line(r).c_str());
        std::fflush(stdout);
        all = all && r.passed;
    });
    return all ? 0 : 1;
}
