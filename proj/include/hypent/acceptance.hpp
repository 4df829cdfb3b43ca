#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypent::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;         // checks passed and within the runtime budget
    bool checks_passed = false;  // the only verdict written to the report
    bool within_budget = true;
    double seconds = 0;       // wall time; kept out of the JSON report
    double budget_seconds = 0;
    nlohmann::json measured;  // values and tolerances behind the verdict
    std::string note;         // one-line summary
};

// Criteria 1..12. Criterion 12 reruns 1..11 twice in sequential mode.
std::vector<int> criterion_ids();
std::string criterion_name(int id);
CriterionResult run_criterion(int id);

// Runs the given criteria in order; `on_result` sees each one as it finishes.
std::vector<CriterionResult> run(const std::vector<int>& ids,
                                 const std::function<void(const CriterionResult&)>& on_result = nullptr);

// Deterministic report: no timings or budget verdicts, sorted keys.
nlohmann::json report(const std::vector<CriterionResult>& results);
std::string summary_line(const CriterionResult& r);

}  // namespace hypent::acceptance
