#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tzone::app {

struct AcceptanceOptions {
    bool quick = false;
    std::vector<int> only;  ///< empty = all criteria
    /// Replaces named tolerances (see tolerance_table). Unknown names throw.
    std::map<std::string, double> tolerance_overrides;
    unsigned workers = 0;
    std::uint64_t seed = 20240611;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    std::vector<std::pair<std::string, double>> metrics;
};

/// Named tolerances and their defaults for full or quick runs.
std::map<std::string, double> tolerance_table(bool quick);

/// Number of criteria in the suite.
int criterion_count();

/// Runs the selected criteria in order; `on_result` sees each result as it
/// lands. A criterion that throws is reported as failed, never propagated.
std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);
std::string results_json(const std::vector<CriterionResult>& results);

}  // namespace tzone::app
