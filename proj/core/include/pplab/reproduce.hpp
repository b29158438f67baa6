#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pplab::reproduce {

/// One named threshold evaluation inside a case.
struct Check {
    std::string label;
    double value = 0.0;
    std::string requirement;  // human-readable, e.g. "<= 0.05"
    bool pass = false;
};

struct CaseResult {
    std::string name;
    bool pass = false;
    std::vector<Check> checks;
    std::vector<std::pair<std::string, double>> metrics;  // named report values
};

/// Stable identifiers of the bundled experiment recipes.
std::vector<std::string> case_names();

/// Run one recipe (or "all").  spacing_scale > 1 coarsens every grid by that
/// factor for quick smoke runs; thresholds are evaluated unchanged, so quick
/// runs may legitimately fail checks that need the production resolution.
CaseResult run_case(const std::string& name, double spacing_scale = 1.0);
std::vector<CaseResult> run_cases(const std::string& name_or_all, double spacing_scale = 1.0);

}  // namespace pplab::reproduce
