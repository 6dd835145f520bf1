#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dynsolow {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // measured vs expected
};

struct ScenarioResult {
    std::string scenario;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

// Desk-scale reproduction scenarios, one per documented claim. Each runs at a
// fixed internal seed, writes supporting data files into out_dir (skipped when
// out_dir is empty) and returns one result per check.
std::vector<std::string> scenario_names();
bool is_scenario(const std::string& name);
ScenarioResult run_scenario(const std::string& name, const std::filesystem::path& out_dir,
                            int parallel = 1);

// Numerical hygiene checks (Jacobian vs finite differences, OU statistics,
// dt-halving stability); part of the acceptance suite, not of the scenario
// list.
ScenarioResult run_numerical_hygiene();

std::string format_scenario_result(const ScenarioResult& result);

}  // namespace dynsolow
