#pragma once

#include <functional>
#include <string>
#include <vector>

#include "zetalab/phase.hpp"
#include "zetalab/report.hpp"

namespace zetalab {

/// Fitted constant in |smoothed - main - (-sqrt 2) divisor| <= C G T^{0.05}.
inline constexpr double kAtkinsonRemainderC = 2.5;

/// Fitted constant in |I(T)| <= C E^{3/4} D^{-5/4} on the saddle regime with
/// D sqrt(T) >= 10. Measured maximum 5.04 over T in [1e3, 1e6].
inline constexpr double kSaddleRegimeC = 6.0;

struct RunOptions {
    PhaseModel model{};  // coefficients seen by taylor-dominance
};

/// The config with every zero field replaced by the experiment's default.
ExperimentConfig resolve_defaults(const ExperimentConfig& c);

/// Validates the config, fills defaults and dispatches. The report's config is
/// the resolved one. Library errors propagate unchanged.
ExperimentReport run_experiment(const ExperimentConfig& c, const RunOptions& opt = {});

/// Exit code for an exception escaping run_experiment: 1 for validation and
/// domain errors, 2 for convergence failures, 3 otherwise.
int exit_code_for(const std::exception& e);

enum class SuiteLevel { Smoke, Desk };

struct SuiteCase {
    std::string id;
    ExperimentConfig config;
};

/// Smoke runs every experiment at reduced size; desk runs the same ids at
/// full size plus extra cases.
std::vector<SuiteCase> suite_cases(SuiteLevel level);

struct SuiteCaseResult {
    std::string id;
    bool passed = false;
    int exit_code = 0;
    std::string error;                    // exception text, empty on success
    std::vector<std::string> failed_flags;
    double wall_time = 0.0;
};

struct SuiteResult {
    std::vector<SuiteCaseResult> cases;
    bool passed = true;
    int exit_code = 0;  // highest case code
};

/// Runs the cases in order. With a non-empty out_dir every report is written
/// as <out_dir>/<id>.json plus its CSV series. on_case is called after each case.
SuiteResult run_suite(SuiteLevel level, const RunOptions& opt = {}, const std::string& out_dir = {},
                      const std::function<void(const SuiteCaseResult&)>& on_case = {});

}  // namespace zetalab
