#pragma once

#include <string>
#include <vector>

#include "curltrace/scenarios.hpp"
#include "curltrace/verify.hpp"

namespace curltrace {

/// Fully parsed run configuration: scenario plus resolved budgets.
struct RunConfig {
    GoldenScenario scenario;
    VerifyConfig verify;
};

struct ScenarioInfo {
    std::string name;
    std::string anchor;
};

/// The builtin scenarios exposed by the CLI, with one-line descriptions.
std::vector<ScenarioInfo> builtin_scenarios();

GoldenScenario make_builtin_scenario(const std::string& name);

/// Strict JSON parsing: unknown keys are rejected, the seed is mandatory.
RunConfig parse_run_config(const std::string& json_text);

/// The trace-table CSV for a configuration (byte-stable across runs).
std::string run_trace_csv(const RunConfig& config);

struct CheckOutput {
    std::string report_json;
    std::string trace_csv;
    bool all_pass = false;
};

/// Full verification suite; the report references the CSV by file name.
CheckOutput run_check(const RunConfig& config);

/// Write-temp-then-rename so output files appear atomically.
void write_file_atomic(const std::string& path, const std::string& content);

/// CLI entry point: list | trace --config F --out D | check --config F --out D.
/// Exit codes: 0 success, 1 check failure, 2 config error, 3 numerical fault.
int cli_main(int argc, char** argv);

}  // namespace curltrace
