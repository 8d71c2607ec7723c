#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ubiq::run {

// Exit codes mirrored by the CLI.
enum ExitCode : int {
    ok = 0,
    generic_error = 1,
    schema_violation = 2,
    budget_overflow = 3,
    precision_exhausted = 4,
    unsupported = 5,
};

struct Budgets {
    double height_max = 1000.0;
    int j_max = 12;
    int depth = 3;
    std::uint64_t trials = 100;
    std::uint64_t points = 1u << 20;
    unsigned threads = 1;
};

struct ExperimentConfig {
    std::string command;     // enumerate | exponent | eutaxy | dimension | cantor | classify | cover
    std::string raw_json;    // canonical echo of the input
    std::uint64_t seed = 0;
    Budgets budgets;
    std::string out_dir;     // output directory (created if missing)
    std::string report_name = "report.json";

    static ExperimentConfig from_json_text(const std::string& text);
};

struct RunManifest {
    std::string config_echo;
    std::string artifact_version;
    double wall_ms = 0.0;
    bool truncated = false;
    bool shortfall = false;
    std::vector<std::pair<std::string, std::string>> output_digests;  // (path, fnv64 hex)

    std::string to_json() const;
};

struct RunResult {
    int exit_code = ok;
    RunManifest manifest;
    std::string error_record;  // machine-readable JSON on failure
};

// Executes the config and writes outputs + manifest under out_dir.
RunResult run_experiment(const ExperimentConfig& cfg);

// Helpers shared with the CLI and tests.
std::string fnv64_hex(const std::string& bytes);
std::string format_double(double v);  // 17 significant digits
std::string csv_quote(const std::string& field);

}  // namespace ubiq::run
