#pragma once

// Command dispatch behind the privtrade executable.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "privtrade/report.hpp"

namespace privtrade {

inline constexpr const char* kToolVersion = "1.0.0";

/// Stable process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitValidation = 3,
    kExitNumeric = 4,
    kExitIo = 5,
};

struct CommandOptions {
    std::string command;
    std::optional<std::filesystem::path> scenario_path;
    std::optional<std::filesystem::path> out;
    ReportFormat format = ReportFormat::Json;
    std::size_t grid = 1'000'000;
    std::optional<double> pmin;
    std::optional<double> pmax;
    std::optional<std::size_t> points;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 20;
    bool timestamp = true;
    std::optional<double> benefit;
    std::optional<double> loss;
    std::optional<std::vector<double>> losses;
};

bool is_known_command(const std::string& command);

/// Runs one command and writes the human summary to `out`. Throws the library's error
/// types; run_cli maps them onto exit codes.
ReportBundle run_command(const CommandOptions& opts, std::ostream& out);

/// Full CLI: argument parsing, dispatch, report writing and exit-code mapping.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace privtrade
