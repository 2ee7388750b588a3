#pragma once

// Scenario files (JSON in) and report bundles (JSON / CSV out).

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "privtrade/error.hpp"
#include "privtrade/model.hpp"
#include "privtrade/secure.hpp"
#include "privtrade/sensitivity.hpp"
#include "privtrade/solver.hpp"

namespace privtrade {

/// Malformed input text (exit code 2).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Output could not be written (exit code 5).
class IoError : public Error {
public:
    using Error::Error;
};

struct SweepSpec {
    double pmin = 0.0;
    double pmax = 0.0;  ///< 0 means 0.99 * p_star
    std::size_t points = 201;
    bool operator==(const SweepSpec&) const = default;
};

struct ScenarioFile {
    Scenario scenario;
    std::optional<SweepSpec> sweep;
    std::optional<std::vector<TornadoItem>> tornado;
    std::optional<std::vector<double>> losses;
};

/// Parses and validates a scenario document. Throws ParseError for malformed JSON or a
/// non-object top level, ValidationError (with the key name) for unknown, missing or
/// out-of-range keys.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::filesystem::path& path);

std::vector<double> sweep_grid(const Scenario& s, const SweepSpec& spec);

struct SecureSummary {
    std::optional<SecureOptimum> closed_form;
    double feasible_loss = 0.0;
    std::optional<double> olr;
    std::optional<SecureElasticities> elasticities;
    std::optional<SecureQuasiElasticities> quasi_elasticities;
    std::optional<double> saturation_price;
    bool operator==(const SecureSummary&) const = default;
};

struct OracleCheck {
    std::size_t grid_points = 0;
    double oracle_l = 0.0;
    double solver_l = 0.0;
    double tolerance = 0.0;
    std::size_t random_trials = 0;
    std::size_t random_failures = 0;
    bool agree = false;
    bool operator==(const OracleCheck&) const = default;
};

struct ReportMetadata {
    std::string tool_version;
    std::optional<std::string> timestamp;
    std::string input_digest;  ///< SHA-256 of the scenario file bytes, hex
    bool operator==(const ReportMetadata&) const = default;
};

struct ReportBundle {
    std::string command;
    std::optional<Scenario> scenario;
    std::optional<TradeoffSolution> solution;
    std::optional<FeasibilityReport> feasibility;
    std::optional<SweepSeries> sweep;
    std::optional<std::vector<TornadoRow>> tornado;
    std::optional<SecureSummary> secure;
    std::optional<DiscreteChoice> discrete;
    std::optional<double> pareto_nu;
    std::optional<OracleCheck> oracle;
    ReportMetadata metadata;
    bool operator==(const ReportBundle&) const = default;
};

nlohmann::json to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const nlohmann::json& j);

/// 17 significant digits; non-finite values spelled inf / -inf / nan.
std::string format_number(double v);

std::string sweep_csv(const SweepSeries& series);
std::string tornado_csv(const std::vector<TornadoRow>& rows);

enum class ReportFormat { Json, Csv };

/// Writes bundle to path. CSV is available for sweeps and tornado tables only.
void write_report(const ReportBundle& bundle, ReportFormat format,
                  const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace privtrade
