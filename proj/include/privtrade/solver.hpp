#pragma once

// The customer's disclosure trade-off: regime classification, bracket construction,
// root finding on the decision equation and the brute-force grid oracle.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privtrade/model.hpp"

namespace privtrade {

/// Constants of the decision equation A l^(nu-1) - pi_s - B l^theta = 0.
struct DecisionCoefficients {
    double a = 0.0;
    double b = 0.0;
};

enum class Regime {
    NuLt1,          ///< nu < 1: gradient strictly decreasing, unique optimum
    SubcaseA,       ///< 1 < nu < 1 + theta: gradient rises to a peak then falls
    SubcaseB,       ///< nu > 1 + theta: gradient dips then grows without bound
    NuEq1,          ///< nu = 1: closed form
    NuEq1PlusTheta  ///< nu = 1 + theta boundary
};

enum class SolutionStatus { Interior, ClampedAtLn, AtZero, NoSolution };

std::string_view to_string(Regime r);
std::string_view to_string(SolutionStatus s);
Regime regime_from_string(std::string_view name);
SolutionStatus status_from_string(std::string_view name);

struct Bracket {
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const Bracket&) const = default;
};

struct TradeoffSolution {
    double l_opt = 0.0;
    SolutionStatus status = SolutionStatus::NoSolution;
    double surplus = 0.0;
    std::vector<double> critical_points;  ///< zeros of the gradient on (0, inf), ascending
    Regime regime = Regime::NuLt1;
    std::optional<Bracket> bracket;
    double gradient_residual = 0.0;  ///< normalized |gradient| at l_opt, 0 unless interior
    int iterations = 0;

    bool operator==(const TradeoffSolution&) const = default;
};

struct FeasibilityCondition {
    std::string name;
    double bound = 0.0;
    bool satisfied = false;
    bool operator==(const FeasibilityCondition&) const = default;
};

struct FeasibilityReport {
    Regime regime = Regime::NuLt1;
    std::vector<FeasibilityCondition> conditions;
    bool guaranteed_unique = false;
    bool sufficient_only = false;  ///< conditions are sufficient but not necessary
    bool operator==(const FeasibilityReport&) const = default;
};

/// Throws DegenerateScenario when price >= p_star.
DecisionCoefficients decision_coefficients(const Scenario& s);

Regime classify_regime(const Scenario& s);

FeasibilityReport feasibility_report(const Scenario& s);

/// Gradient of the net surplus written through the decision coefficients; valid for l > 0
/// including l > l_N.
double decision_gradient(const Scenario& s, const DecisionCoefficients& c, double l);

/// |gradient| divided by the sum of magnitudes of its three terms.
double normalized_gradient(const Scenario& s, const DecisionCoefficients& c, double l);

/// Interval [l_lower, l_upper] with positive gradient at the left end and non-positive at
/// the right end. Only for Regime::NuLt1; throws UsageError otherwise.
Bracket construct_bracket(const Scenario& s);

/// Feasible optimum: the argmax of net_surplus over [0, l_N], ties toward smaller loss.
TradeoffSolution solve_tradeoff(const Scenario& s);

struct DiscreteChoice {
    std::optional<std::size_t> index;  ///< empty when the implicit l = 0 wins
    double l = 0.0;
    double surplus = 0.0;
    bool operator==(const DiscreteChoice&) const = default;
};

/// Best disclosure among strictly increasing candidate losses in (0, l_N] plus l = 0.
DiscreteChoice solve_discrete(const Scenario& s, std::span<const double> losses);

/// Argmax of net_surplus over a uniform n-point grid on [0, l_N]; first maximum wins.
double oracle_grid_argmax(const Scenario& s, std::size_t n);

}  // namespace privtrade
