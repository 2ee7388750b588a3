#pragma once

// Discrete (quasi-)elasticities of the optimal loss, tornado ranking and price sweeps.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privtrade/model.hpp"
#include "privtrade/solver.hpp"

namespace privtrade {

enum class Factor { QStar, PStar, Price, LN, Nu, Theta, PiS, PiCStar };

enum class SensitivityKind { Elasticity, QuasiElasticity };

std::string_view to_string(Factor f);
std::string_view to_string(SensitivityKind k);
Factor factor_from_string(std::string_view name);
SensitivityKind kind_from_string(std::string_view name);

/// q_star, p_star, price and l_n carry units; the rest are dimensionless.
bool is_dimensional(Factor f);

double factor_value(const Scenario& s, Factor f);
Scenario with_factor(Scenario s, Factor f, double value);

struct SensitivityEntry {
    Factor factor = Factor::QStar;
    double delta = 0.0;  ///< relative change for dimensional factors, absolute otherwise
    double value = 0.0;
    SensitivityKind kind = SensitivityKind::Elasticity;
    double base_l_opt = 0.0;
    double perturbed_l_opt = 0.0;
    bool status_changed = false;  ///< perturbed solve landed in a different status
    bool operator==(const SensitivityEntry&) const = default;
};

/// (Δl*/l*) / (Δx/x) with Δx/x = rel_delta.
SensitivityEntry discrete_elasticity(const Scenario& s, Factor f, double rel_delta);

/// (Δl*/l*) / Δx for x moved to new_value.
SensitivityEntry discrete_quasi_elasticity(const Scenario& s, Factor f, double new_value);

/// One tornado bar. For dimensional factors lower/upper are relative deltas (e.g. -0.1,
/// +0.1); for dimensionless factors they are the absolute perturbed values.
struct TornadoItem {
    Factor factor = Factor::QStar;
    double lower = 0.0;
    double upper = 0.0;
    bool operator==(const TornadoItem&) const = default;
};

struct TornadoRow {
    SensitivityEntry lower;
    SensitivityEntry upper;
    double magnitude() const;
    bool operator==(const TornadoRow&) const = default;
};

/// Rows sorted by descending max(|lower.value|, |upper.value|).
std::vector<TornadoRow> tornado(const Scenario& s, std::span<const TornadoItem> plan);

std::vector<TornadoItem> default_dimensional_plan(double rel_delta = 0.10);

struct SweepSeries {
    Factor factor = Factor::Price;
    std::vector<double> grid;
    std::vector<double> l_opt;
    std::vector<double> revenue;
    std::vector<SolutionStatus> status;
    std::optional<std::vector<double>> olr;
    std::optional<double> saturation_price;
    std::optional<double> kink_price;  ///< olr_sweep only: secure-side saturation price
    std::optional<double> revenue_argmax;
    bool operator==(const SweepSeries&) const = default;
};

/// Uniform grid of `points` prices on [0, fraction * p*].
std::vector<double> default_price_grid(const Scenario& s, std::size_t points = 201,
                                       double fraction = 0.99);

SweepSeries price_sweep(const Scenario& s, std::span<const double> grid);

/// price_sweep plus the argmax of the revenue p * q(alpha(l*(p)), p).
SweepSeries revenue_sweep(const Scenario& s, std::span<const double> grid);

/// price_sweep plus the optimal loss ratio per price. Requires pi_s > 0.
SweepSeries olr_sweep(const Scenario& s, std::span<const double> grid);

/// Largest price with a non-negative surplus gradient at l = l_N (nu < 1 only).
double saturation_price(const Scenario& s);

}  // namespace privtrade
