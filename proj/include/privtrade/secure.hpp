#pragma once

// Perfectly secure provider (pi_s = 0): closed-form optimum, optimal loss ratio and the
// closed-form elasticities.

#include <optional>

#include "privtrade/model.hpp"

namespace privtrade {

struct SecureOptimum {
    double raw = 0.0;      ///< closed form, may exceed l_N
    double clamped = 0.0;  ///< clamp to [0, l_N]
    bool operator==(const SecureOptimum&) const = default;
};

struct SecureElasticities {
    double eps_q_star = 0.0;
    double eps_p_star = 0.0;
    double eps_l_n = 0.0;
    double eps_price = 0.0;
    bool operator==(const SecureElasticities&) const = default;
};

struct SecureQuasiElasticities {
    double qeps_nu = 0.0;
    double qeps_theta = 0.0;
    double qeps_pi_c_star = 0.0;
    bool operator==(const SecureQuasiElasticities&) const = default;
};

/// Copy of s with pi_s = 0.
Scenario secure_variant(const Scenario& s);

/// Closed-form optimum with pi_s ignored. Empty when nu >= 1 + theta, where the exponent
/// 1/(theta - nu + 1) is not positive and the formula does not give a maximum.
std::optional<SecureOptimum> secure_optimal_loss(const Scenario& s);

/// Feasible optimum under a secure provider: closed form when it applies, otherwise the
/// general solver with pi_s = 0.
double secure_feasible_loss(const Scenario& s);

/// l*(pi_s = 0) / l*(pi_s). Returns 1 when pi_s is already 0. Throws DomainError when the
/// denominator optimum is 0.
double optimal_loss_ratio(const Scenario& s);

/// Elasticities of the unclamped closed form. Throws DomainError for p >= p* or
/// nu >= 1 + theta.
SecureElasticities secure_elasticities(const Scenario& s);

SecureQuasiElasticities secure_quasi_elasticities(const Scenario& s);

/// Price at which the unclamped closed form equals l_N; below it the secure optimum is
/// saturated. Empty when the closed form does not apply or never reaches l_N.
std::optional<double> secure_saturation_price(const Scenario& s);

}  // namespace privtrade
