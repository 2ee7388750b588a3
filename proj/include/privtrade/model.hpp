#pragma once

// Demand curve, disclosure/benefit power law and the customer's net surplus.

#include <string_view>

namespace privtrade {

/// All parameters of one customer/provider pair.
struct Scenario {
    double q_star = 0.0;     ///< maximum base quantity of service
    double p_star = 0.0;     ///< willingness-to-pay
    double price = 0.0;      ///< unit price set by the provider
    double nu = 0.0;         ///< privacy parameter
    double theta = 0.0;      ///< security parameter, in (0,1)
    double alpha_n = 0.0;    ///< maximum marginal demand factor
    double l_n = 0.0;        ///< maximum potential loss
    double pi_s = 0.0;       ///< provider-side breach probability, in [0,1)
    double pi_c_star = 0.0;  ///< maximum customer-side breach probability, in (0,1)

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// 1 - price/p_star clamped to [0, 1].
    double price_gap() const;

    bool operator==(const Scenario&) const = default;
};

struct DemandPoint {
    double quantity = 0.0;
    double price = 0.0;
};

/// Post-release quantities acceptable to both customer and provider.
struct ConsumptionRegion {
    double lower = 0.0;
    double upper = 0.0;
    double customer_ok_lower = 0.0;
    double provider_lower = 0.0;
    double provider_upper = 0.0;
    double discriminant = 0.0;
    bool empty = false;

    bool contains(double q) const { return !empty && q >= lower && q <= upper; }
};

/// (l / l_n)^exponent evaluated in the log domain; 0 at l = 0 for positive exponents.
double power_ratio(double l, double l_n, double exponent);

/// alpha(l) = alpha_N (l / l_N)^nu.
double marginal_demand_factor(const Scenario& s, double l);

/// Linear demand rotated by (1 + alpha); zero for p >= p*.
double demand_quantity(const Scenario& s, double alpha, double p);

/// Provider revenue at quantity q2 on the (1 + alpha) demand curve.
double provider_revenue(const Scenario& s, double q2, double alpha);

/// Intersection of the customer and provider acceptance constraints for a release
/// moving the working point from q1 on the base curve onto the (1 + alpha) curve.
ConsumptionRegion valid_demand_region(const Scenario& s, double q1, double alpha);

/// Quantity chosen by a price taker after the demand curve expands.
double price_taker_demand(double q1, double alpha);

/// Solves benefit_fraction = loss_fraction^nu for nu.
double pareto_privacy_parameter(double benefit_fraction, double loss_fraction);

/// Consumption surplus at alpha(l) minus the expected breach loss.
double net_surplus(const Scenario& s, double l);

/// Analytic derivative of net_surplus with respect to l; l must be positive.
double surplus_gradient(const Scenario& s, double l);

}  // namespace privtrade
