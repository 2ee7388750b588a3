#pragma once

// Series composition of provider-side and customer-side breach probabilities.

namespace privtrade {

struct Scenario;

struct BreachProfile {
    double pi_s = 0.0;
    double pi_c_star = 0.0;
    double theta = 0.0;
    double l_n = 0.0;

    static BreachProfile from(const Scenario& s);
};

/// pi_c = pi_c* (l / l_N)^theta.
double customer_breach_probability(const BreachProfile& bp, double l);

/// Probability that at least one side fails, 1 - (1 - pi_s)(1 - pi_c).
double combined_breach_probability(double pi_s, double pi_c);

}  // namespace privtrade
