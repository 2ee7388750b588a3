#include "privtrade/breach.hpp"

#include "privtrade/error.hpp"
#include "privtrade/model.hpp"

namespace privtrade {

BreachProfile BreachProfile::from(const Scenario& s) {
    return {s.pi_s, s.pi_c_star, s.theta, s.l_n};
}

double customer_breach_probability(const BreachProfile& bp, double l) {
    if (!(l >= 0.0 && l <= bp.l_n)) {
        throw DomainError("customer_breach_probability: loss outside [0, l_N]");
    }
    return bp.pi_c_star * power_ratio(l, bp.l_n, bp.theta);
}

double combined_breach_probability(double pi_s, double pi_c) {
    if (!(pi_s >= 0.0 && pi_s <= 1.0) || !(pi_c >= 0.0 && pi_c <= 1.0)) {
        throw DomainError("combined_breach_probability: probability outside [0, 1]");
    }
    return 1.0 - (1.0 - pi_s) * (1.0 - pi_c);
}

}  // namespace privtrade
