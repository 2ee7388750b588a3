#include "privtrade/model.hpp"

#include <algorithm>
#include <cmath>

#include "privtrade/breach.hpp"
#include "privtrade/error.hpp"

namespace privtrade {

namespace {

void require(bool ok, const char* field, const char* what) {
    if (!ok) throw ValidationError(field, what);
}

void check_loss(const Scenario& s, double l, const char* op) {
    if (!(l >= 0.0 && l <= s.l_n)) {
        throw DomainError(std::string(op) + ": loss outside [0, l_N]");
    }
}

}  // namespace

void Scenario::validate() const {
    // NaN fails every comparison below.
    require(q_star > 0.0 && std::isfinite(q_star), "q_star", "must be finite and > 0");
    require(p_star > 0.0 && std::isfinite(p_star), "p_star", "must be finite and > 0");
    require(price >= 0.0 && std::isfinite(price), "price", "must be finite and >= 0");
    require(nu > 0.0 && std::isfinite(nu), "nu", "must be finite and > 0");
    require(theta > 0.0 && theta < 1.0, "theta", "must lie in (0, 1)");
    require(alpha_n > 0.0 && std::isfinite(alpha_n), "alpha_n", "must be finite and > 0");
    require(l_n > 0.0 && std::isfinite(l_n), "l_n", "must be finite and > 0");
    require(pi_s >= 0.0 && pi_s < 1.0, "pi_s", "must lie in [0, 1)");
    require(pi_c_star > 0.0 && pi_c_star < 1.0, "pi_c_star", "must lie in (0, 1)");
}

double Scenario::price_gap() const {
    return std::clamp(1.0 - price / p_star, 0.0, 1.0);
}

double power_ratio(double l, double l_n, double exponent) {
    if (l == 0.0) {
        if (exponent > 0.0) return 0.0;
        if (exponent == 0.0) return 1.0;
        return HUGE_VAL;
    }
    return std::exp(exponent * std::log(l / l_n));
}

double marginal_demand_factor(const Scenario& s, double l) {
    check_loss(s, l, "marginal_demand_factor");
    return s.alpha_n * power_ratio(l, s.l_n, s.nu);
}

double demand_quantity(const Scenario& s, double alpha, double p) {
    if (!(alpha >= 0.0) || !(p >= 0.0)) {
        throw DomainError("demand_quantity: alpha and price must be >= 0");
    }
    if (p >= s.p_star) return 0.0;
    return s.q_star * (1.0 + alpha) * (1.0 - p / s.p_star);
}

double provider_revenue(const Scenario& s, double q2, double alpha) {
    const double q_max = s.q_star * (1.0 + alpha);
    if (!(alpha >= 0.0) || !(q2 >= 0.0 && q2 <= q_max)) {
        throw DomainError("provider_revenue: quantity outside [0, q*(1+alpha)]");
    }
    return s.p_star * (1.0 - q2 / q_max) * q2;
}

ConsumptionRegion valid_demand_region(const Scenario& s, double q1, double alpha) {
    if (!(q1 > 0.0 && q1 < s.q_star)) {
        throw DomainError("valid_demand_region: q1 outside (0, q*)");
    }
    if (!(alpha > 0.0)) {
        throw DomainError("valid_demand_region: alpha must be > 0");
    }
    constexpr double kDiscriminantTol = 1e-12;

    ConsumptionRegion r;
    const double x = q1 / s.q_star;
    const double q_max = (1.0 + alpha) * s.q_star;
    r.customer_ok_lower = q1 * std::sqrt(1.0 + alpha);
    r.discriminant = 1.0 - 4.0 * x * (1.0 - x) / (1.0 + alpha);
    if (r.discriminant < -kDiscriminantTol) {
        r.empty = true;
        r.provider_lower = r.provider_upper = 0.5 * q_max;
        r.lower = r.customer_ok_lower;
        r.upper = r.provider_upper;
        return r;
    }
    const double root = std::sqrt(std::max(r.discriminant, 0.0));
    r.provider_lower = 0.5 * q_max * (1.0 - root);
    r.provider_upper = 0.5 * q_max * (1.0 + root);
    r.lower = std::max(r.customer_ok_lower, r.provider_lower);
    r.upper = r.provider_upper;
    r.empty = r.lower > r.upper;
    return r;
}

double price_taker_demand(double q1, double alpha) {
    if (!(q1 >= 0.0) || !(alpha >= 0.0)) {
        throw DomainError("price_taker_demand: arguments must be >= 0");
    }
    return q1 * (1.0 + alpha);
}

double pareto_privacy_parameter(double benefit_fraction, double loss_fraction) {
    auto inside = [](double f) { return f > 0.0 && f < 1.0; };
    if (!inside(benefit_fraction) || !inside(loss_fraction)) {
        throw DomainError("pareto_privacy_parameter: fractions must lie in (0, 1)");
    }
    return std::log(benefit_fraction) / std::log(loss_fraction);
}

double net_surplus(const Scenario& s, double l) {
    check_loss(s, l, "net_surplus");
    const double gap = s.price_gap();
    const double consumption =
        0.5 * s.p_star * s.q_star * (1.0 + s.alpha_n * power_ratio(l, s.l_n, s.nu)) * gap * gap;
    if (l == 0.0) return consumption;
    const double pi_c = customer_breach_probability(BreachProfile::from(s), l);
    return consumption - combined_breach_probability(s.pi_s, pi_c) * l;
}

double surplus_gradient(const Scenario& s, double l) {
    if (!(l > 0.0)) throw DomainError("surplus_gradient: loss must be > 0");
    const double gap = s.price_gap();
    const double benefit = 0.5 * s.q_star * s.p_star * s.nu * (s.alpha_n / s.l_n) * gap * gap *
                           power_ratio(l, s.l_n, s.nu - 1.0);
    const double risk =
        s.pi_s + s.pi_c_star * (1.0 - s.pi_s) * (s.theta + 1.0) * power_ratio(l, s.l_n, s.theta);
    return benefit - risk;
}

}  // namespace privtrade
