#include "privtrade/secure.hpp"

#include <algorithm>
#include <cmath>

#include "privtrade/error.hpp"
#include "privtrade/solver.hpp"

namespace privtrade {

namespace {

double exponent_denominator(const Scenario& s) { return s.theta - s.nu + 1.0; }

void require_closed_form(const Scenario& s, const char* op) {
    if (s.price >= s.p_star) throw DomainError(std::string(op) + ": price >= p*");
    if (!(exponent_denominator(s) > 0.0)) {
        throw DomainError(std::string(op) + ": closed form needs nu < 1 + theta");
    }
}

// log of the closed form without the (1 - p/p*)^2 factor.
double log_base_loss(const Scenario& s) {
    return (std::log(0.5 * s.q_star * s.p_star * s.nu * s.alpha_n / (s.pi_c_star * (s.theta + 1.0))) +
            (s.theta - s.nu) * std::log(s.l_n)) /
           exponent_denominator(s);
}

}  // namespace

Scenario secure_variant(const Scenario& s) {
    Scenario out = s;
    out.pi_s = 0.0;
    return out;
}

std::optional<SecureOptimum> secure_optimal_loss(const Scenario& s) {
    s.validate();
    const double k = exponent_denominator(s);
    if (!(k > 0.0) || std::abs(s.nu - (1.0 + s.theta)) <= 1e-12) return std::nullopt;
    const double gap = s.price_gap();
    if (gap == 0.0) return SecureOptimum{0.0, 0.0};
    const double raw = std::exp(log_base_loss(s) + 2.0 * std::log(gap) / k);
    return SecureOptimum{raw, std::clamp(raw, 0.0, s.l_n)};
}

double secure_feasible_loss(const Scenario& s) {
    if (auto closed = secure_optimal_loss(s)) return closed->clamped;
    return solve_tradeoff(secure_variant(s)).l_opt;
}

double optimal_loss_ratio(const Scenario& s) {
    s.validate();
    if (s.pi_s == 0.0) return 1.0;
    const double vulnerable = solve_tradeoff(s).l_opt;
    if (!(vulnerable > 0.0)) {
        throw DomainError("optimal_loss_ratio: vulnerable-provider optimum is 0");
    }
    return secure_feasible_loss(s) / vulnerable;
}

SecureElasticities secure_elasticities(const Scenario& s) {
    s.validate();
    require_closed_form(s, "secure_elasticities");
    const double inv_k = 1.0 / exponent_denominator(s);
    const double r = s.price / s.p_star;
    return {inv_k, inv_k * (1.0 + r) / (1.0 - r), (s.theta - s.nu) * inv_k,
            -2.0 * inv_k * r / (1.0 - r)};
}

SecureQuasiElasticities secure_quasi_elasticities(const Scenario& s) {
    s.validate();
    require_closed_form(s, "secure_quasi_elasticities");
    const double inv_k = 1.0 / exponent_denominator(s);
    const auto opt = secure_optimal_loss(s);
    const double log_ratio = std::log(opt->raw / s.l_n);
    return {inv_k * (1.0 / s.nu + log_ratio), -inv_k * (log_ratio + 1.0 / (s.theta + 1.0)),
            -inv_k / s.pi_c_star};
}

std::optional<double> secure_saturation_price(const Scenario& s) {
    s.validate();
    const double k = exponent_denominator(s);
    if (!(k > 0.0)) return std::nullopt;
    // raw(p) = exp(base) * (1 - p/p*)^(2/k) = l_N
    const double log_gap = 0.5 * k * (std::log(s.l_n) - log_base_loss(s));
    if (log_gap >= 0.0) return std::nullopt;
    return s.p_star * (1.0 - std::exp(log_gap));
}

}  // namespace privtrade
