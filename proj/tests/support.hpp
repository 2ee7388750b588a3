#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <functional>
#include <random>

#include "privtrade/model.hpp"

namespace privtrade::test {

inline Scenario table1(double l_n = 10000.0, double price = 0.5) {
    return {250.0, 1.0, price, 0.138647, 0.138647, 0.2, l_n, 1e-5, 1e-4};
}

inline Scenario table2() { return {250.0, 1.0, 0.5, 0.138647, 0.138647, 0.2, 10000.0, 1e-4, 1e-4}; }

/// Net surplus written straight from the closed-form expression in long double, with
/// std::pow rather than the library's log-domain helper.
inline long double reference_surplus(const Scenario& s, long double l) {
    const long double gap = 1.0L - static_cast<long double>(s.price) / s.p_star;
    const long double x = l / s.l_n;
    const long double g2 = gap > 0 ? gap * gap : 0.0L;
    return 0.5L * s.p_star * s.q_star * (1.0L + s.alpha_n * std::pow(x, (long double)s.nu)) * g2 -
           (s.pi_s + s.pi_c_star * (1.0L - s.pi_s) * std::pow(x, (long double)s.theta)) * l;
}

/// Central difference with a step scaled to the argument.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double rel_step = 1e-6) {
    const double h = rel_step * std::max(std::abs(x), 1.0);
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace privtrade::test
