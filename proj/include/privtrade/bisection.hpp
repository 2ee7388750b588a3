#pragma once

#include <cmath>
#include <functional>

#include "privtrade/error.hpp"

namespace privtrade {

struct BisectionOptions {
    double rel_tol = 1e-10;  ///< stop when (hi - lo) < rel_tol * hi
    double abs_tol = 0.0;    ///< or when (hi - lo) < abs_tol
    int max_iterations = 200;
};

struct BisectionResult {
    double root = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
};

/// Sign-bracketed bisection on [lo, hi] with 0 <= lo < hi. f(lo) and f(hi) must have
/// opposite signs (zero counts as either). While the bracket spans more than a factor of
/// four and lo > 0 the split is geometric, so brackets covering many decades converge in
/// a bounded number of steps. Throws NumericFailure if the budget runs out.
inline BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                              const BisectionOptions& opt = {}) {
    if (!(lo < hi)) throw DomainError("bisect: empty bracket");
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) return {lo, lo, lo, 0};
    if (f_hi == 0.0) return {hi, hi, hi, 0};
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw DomainError("bisect: root is not bracketed");

    for (int it = 1; it <= opt.max_iterations; ++it) {
        const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo) * std::sqrt(hi)
                                                        : lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) return {lo + 0.5 * (hi - lo), lo, hi, it};  // no representable split left
        const double f_mid = f(mid);
        if (f_mid == 0.0) return {mid, mid, mid, it};
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        const double width = hi - lo;
        if (width < opt.rel_tol * std::abs(hi) || width < opt.abs_tol) {
            return {lo + 0.5 * width, lo, hi, it};
        }
    }
    throw NumericFailure("bisect: no convergence within iteration budget");
}

}  // namespace privtrade
