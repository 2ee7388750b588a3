#include "privtrade/sampling.hpp"

#include <array>
#include <cmath>

namespace privtrade {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace

Scenario random_scenario(std::mt19937_64& rng, Regime regime) {
    Scenario s;
    s.q_star = uniform(rng, 50.0, 500.0);
    s.p_star = uniform(rng, 0.5, 5.0);
    s.price = s.p_star * uniform(rng, 0.0, 0.9);
    s.theta = uniform(rng, 0.05, 0.95);
    s.alpha_n = uniform(rng, 0.05, 1.0);
    s.l_n = log_uniform(rng, 1e2, 1e5);
    s.pi_s = log_uniform(rng, 1e-6, 1e-2);
    s.pi_c_star = log_uniform(rng, 1e-6, 1e-2);
    switch (regime) {
        case Regime::NuLt1: s.nu = uniform(rng, 0.05, 0.95); break;
        case Regime::SubcaseA: s.nu = 1.0 + s.theta * uniform(rng, 0.05, 0.95); break;
        case Regime::SubcaseB: s.nu = uniform(rng, 1.0 + s.theta + 0.05, 2.5); break;
        case Regime::NuEq1: s.nu = 1.0; break;
        case Regime::NuEq1PlusTheta: s.nu = 1.0 + s.theta; break;
    }
    return s;
}

Scenario random_scenario(std::mt19937_64& rng, std::size_t trial) {
    constexpr std::array regimes{Regime::NuLt1, Regime::SubcaseA, Regime::SubcaseB, Regime::NuEq1,
                                 Regime::NuEq1PlusTheta};
    return random_scenario(rng, regimes[trial % regimes.size()]);
}

}  // namespace privtrade
