#include <doctest.h>

#include <cmath>
#include <random>

#include "privtrade/breach.hpp"
#include "privtrade/error.hpp"
#include "privtrade/model.hpp"
#include "support.hpp"

using namespace privtrade;

TEST_CASE("customer breach probability") {
    const BreachProfile bp{1e-4, 1e-4, 0.138647, 10000.0};
    CHECK(customer_breach_probability(bp, 10000.0) == doctest::Approx(1e-4).epsilon(1e-14));
    CHECK(customer_breach_probability(bp, 0.0) == 0.0);
    CHECK(customer_breach_probability(bp, 3797.0) == doctest::Approx(8.7435e-5).epsilon(1e-9 / 8.7435e-5));
    CHECK(customer_breach_probability(bp, 3797.0) == doctest::Approx(8.7436084370832908e-5).epsilon(1e-13));
    CHECK_THROWS_AS(customer_breach_probability(bp, -0.5), DomainError);
    CHECK_THROWS_AS(customer_breach_probability(bp, 1e5), DomainError);
}

TEST_CASE("combined breach probability") {
    CHECK(combined_breach_probability(0.0, 0.3) == doctest::Approx(0.3));
    CHECK(combined_breach_probability(1.0, 0.3) == 1.0);
    CHECK(combined_breach_probability(1e-4, 8.7435e-5) == doctest::Approx(1.874263e-4).epsilon(1e-10 / 1.874263e-4));
    CHECK_THROWS_AS(combined_breach_probability(-0.1, 0.2), DomainError);
    CHECK_THROWS_AS(combined_breach_probability(0.1, 1.2), DomainError);
}

TEST_CASE("breach composition properties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double a = u(rng), b = u(rng);
        const double ab = combined_breach_probability(a, b);
        CHECK(ab == combined_breach_probability(b, a));
        CHECK(ab == doctest::Approx(a + b - a * b).epsilon(1e-15));
        CHECK(ab >= std::max(a, b) - 1e-16);
        CHECK(ab <= 1.0);
        CHECK(combined_breach_probability(std::min(1.0, a + 0.01), b) >= ab);
    }

    // nondecreasing in l; below l_N a larger theta means a smaller probability
    const BreachProfile lo{1e-4, 1e-3, 0.2, 1000.0};
    BreachProfile hi = lo;
    hi.theta = 0.7;
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
        const double l = 10.0 * i;
        const double p = customer_breach_probability(lo, l);
        CHECK(p >= prev);
        prev = p;
        if (i < 100) CHECK(customer_breach_probability(hi, l) < p);
    }
}

TEST_CASE("net surplus uses the composed breach probability") {
    const Scenario s = test::table2();
    const double l = 3797.0;
    const double pi = combined_breach_probability(s.pi_s, customer_breach_probability(BreachProfile::from(s), l));
    const double gap = 1 - s.price / s.p_star;
    const double consumption = 0.5 * s.p_star * s.q_star * (1 + marginal_demand_factor(s, l)) * gap * gap;
    CHECK(net_surplus(s, l) == doctest::Approx(consumption - pi * l).epsilon(1e-14));
}
