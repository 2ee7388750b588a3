#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "privtrade/bisection.hpp"
#include "privtrade/error.hpp"
#include "privtrade/sampling.hpp"
#include "privtrade/solver.hpp"
#include "support.hpp"

using namespace privtrade;
using privtrade::test::table1;
using privtrade::test::table2;

namespace {

// Dense brute-force oracle independent of the library: long double surplus on a grid.
double brute_force_argmax(const Scenario& s, std::size_t n) {
    long double best = test::reference_surplus(s, 0.0L);
    double best_l = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const long double l = static_cast<long double>(s.l_n) * i / (n - 1);
        const long double v = test::reference_surplus(s, l);
        if (v > best) {
            best = v;
            best_l = static_cast<double>(l);
        }
    }
    return best_l;
}

Scenario subcase_a_interior() {
    return {1000.0, 10.0, 0.0, 1.05, 0.2, 1.0, 10000.0, 1e-4, 0.5};
}

}  // namespace

TEST_CASE("bisection") {
    const auto r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(r.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(r.iterations <= 200);
    // geometric splitting handles brackets over hundreds of decades
    const auto wide = bisect([](double x) { return std::log(x) - 1.0; }, 1e-300, 1e300);
    CHECK(wide.root == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
    CHECK_THROWS_AS(bisect([](double x) { return x + 1.0; }, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(bisect([](double x) { return x - 0.3; }, 0.0, 1.0, {0.0, 0.0, 5}), NumericFailure);
}

TEST_CASE("decision coefficients") {
    const auto c = decision_coefficients(table2());
    // mpmath, 40 digits
    CHECK(c.a == doctest::Approx(0.24165873303007451).epsilon(1e-13));
    CHECK(c.b == doctest::Approx(3.1751019494325174e-5).epsilon(1e-13));
    // rounded values quoted for the reference case
    CHECK(c.a == doctest::Approx(0.241654).epsilon(1e-4));
    CHECK(c.b == doctest::Approx(3.17490e-5).epsilon(1e-4));
    // residual of the decision equation at the optimum
    CHECK(std::abs(decision_gradient(table2(), c, 3796.9183008242571)) < 1e-12);

    Scenario free = table2();
    free.price = 0.0;
    CHECK(decision_coefficients(free).a == doctest::Approx(4.0 * c.a));

    Scenario certain = table2();
    certain.pi_s = 1.0;  // outside the legal range, only the algebra is under test
    CHECK(decision_coefficients(certain).b == 0.0);

    Scenario degenerate = table2();
    degenerate.price = 1.0;
    CHECK_THROWS_AS(decision_coefficients(degenerate), DegenerateScenario);
}

TEST_CASE("regime classification") {
    Scenario s = table2();
    CHECK(classify_regime(s) == Regime::NuLt1);
    s.nu = 1.05;
    s.theta = 0.2;
    CHECK(classify_regime(s) == Regime::SubcaseA);
    s.nu = 1.5;
    CHECK(classify_regime(s) == Regime::SubcaseB);
    s.nu = 1.0;
    CHECK(classify_regime(s) == Regime::NuEq1);
    s.nu = 1.0 + 5e-13;
    CHECK(classify_regime(s) == Regime::NuEq1);
    s.nu = 1.2;
    CHECK(classify_regime(s) == Regime::NuEq1PlusTheta);
}

TEST_CASE("feasibility report") {
    const auto rep = feasibility_report(table2());
    CHECK(rep.regime == Regime::NuLt1);
    CHECK(rep.guaranteed_unique);
    CHECK(rep.conditions.empty());

    Scenario s = table2();
    s.nu = 1.0;
    auto band = feasibility_report(s);
    REQUIRE(band.conditions.size() == 2);
    CHECK(band.conditions[0].bound == doctest::Approx(29225.640214937473).epsilon(1e-12));
    CHECK(band.conditions[1].bound == doctest::Approx(62500.0));
    CHECK_FALSE(band.conditions[0].satisfied);
    CHECK_FALSE(band.guaranteed_unique);

    s.l_n = 5e4;
    band = feasibility_report(s);
    CHECK(band.conditions[0].satisfied);
    CHECK(band.conditions[1].satisfied);
    CHECK(band.guaranteed_unique);

    s = table2();
    s.nu = 1.1;
    s.theta = 0.5;
    const auto suff = feasibility_report(s);
    REQUIRE(suff.conditions.size() == 1);
    CHECK(suff.sufficient_only);
}

TEST_CASE("bracket construction") {
    const Scenario s = table2();
    const Bracket b = construct_bracket(s);
    CHECK(b.upper == doctest::Approx(7611.0542867219088).epsilon(1e-12));
    CHECK(b.upper == doctest::Approx(7611.4).epsilon(1e-4));
    CHECK(b.lower > 0.0);
    CHECK(b.lower < 3797.0);
    CHECK(3797.0 < b.upper);
    const auto c = decision_coefficients(s);
    CHECK(decision_gradient(s, c, b.lower) > 0.0);
    CHECK(decision_gradient(s, c, b.upper) < 0.0);

    Scenario wrong = s;
    wrong.nu = 1.5;
    CHECK_THROWS_AS(construct_bracket(wrong), UsageError);

    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const Scenario r = random_scenario(rng, Regime::NuLt1);
        const Bracket rb = construct_bracket(r);
        const auto rc = decision_coefficients(r);
        CHECK(rb.lower > 0.0);
        CHECK(rb.lower < rb.upper);
        CHECK(decision_gradient(r, rc, rb.lower) > 0.0);
        CHECK(decision_gradient(r, rc, rb.upper) <= 0.0);
    }
}

TEST_CASE("golden optimum of the reference scenario") {
    const auto sol = solve_tradeoff(table2());
    CHECK(sol.status == SolutionStatus::Interior);
    CHECK(sol.regime == Regime::NuLt1);
    CHECK(sol.l_opt == doctest::Approx(3797.0).epsilon(1.0 / 3797.0));
    // mpmath root of the surplus derivative
    CHECK(sol.l_opt == doctest::Approx(3796.9183008242571).epsilon(1e-9));
    CHECK(sol.gradient_residual < 1e-6);
    CHECK(sol.surplus == doctest::Approx(36.003093660465448).epsilon(1e-12));
    CHECK(sol.surplus == net_surplus(table2(), sol.l_opt));
    REQUIRE(sol.bracket.has_value());
    CHECK(sol.critical_points.size() == 1);
}

TEST_CASE("saturated and degenerate solutions") {
    const auto clamped = solve_tradeoff(table1(10000.0, 0.2));
    CHECK(clamped.status == SolutionStatus::ClampedAtLn);
    CHECK(clamped.l_opt == 10000.0);
    CHECK(clamped.critical_points.front() > 10000.0);

    Scenario at_wtp = table2();
    at_wtp.price = at_wtp.p_star;
    const auto zero = solve_tradeoff(at_wtp);
    CHECK(zero.status == SolutionStatus::AtZero);
    CHECK(zero.l_opt == 0.0);
    CHECK(zero.surplus == 0.0);

    Scenario invalid = table2();
    invalid.theta = 0.0;
    CHECK_THROWS_AS(solve_tradeoff(invalid), ValidationError);
}

TEST_CASE("nu = 1 closed form and theorem band") {
    Scenario s = table2();
    s.nu = 1.0;
    s.l_n = 5e4;
    const auto inside = solve_tradeoff(s);
    CHECK(inside.status == SolutionStatus::Interior);
    CHECK(inside.l_opt == doctest::Approx(0.89161776826227373).epsilon(1e-10));

    s.l_n = 1e4;  // below the band: root beyond l_N
    CHECK(solve_tradeoff(s).status == SolutionStatus::ClampedAtLn);
    s.l_n = 7e4;  // above the band: A <= pi_s
    CHECK(solve_tradeoff(s).status == SolutionStatus::AtZero);
}

TEST_CASE("subcase (a) with two critical points") {
    const Scenario s = subcase_a_interior();
    REQUIRE(classify_regime(s) == Regime::SubcaseA);
    const auto sol = solve_tradeoff(s);
    CHECK(sol.critical_points.size() == 2);
    CHECK(sol.critical_points[0] < sol.critical_points[1]);
    CHECK(sol.status == SolutionStatus::Interior);
    CHECK(std::abs(sol.l_opt - brute_force_argmax(s, 200001)) <= 2.0 * s.l_n / 200000);

    // peak below zero: surplus decreasing, nothing released
    Scenario flat = s;
    flat.alpha_n = 1e-6;
    const auto none = solve_tradeoff(flat);
    CHECK(none.status == SolutionStatus::AtZero);
    CHECK(none.critical_points.empty());
}

TEST_CASE("subcase (b) picks the better endpoint") {
    Scenario s = subcase_a_interior();
    s.nu = 1.8;
    REQUIRE(classify_regime(s) == Regime::SubcaseB);
    const auto sol = solve_tradeoff(s);
    CHECK(sol.status != SolutionStatus::Interior);
    CHECK(sol.l_opt == brute_force_argmax(s, 100001));
}

TEST_CASE("discrete choice") {
    const Scenario s = table2();
    const std::vector<double> levels{1000.0, 3797.0, 8000.0};
    auto pick = solve_discrete(s, levels);
    REQUIRE(pick.index.has_value());
    CHECK(*pick.index == 1);
    CHECK(pick.surplus == net_surplus(s, 3797.0));

    const std::vector<double> late{9000.0, 9500.0};
    pick = solve_discrete(s, late);
    REQUIRE(pick.index.has_value());
    CHECK(*pick.index == 0);

    Scenario at_wtp = s;
    at_wtp.price = 1.0;
    pick = solve_discrete(at_wtp, levels);
    CHECK_FALSE(pick.index.has_value());
    CHECK(pick.l == 0.0);

    const std::vector<double> unordered{3000.0, 2000.0};
    CHECK_THROWS_AS(solve_discrete(s, unordered), ValidationError);
    const std::vector<double> too_big{20000.0};
    CHECK_THROWS_AS(solve_discrete(s, too_big), ValidationError);
}

TEST_CASE("grid oracle") {
    CHECK(std::abs(oracle_grid_argmax(table2(), 1'000'001) - 3797.0) <= 1.0);
    CHECK(std::abs(oracle_grid_argmax(table2(), 1'000'001) - 3796.9183008242571) <= 0.01);
    Scenario at_wtp = table2();
    at_wtp.price = 1.0;
    CHECK(oracle_grid_argmax(at_wtp, 1000) == 0.0);
    CHECK(oracle_grid_argmax(table1(5000.0, 0.2), 1'000'000) == 5000.0);
    CHECK_THROWS_AS(oracle_grid_argmax(table2(), 1), DomainError);
}

TEST_CASE("solver agrees with an independent brute force across regimes") {
    std::mt19937_64 rng(20240601);
    constexpr std::size_t n = 100'001;
    for (std::size_t t = 0; t < 60; ++t) {
        const Scenario s = random_scenario(rng, t);
        CAPTURE(t);
        CAPTURE(s.nu);
        const auto sol = solve_tradeoff(s);
        CHECK(std::abs(sol.l_opt - brute_force_argmax(s, n)) <= 2.0 * s.l_n / (n - 1));
        CHECK(sol.surplus == net_surplus(s, sol.l_opt));
        if (sol.status == SolutionStatus::Interior) {
            CHECK(sol.l_opt > 0.0);
            CHECK(sol.l_opt < s.l_n);
            CHECK(sol.gradient_residual < 1e-6);
        }
    }
}

TEST_CASE("nu < 1 structural properties") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        const Scenario s = random_scenario(rng, Regime::NuLt1);
        const auto c = decision_coefficients(s);
        // gradient strictly decreasing
        double prev = decision_gradient(s, c, s.l_n * 1e-6);
        for (int i = 1; i <= 200; ++i) {
            const double g = decision_gradient(s, c, s.l_n * (1e-6 + i / 100.0));
            CHECK(g < prev);
            prev = g;
        }
        // clamp consistency
        const auto sol = solve_tradeoff(s);
        const bool rising_at_cap = surplus_gradient(s, s.l_n) >= 0.0;
        CHECK((sol.status == SolutionStatus::ClampedAtLn) == rising_at_cap);

        // l*(p) non-increasing over a 50-point price grid
        double last = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 50; ++i) {
            Scenario at = s;
            at.price = s.p_star * 0.98 * i / 49.0;
            const double l = solve_tradeoff(at).l_opt;
            CHECK(l <= last * (1 + 1e-9) + 1e-8);  // root tolerance
            last = l;
        }
    }
}
