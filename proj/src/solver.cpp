#include "privtrade/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "privtrade/bisection.hpp"
#include "privtrade/error.hpp"

namespace privtrade {

namespace {

constexpr double kRegimeTol = 1e-12;
constexpr int kMaxExpansions = 4000;

// Decision equation in the scaled variable x = l / l_N:
//   g(x) = benefit * x^(nu-1) - pi_s - risk * x^theta
struct ScaledGradient {
    double benefit = 0.0;  // (q* p* nu / 2)(alpha_N / l_N)(1 - p/p*)^2
    double risk = 0.0;     // (1 - pi_s) pi_c* (theta + 1)
    double pi_s = 0.0;
    double nu = 0.0;
    double theta = 0.0;
    double l_n = 1.0;

    static ScaledGradient from(const Scenario& s) {
        const double gap = s.price_gap();
        return {0.5 * s.q_star * s.p_star * s.nu * (s.alpha_n / s.l_n) * gap * gap,
                (1.0 - s.pi_s) * s.pi_c_star * (s.theta + 1.0), s.pi_s, s.nu, s.theta, s.l_n};
    }

    double benefit_term(double x) const { return benefit * std::exp((nu - 1.0) * std::log(x)); }
    double risk_term(double x) const { return risk * std::exp(theta * std::log(x)); }
    double operator()(double x) const { return benefit_term(x) - pi_s - risk_term(x); }

    double normalized(double x) const {
        const double b = benefit_term(x);
        const double r = risk_term(x);
        return std::abs(b - pi_s - r) / (b + pi_s + r);
    }

    // Where benefit * x^(nu-1) == risk * x^theta.
    double crossover() const { return std::pow(benefit / risk, 1.0 / (theta + 1.0 - nu)); }

    // Stationary point of g for nu != 1 + theta.
    double turning_point() const {
        return std::pow(benefit * (nu - 1.0) / (risk * theta), 1.0 / (1.0 + theta - nu));
    }
};

// Tolerances are in loss units; the bracket lives in x = l / l_N.
BisectionOptions root_options(double l_n) { return {1e-10, 1e-8 / l_n, 200}; }

double find_root(const ScaledGradient& g, double lo, double hi, int& iterations) {
    const auto r = bisect(std::cref(g), lo, hi, root_options(g.l_n));
    iterations += r.iterations;
    return r.root;
}

// Widen [lo, hi] geometrically until g(lo) >= 0 >= g(hi) for a decreasing g.
Bracket widen_decreasing(const ScaledGradient& g, double lo, double hi) {
    for (int i = 0; g(lo) < 0.0; ++i) {
        if (i == kMaxExpansions) throw NumericFailure("bracket: lower end not found");
        lo *= 0.5;
    }
    for (int i = 0; g(hi) > 0.0; ++i) {
        if (i == kMaxExpansions) throw NumericFailure("bracket: upper end not found");
        hi *= 2.0;
    }
    return {lo, hi};
}

// First maximum in ascending x order wins.
double best_candidate(const Scenario& s, std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double best_x = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        const double v = net_surplus(s, std::clamp(x, 0.0, 1.0) * s.l_n);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

void finish(const Scenario& s, const ScaledGradient& g, double x_opt, TradeoffSolution& out) {
    if (x_opt <= 0.0) {
        out.l_opt = 0.0;
        out.status = SolutionStatus::AtZero;
    } else if (x_opt >= 1.0) {
        out.l_opt = s.l_n;
        out.status = SolutionStatus::ClampedAtLn;
    } else {
        out.l_opt = x_opt * s.l_n;
        out.status = SolutionStatus::Interior;
        out.gradient_residual = g.normalized(x_opt);
    }
    out.surplus = net_surplus(s, out.l_opt);
}

void solve_nu_lt_1(const Scenario& s, const ScaledGradient& g, TradeoffSolution& out) {
    const Bracket b = construct_bracket(s);
    out.bracket = b;
    const double lo = b.lower / s.l_n;
    const double hi = b.upper / s.l_n;
    const double root = (lo >= hi) ? hi : find_root(g, lo, hi, out.iterations);
    out.critical_points = {root * s.l_n};
    if (g(1.0) >= 0.0) {
        finish(s, g, 1.0, out);
    } else {
        finish(s, g, std::min(root, 1.0), out);
    }
}

void solve_subcase_a(const Scenario& s, const ScaledGradient& g, TradeoffSolution& out) {
    const double peak = g.turning_point();
    std::vector<double> candidates{0.0, 1.0};
    if (g(peak) > 0.0) {
        double left = 0.0;
        if (g.pi_s > 0.0) {
            // benefit * x^(nu-1) < pi_s below this point, so g < 0 there.
            double lo = std::min(std::pow(g.pi_s / g.benefit, 1.0 / (g.nu - 1.0)), peak);
            for (int i = 0; g(lo) >= 0.0; ++i) {  // rounding near the cancellation point
                if (i == kMaxExpansions) throw NumericFailure("subcase a: left root not bracketed");
                lo *= 0.5;
            }
            left = find_root(g, lo, peak, out.iterations);
        }
        const double crossover = std::max(g.crossover(), peak);
        const double right = (g.pi_s == 0.0 || g(crossover) >= 0.0)
                                 ? crossover
                                 : find_root(g, peak, crossover, out.iterations);
        if (left > 0.0) out.critical_points.push_back(left * s.l_n);
        out.critical_points.push_back(right * s.l_n);
        out.bracket = Bracket{left * s.l_n, right * s.l_n};
        for (double x : {left, right}) {
            if (x > 0.0 && x < 1.0) candidates.push_back(x);
        }
        // without server risk g > 0 on (0, right), so zero cannot win even when the
        // surplus gain is below double resolution
        if (g.pi_s == 0.0) candidates.erase(candidates.begin());
    } else if (g(peak) == 0.0) {
        out.critical_points.push_back(peak * s.l_n);
    }
    finish(s, g, best_candidate(s, candidates), out);
}

void solve_subcase_b(const Scenario& s, const ScaledGradient& g, TradeoffSolution& out) {
    const double trough = g.turning_point();
    double root = 0.0;
    if (g.pi_s == 0.0) {
        root = g.crossover();
    } else {
        double hi = std::max(trough, g.crossover());
        for (int i = 0; g(hi) <= 0.0; ++i) {
            if (i == kMaxExpansions) throw NumericFailure("subcase b: no sign change");
            hi *= 2.0;
        }
        root = find_root(g, trough, hi, out.iterations);
    }
    out.critical_points.push_back(root * s.l_n);
    std::vector<double> candidates{0.0, 1.0};
    if (root < 1.0) candidates.push_back(root);
    finish(s, g, best_candidate(s, candidates), out);
}

void solve_boundary(const Scenario& s, const ScaledGradient& g, TradeoffSolution& out) {
    // g(x) ~ (benefit - risk) x^theta - pi_s
    std::vector<double> candidates{0.0, 1.0};
    const double lead = g.benefit - g.risk;
    if (lead > 0.0 && g.pi_s > 0.0) {
        const double x = std::pow(g.pi_s / lead, 1.0 / g.theta);
        out.critical_points.push_back(x * s.l_n);
        if (x < 1.0) candidates.push_back(x);
    }
    finish(s, g, best_candidate(s, candidates), out);
}

void solve_nu_eq_1(const Scenario& s, const ScaledGradient& g, TradeoffSolution& out) {
    if (g.benefit <= g.pi_s) {
        finish(s, g, 0.0, out);
        return;
    }
    const double x = std::pow((g.benefit - g.pi_s) / g.risk, 1.0 / g.theta);
    out.critical_points.push_back(x * s.l_n);
    finish(s, g, std::min(x, 1.0), out);
}

}  // namespace

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::NuLt1: return "NU_LT_1";
        case Regime::SubcaseA: return "SUBCASE_A";
        case Regime::SubcaseB: return "SUBCASE_B";
        case Regime::NuEq1: return "NU_EQ_1";
        case Regime::NuEq1PlusTheta: return "NU_EQ_1_PLUS_THETA";
    }
    return "?";
}

std::string_view to_string(SolutionStatus st) {
    switch (st) {
        case SolutionStatus::Interior: return "INTERIOR";
        case SolutionStatus::ClampedAtLn: return "CLAMPED_AT_LN";
        case SolutionStatus::AtZero: return "AT_ZERO";
        case SolutionStatus::NoSolution: return "NO_SOLUTION";
    }
    return "?";
}

Regime regime_from_string(std::string_view name) {
    for (auto r : {Regime::NuLt1, Regime::SubcaseA, Regime::SubcaseB, Regime::NuEq1,
                   Regime::NuEq1PlusTheta}) {
        if (to_string(r) == name) return r;
    }
    throw DomainError("unknown regime '" + std::string(name) + "'");
}

SolutionStatus status_from_string(std::string_view name) {
    for (auto st : {SolutionStatus::Interior, SolutionStatus::ClampedAtLn, SolutionStatus::AtZero,
                    SolutionStatus::NoSolution}) {
        if (to_string(st) == name) return st;
    }
    throw DomainError("unknown status '" + std::string(name) + "'");
}

DecisionCoefficients decision_coefficients(const Scenario& s) {
    if (s.price >= s.p_star) {
        throw DegenerateScenario("decision_coefficients: price >= p*, demand is zero");
    }
    const double gap = 1.0 - s.price / s.p_star;
    return {0.5 * s.q_star * s.p_star * s.nu * (s.alpha_n / std::pow(s.l_n, s.nu)) * gap * gap,
            (1.0 - s.pi_s) * s.pi_c_star * (s.theta + 1.0) / std::pow(s.l_n, s.theta)};
}

Regime classify_regime(const Scenario& s) {
    if (std::abs(s.nu - 1.0) <= kRegimeTol) return Regime::NuEq1;
    if (std::abs(s.nu - (1.0 + s.theta)) <= kRegimeTol) return Regime::NuEq1PlusTheta;
    if (s.nu < 1.0) return Regime::NuLt1;
    return s.nu < 1.0 + s.theta ? Regime::SubcaseA : Regime::SubcaseB;
}

FeasibilityReport feasibility_report(const Scenario& s) {
    s.validate();
    FeasibilityReport rep;
    rep.regime = classify_regime(s);
    const double gap = s.price_gap();
    const double surplus_scale = 0.5 * s.q_star * s.p_star * gap * gap * s.alpha_n;
    const double marginal_risk = s.pi_s + (1.0 - s.pi_s) * s.pi_c_star * (1.0 + s.theta);

    switch (rep.regime) {
        case Regime::NuLt1:
            rep.guaranteed_unique = true;
            break;
        case Regime::NuEq1: {
            const double low = surplus_scale / marginal_risk;
            const double high = s.pi_s > 0.0 ? surplus_scale / s.pi_s
                                             : std::numeric_limits<double>::infinity();
            rep.conditions.push_back({"l_n_above_lower_band", low, s.l_n > low});
            rep.conditions.push_back({"l_n_below_upper_band", high, s.l_n < high});
            rep.guaranteed_unique = rep.conditions[0].satisfied && rep.conditions[1].satisfied;
            break;
        }
        case Regime::SubcaseA:
        case Regime::SubcaseB:
        case Regime::NuEq1PlusTheta: {
            const double bound = s.nu * surplus_scale / marginal_risk;
            rep.conditions.push_back({"l_n_below_sufficient_bound", bound, s.l_n < bound});
            rep.guaranteed_unique = rep.conditions[0].satisfied;
            rep.sufficient_only = true;
            break;
        }
    }
    return rep;
}

double decision_gradient(const Scenario& s, const DecisionCoefficients& c, double l) {
    if (!(l > 0.0)) throw DomainError("decision_gradient: loss must be > 0");
    return c.a * std::pow(l, s.nu - 1.0) - s.pi_s - c.b * std::pow(l, s.theta);
}

double normalized_gradient(const Scenario& s, const DecisionCoefficients& c, double l) {
    if (!(l > 0.0)) throw DomainError("normalized_gradient: loss must be > 0");
    const double benefit = c.a * std::pow(l, s.nu - 1.0);
    const double risk = c.b * std::pow(l, s.theta);
    return std::abs(benefit - s.pi_s - risk) / (benefit + s.pi_s + risk);
}

Bracket construct_bracket(const Scenario& s) {
    s.validate();
    if (classify_regime(s) != Regime::NuLt1) {
        throw UsageError("construct_bracket: only defined for nu < 1");
    }
    if (s.price >= s.p_star) {
        throw DegenerateScenario("construct_bracket: price >= p*, no positive gradient");
    }
    const auto g = ScaledGradient::from(s);
    const double upper = g.crossover();
    if (s.pi_s == 0.0) return {upper * s.l_n, upper * s.l_n};
    // benefit * lower^(nu-1) = benefit * upper^(nu-1) + pi_s
    const double lower =
        std::pow(std::pow(upper, s.nu - 1.0) + s.pi_s / g.benefit, 1.0 / (s.nu - 1.0));
    // Exact in real arithmetic; rounding can still leave an endpoint on the wrong side.
    const Bracket b = widen_decreasing(g, lower, upper);
    return {b.lower * s.l_n, b.upper * s.l_n};
}

TradeoffSolution solve_tradeoff(const Scenario& s) {
    s.validate();
    TradeoffSolution out;
    out.regime = classify_regime(s);
    const auto g = ScaledGradient::from(s);
    if (s.price >= s.p_star) {
        finish(s, g, 0.0, out);
        return out;
    }
    switch (out.regime) {
        case Regime::NuLt1: solve_nu_lt_1(s, g, out); break;
        case Regime::SubcaseA: solve_subcase_a(s, g, out); break;
        case Regime::SubcaseB: solve_subcase_b(s, g, out); break;
        case Regime::NuEq1: solve_nu_eq_1(s, g, out); break;
        case Regime::NuEq1PlusTheta: solve_boundary(s, g, out); break;
    }
    return out;
}

DiscreteChoice solve_discrete(const Scenario& s, std::span<const double> losses) {
    s.validate();
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (!(losses[i] > 0.0 && losses[i] <= s.l_n)) {
            throw ValidationError("losses", "every level must lie in (0, l_N]");
        }
        if (i > 0 && !(losses[i] > losses[i - 1])) {
            throw ValidationError("losses", "levels must be strictly increasing");
        }
    }
    DiscreteChoice best{std::nullopt, 0.0, net_surplus(s, 0.0)};
    for (std::size_t i = 0; i < losses.size(); ++i) {
        const double v = net_surplus(s, losses[i]);
        if (v > best.surplus) best = {i, losses[i], v};
    }
    return best;
}

double oracle_grid_argmax(const Scenario& s, std::size_t n) {
    s.validate();
    if (n < 2) throw DomainError("oracle_grid_argmax: need at least two grid points");
    const double step = s.l_n / static_cast<double>(n - 1);
    double best_l = 0.0;
    double best = net_surplus(s, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        const double l = (i + 1 == n) ? s.l_n : static_cast<double>(i) * step;
        const double v = net_surplus(s, l);
        if (v > best) {
            best = v;
            best_l = l;
        }
    }
    return best_l;
}

}  // namespace privtrade
