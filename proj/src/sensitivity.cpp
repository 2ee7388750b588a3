#include "privtrade/sensitivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "privtrade/error.hpp"
#include "privtrade/secure.hpp"

namespace privtrade {

namespace {

constexpr std::array<std::pair<Factor, std::string_view>, 8> kFactorNames{{
    {Factor::QStar, "q_star"},
    {Factor::PStar, "p_star"},
    {Factor::Price, "price"},
    {Factor::LN, "l_n"},
    {Factor::Nu, "nu"},
    {Factor::Theta, "theta"},
    {Factor::PiS, "pi_s"},
    {Factor::PiCStar, "pi_c_star"},
}};

Scenario perturbed(const Scenario& base, Factor f, double value) {
    Scenario s = with_factor(base, f, value);
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw DomainError(std::string("perturbation leaves the legal range: ") + e.what());
    }
    if (s.price >= s.p_star) {
        throw DomainError("perturbation pushes the price to or above p*");
    }
    return s;
}

TradeoffSolution base_solution(const Scenario& s) {
    auto sol = solve_tradeoff(s);
    if (sol.status == SolutionStatus::AtZero || !(sol.l_opt > 0.0)) {
        throw DomainError("sensitivity: base optimum is 0, relative change undefined");
    }
    return sol;
}

void check_grid(const Scenario& s, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("sweep: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0 && grid[i] < s.p_star)) {
            throw DomainError("sweep: grid prices must lie in [0, p*)");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw DomainError("sweep: grid must be strictly increasing");
        }
    }
}

}  // namespace

std::string_view to_string(Factor f) {
    for (const auto& [factor, name] : kFactorNames) {
        if (factor == f) return name;
    }
    return "?";
}

std::string_view to_string(SensitivityKind k) {
    return k == SensitivityKind::Elasticity ? "ELASTICITY" : "QUASI_ELASTICITY";
}

Factor factor_from_string(std::string_view name) {
    for (const auto& [factor, n] : kFactorNames) {
        if (n == name) return factor;
    }
    throw DomainError("unknown factor '" + std::string(name) + "'");
}

SensitivityKind kind_from_string(std::string_view name) {
    if (name == "ELASTICITY") return SensitivityKind::Elasticity;
    if (name == "QUASI_ELASTICITY") return SensitivityKind::QuasiElasticity;
    throw DomainError("unknown sensitivity kind '" + std::string(name) + "'");
}

bool is_dimensional(Factor f) {
    return f == Factor::QStar || f == Factor::PStar || f == Factor::Price || f == Factor::LN;
}

double factor_value(const Scenario& s, Factor f) {
    switch (f) {
        case Factor::QStar: return s.q_star;
        case Factor::PStar: return s.p_star;
        case Factor::Price: return s.price;
        case Factor::LN: return s.l_n;
        case Factor::Nu: return s.nu;
        case Factor::Theta: return s.theta;
        case Factor::PiS: return s.pi_s;
        case Factor::PiCStar: return s.pi_c_star;
    }
    return 0.0;
}

Scenario with_factor(Scenario s, Factor f, double value) {
    switch (f) {
        case Factor::QStar: s.q_star = value; break;
        case Factor::PStar: s.p_star = value; break;
        case Factor::Price: s.price = value; break;
        case Factor::LN: s.l_n = value; break;
        case Factor::Nu: s.nu = value; break;
        case Factor::Theta: s.theta = value; break;
        case Factor::PiS: s.pi_s = value; break;
        case Factor::PiCStar: s.pi_c_star = value; break;
    }
    return s;
}

SensitivityEntry discrete_elasticity(const Scenario& s, Factor f, double rel_delta) {
    if (!is_dimensional(f)) {
        throw DomainError("discrete_elasticity: " + std::string(to_string(f)) + " is dimensionless");
    }
    if (rel_delta == 0.0 || !std::isfinite(rel_delta)) {
        throw DomainError("discrete_elasticity: relative change must be finite and nonzero");
    }
    const double x = factor_value(s, f);
    if (x == 0.0) throw DomainError("discrete_elasticity: factor is 0, relative change undefined");
    const auto base = base_solution(s);
    const auto moved = solve_tradeoff(perturbed(s, f, x * (1.0 + rel_delta)));

    SensitivityEntry e;
    e.factor = f;
    e.delta = rel_delta;
    e.kind = SensitivityKind::Elasticity;
    e.base_l_opt = base.l_opt;
    e.perturbed_l_opt = moved.l_opt;
    e.value = ((moved.l_opt - base.l_opt) / base.l_opt) / rel_delta;
    e.status_changed = moved.status != base.status;
    return e;
}

SensitivityEntry discrete_quasi_elasticity(const Scenario& s, Factor f, double new_value) {
    if (is_dimensional(f)) {
        throw DomainError("discrete_quasi_elasticity: " + std::string(to_string(f)) +
                          " carries units, use discrete_elasticity");
    }
    const double delta = new_value - factor_value(s, f);
    if (delta == 0.0 || !std::isfinite(delta)) {
        throw DomainError("discrete_quasi_elasticity: new value must differ from the base");
    }
    const auto base = base_solution(s);
    const auto moved = solve_tradeoff(perturbed(s, f, new_value));

    SensitivityEntry e;
    e.factor = f;
    e.delta = delta;
    e.kind = SensitivityKind::QuasiElasticity;
    e.base_l_opt = base.l_opt;
    e.perturbed_l_opt = moved.l_opt;
    e.value = ((moved.l_opt - base.l_opt) / base.l_opt) / delta;
    e.status_changed = moved.status != base.status;
    return e;
}

double TornadoRow::magnitude() const {
    return std::max(std::abs(lower.value), std::abs(upper.value));
}

std::vector<TornadoRow> tornado(const Scenario& s, std::span<const TornadoItem> plan) {
    std::vector<TornadoRow> rows;
    rows.reserve(plan.size());
    for (const auto& item : plan) {
        if (is_dimensional(item.factor)) {
            rows.push_back({discrete_elasticity(s, item.factor, item.lower),
                            discrete_elasticity(s, item.factor, item.upper)});
        } else {
            rows.push_back({discrete_quasi_elasticity(s, item.factor, item.lower),
                            discrete_quasi_elasticity(s, item.factor, item.upper)});
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const TornadoRow& a, const TornadoRow& b) {
        return a.magnitude() > b.magnitude();
    });
    return rows;
}

std::vector<TornadoItem> default_dimensional_plan(double rel_delta) {
    return {{Factor::QStar, -rel_delta, rel_delta},
            {Factor::PStar, -rel_delta, rel_delta},
            {Factor::Price, -rel_delta, rel_delta},
            {Factor::LN, -rel_delta, rel_delta}};
}

std::vector<double> default_price_grid(const Scenario& s, std::size_t points, double fraction) {
    if (points < 2) throw DomainError("default_price_grid: need at least two points");
    std::vector<double> grid(points);
    const double top = fraction * s.p_star;
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = top * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return grid;
}

SweepSeries price_sweep(const Scenario& s, std::span<const double> grid) {
    s.validate();
    check_grid(s, grid);
    SweepSeries out;
    out.factor = Factor::Price;
    out.grid.assign(grid.begin(), grid.end());
    out.l_opt.reserve(grid.size());
    out.revenue.reserve(grid.size());
    out.status.reserve(grid.size());
    for (double p : grid) {
        const Scenario at = with_factor(s, Factor::Price, p);
        const auto sol = solve_tradeoff(at);
        out.l_opt.push_back(sol.l_opt);
        out.status.push_back(sol.status);
        out.revenue.push_back(p * demand_quantity(at, marginal_demand_factor(at, sol.l_opt), p));
    }
    if (classify_regime(s) == Regime::NuLt1) {
        const double p_sat = saturation_price(s);
        if (p_sat > 0.0) out.saturation_price = p_sat;
    }
    return out;
}

SweepSeries revenue_sweep(const Scenario& s, std::span<const double> grid) {
    SweepSeries out = price_sweep(s, grid);
    const auto it = std::max_element(out.revenue.begin(), out.revenue.end());
    out.revenue_argmax = out.grid[static_cast<std::size_t>(it - out.revenue.begin())];
    return out;
}

SweepSeries olr_sweep(const Scenario& s, std::span<const double> grid) {
    s.validate();
    if (!(s.pi_s > 0.0)) throw DomainError("olr_sweep: needs pi_s > 0");
    SweepSeries out = price_sweep(s, grid);
    std::vector<double> olr;
    olr.reserve(grid.size());
    std::optional<double> first_unsaturated;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Scenario at = with_factor(s, Factor::Price, grid[i]);
        const double secure = secure_feasible_loss(at);
        if (!(out.l_opt[i] > 0.0)) throw DomainError("olr_sweep: vulnerable optimum is 0");
        olr.push_back(secure / out.l_opt[i]);
        if (!first_unsaturated && secure < s.l_n) first_unsaturated = grid[i];
    }
    out.olr = std::move(olr);
    if (auto kink = secure_saturation_price(s)) {
        out.kink_price = *kink;
    } else if (first_unsaturated && *first_unsaturated > grid.front()) {
        out.kink_price = *first_unsaturated;
    }
    return out;
}

double saturation_price(const Scenario& s) {
    s.validate();
    if (classify_regime(s) != Regime::NuLt1) {
        throw UsageError("saturation_price: only defined for nu < 1");
    }
    const double marginal_risk = s.pi_s + (1.0 - s.pi_s) * s.pi_c_star * (1.0 + s.theta);
    const double term = marginal_risk * 2.0 * s.l_n / (s.alpha_n * s.q_star * s.p_star * s.nu);
    if (term >= 1.0) return 0.0;
    return std::clamp(s.p_star * (1.0 - std::sqrt(term)), 0.0, s.p_star);
}

}  // namespace privtrade
