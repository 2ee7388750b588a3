#include "privtrade/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "privtrade/sampling.hpp"

namespace privtrade {

namespace {

constexpr std::array<const char*, 10> kCommands{
    "solve",  "feasibility", "sweep-price", "sweep-revenue",  "sweep-olr",
    "tornado", "secure",     "pareto-nu",   "solve-discrete", "oracle-check"};

struct Loaded {
    ScenarioFile file;
    std::string digest;
};

Loaded load(const CommandOptions& opts) {
    if (!opts.scenario_path) throw UsageError(opts.command + ": missing scenario file");
    std::ifstream in(*opts.scenario_path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file " + opts.scenario_path->string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    return {parse_scenario(text), sha256_hex(text)};
}

std::vector<double> grid_for(const CommandOptions& opts, const ScenarioFile& file) {
    SweepSpec spec = file.sweep.value_or(SweepSpec{0.0, 0.99 * file.scenario.p_star, 201});
    if (opts.pmin) spec.pmin = *opts.pmin;
    if (opts.pmax) spec.pmax = *opts.pmax;
    if (opts.points) spec.points = *opts.points;
    if (!(spec.pmin >= 0.0 && spec.pmin < spec.pmax && spec.pmax < file.scenario.p_star)) {
        throw DomainError("sweep: need 0 <= pmin < pmax < p_star");
    }
    return sweep_grid(file.scenario, spec);
}

void print_solution(std::ostream& out, const TradeoffSolution& sol) {
    fmt::print(out, "regime   : {}\n", to_string(sol.regime));
    fmt::print(out, "status   : {}\n", to_string(sol.status));
    fmt::print(out, "l*       : {:.6f} (rounded {:.0f})\n", sol.l_opt, sol.l_opt);
    fmt::print(out, "surplus  : {:.6f}\n", sol.surplus);
    if (sol.status == SolutionStatus::Interior) {
        fmt::print(out, "residual : {:.3e} (normalized gradient)\n", sol.gradient_residual);
    }
    for (double c : sol.critical_points) fmt::print(out, "critical : {:.6f}\n", c);
    if (sol.bracket) {
        fmt::print(out, "bracket  : [{:.6f}, {:.6f}]\n", sol.bracket->lower, sol.bracket->upper);
    }
}

void print_feasibility(std::ostream& out, const FeasibilityReport& rep) {
    fmt::print(out, "regime            : {}\n", to_string(rep.regime));
    fmt::print(out, "guaranteed unique : {}{}\n", rep.guaranteed_unique ? "yes" : "no",
               rep.sufficient_only ? " (sufficient condition only)" : "");
    for (const auto& c : rep.conditions) {
        fmt::print(out, "  {:<28} bound {:.6g}  {}\n", c.name, c.bound,
                   c.satisfied ? "satisfied" : "violated");
    }
}

void print_sweep(std::ostream& out, const SweepSeries& s) {
    fmt::print(out, "{:>12} {:>14} {:>12} {:>10}  {}\n", "price", "l_opt", "revenue",
               s.olr ? "olr" : "", "status");
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        fmt::print(out, "{:>12.6f} {:>14.4f} {:>12.4f} {:>10}  {}\n", s.grid[i], s.l_opt[i],
                   s.revenue[i], s.olr ? fmt::format("{:.4f}", (*s.olr)[i]) : std::string(),
                   to_string(s.status[i]));
    }
    if (s.saturation_price) fmt::print(out, "saturation price : {:.6f}\n", *s.saturation_price);
    if (s.revenue_argmax) fmt::print(out, "revenue argmax   : {:.6f}\n", *s.revenue_argmax);
    if (s.kink_price) fmt::print(out, "olr kink price   : {:.6f}\n", *s.kink_price);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

OracleCheck oracle_check(const Scenario& s, const CommandOptions& opts, std::ostream& out) {
    OracleCheck chk;
    chk.grid_points = opts.grid;
    chk.solver_l = solve_tradeoff(s).l_opt;
    chk.oracle_l = oracle_grid_argmax(s, opts.grid);
    chk.tolerance = 2.0 * s.l_n / static_cast<double>(opts.grid);
    chk.agree = std::abs(chk.solver_l - chk.oracle_l) <= chk.tolerance;
    fmt::print(out, "solver l* : {:.6f}\noracle l* : {:.6f} ({} points)\n|diff|    : {:.3e} (tol {:.3e})\n",
               chk.solver_l, chk.oracle_l, opts.grid, std::abs(chk.solver_l - chk.oracle_l),
               chk.tolerance);
    if (opts.seed) {
        std::mt19937_64 rng(*opts.seed);
        chk.random_trials = opts.trials;
        for (std::size_t t = 0; t < opts.trials; ++t) {
            const Scenario r = random_scenario(rng, t);
            const double diff = std::abs(solve_tradeoff(r).l_opt - oracle_grid_argmax(r, opts.grid));
            if (diff > 2.0 * r.l_n / static_cast<double>(opts.grid)) ++chk.random_failures;
        }
        fmt::print(out, "random    : {} trials, {} disagreements (seed {})\n", chk.random_trials,
                   chk.random_failures, *opts.seed);
        chk.agree = chk.agree && chk.random_failures == 0;
    }
    fmt::print(out, "agreement : {}\n", chk.agree ? "yes" : "NO");
    return chk;
}

}  // namespace

bool is_known_command(const std::string& command) {
    return std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end();
}

ReportBundle run_command(const CommandOptions& opts, std::ostream& out) {
    if (!is_known_command(opts.command)) throw UsageError("unknown command '" + opts.command + "'");
    ReportBundle b;
    b.command = opts.command;
    b.metadata.tool_version = kToolVersion;
    if (opts.timestamp) b.metadata.timestamp = utc_timestamp();

    if (opts.command == "pareto-nu") {
        if (!opts.benefit || !opts.loss) throw UsageError("pareto-nu needs --benefit and --loss");
        b.pareto_nu = pareto_privacy_parameter(*opts.benefit, *opts.loss);
        fmt::print(out, "nu = {:.6f}\n", *b.pareto_nu);
        return b;
    }

    const auto [file, digest] = load(opts);
    const Scenario& s = file.scenario;
    b.metadata.input_digest = digest;
    b.scenario = s;

    const std::string& cmd = opts.command;
    if (cmd == "solve" || cmd == "feasibility") {
        b.solution = solve_tradeoff(s);
        b.feasibility = feasibility_report(s);
        if (cmd == "solve") {
            print_solution(out, *b.solution);
        } else {
            print_feasibility(out, *b.feasibility);
        }
    } else if (cmd == "sweep-price" || cmd == "sweep-revenue" || cmd == "sweep-olr") {
        const auto grid = grid_for(opts, file);
        if (cmd == "sweep-price") {
            b.sweep = price_sweep(s, grid);
        } else if (cmd == "sweep-revenue") {
            b.sweep = revenue_sweep(s, grid);
        } else {
            b.sweep = olr_sweep(s, grid);
        }
        print_sweep(out, *b.sweep);
    } else if (cmd == "tornado") {
        const auto plan = file.tornado.value_or(default_dimensional_plan());
        b.tornado = tornado(s, plan);
        fmt::print(out, "{:<10} {:<16} {:>12} {:>12} {:>12} {:>12}\n", "factor", "kind", "delta-",
                   "value-", "delta+", "value+");
        for (const auto& r : *b.tornado) {
            fmt::print(out, "{:<10} {:<16} {:>12.6g} {:>12.6g} {:>12.6g} {:>12.6g}{}\n",
                       to_string(r.lower.factor), to_string(r.lower.kind), r.lower.delta,
                       r.lower.value, r.upper.delta, r.upper.value,
                       (r.lower.status_changed || r.upper.status_changed) ? "  (status changed)" : "");
        }
    } else if (cmd == "secure") {
        SecureSummary sec;
        sec.closed_form = secure_optimal_loss(s);
        sec.feasible_loss = secure_feasible_loss(s);
        if (s.pi_s > 0.0 && solve_tradeoff(s).l_opt > 0.0) sec.olr = optimal_loss_ratio(s);
        if (sec.closed_form && s.price < s.p_star) {
            sec.elasticities = secure_elasticities(s);
            sec.quasi_elasticities = secure_quasi_elasticities(s);
        }
        sec.saturation_price = secure_saturation_price(s);
        if (sec.closed_form) {
            fmt::print(out, "closed form l* : {:.6f} (clamped {:.6f})\n", sec.closed_form->raw,
                       sec.closed_form->clamped);
        } else {
            fmt::print(out, "closed form l* : not applicable (nu >= 1 + theta)\n");
        }
        fmt::print(out, "feasible l*    : {:.6f}\n", sec.feasible_loss);
        if (sec.olr) fmt::print(out, "OLR            : {:.6f}\n", *sec.olr);
        if (sec.elasticities) {
            const auto& e = *sec.elasticities;
            fmt::print(out, "eps q*={:.6g} p*={:.6g} l_N={:.6g} p={:.6g}\n", e.eps_q_star,
                       e.eps_p_star, e.eps_l_n, e.eps_price);
        }
        if (sec.quasi_elasticities) {
            const auto& q = *sec.quasi_elasticities;
            fmt::print(out, "quasi nu={:.6g} theta={:.6g} pi_c*={:.6g}\n", q.qeps_nu, q.qeps_theta,
                       q.qeps_pi_c_star);
        }
        if (sec.saturation_price) fmt::print(out, "saturation price : {:.6f}\n", *sec.saturation_price);
        b.secure = sec;
    } else if (cmd == "solve-discrete") {
        const auto losses = opts.losses ? *opts.losses : file.losses.value_or(std::vector<double>{});
        if (losses.empty()) throw UsageError("solve-discrete needs --losses or a 'losses' block");
        b.discrete = solve_discrete(s, losses);
        if (b.discrete->index) {
            fmt::print(out, "choice  : level #{} (l = {:.6f})\n", *b.discrete->index, b.discrete->l);
        } else {
            fmt::print(out, "choice  : release nothing (l = 0)\n");
        }
        fmt::print(out, "surplus : {:.6f}\n", b.discrete->surplus);
    } else if (cmd == "oracle-check") {
        if (opts.grid < 2) throw UsageError("--grid must be >= 2");
        b.oracle = oracle_check(s, opts, out);
    }
    return b;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal personal-data disclosure under data-breach risk", "privtrade"};
    CommandOptions opts;
    std::string scenario;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    double pmin = 0, pmax = 0, benefit = 0, loss = 0;
    std::size_t points = 0;
    std::vector<double> losses;
    bool no_timestamp = false;

    app.add_option("command", opts.command, "one of: solve feasibility sweep-price sweep-revenue "
                                            "sweep-olr tornado secure pareto-nu solve-discrete "
                                            "oracle-check")
        ->required();
    app.add_option("scenario", scenario, "scenario JSON file");
    auto* out_opt = app.add_option("--out", out_path, "write machine-readable report here");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--grid", opts.grid, "oracle grid points");
    auto* pmin_opt = app.add_option("--pmin", pmin, "lowest sweep price");
    auto* pmax_opt = app.add_option("--pmax", pmax, "highest sweep price");
    auto* points_opt = app.add_option("--points", points, "sweep grid points");
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized oracle trials");
    app.add_option("--trials", opts.trials, "randomized oracle trials (with --seed)");
    app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp from reports");
    auto* benefit_opt = app.add_option("--benefit", benefit, "pareto-nu: benefit fraction");
    auto* loss_opt = app.add_option("--loss", loss, "pareto-nu: loss fraction");
    auto* losses_opt = app.add_option("--losses", losses, "solve-discrete: loss levels")
                           ->delimiter(',');

    std::vector<const char*> argv{"privtrade"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }
    if (!is_known_command(opts.command)) {
        err << "error: unknown command '" << opts.command << "'\n" << app.help();
        return kExitUsage;
    }
    if (!scenario.empty()) opts.scenario_path = scenario;
    if (*out_opt) opts.out = out_path;
    opts.format = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    if (*pmin_opt) opts.pmin = pmin;
    if (*pmax_opt) opts.pmax = pmax;
    if (*points_opt) opts.points = points;
    if (*seed_opt) opts.seed = seed;
    if (*benefit_opt) opts.benefit = benefit;
    if (*loss_opt) opts.loss = loss;
    if (*losses_opt) opts.losses = losses;
    opts.timestamp = !no_timestamp;

    try {
        const ReportBundle bundle = run_command(opts, out);
        if (opts.out) write_report(bundle, opts.format, *opts.out);
        if (bundle.oracle && !bundle.oracle->agree) return kExitNumeric;
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        err << "validation error in '" << e.field() << "': " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace privtrade
