#include "privtrade/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace privtrade {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 9> kScenarioKeys{
    "q_star", "p_star", "price", "nu", "theta", "alpha_n", "l_n", "pi_s", "pi_c_star"};

double* scenario_field(Scenario& s, std::string_view key) {
    if (key == "q_star") return &s.q_star;
    if (key == "p_star") return &s.p_star;
    if (key == "price") return &s.price;
    if (key == "nu") return &s.nu;
    if (key == "theta") return &s.theta;
    if (key == "alpha_n") return &s.alpha_n;
    if (key == "l_n") return &s.l_n;
    if (key == "pi_s") return &s.pi_s;
    if (key == "pi_c_star") return &s.pi_c_star;
    return nullptr;
}

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field, "expected a number");
    return j.get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ValidationError(where + key, "unknown key");
    }
}

// Doubles survive the round trip exactly; non-finite values become strings.
json num(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

double num_from(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParseError("expected a number, got '" + s + "'");
}

json nums(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::vector<double> nums_from(const json& j) {
    std::vector<double> v;
    for (const auto& x : j) v.push_back(num_from(x));
    return v;
}

template <class T, class F>
void put_opt(json& j, const char* key, const std::optional<T>& v, F&& conv) {
    if (v) j[key] = conv(*v);
}

template <class T, class F>
std::optional<T> get_opt(const json& j, const char* key, F&& conv) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return conv(j.at(key));
}

json scenario_json(const Scenario& s) {
    json j;
    Scenario copy = s;
    for (const char* key : kScenarioKeys) j[key] = num(*scenario_field(copy, key));
    return j;
}

Scenario scenario_from(const json& j) {
    Scenario s;
    for (const char* key : kScenarioKeys) *scenario_field(s, key) = num_from(j.at(key));
    return s;
}

json solution_json(const TradeoffSolution& sol) {
    json j{{"l_opt", num(sol.l_opt)},
           {"status", to_string(sol.status)},
           {"surplus", num(sol.surplus)},
           {"critical_points", nums(sol.critical_points)},
           {"regime", to_string(sol.regime)},
           {"gradient_residual", num(sol.gradient_residual)},
           {"iterations", sol.iterations}};
    if (sol.bracket) j["bracket"] = {num(sol.bracket->lower), num(sol.bracket->upper)};
    return j;
}

TradeoffSolution solution_from(const json& j) {
    TradeoffSolution sol;
    sol.l_opt = num_from(j.at("l_opt"));
    sol.status = status_from_string(j.at("status").get<std::string>());
    sol.surplus = num_from(j.at("surplus"));
    sol.critical_points = nums_from(j.at("critical_points"));
    sol.regime = regime_from_string(j.at("regime").get<std::string>());
    sol.gradient_residual = num_from(j.at("gradient_residual"));
    sol.iterations = j.at("iterations").get<int>();
    if (j.contains("bracket")) {
        sol.bracket = Bracket{num_from(j["bracket"][0]), num_from(j["bracket"][1])};
    }
    return sol;
}

json feasibility_json(const FeasibilityReport& r) {
    json conds = json::array();
    for (const auto& c : r.conditions) {
        conds.push_back({{"name", c.name}, {"bound", num(c.bound)}, {"satisfied", c.satisfied}});
    }
    return {{"regime", to_string(r.regime)},
            {"conditions", conds},
            {"guaranteed_unique", r.guaranteed_unique},
            {"sufficient_only", r.sufficient_only}};
}

FeasibilityReport feasibility_from(const json& j) {
    FeasibilityReport r;
    r.regime = regime_from_string(j.at("regime").get<std::string>());
    for (const auto& c : j.at("conditions")) {
        r.conditions.push_back({c.at("name").get<std::string>(), num_from(c.at("bound")),
                                c.at("satisfied").get<bool>()});
    }
    r.guaranteed_unique = j.at("guaranteed_unique").get<bool>();
    r.sufficient_only = j.at("sufficient_only").get<bool>();
    return r;
}

json sweep_json(const SweepSeries& s) {
    json status = json::array();
    for (auto st : s.status) status.push_back(to_string(st));
    json j{{"factor", to_string(s.factor)},
           {"grid", nums(s.grid)},
           {"l_opt", nums(s.l_opt)},
           {"revenue", nums(s.revenue)},
           {"status", status}};
    put_opt(j, "olr", s.olr, nums);
    put_opt(j, "saturation_price", s.saturation_price, num);
    put_opt(j, "kink_price", s.kink_price, num);
    put_opt(j, "revenue_argmax", s.revenue_argmax, num);
    return j;
}

SweepSeries sweep_from(const json& j) {
    SweepSeries s;
    s.factor = factor_from_string(j.at("factor").get<std::string>());
    s.grid = nums_from(j.at("grid"));
    s.l_opt = nums_from(j.at("l_opt"));
    s.revenue = nums_from(j.at("revenue"));
    for (const auto& st : j.at("status")) s.status.push_back(status_from_string(st.get<std::string>()));
    s.olr = get_opt<std::vector<double>>(j, "olr", nums_from);
    s.saturation_price = get_opt<double>(j, "saturation_price", num_from);
    s.kink_price = get_opt<double>(j, "kink_price", num_from);
    s.revenue_argmax = get_opt<double>(j, "revenue_argmax", num_from);
    return s;
}

json entry_json(const SensitivityEntry& e) {
    return {{"factor", to_string(e.factor)},       {"delta", num(e.delta)},
            {"value", num(e.value)},               {"kind", to_string(e.kind)},
            {"base_l_opt", num(e.base_l_opt)},     {"perturbed_l_opt", num(e.perturbed_l_opt)},
            {"status_changed", e.status_changed}};
}

SensitivityEntry entry_from(const json& j) {
    return {factor_from_string(j.at("factor").get<std::string>()),
            num_from(j.at("delta")),
            num_from(j.at("value")),
            kind_from_string(j.at("kind").get<std::string>()),
            num_from(j.at("base_l_opt")),
            num_from(j.at("perturbed_l_opt")),
            j.at("status_changed").get<bool>()};
}

json secure_json(const SecureSummary& s) {
    json j{{"feasible_loss", num(s.feasible_loss)}};
    put_opt(j, "closed_form", s.closed_form, [](const SecureOptimum& o) {
        return json{{"raw", num(o.raw)}, {"clamped", num(o.clamped)}};
    });
    put_opt(j, "olr", s.olr, num);
    put_opt(j, "elasticities", s.elasticities, [](const SecureElasticities& e) {
        return json{{"eps_q_star", num(e.eps_q_star)},
                    {"eps_p_star", num(e.eps_p_star)},
                    {"eps_l_n", num(e.eps_l_n)},
                    {"eps_price", num(e.eps_price)}};
    });
    put_opt(j, "quasi_elasticities", s.quasi_elasticities, [](const SecureQuasiElasticities& q) {
        return json{{"qeps_nu", num(q.qeps_nu)},
                    {"qeps_theta", num(q.qeps_theta)},
                    {"qeps_pi_c_star", num(q.qeps_pi_c_star)}};
    });
    put_opt(j, "saturation_price", s.saturation_price, num);
    return j;
}

SecureSummary secure_from(const json& j) {
    SecureSummary s;
    s.feasible_loss = num_from(j.at("feasible_loss"));
    s.closed_form = get_opt<SecureOptimum>(j, "closed_form", [](const json& o) {
        return SecureOptimum{num_from(o.at("raw")), num_from(o.at("clamped"))};
    });
    s.olr = get_opt<double>(j, "olr", num_from);
    s.elasticities = get_opt<SecureElasticities>(j, "elasticities", [](const json& e) {
        return SecureElasticities{num_from(e.at("eps_q_star")), num_from(e.at("eps_p_star")),
                                  num_from(e.at("eps_l_n")), num_from(e.at("eps_price"))};
    });
    s.quasi_elasticities =
        get_opt<SecureQuasiElasticities>(j, "quasi_elasticities", [](const json& q) {
            return SecureQuasiElasticities{num_from(q.at("qeps_nu")), num_from(q.at("qeps_theta")),
                                           num_from(q.at("qeps_pi_c_star"))};
        });
    s.saturation_price = get_opt<double>(j, "saturation_price", num_from);
    return s;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a single JSON object");

    std::set<std::string> allowed{"sweep", "tornado", "losses"};
    for (const char* key : kScenarioKeys) allowed.insert(key);
    reject_unknown(doc, allowed, "");

    ScenarioFile file;
    for (const char* key : kScenarioKeys) {
        if (!doc.contains(key)) throw ValidationError(key, "missing required key");
        *scenario_field(file.scenario, key) = require_number(doc[key], key);
    }
    file.scenario.validate();

    if (doc.contains("sweep")) {
        const auto& sw = doc["sweep"];
        if (!sw.is_object()) throw ValidationError("sweep", "expected an object");
        reject_unknown(sw, {"pmin", "pmax", "points"}, "sweep.");
        SweepSpec spec;
        spec.pmax = 0.99 * file.scenario.p_star;
        if (sw.contains("pmin")) spec.pmin = require_number(sw["pmin"], "sweep.pmin");
        if (sw.contains("pmax")) spec.pmax = require_number(sw["pmax"], "sweep.pmax");
        if (sw.contains("points")) {
            if (!sw["points"].is_number_integer() || sw["points"].get<long long>() < 2) {
                throw ValidationError("sweep.points", "expected an integer >= 2");
            }
            spec.points = sw["points"].get<std::size_t>();
        }
        if (!(spec.pmin >= 0.0 && spec.pmin < spec.pmax && spec.pmax < file.scenario.p_star)) {
            throw ValidationError("sweep", "need 0 <= pmin < pmax < p_star");
        }
        file.sweep = spec;
    }
    if (doc.contains("tornado")) {
        const auto& plan = doc["tornado"];
        if (!plan.is_array()) throw ValidationError("tornado", "expected an array");
        std::vector<TornadoItem> items;
        for (const auto& item : plan) {
            if (!item.is_object()) throw ValidationError("tornado", "expected objects");
            reject_unknown(item, {"factor", "lower", "upper"}, "tornado.");
            for (const char* key : {"factor", "lower", "upper"}) {
                if (!item.contains(key)) {
                    throw ValidationError(std::string("tornado.") + key, "missing required key");
                }
            }
            if (!item["factor"].is_string()) throw ValidationError("tornado.factor", "expected a name");
            TornadoItem t;
            try {
                t.factor = factor_from_string(item["factor"].get<std::string>());
            } catch (const DomainError& e) {
                throw ValidationError("tornado.factor", e.what());
            }
            t.lower = require_number(item["lower"], "tornado.lower");
            t.upper = require_number(item["upper"], "tornado.upper");
            items.push_back(t);
        }
        file.tornado = std::move(items);
    }
    if (doc.contains("losses")) {
        const auto& losses = doc["losses"];
        if (!losses.is_array()) throw ValidationError("losses", "expected an array");
        std::vector<double> v;
        for (const auto& x : losses) v.push_back(require_number(x, "losses"));
        file.losses = std::move(v);
    }
    return file;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::vector<double> sweep_grid(const Scenario& s, const SweepSpec& spec) {
    const double pmax = spec.pmax > 0.0 ? spec.pmax : 0.99 * s.p_star;
    if (spec.points < 2 || !(spec.pmin < pmax)) throw DomainError("sweep_grid: bad grid spec");
    std::vector<double> grid(spec.points);
    for (std::size_t i = 0; i < spec.points; ++i) {
        grid[i] = spec.pmin + (pmax - spec.pmin) * static_cast<double>(i) /
                                  static_cast<double>(spec.points - 1);
    }
    return grid;
}

json to_json(const ReportBundle& b) {
    json j;
    j["command"] = b.command;
    put_opt(j, "scenario", b.scenario, scenario_json);
    put_opt(j, "solution", b.solution, solution_json);
    put_opt(j, "feasibility", b.feasibility, feasibility_json);
    put_opt(j, "sweep", b.sweep, sweep_json);
    put_opt(j, "tornado", b.tornado, [](const std::vector<TornadoRow>& rows) {
        json a = json::array();
        for (const auto& r : rows) {
            a.push_back({{"lower", entry_json(r.lower)},
                         {"upper", entry_json(r.upper)},
                         {"magnitude", num(r.magnitude())}});
        }
        return a;
    });
    put_opt(j, "secure", b.secure, secure_json);
    put_opt(j, "discrete", b.discrete, [](const DiscreteChoice& d) {
        json o{{"l", num(d.l)}, {"surplus", num(d.surplus)}};
        o["index"] = d.index ? json(*d.index) : json(nullptr);
        return o;
    });
    put_opt(j, "pareto_nu", b.pareto_nu, num);
    put_opt(j, "oracle", b.oracle, [](const OracleCheck& o) {
        return json{{"grid_points", o.grid_points},   {"oracle_l", num(o.oracle_l)},
                    {"solver_l", num(o.solver_l)},    {"tolerance", num(o.tolerance)},
                    {"random_trials", o.random_trials}, {"random_failures", o.random_failures},
                    {"agree", o.agree}};
    });
    json meta{{"tool_version", b.metadata.tool_version},
              {"input_digest", b.metadata.input_digest}};
    put_opt(meta, "timestamp", b.metadata.timestamp, [](const std::string& t) { return t; });
    j["metadata"] = meta;
    return j;
}

ReportBundle bundle_from_json(const json& j) {
    try {
        ReportBundle b;
        b.command = j.at("command").get<std::string>();
        b.scenario = get_opt<Scenario>(j, "scenario", scenario_from);
        b.solution = get_opt<TradeoffSolution>(j, "solution", solution_from);
        b.feasibility = get_opt<FeasibilityReport>(j, "feasibility", feasibility_from);
        b.sweep = get_opt<SweepSeries>(j, "sweep", sweep_from);
        b.tornado = get_opt<std::vector<TornadoRow>>(j, "tornado", [](const json& a) {
            std::vector<TornadoRow> rows;
            for (const auto& r : a) rows.push_back({entry_from(r.at("lower")), entry_from(r.at("upper"))});
            return rows;
        });
        b.secure = get_opt<SecureSummary>(j, "secure", secure_from);
        b.discrete = get_opt<DiscreteChoice>(j, "discrete", [](const json& d) {
            DiscreteChoice c;
            if (!d.at("index").is_null()) c.index = d.at("index").get<std::size_t>();
            c.l = num_from(d.at("l"));
            c.surplus = num_from(d.at("surplus"));
            return c;
        });
        b.pareto_nu = get_opt<double>(j, "pareto_nu", num_from);
        b.oracle = get_opt<OracleCheck>(j, "oracle", [](const json& o) {
            return OracleCheck{o.at("grid_points").get<std::size_t>(), num_from(o.at("oracle_l")),
                               num_from(o.at("solver_l")),           num_from(o.at("tolerance")),
                               o.at("random_trials").get<std::size_t>(),
                               o.at("random_failures").get<std::size_t>(), o.at("agree").get<bool>()};
        });
        const auto& meta = j.at("metadata");
        b.metadata.tool_version = meta.at("tool_version").get<std::string>();
        b.metadata.input_digest = meta.at("input_digest").get<std::string>();
        b.metadata.timestamp = get_opt<std::string>(meta, "timestamp",
                                                    [](const json& t) { return t.get<std::string>(); });
        return b;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report: ") + e.what());
    }
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", v);
}

std::string sweep_csv(const SweepSeries& series) {
    std::string out = "factor,value,l_opt,revenue,olr,status\n";
    for (std::size_t i = 0; i < series.grid.size(); ++i) {
        out += fmt::format("{},{},{},{},{},{}\n", to_string(series.factor),
                           format_number(series.grid[i]), format_number(series.l_opt[i]),
                           format_number(series.revenue[i]),
                           series.olr ? format_number((*series.olr)[i]) : std::string(),
                           to_string(series.status[i]));
    }
    return out;
}

std::string tornado_csv(const std::vector<TornadoRow>& rows) {
    std::string out = "factor,kind,delta_lower,value_lower,delta_upper,value_upper,magnitude,status_changed\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", to_string(r.lower.factor),
                           to_string(r.lower.kind), format_number(r.lower.delta),
                           format_number(r.lower.value), format_number(r.upper.delta),
                           format_number(r.upper.value), format_number(r.magnitude()),
                           (r.lower.status_changed || r.upper.status_changed) ? 1 : 0);
    }
    return out;
}

void write_report(const ReportBundle& bundle, ReportFormat format,
                  const std::filesystem::path& path) {
    std::string text;
    if (format == ReportFormat::Json) {
        text = to_json(bundle).dump(2) + "\n";
    } else if (bundle.sweep) {
        text = sweep_csv(*bundle.sweep);
    } else if (bundle.tornado) {
        text = tornado_csv(*bundle.tornado);
    } else {
        throw UsageError("csv output is only available for sweep and tornado commands");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + path.string());
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

}  // namespace privtrade
