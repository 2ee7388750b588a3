#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "privtrade/report.hpp"
#include "support.hpp"

using namespace privtrade;

namespace {

const std::string kData = PRIVTRADE_DATA_DIR;

std::string table2_text() {
    std::ifstream in(kData + "/table2.json");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string field_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("bundled golden scenarios") {
    const auto t1 = load_scenario(kData + "/table1.json");
    CHECK(t1.scenario == test::table1());
    REQUIRE(t1.sweep.has_value());
    CHECK(t1.sweep->points == 201);

    const auto t2 = load_scenario(kData + "/table2.json");
    CHECK(t2.scenario == test::table2());
    REQUIRE(t2.tornado.has_value());
    CHECK(t2.tornado->size() == 8);
    REQUIRE(t2.losses.has_value());
    CHECK(t2.losses->at(1) == 3797.0);
}

TEST_CASE("scenario parsing errors") {
    CHECK_THROWS_AS(parse_scenario("{not json"), ParseError);
    CHECK_THROWS_AS(parse_scenario("[1, 2]"), ParseError);
    CHECK_THROWS_AS(load_scenario(kData + "/does-not-exist.json"), IoError);

    auto doc = nlohmann::json::parse(table2_text());
    doc["theta"] = 1.5;
    CHECK(field_of(doc.dump()) == "theta");

    doc = nlohmann::json::parse(table2_text());
    doc.erase("pi_c_star");
    CHECK(field_of(doc.dump()) == "pi_c_star");

    doc = nlohmann::json::parse(table2_text());
    doc["colour"] = "blue";
    CHECK(field_of(doc.dump()) == "colour");

    doc = nlohmann::json::parse(table2_text());
    doc["nu"] = "0.1";
    CHECK(field_of(doc.dump()) == "nu");

    doc = nlohmann::json::parse(table2_text());
    doc["tornado"][0]["factor"] = "gamma";
    CHECK(field_of(doc.dump()) == "tornado.factor");

    doc = nlohmann::json::parse(table2_text());
    doc["sweep"] = {{"points", 1}};
    CHECK(field_of(doc.dump()) == "sweep.points");

    // scientific and decimal notation are equivalent
    doc = nlohmann::json::parse(table2_text());
    doc["pi_s"] = 0.0001;
    CHECK(parse_scenario(doc.dump()).scenario.pi_s == 1e-4);
}

TEST_CASE("sweep block defaults") {
    auto doc = nlohmann::json::parse(table2_text());
    doc["sweep"] = nlohmann::json::object();
    const auto f = parse_scenario(doc.dump());
    REQUIRE(f.sweep.has_value());
    const auto grid = sweep_grid(f.scenario, *f.sweep);
    CHECK(grid.size() == 201);
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == doctest::Approx(0.99));
}

TEST_CASE("report bundle round-trips through JSON") {
    const Scenario s = test::table2();
    ReportBundle b;
    b.command = "everything";
    b.scenario = s;
    b.solution = solve_tradeoff(s);
    b.feasibility = feasibility_report(with_factor(s, Factor::Nu, 1.0));  // carries an infinite-free band
    b.sweep = olr_sweep(s, default_price_grid(s, 21));
    b.tornado = tornado(s, default_dimensional_plan());
    SecureSummary sec;
    sec.closed_form = secure_optimal_loss(s);
    sec.feasible_loss = secure_feasible_loss(s);
    sec.olr = optimal_loss_ratio(s);
    sec.elasticities = secure_elasticities(s);
    sec.quasi_elasticities = secure_quasi_elasticities(s);
    sec.saturation_price = secure_saturation_price(s);
    b.secure = sec;
    const std::vector<double> levels{1000.0, 3797.0};
    b.discrete = solve_discrete(s, levels);
    b.pareto_nu = pareto_privacy_parameter(0.8, 0.2);
    b.oracle = OracleCheck{1000, 3800.0, 3796.9, 20.0, 0, 0, true};
    b.metadata = {"1.0.0", "2026-01-01T00:00:00Z", sha256_hex("x")};

    const auto text = to_json(b).dump();
    CHECK(bundle_from_json(nlohmann::json::parse(text)) == b);

    // an infinite band edge survives as a string
    Scenario secure_nu1 = with_factor(s, Factor::Nu, 1.0);
    secure_nu1.pi_s = 0.0;
    ReportBundle inf_bundle;
    inf_bundle.command = "feasibility";
    inf_bundle.feasibility = feasibility_report(secure_nu1);
    const auto back = bundle_from_json(nlohmann::json::parse(to_json(inf_bundle).dump()));
    CHECK(std::isinf(back.feasibility->conditions[1].bound));
    CHECK(back == inf_bundle);
}

TEST_CASE("csv output") {
    const Scenario s = test::table1();
    const auto sw = price_sweep(s, default_price_grid(s, 5, 0.8));
    const auto csv = sweep_csv(sw);
    CHECK(csv.rfind("factor,value,l_opt,revenue,olr,status\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(csv.find("price,0,10000,") != std::string::npos);

    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("report writing") {
    const auto dir = std::filesystem::temp_directory_path() / "privtrade_report_test";
    std::filesystem::create_directories(dir);
    ReportBundle b;
    b.command = "solve";
    b.solution = solve_tradeoff(test::table2());
    write_report(b, ReportFormat::Json, dir / "r.json");
    std::ifstream in(dir / "r.json");
    const auto j = nlohmann::json::parse(in);
    CHECK(j["solution"]["status"] == "INTERIOR");

    CHECK_THROWS_AS(write_report(b, ReportFormat::Csv, dir / "r.csv"), UsageError);
    CHECK_THROWS_AS(write_report(b, ReportFormat::Json, dir / "missing" / "r.json"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
