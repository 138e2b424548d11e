#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "visolve/commands.hpp"
#include "visolve/config.hpp"
#include "visolve/errors.hpp"
#include "visolve/report.hpp"

using namespace visolve;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
      "dimension": 1,
      "operator": {"kind": "affine", "A": [[2.0]], "b": [-1.0], "lipschitz": 2.0, "strong_monotonicity": 2.0},
      "set": {"kind": "whole-space"},
      "y0": [0.0],
      "algorithms": ["fixed"],
      "beta0": 2.0,
      "max_iters": 10
    })");
}

json standard(std::vector<std::string> algorithms) {
    json j = json::parse(R"({
      "dimension": 20,
      "operator": {"kind": "exp-chain"},
      "set": {"kind": "ball"},
      "y0": {"fill": 0.2},
      "beta0": "auto",
      "checkpoints": {"start": 3, "stop": 45, "step": 3}
    })");
    j["algorithms"] = algorithms;
    return j;
}

std::string message_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::filesystem::path write_temp(const std::string& name, const json& j) {
    const auto path = std::filesystem::temp_directory_path() / ("visolve_test_" + name + ".json");
    std::ofstream(path) << j.dump(2);
    return path;
}

RunReport standard_run(Variant v, std::size_t iters) {
    const ExperimentConfig cfg = parse_config(standard({std::string(variant_name(v))}));
    SolverConfig sc = solver_config(cfg, v);
    sc.max_iters = iters;
    return run(sc, cfg.instance.op, cfg.instance.set, cfg.instance.ctx);
}

} // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config(standard({"fixed", "alg2"}));
    CHECK(c.instance.y0 == Vector::filled(20, 0.2));
    CHECK(c.instance.mu == doctest::Approx(0.9 * std::exp(-std::sqrt(2.0))));
    CHECK(c.algorithms == std::vector<Variant>{Variant::fixed, Variant::adaptive_halving});
    REQUIRE(c.checkpoints.size() == 15);
    CHECK(c.checkpoints.front() == 3);
    CHECK(c.checkpoints.back() == 45);
    CHECK(c.max_iters == 45);
    CHECK(std::holds_alternative<AutoBeta0>(c.beta0));

    const ExperimentConfig m = parse_config(minimal());
    CHECK(m.max_iters == 10);
    CHECK(std::get<double>(m.beta0) == 2.0);
    CHECK(m.format == OutputFormat::csv);
}

TEST_CASE("config errors") {
    json j = minimal();
    j["colour"] = 1;
    j["shade"] = 2;
    const std::string msg = message_of(j);
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(msg.find("shade") != std::string::npos);
    j = minimal();
    j["operator"]["scale"] = 2;
    CHECK(message_of(j).find("operator") != std::string::npos);
    CHECK(message_of(j).find("scale") != std::string::npos);

    j = minimal();
    j["set"] = json::parse(R"({"kind": "ball", "radius": 0.5})");
    j["y0"] = {0.9};
    CHECK(message_of(j).find("y0") != std::string::npos);

    j = minimal();
    j["algorithms"] = {"newton"};
    CHECK(message_of(j).find("newton") != std::string::npos);

    j = minimal();
    j.erase("beta0");
    CHECK_FALSE(message_of(j).empty());

    j = minimal();
    j["operator"].erase("strong_monotonicity");
    CHECK_FALSE(message_of(j).empty());
    j["mu"] = 2.0;
    CHECK(message_of(j).empty());

    j = standard({"fixed"});
    j["checkpoints"] = {3, 3};
    CHECK_FALSE(message_of(j).empty());
    j["checkpoints"] = {3, 6};
    j["max_iters"] = -1;
    CHECK_FALSE(message_of(j).empty());
    j["max_iters"] = "many";
    CHECK_FALSE(message_of(j).empty());

    j = minimal();
    j["norm"] = json::parse(R"({"kind": "diagonal", "d": [0.0]})");
    CHECK_THROWS(parse_config(j));

    CHECK_THROWS_AS(load_config("/nonexistent/visolve.json"), ConfigError);
}

TEST_CASE("instance JSON round trip") {
    const ExperimentConfig c = parse_config(minimal());
    const json j = instance_to_json(c.instance, c.beta0, c.algorithms, c.max_iters);
    const ExperimentConfig back = parse_config(j);
    CHECK(back.instance.y0 == c.instance.y0);
    CHECK(back.instance.mu == c.instance.mu);
    CHECK(back.instance.lipschitz == c.instance.lipschitz);
    CHECK(back.instance.op.eval(Vector{0.3}) == c.instance.op.eval(Vector{0.3}));
    CHECK(back.max_iters == c.max_iters);
}

TEST_CASE("run CSV layout and round trip") {
    const RunReport r = standard_run(Variant::adaptive_halving, 12);
    const std::string csv = run_csv(r);
    CHECK(csv.substr(0, csv.find('\n')) == kRunCsvHeader);
    CHECK(csv.find("# variant,adaptive-halving") != std::string::npos);
    const std::vector<RunRecord> back = parse_run_csv(csv);
    REQUIRE(back.size() == r.records.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].k == r.records[i].k);
        CHECK(back[i].beta_k == r.records[i].beta_k);
        CHECK(back[i].trials_k == r.records[i].trials_k);
        CHECK(back[i].log_S == r.records[i].log_S);
        CHECK(back[i].gap_bar == r.records[i].gap_bar);
        CHECK(back[i].bound_fixed == r.records[i].bound_fixed);
        CHECK(back[i].bound_adaptive == r.records[i].bound_adaptive);
        CHECK(back[i].elapsed_ms == r.records[i].elapsed_ms);
        const bool both_nan = std::isnan(back[i].beta_hat_k) && std::isnan(r.records[i].beta_hat_k);
        CHECK((both_nan || back[i].beta_hat_k == r.records[i].beta_hat_k));
    }
    CHECK_THROWS_AS(parse_run_csv("k,beta_k\n1,2\n"), std::invalid_argument);
}

TEST_CASE("run JSON round trip") {
    const RunReport r = standard_run(Variant::adaptive_nondecreasing, 8);
    const RunReport back = report_from_json(json::parse(report_to_json(r).dump()));
    CHECK(back.variant == r.variant);
    CHECK(back.mu == r.mu);
    CHECK(back.beta0 == r.beta0);
    CHECK(back.final_point == r.final_point);
    CHECK(back.stop == r.stop);
    REQUIRE(back.records.size() == r.records.size());
    for (std::size_t i = 1; i < r.records.size(); ++i) {
        CHECK(back.records[i].gap_bar == r.records[i].gap_bar);
        CHECK(back.records[i].beta_hat_k == r.records[i].beta_hat_k);
        CHECK(back.records[i].step_norm == r.records[i].step_norm);
        CHECK(back.records[i].gap_floor == r.records[i].gap_floor);
    }
}

TEST_CASE("markdown and number formatting") {
    CHECK(sci5(0.8974216) == "8.9742e-01");
    CHECK(sci5(NAN) == "-");
    const std::string md = run_markdown(standard_run(Variant::fixed, 3));
    CHECK(md.find("| k") != std::string::npos);
    CHECK(md.find("---") != std::string::npos);
}

TEST_CASE("comparison tables") {
    const std::vector<Variant> algs{Variant::adaptive_halving, Variant::adaptive_halving, Variant::fixed};
    CHECK(comparison_labels(algs) ==
          std::vector<std::string>{"adaptive-halving", "adaptive-halving#2", "fixed"});

    const RunReport a = standard_run(Variant::adaptive_halving, 45);
    const RunReport f = standard_run(Variant::fixed, 45);
    const Comparison c = build_comparison({{"adaptive-halving", Variant::adaptive_halving, a},
                                           {"adaptive-halving#2", Variant::adaptive_halving, a},
                                           {"fixed", Variant::fixed, f}},
                                          {3, 6, 45}, a.mu, f.lipschitz);
    REQUIRE(c.rows.size() == 3);
    for (const ComparisonRow& row : c.rows) {
        CHECK(row.cells[0].bound == row.cells[1].bound);
        CHECK(row.cells[0].beta_n == row.cells[1].beta_n);
        CHECK(row.cells[0].trials == row.cells[1].trials);
        CHECK(row.cells[2].bound == row.bound_fixed);
    }
    CHECK(c.rows[0].bound_fixed == doctest::Approx(0.89742).epsilon(1e-4));
    CHECK(c.rows[2].bound_fixed == doctest::Approx(0.19721).epsilon(1e-4));
    CHECK(c.rows[0].cells[0].beta_hat == doctest::Approx(0.38766).epsilon(1e-4));
    CHECK(c.rows[0].cells[0].bound == doctest::Approx(0.33880).epsilon(1e-4));
    CHECK(c.rows[2].cells[0].beta_n == doctest::Approx(4.8766e-14).epsilon(1e-4));

    const std::string md = comparison_markdown(c);
    CHECK(md.find("adaptive-halving#2") != std::string::npos);
    CHECK(md.find("8.9742e-01") != std::string::npos);
    const std::string csv = comparison_csv(c);
    CHECK(csv.substr(0, csv.find(',')) == "N");
    CHECK(csv.find("adaptive-halving#2_bound_full") != std::string::npos);
    CHECK(comparison_json(c).at("rows").size() == 3);
}

TEST_CASE("commands and exit codes") {
    std::ostringstream out;
    std::ostringstream err;
    const auto ok = write_temp("minimal", minimal());
    CHECK(cmd_run(ok, {}, out, err) == kExitOk);
    CHECK(out.str().rfind(std::string(kRunCsvHeader), 0) == 0);

    RunOverrides json_out;
    json_out.format = OutputFormat::json;
    json_out.iters = 3;
    out.str("");
    CHECK(cmd_run(ok, json_out, out, err) == kExitOk);
    CHECK(json::parse(out.str()).at("records").size() == 4);

    json no_lip = minimal();
    no_lip["operator"].erase("lipschitz");
    err.str("");
    CHECK(cmd_run(write_temp("nolip", no_lip), {}, out, err) == kExitConfig);
    CHECK(err.str().find("Lipschitz") != std::string::npos);

    json bad_y0 = minimal();
    bad_y0["set"] = json::parse(R"({"kind": "box", "lower": [1.0], "upper": [2.0]})");
    CHECK(cmd_run(write_temp("bady0", bad_y0), {}, out, err) == kExitConfig);
    CHECK(cmd_run("/nonexistent/visolve.json", {}, out, err) == kExitConfig);

    // Only one algorithm: compare needs two.
    CHECK(cmd_compare(ok, {}, out, err) == kExitConfig);

    const auto cmp = write_temp("cmp", standard({"fixed", "adaptive-halving"}));
    RunOverrides md;
    md.format = OutputFormat::md;
    out.str("");
    CHECK(cmd_compare(cmp, md, out, err) == kExitOk);
    CHECK(out.str().find("8.9742e-01") != std::string::npos);

    VerifyOptions vo;
    vo.random_instances = 5;
    out.str("");
    CHECK(cmd_verify("projections", vo, out, err) == kExitOk);
    CHECK(out.str().find("PASS projections") != std::string::npos);
    CHECK(cmd_verify("nonsense", vo, out, err) == kExitConfig);
    vo.mu_scale = 10.0;
    out.str("");
    CHECK(cmd_verify("certificates", vo, out, err) == kExitFailed);
    CHECK(out.str().find("replay config: {") != std::string::npos);

    // Determinism: two runs differ only in timing columns.
    std::ostringstream a;
    std::ostringstream b;
    cmd_run(cmp, {}, a, err);
    cmd_run(cmp, {}, b, err);
    const std::vector<RunRecord> ra = parse_run_csv(a.str());
    const std::vector<RunRecord> rb = parse_run_csv(b.str());
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].gap_bar == rb[i].gap_bar);
        CHECK(ra[i].beta_k == rb[i].beta_k);
    }
}
