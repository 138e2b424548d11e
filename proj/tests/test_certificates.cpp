#include <algorithm>
#include <cmath>
#include <string>

#include "doctest.h"
#include "visolve/certificates.hpp"
#include "visolve/errors.hpp"
#include "visolve/instances.hpp"
#include "visolve/verify.hpp"

using namespace visolve;

namespace {

bool has(const CertificateResult& r, const std::string& invariant) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const Violation& v) { return v.invariant == invariant; });
}

RunReport standard_run(Variant v, std::size_t iters = 45) {
    const Instance inst = standard_exp_chain_instance();
    SolverConfig cfg = solver_config_for(inst, v, iters, standard_beta0_pair());
    cfg.keep_history = true;
    return run(cfg, inst.op, inst.set, inst.ctx);
}

} // namespace

TEST_CASE("honest runs carry every certificate") {
    Instance inst = standard_exp_chain_instance();
    attach_reference_solution(inst);
    CHECK(inst.x_star_radius < 1e-6);
    for (Variant v : {Variant::fixed, Variant::adaptive_halving, Variant::adaptive_nondecreasing}) {
        const CertificateResult r = certify(inst, v, 45, standard_beta0_pair());
        CHECK(r.checks > 0);
        INFO(variant_name(v));
        CHECK(r.ok());
    }
    for (std::size_t i = 0; i < 21; ++i) {
        const Instance c = certificate_instance(9, i);
        const double b0 = certificate_beta0(9, i, *c.lipschitz);
        for (Variant v : {Variant::fixed, Variant::adaptive_halving, Variant::adaptive_nondecreasing}) {
            const CertificateResult r = certify(c, v, 30, b0);
            INFO(c.name, " ", variant_name(v));
            CHECK(r.ok());
        }
        if (c.x_star_radius == 0.0) CHECK(certify(c, Variant::baseline, 30, b0).ok());
    }
}

TEST_CASE("tampered reports are caught") {
    const Instance inst = standard_exp_chain_instance();
    const RunReport clean = standard_run(Variant::adaptive_halving, 20);
    REQUIRE(check_certificates(clean, inst.op, inst.set, inst.ctx, std::nullopt).ok());

    SUBCASE("gap increase") {
        RunReport r = clean;
        r.records[10].gap_bar = r.records[9].gap_bar * 2.0;
        const CertificateResult c = check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt);
        CHECK(has(c, "gap-monotonicity"));
        CHECK(has(c, "product-certificate"));
    }
    SUBCASE("negative gap") {
        RunReport r = clean;
        r.records[5].gap_bar = -1e-6;
        CHECK(has(check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt), "gap-nonnegative"));
    }
    SUBCASE("accepted step that fails the criterion") {
        // On the symmetric standard start every step stays on one boundary point, so use an affine instance.
        const Instance aff = certificate_instance(9, 1);
        SolverConfig cfg = solver_config_for(aff, Variant::adaptive_halving, 10, 1.0);
        cfg.keep_history = true;
        RunReport r = run(cfg, aff.op, aff.set, aff.ctx);
        REQUIRE(check_certificates(r, aff.op, aff.set, aff.ctx, std::nullopt).ok());
        r.history[0].beta *= 1e-6;
        CHECK(has(check_certificates(r, aff.op, aff.set, aff.ctx, std::nullopt), "line-search-criterion"));
    }
    SUBCASE("trial budget") {
        RunReport r = clean;
        r.records[2].trials_k = 200;
        CHECK(has(check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt), "trial-budget"));
    }
    SUBCASE("beta above 2L") {
        RunReport r = clean;
        r.records[4].beta_k = 3.0 * *inst.lipschitz;
        const CertificateResult c = check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt);
        CHECK(has(c, "beta-ceiling"));
        CHECK(has(c, "log-S-recurrence"));
    }
    SUBCASE("averaged output outside the set") {
        RunReport r = clean;
        r.states[7].y_bar = Vector::filled(20, 1.0);
        CHECK(has(check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt), "y-bar-feasible"));
    }
    SUBCASE("wrong solution") {
        CHECK(has(check_certificates(clean, inst.op, inst.set, inst.ctx, Vector::filled(20, 0.2)), "distance-bound"));
        // A radius covering the discrepancy silences the check.
        CHECK_FALSE(has(check_certificates(clean, inst.op, inst.set, inst.ctx, Vector::filled(20, 0.2), {}, 2.0),
                        "distance-bound"));
    }
}

TEST_CASE("baseline distance certificate") {
    const Instance inst = certificate_instance(4, 0); // affine, exact solution
    REQUIRE(inst.x_star_radius == 0.0);
    SolverConfig cfg = solver_config_for(inst, Variant::baseline, 30, 1.0);
    cfg.keep_history = true;
    RunReport r = run(cfg, inst.op, inst.set, inst.ctx);
    CHECK(check_certificates(r, inst.op, inst.set, inst.ctx, inst.x_star).ok());
    r.states[5].x = r.states[0].x + Vector::filled(inst.y0.size(), 10.0);
    CHECK(has(check_certificates(r, inst.op, inst.set, inst.ctx, inst.x_star), "baseline-distance"));
}

TEST_CASE("a corrupted strong-monotonicity constant is detected") {
    // Inflating mu lets the solver claim more progress than the operator
    // delivers; the distance certificate against the solution exposes it.
    VerifyOptions opts;
    opts.mu_scale = 10.0;
    opts.random_instances = 14;
    const auto reports = run_suites("certificates", opts);
    REQUIRE(reports.size() == 1);
    CHECK_FALSE(reports[0].ok());
    const bool distance = std::any_of(reports[0].failures.begin(), reports[0].failures.end(),
                                      [](const SuiteFailure& f) { return f.check.find("distance") != std::string::npos; });
    CHECK(distance);
    // The first violation of each failing run carries a replayable experiment file.
    const auto replayable = std::count_if(reports[0].failures.begin(), reports[0].failures.end(),
                                          [](const SuiteFailure& f) { return f.instance.is_object(); });
    CHECK(replayable > 0);
    for (const SuiteFailure& f : reports[0].failures) {
        if (f.instance.is_object()) CHECK(f.instance.at("mu").get<double>() > 0.0);
    }

    opts.mu_scale = 1.0;
    CHECK(run_suites("certificates", opts)[0].ok());
}

TEST_CASE("suite registry") {
    CHECK(suite_names().size() == 5);
    VerifyOptions opts;
    opts.random_instances = 10;
    for (const SuiteReport& r : run_suites("projections", opts)) CHECK(r.ok());
    CHECK_THROWS_AS(run_suites("nonsense", opts), ConfigError);
}
