#include "visolve/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "visolve/config.hpp"
#include "visolve/errors.hpp"
#include "visolve/oracles.hpp"

namespace visolve {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

class Suite {
public:
    explicit Suite(std::string name) { report_.name = std::move(name); }

    bool expect(bool condition, const std::string& check, const std::string& detail,
                const nlohmann::json& instance = nullptr) {
        ++report_.checks;
        if (!condition) report_.failures.push_back(SuiteFailure{check, detail, instance});
        return condition;
    }

    SuiteReport take() { return std::move(report_); }

private:
    SuiteReport report_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
    // splitmix64 finalizer over the combined key.
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + index * 0xBF58476D1CE4E5B9ULL + salt;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

nlohmann::json replay(const Instance& inst, const Beta0& beta0, Variant v, std::size_t iters) {
    return instance_to_json(inst, beta0, {v}, iters);
}

// --- projections -----------------------------------------------------------

SuiteReport projections_suite(const VerifyOptions& opt) {
    Suite suite("projections");
    std::mt19937_64 rng(mix(opt.seed, 0, 1));
    for (std::size_t trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const unsigned kind = static_cast<unsigned>(trial % 3);
        Vector center = Vector::zeros(n);
        for (std::size_t i = 0; i < n; ++i) center[i] = uniform(rng, -2.0, 2.0);
        FeasibleSet set = FeasibleSet::whole_space(n);
        NormContext ctx = NormContext::identity(n);
        if (kind == 0) {
            set = FeasibleSet::ball(center, uniform(rng, 0.1, 3.0));
        } else if (kind == 1) {
            Vector lo = center;
            Vector hi = center;
            Vector d = Vector::zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
                hi[i] += uniform(rng, 0.0, 2.0);
                d[i] = uniform(rng, 0.2, 5.0);
            }
            set = FeasibleSet::box(lo, hi);
            ctx = NormContext::diagonal(d);
        }
        const std::string where = std::string(set.kind_name()) + " n=" + std::to_string(n);

        for (std::size_t s = 0; s < 20; ++s) {
            Vector z = Vector::zeros(n);
            Vector w = Vector::zeros(n);
            for (std::size_t i = 0; i < n; ++i) {
                z[i] = uniform(rng, -6.0, 6.0);
                w[i] = uniform(rng, -6.0, 6.0);
            }
            const Vector p = project(set, ctx, z);
            const Vector pw = project(set, ctx, w);
            suite.expect(contains(set, ctx, p, 1e-12), "feasible", where);
            suite.expect(norm_inf(project(set, ctx, p) - p) <= 1e-12 * (1.0 + norm_inf(p)), "idempotent", where);
            suite.expect(ctx.norm(p - pw) <= ctx.norm(z - w) * (1.0 + 1e-12) + 1e-12, "nonexpansive", where);
            // Variational characterization: <B(z - p), q - p> <= 0 for all q in the set.
            const Vector q = set.bounded() ? random_feasible_point(rng, set) : w;
            const double vi = ctx.inner(z - p, q - p);
            const double scale = ctx.norm(z - p) * ctx.norm(q - p) + 1.0;
            suite.expect(vi <= 1e-10 * scale, "variational", where + fmt(" <B(z-p),q-p>=%.3e", vi));
        }
        if (set.kind() == FeasibleSet::Kind::ball) {
            suite.expect(project(set, ctx, set.center()) == set.center(), "center-fixed", where);
        }
    }
    // The unsupported combination must be rejected, not silently approximated.
    bool rejected = false;
    try {
        (void)project(FeasibleSet::unit_ball(2), NormContext::diagonal(Vector{1.0, 2.0}), Vector{3.0, 0.0});
    } catch (const ConfigError&) {
        rejected = true;
    }
    suite.expect(rejected, "unsupported-rejected", "ball with diagonal B");
    return suite.take();
}

// --- operators -------------------------------------------------------------

SuiteReport operators_suite(const VerifyOptions& opt) {
    Suite suite("operators");
    std::mt19937_64 rng(mix(opt.seed, 0, 2));
    const double c = exp_chain_constants::coupling();

    for (std::size_t n : {2u, 5u, 20u}) {
        const VIOperator op = VIOperator::standard_exp_chain(n);
        for (std::size_t s = 0; s < 10; ++s) {
            const Vector x = random_point_in_ball(rng, Vector::zeros(n), 1.0);
            const Vector g = op.eval(x);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                err = std::max(err, std::abs(g[i] - std::exp(x[i] + c * x[(i + 1) % n])) / g[i]);
            }
            suite.expect(err <= 1e-15, "exp-chain-formula", fmt("n=%.0f rel err %.3e", double(n), err));

            const Matrix j = finite_difference_jacobian(op, x);
            double jerr = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t col = 0; col < n; ++col) {
                    double expected = 0.0;
                    if (col == r) expected += g[r];
                    if (col == (r + 1) % n) expected += c * g[r];
                    jerr = std::max(jerr, std::abs(j(r, col) - expected));
                }
            suite.expect(jerr <= 1e-7, "exp-chain-jacobian", fmt("max err %.3e", jerr));
        }
        const ConstantEstimate est = sample_constants(op, FeasibleSet::unit_ball(n), NormContext::identity(n), 2000,
                                                      mix(opt.seed, n, 3));
        suite.expect(est.lipschitz <= exp_chain_constants::lipschitz(), "exp-chain-L-upper",
                     fmt("sampled L %.6g > declared %.6g", est.lipschitz, exp_chain_constants::lipschitz()));
        suite.expect(est.strong_monotonicity >= exp_chain_constants::strong_monotonicity(), "exp-chain-mu-lower",
                     fmt("sampled mu %.6g < declared %.6g", est.strong_monotonicity,
                         exp_chain_constants::strong_monotonicity()));
    }

    for (std::size_t t = 0; t < 12; ++t) {
        const std::size_t n = std::size_t{1} + t % 5;
        const unsigned layout = static_cast<unsigned>(t % 2); // bounded layouts only
        Instance inst = random_affine_instance(rng, n, layout);
        const nlohmann::json rep = replay(inst, 1.0, Variant::adaptive_halving, 1);
        const Matrix& a = inst.op.as_affine()->a;
        const Matrix j = finite_difference_jacobian(inst.op, inst.y0);
        double jerr = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t col = 0; col < n; ++col) jerr = std::max(jerr, std::abs(j(r, col) - a(r, col)));
        suite.expect(jerr <= 1e-8, "affine-jacobian", fmt("max err %.3e", jerr), rep);

        const ConstantEstimate est = sample_constants(inst.op, inst.set, inst.ctx, 500, mix(opt.seed, t, 4));
        suite.expect(est.lipschitz <= *inst.lipschitz * (1.0 + 1e-12), "affine-L-upper",
                     fmt("sampled %.6g > declared %.6g", est.lipschitz, *inst.lipschitz), rep);
        suite.expect(est.strong_monotonicity >= inst.mu * (1.0 - 1e-12), "affine-mu-lower",
                     fmt("sampled %.6g < declared %.6g", est.strong_monotonicity, inst.mu), rep);
        if (inst.x_star) {
            suite.expect(norm_inf(inst.op.eval(*inst.x_star)) <= 1e-10, "affine-solution", "g(x*) != 0", rep);
        }
    }
    return suite.take();
}

// --- engine ----------------------------------------------------------------

double rel_err(long double a, long double b) {
    return static_cast<double>(std::abs(a - b) / std::max<long double>(1.0L, std::abs(b)));
}

SuiteReport engine_suite(const VerifyOptions& opt) {
    Suite suite("engine");

    // Standard configuration: halving and non-decreasing trajectories.
    const Instance standard = standard_exp_chain_instance();
    const Beta0 pair = standard_beta0_pair();
    {
        SolverConfig cfg = solver_config_for(standard, Variant::adaptive_halving, 45, pair);
        const RunReport r = run(cfg, standard.op, standard.set, standard.ctx);
        for (const RunRecord& rec : r.records) {
            const double expected = std::ldexp(r.beta0, -static_cast<int>(rec.k));
            suite.expect(std::abs(rec.beta_k - expected) <= 1e-12 * expected, "halving-trajectory",
                         fmt("k=%.0f beta=%.17g", double(rec.k), rec.beta_k),
                         rec.k == 0 ? replay(standard, pair, Variant::adaptive_halving, 45) : nullptr);
        }
        cfg.variant = Variant::adaptive_nondecreasing;
        const RunReport r3 = run(cfg, standard.op, standard.set, standard.ctx);
        for (const RunRecord& rec : r3.records) {
            suite.expect(rec.beta_k == r3.beta0, "nondecreasing-constant",
                         fmt("k=%.0f beta=%.17g", double(rec.k), rec.beta_k));
        }
    }

    // Hand instance: g(x) = L x on the whole line, start at L/4 -> accepted at L after 3 trials.
    {
        const double lip = 3.0;
        const VIOperator op = VIOperator::affine(Matrix{{lip}}, Vector{0.0}, lip, 1.0);
        const LineSearchResult ls =
            line_search(Vector{1.0}, lip / 4.0, 1.0, op, FeasibleSet::whole_space(1), NormContext::identity(1), lip);
        suite.expect(ls.trials <= 3 && ls.beta <= lip, "line-search-hand",
                     fmt("trials=%.0f beta=%.6g", double(ls.trials), ls.beta));
    }

    // Replay consistency and per-step guarantees on random instances.
    for (std::size_t i = 0; i < opt.random_instances; ++i) {
        const Instance inst = certificate_instance(opt.seed, i);
        const double beta0 = certificate_beta0(opt.seed, i, *inst.lipschitz);
        for (Variant v : {Variant::adaptive_halving, Variant::adaptive_nondecreasing, Variant::fixed}) {
            const nlohmann::json rep = replay(inst, beta0, v, opt.iterations);
            SolverConfig cfg = solver_config_for(inst, v, opt.iterations, beta0);
            cfg.keep_history = true;
            RunReport r;
            try {
                r = run(cfg, inst.op, inst.set, inst.ctx);
            } catch (const std::exception& e) {
                suite.expect(false, "run", e.what(), rep);
                continue;
            }
            const EngineState& last = r.states.back();
            const ReplayedAverages ra = replay_averages(inst.y0, r.history, inst.mu, inst.op, inst.ctx);
            double err = rel_err(ra.log_S, last.log_S);
            err = std::max(err, rel_err(ra.a_bar, last.a_bar));
            err = std::max(err, rel_err(ra.w_bar, last.w_bar));
            for (std::size_t k = 0; k < last.u_bar.size(); ++k) {
                err = std::max(err, rel_err(ra.u_bar[k], last.u_bar[k]));
                err = std::max(err, rel_err(ra.g_bar[k], last.g_bar[k]));
            }
            suite.expect(err <= 1e-10, "replay-consistency",
                         std::string(variant_name(v)) + fmt(" max rel err %.3e", err), rep);

            const CertificateResult cert = check_certificates(r, inst.op, inst.set, inst.ctx, std::nullopt);
            for (const Violation& viol : cert.violations) {
                if (viol.invariant == "line-search-criterion" || viol.invariant == "beta-ceiling" ||
                    viol.invariant == "trial-budget" || viol.invariant == "log-S-recurrence") {
                    suite.expect(false, viol.invariant, std::string(variant_name(v)) + " k=" +
                                                            std::to_string(viol.k) + ": " + viol.detail, rep);
                }
            }
            suite.expect(true, "engine-invariants", "");
        }
    }
    return suite.take();
}

// --- certificates ----------------------------------------------------------

void record(Suite& suite, const CertificateResult& cert, const Instance& inst, const Beta0& beta0, Variant v,
            std::size_t iters, double mu_scale) {
    if (cert.ok()) {
        suite.expect(true, "certificates", "");
        return;
    }
    Instance corrupted = inst;
    corrupted.mu = inst.mu * mu_scale;
    const nlohmann::json rep = replay(corrupted, beta0, v, iters);
    for (std::size_t i = 0; i < cert.violations.size(); ++i) {
        const Violation& viol = cert.violations[i];
        suite.expect(false, viol.invariant,
                     inst.name + " " + std::string(variant_name(v)) + " k=" + std::to_string(viol.k) + ": " +
                         viol.detail,
                     i == 0 ? rep : nlohmann::json(nullptr));
    }
}

SuiteReport certificates_suite(const VerifyOptions& opt) {
    Suite suite("certificates");
    Instance standard = standard_exp_chain_instance();
    attach_reference_solution(standard);
    const Beta0 pair = standard_beta0_pair();
    for (Variant v : {Variant::fixed, Variant::adaptive_halving, Variant::adaptive_nondecreasing}) {
        record(suite, certify(standard, v, 45, pair, opt.mu_scale), standard, pair, v, 45, opt.mu_scale);
    }
    for (std::size_t i = 0; i < opt.random_instances; ++i) {
        const Instance inst = certificate_instance(opt.seed, i);
        const double beta0 = certificate_beta0(opt.seed, i, *inst.lipschitz);
        for (Variant v : {Variant::fixed, Variant::adaptive_halving, Variant::adaptive_nondecreasing}) {
            record(suite, certify(inst, v, opt.iterations, beta0, opt.mu_scale), inst, beta0, v, opt.iterations,
                   opt.mu_scale);
        }
        if (inst.x_star && inst.x_star_radius == 0.0) {
            record(suite, certify(inst, Variant::baseline, opt.iterations, beta0, opt.mu_scale), inst, beta0,
                   Variant::baseline, opt.iterations, opt.mu_scale);
        }
    }
    return suite.take();
}

// --- oracles ---------------------------------------------------------------

SuiteReport oracles_suite(const VerifyOptions& opt) {
    Suite suite("oracles");
    for (std::size_t s = 0; s < 100; ++s) {
        std::mt19937_64 rng(mix(opt.seed, s, 5));
        const std::size_t n = 1 + s % 2;
        FeasibleSet set = FeasibleSet::unit_ball(n);
        NormContext ctx = NormContext::identity(n);
        if ((s / 2) % 2 == 1) {
            Vector d = Vector::zeros(n);
            for (std::size_t i = 0; i < n; ++i) d[i] = uniform(rng, 0.5, 2.0);
            set = FeasibleSet::box(Vector::filled(n, -1.0), Vector::filled(n, 1.0));
            ctx = NormContext::diagonal(d);
        }
        const Vector x = random_feasible_point(rng, set);
        Vector g = Vector::zeros(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = uniform(rng, -3.0, 3.0);
        const double beta = uniform(rng, 0.5, 5.0);
        const std::string where = std::string(set.kind_name()) + " seed " + std::to_string(s);

        const Vector y = step_y(x, g, beta, set, ctx);
        const Vector y_bf = brute_force_argmax(
            [&](const Vector& z) {
                const double d = ctx.norm(z - x);
                return inner(g, x - z) - 0.5 * beta * d * d;
            },
            set, 400);
        suite.expect(norm_inf(y - y_bf) <= 1e-4, "step-y-vs-grid", where + fmt(" diff %.3e", norm_inf(y - y_bf)));

        EngineState st;
        st.u_bar = random_feasible_point(rng, set);
        st.g_bar = g;
        const double mu = uniform(rng, 0.3, 3.0);
        const Vector xm = step_x(st, mu, set, ctx);
        const Vector xm_bf = brute_force_argmax(
            [&](const Vector& z) { return -inner(st.g_bar, z) - 0.5 * mu * (ctx.inner(z, z) - 2.0 * ctx.inner(z, st.u_bar)); },
            set, 400);
        suite.expect(norm_inf(xm - xm_bf) <= 1e-4, "step-x-vs-grid",
                     where + fmt(" diff %.3e", norm_inf(xm - xm_bf)));
    }

    // Small affine instances with interior solutions: the distance certificate against the exact x*.
    for (std::size_t s = 0; s < 20; ++s) {
        std::mt19937_64 rng(mix(opt.seed, s, 6));
        const Instance inst = random_affine_instance(rng, 1 + s % 2, static_cast<unsigned>(s % 3));
        const Vector x_star = exact_affine_solution(inst.op.as_affine()->a, inst.op.as_affine()->b, inst.set);
        suite.expect(norm_inf(inst.op.eval(x_star)) <= 1e-12, "exact-solution", inst.name);
        SolverConfig cfg = solver_config_for(inst, Variant::adaptive_halving, 40, *inst.lipschitz);
        const RunReport r = run(cfg, inst.op, inst.set, inst.ctx);
        const double d = inst.ctx.norm(r.final_point - x_star);
        suite.expect(0.5 * inst.mu * d * d <= r.records.back().gap_bar + 1e-9, "distance-vs-exact",
                     inst.name + fmt(" %.3e > %.3e", 0.5 * inst.mu * d * d, r.records.back().gap_bar),
                     replay(inst, *inst.lipschitz, Variant::adaptive_halving, 40));
    }
    return suite.take();
}

} // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"projections", "operators", "engine", "certificates", "oracles"};
    return names;
}

Instance certificate_instance(std::uint64_t seed, std::size_t index) {
    static constexpr std::size_t affine_dims[] = {1, 2, 5, 20};
    static constexpr std::size_t chain_dims[] = {2, 5, 20};
    std::mt19937_64 rng(mix(seed, index, 7));
    const std::size_t family = index % 7;
    if (family < 4) {
        return random_affine_instance(rng, affine_dims[family], static_cast<unsigned>((index / 7) % 3));
    }
    Instance inst = random_exp_chain_instance(rng, chain_dims[family - 4]);
    attach_reference_solution(inst);
    return inst;
}

void attach_reference_solution(Instance& inst, std::size_t iterations) {
    SolverConfig cfg = solver_config_for(inst, Variant::adaptive_halving, iterations,
                                         inst.lipschitz.value_or(1.0));
    cfg.gap_tolerance = 0.0;
    const RunReport r = run(cfg, inst.op, inst.set, inst.ctx);
    const RunRecord& last = r.records.back();
    // f(y) <= gap_bar bounds mu/2 ||y - x*||^2; the floor covers rounding in gap_bar.
    inst.x_star = r.final_point;
    inst.x_star_radius = std::sqrt(2.0 * (std::max(last.gap_bar, 0.0) + last.gap_floor) / inst.mu);
}

double certificate_beta0(std::uint64_t seed, std::size_t index, double lipschitz) {
    std::mt19937_64 rng(mix(seed, index, 8));
    return lipschitz * std::pow(10.0, uniform(rng, -3.0, 0.3));
}

CertificateResult certify(const Instance& inst, Variant variant, std::size_t iterations, const Beta0& beta0,
                          double mu_scale) {
    SolverConfig cfg = solver_config_for(inst, variant, iterations, beta0);
    cfg.mu = inst.mu * mu_scale;
    cfg.keep_history = true;
    try {
        const RunReport r = run(cfg, inst.op, inst.set, inst.ctx);
        return check_certificates(r, inst.op, inst.set, inst.ctx, inst.x_star, {}, inst.x_star_radius);
    } catch (const std::exception& e) {
        CertificateResult failed;
        failed.checks = 1;
        failed.violations.push_back(Violation{"run-error", 0, e.what()});
        return failed;
    }
}

std::vector<SuiteReport> run_suites(std::string_view name, const VerifyOptions& options) {
    std::vector<SuiteReport> out;
    auto one = [&](std::string_view s) {
        if (s == "projections") out.push_back(projections_suite(options));
        else if (s == "operators") out.push_back(operators_suite(options));
        else if (s == "engine") out.push_back(engine_suite(options));
        else if (s == "certificates") out.push_back(certificates_suite(options));
        else if (s == "oracles") out.push_back(oracles_suite(options));
        else throw ConfigError("unknown suite '" + std::string(s) +
                               "' (expected projections, operators, engine, certificates, oracles or all)");
    };
    if (name == "all") {
        for (const auto& s : suite_names()) one(s);
    } else {
        one(name);
    }
    return out;
}

} // namespace visolve
