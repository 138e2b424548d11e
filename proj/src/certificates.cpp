#include "visolve/certificates.hpp"

#include <cmath>
#include <cstdio>

#include "visolve/bounds.hpp"

namespace visolve {

namespace {

std::string describe(const char* fmt, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), fmt, a, b);
    return buf;
}

class Checker {
public:
    explicit Checker(CertificateResult& out) : out_(out) {}

    // Records one check; returns the condition.
    bool expect(bool condition, const char* invariant, std::size_t k, std::string detail) {
        ++out_.checks;
        if (!condition) out_.violations.push_back(Violation{invariant, k, std::move(detail)});
        return condition;
    }

private:
    CertificateResult& out_;
};

void check_baseline(const RunReport& report, const NormContext& ctx, const std::optional<Vector>& x_star,
                    Checker& check) {
    if (!x_star || !report.lipschitz || report.states.empty()) return;
    const double gamma = *report.lipschitz / report.mu;
    const BoundCurve curve = BoundCurve::baseline_rate(gamma);
    const double d0 = std::pow(ctx.norm(report.states.front().x - *x_star), 2);
    for (const EngineState& s : report.states) {
        const double dk = std::pow(ctx.norm(s.x - *x_star), 2);
        const double bound = d0 * bound_value(curve, s.k) * (1.0 + 1e-9) + 1e-18;
        check.expect(dk <= bound, "baseline-distance", s.k, describe("||x_k-x*||^2=%.6e > %.6e", dk, bound));
    }
}

} // namespace

void CertificateResult::merge(const CertificateResult& other) {
    checks += other.checks;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

CertificateResult check_certificates(const RunReport& report, const VIOperator& op, const FeasibleSet& set,
                                     const NormContext& ctx, const std::optional<Vector>& x_star,
                                     const CertificateTolerances& tol, double x_star_radius) {
    CertificateResult result;
    Checker check(result);
    if (report.variant == Variant::baseline) {
        // The baseline rate is a statement about the exact solution only.
        if (x_star_radius == 0.0) check_baseline(report, ctx, x_star, check);
        return result;
    }

    const double mu = report.mu;
    const auto& recs = report.records;
    if (recs.empty()) return result;
    const double delta0 = recs.front().gap_bar;
    const auto lip = report.lipschitz;

    std::size_t cumulative_trials = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const RunRecord& r = recs[i];
        const std::size_t k = r.k;

        check.expect(r.gap_bar >= -tol.negative_gap, "gap-nonnegative", k,
                     describe("gap_bar=%.6e (floor %.3e)", r.gap_bar, r.gap_floor));

        if (i == 0) continue;
        const RunRecord& prev = recs[i - 1];
        cumulative_trials += r.trials_k;

        check.expect(r.log_S >= prev.log_S && std::abs((r.log_S - prev.log_S) - std::log1p(mu / r.beta_k)) <=
                                                   1e-12 * std::max(1.0, r.log_S),
                     "log-S-recurrence", k, describe("log_S %.17g after %.17g", r.log_S, prev.log_S));

        // Delta_k <= Delta_{k-1}, i.e. gap_k S_k <= gap_{k-1} S_{k-1}. Each gap is
        // only known up to its rounding floor: compare the smallest value the
        // current gap can have with the largest the previous one can.
        if (r.gap_bar > r.gap_floor) {
            const double lhs = std::log(r.gap_bar - r.gap_floor) + r.log_S;
            const double rhs = std::log(std::max(prev.gap_bar, 0.0) + prev.gap_floor) + prev.log_S;
            check.expect(lhs <= rhs + tol.monotonicity, "gap-monotonicity", k,
                         describe("log Delta_k=%.12g > log Delta_{k-1}=%.12g", lhs, rhs));
        }

        // Rate certificates relative to Delta_0 = gap_bar_0 (S_0 = 1).
        const double rate_bound = delta0 * std::exp(-static_cast<double>(k) * mu / (mu + r.beta_hat_k));
        check.expect(r.gap_bar <= rate_bound * (1.0 + tol.rate) + r.gap_floor, "rate-certificate", k,
                     describe("gap_bar=%.6e > %.6e", r.gap_bar, rate_bound));
        const double product_bound = delta0 * std::exp(-r.log_S);
        check.expect(r.gap_bar <= product_bound * (1.0 + tol.rate) + r.gap_floor, "product-certificate", k,
                     describe("gap_bar=%.6e > %.6e", r.gap_bar, product_bound));

        if (lip) {
            const double two_l = 2.0 * *lip;
            if (report.beta0 <= two_l) {
                check.expect(r.beta_k < two_l, "beta-ceiling", k, describe("beta=%.6e >= 2L=%.6e", r.beta_k, two_l));
            }
            const double n_iter = static_cast<double>(k);
            const double trials = static_cast<double>(cumulative_trials);
            if (report.variant == Variant::adaptive_halving) {
                const double budget = 2.0 * n_iter + std::log2(two_l) - std::log2(report.beta0) + 1.0;
                check.expect(trials <= budget, "trial-budget", k, describe("trials=%.0f > %.6g", trials, budget));
            } else if (report.variant == Variant::adaptive_nondecreasing) {
                const double budget = n_iter + std::max(0.0, std::ceil(std::log2(two_l / report.beta0)));
                check.expect(trials <= budget, "trial-budget", k, describe("trials=%.0f > %.6g", trials, budget));
            } else {
                check.expect(r.trials_k == 1, "trial-budget", k, describe("trials=%.0f, expected %.0f", static_cast<double>(r.trials_k), 1.0));
            }
        }
    }

    for (std::size_t i = 0; i < report.history.size(); ++i) {
        const StepTrace& t = report.history[i];
        const std::size_t k = i + 1;
        const Vector g_x = op.eval(t.x);
        const Vector g_y = op.eval(t.y);
        const double root = std::sqrt(t.beta * (t.beta + mu));
        const double lhs = ctx.dual_norm(g_y - g_x);
        const double rhs = root * ctx.norm(t.y - t.x);
        const double scale = ctx.dual_norm(g_x) + ctx.dual_norm(g_y) + root * (ctx.norm(t.x) + ctx.norm(t.y));
        check.expect(lhs <= rhs + tol.criterion * scale, "line-search-criterion", k,
                     describe("||dg||_*=%.6e > %.6e", lhs, rhs));
    }

    // With x* only known to within r: ||y - x*|| >= d - r, so the check uses (d - r)_+.
    auto distance_check = [&](const Vector& y, double gap, std::size_t k) {
        const double d = std::max(0.0, ctx.norm(y - *x_star) - x_star_radius);
        const double lhs = 0.5 * mu * d * d;
        check.expect(lhs <= gap + tol.distance, "distance-bound", k,
                     describe("mu/2||y_bar-x*||^2=%.6e > gap_bar=%.6e", lhs, gap));
    };
    for (const EngineState& s : report.states) {
        check.expect(contains(set, ctx, s.y_bar, 1e-10), "y-bar-feasible", s.k, "averaged output left Q");
        if (x_star) distance_check(s.y_bar, s.gap_bar, s.k);
    }
    if (report.states.empty() && x_star) distance_check(report.final_point, recs.back().gap_bar, recs.back().k);
    return result;
}

} // namespace visolve
