#include "visolve/engine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "visolve/bounds.hpp"
#include "visolve/errors.hpp"

namespace visolve {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kSearchSlack = 64;
// Doubling from the smallest normal double reaches overflow in about 2100 steps.
constexpr std::size_t kUnboundedSearchCap = 2100;

bool uses_model(Variant v) noexcept { return v != Variant::baseline; }

double log_or_neg_inf(double v) {
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
}

Vector absolute(const Vector& v) {
    Vector a = v;
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(a[i]);
    return a;
}

void refresh_gap(EngineState& s, double mu, const FeasibleSet& set, const NormContext& ctx) {
    s.x = step_x(s, mu, set, ctx);
    s.gap_bar = gap_value(s, s.x, mu, ctx);
    s.gap_floor = gap_rounding_floor(s, s.x, mu, ctx);
    s.log_gap = log_or_neg_inf(s.gap_bar) + s.log_S;
}

} // namespace

std::string_view variant_name(Variant v) noexcept {
    switch (v) {
    case Variant::fixed: return "fixed";
    case Variant::adaptive_halving: return "adaptive-halving";
    case Variant::adaptive_nondecreasing: return "adaptive-nondecreasing";
    case Variant::baseline: return "baseline-projection";
    }
    return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) noexcept {
    if (name == "fixed" || name == "alg1") return Variant::fixed;
    if (name == "adaptive-halving" || name == "alg2") return Variant::adaptive_halving;
    if (name == "adaptive-nondecreasing" || name == "alg3") return Variant::adaptive_nondecreasing;
    if (name == "baseline-projection" || name == "baseline") return Variant::baseline;
    return std::nullopt;
}

std::string_view stop_reason_name(StopReason r) noexcept {
    switch (r) {
    case StopReason::max_iters: return "max-iters";
    case StopReason::gap_tolerance: return "gap-tolerance";
    case StopReason::beta_underflow: return "beta-underflow";
    }
    return "unknown";
}

Vector step_y(const Vector& x_k, const Vector& g_xk, double beta, const FeasibleSet& set,
              const NormContext& ctx) {
    if (!(beta > 0.0)) throw std::invalid_argument("step_y: beta must be positive");
    return project(set, ctx, x_k - (1.0 / beta) * ctx.apply_inv(g_xk));
}

Vector step_x(const EngineState& state, double mu, const FeasibleSet& set, const NormContext& ctx) {
    return project(set, ctx, state.u_bar - (1.0 / mu) * ctx.apply_inv(state.g_bar));
}

double gap_value(const EngineState& state, const Vector& x_k, double mu, const NormContext& ctx) {
    const Vector bx = ctx.apply(x_k);
    const double quad = inner(bx, x_k) - 2.0 * inner(bx, state.u_bar) + state.w_bar;
    return state.a_bar - inner(state.g_bar, x_k) - 0.5 * mu * quad;
}

double gap_rounding_floor(const EngineState& state, const Vector& x_k, double mu, const NormContext& ctx) {
    const Vector bx = ctx.apply(x_k);
    const double scale = std::abs(state.a_bar) + std::abs(inner(state.g_bar, x_k)) +
                         0.5 * mu * (std::abs(inner(bx, x_k)) + 2.0 * std::abs(inner(bx, state.u_bar)) +
                                     std::abs(state.w_bar));
    return 64.0 * kEps * scale;
}

double criterion_allowance(const VIOperator& op, const NormContext& ctx, const Vector& x, const Vector& y) {
    const double n = static_cast<double>(x.size());
    const double magnitude = ctx.dual_norm(absolute(op.eval_magnitude(x))) +
                             ctx.dual_norm(absolute(op.eval_magnitude(y)));
    return 4.0 * (n + 2.0) * kEps * magnitude;
}

bool criterion_holds(const NormContext& ctx, const Vector& x, const Vector& g_x, const Vector& y,
                     const Vector& g_y, double beta, double mu, double allowance) {
    const double lhs = ctx.dual_norm(g_y - g_x);
    const double rhs = std::sqrt(beta * (beta + mu)) * ctx.norm(y - x);
    return lhs <= rhs + allowance;
}

LineSearchResult line_search(const Vector& x_k, const Vector& g_xk, double beta_start, double mu,
                             const VIOperator& op, const FeasibleSet& set, const NormContext& ctx,
                             std::optional<double> declared_lipschitz) {
    if (!(beta_start > 0.0)) throw std::invalid_argument("line_search: beta_start must be positive");
    std::size_t cap = kUnboundedSearchCap;
    if (declared_lipschitz) {
        const double doublings = std::ceil(std::log2(2.0 * *declared_lipschitz / beta_start));
        cap = 1 + static_cast<std::size_t>(std::max(0.0, doublings)) + kSearchSlack;
    }
    double beta = beta_start;
    for (std::size_t trials = 1;; ++trials) {
        if (trials > cap) {
            throw NumericalError("line_search: " + std::to_string(cap) +
                                 " trials without acceptance; declared Lipschitz constant is violated");
        }
        Vector y = step_y(x_k, g_xk, beta, set, ctx);
        Vector g_y = op.eval(y);
        const double allowance = criterion_allowance(op, ctx, x_k, y);
        if (criterion_holds(ctx, x_k, g_xk, y, g_y, beta, mu, allowance)) {
            return LineSearchResult{std::move(y), std::move(g_y), beta, trials};
        }
        beta *= 2.0;
        if (!std::isfinite(beta)) throw NumericalError("line_search: beta overflowed");
    }
}

LineSearchResult line_search(const Vector& x_k, double beta_start, double mu, const VIOperator& op,
                             const FeasibleSet& set, const NormContext& ctx,
                             std::optional<double> declared_lipschitz) {
    return line_search(x_k, op.eval(x_k), beta_start, mu, op, set, ctx, declared_lipschitz);
}

double beta_hat(double sum_log_factors, std::size_t k, double mu) {
    if (k == 0) throw std::invalid_argument("beta_hat: k must be >= 1");
    // G = exp(-t); G in (0, 1) iff t in (0, inf).
    const double t = -sum_log_factors / static_cast<double>(k);
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw NumericalError("beta_hat: geometric mean factor outside (0, 1)");
    }
    return mu / std::expm1(t);
}

std::optional<double> effective_lipschitz(const SolverConfig& config, const VIOperator& op) {
    if (config.lipschitz) return config.lipschitz;
    return op.declared_lipschitz();
}

void validate(const SolverConfig& config, const VIOperator& op, const FeasibleSet& set, const NormContext& ctx) {
    const std::size_t n = op.dimension();
    if (set.dimension() != n || ctx.dimension() != n) {
        throw ConfigError("dimension mismatch: operator " + std::to_string(n) + ", set " +
                          std::to_string(set.dimension()) + ", norm " + std::to_string(ctx.dimension()));
    }
    require_projection_support(set, ctx);
    if (!(config.mu > 0.0) || !std::isfinite(config.mu)) throw ConfigError("mu must be positive and finite");
    const auto lip = effective_lipschitz(config, op);
    if (lip && !(*lip > 0.0 && std::isfinite(*lip))) throw ConfigError("lipschitz must be positive and finite");
    if ((config.variant == Variant::fixed || config.variant == Variant::baseline) && !lip) {
        throw ConfigError("variant '" + std::string(variant_name(config.variant)) +
                          "' requires a Lipschitz constant");
    }
    if (config.y0.size() != n) throw ConfigError("y0 has the wrong dimension");
    if (!contains(set, ctx, config.y0, 1e-12)) throw ConfigError("y0 is not in the feasible set");
    if (const auto* b = std::get_if<double>(&config.beta0)) {
        if (!(*b > 0.0) || !std::isfinite(*b)) throw ConfigError("beta0 must be positive and finite");
    } else {
        const auto& pair = std::get<AutoBeta0>(config.beta0);
        if (pair.x.size() != n || pair.y.size() != n) throw ConfigError("auto beta0 points have the wrong dimension");
        if (!contains(set, ctx, pair.x, 1e-12) || !contains(set, ctx, pair.y, 1e-12)) {
            throw ConfigError("auto beta0 points must lie in the feasible set");
        }
        if (!(ctx.norm(pair.x - pair.y) > 0.0)) throw ConfigError("auto beta0 points must be distinct");
    }
    if (config.gap_tolerance && !(*config.gap_tolerance >= 0.0)) {
        throw ConfigError("gap_tolerance must be non-negative");
    }
}

double resolve_beta0(const SolverConfig& config, const VIOperator& op, const NormContext& ctx) {
    if (const auto* b = std::get_if<double>(&config.beta0)) return *b;
    const auto& pair = std::get<AutoBeta0>(config.beta0);
    return estimate_beta0(op, ctx, pair.x, pair.y);
}

EngineState initialize(const SolverConfig& config, double beta0, const VIOperator& op, const FeasibleSet& set,
                       const NormContext& ctx) {
    EngineState s;
    s.beta = beta0;
    s.y_bar = config.y0;
    s.u_bar = config.y0;
    s.g_bar = op.eval(config.y0);
    s.a_bar = inner(s.g_bar, config.y0);
    s.w_bar = ctx.inner(config.y0, config.y0);
    if (uses_model(config.variant)) {
        refresh_gap(s, config.mu, set, ctx);
    } else {
        s.x = config.y0;
        s.gap_bar = kNaN;
        s.log_gap = kNaN;
    }
    return s;
}

EngineState iterate(const EngineState& state, const SolverConfig& config, const VIOperator& op,
                    const FeasibleSet& set, const NormContext& ctx, StepTrace* trace) {
    const double mu = config.mu;
    const auto lip = effective_lipschitz(config, op);
    EngineState s = state;
    const Vector& x_k = state.x;
    Vector g_x = op.eval(x_k);

    if (config.variant == Variant::baseline) {
        const double step = mu / (*lip * *lip);
        Vector next = project(set, ctx, x_k - step * ctx.apply_inv(g_x));
        s.last_step = ctx.norm(next - x_k);
        s.last_trials = 1;
        s.inner_evals += 1;
        s.beta = 1.0 / step;
        s.k += 1;
        if (trace) *trace = StepTrace{x_k, g_x, next, op.eval(next), s.beta, 1};
        s.x = next;
        s.y_bar = std::move(next);
        return s;
    }

    LineSearchResult accepted = [&] {
        switch (config.variant) {
        case Variant::fixed: {
            Vector y = step_y(x_k, g_x, *lip, set, ctx);
            Vector g_y = op.eval(y);
            return LineSearchResult{std::move(y), std::move(g_y), *lip, 1};
        }
        case Variant::adaptive_halving: {
            const double start = 0.5 * state.beta;
            if (start < kBetaUnderflow) {
                throw NumericalError("beta underflow: next trial beta " + std::to_string(start) +
                                     " is below 1e-300");
            }
            return line_search(x_k, g_x, start, mu, op, set, ctx, lip);
        }
        default: return line_search(x_k, g_x, state.beta, mu, op, set, ctx, lip);
        }
    }();

    const double beta = accepted.beta;
    // rho = S_k / S_{k+1}; 1 - rho = lambda_{k+1} / S_{k+1}.
    const double rho = beta / (beta + mu);
    const double tau = mu / (beta + mu);
    const Vector& y = accepted.y;
    const Vector& g_y = accepted.g_y;

    s.y_bar = rho * s.y_bar + tau * y;
    s.u_bar = rho * s.u_bar + tau * y;
    s.g_bar = rho * s.g_bar + tau * g_y;
    s.a_bar = rho * s.a_bar + tau * inner(g_y, y);
    s.w_bar = rho * s.w_bar + tau * ctx.inner(y, y);
    const double log_growth = std::log1p(mu / beta);
    s.log_S += log_growth;
    s.sum_log_factors -= log_growth;
    s.beta = beta;
    s.k += 1;
    s.inner_evals += accepted.trials;
    s.last_trials = accepted.trials;
    s.last_step = ctx.norm(y - x_k);

    if (trace) *trace = StepTrace{x_k, std::move(g_x), y, g_y, beta, accepted.trials};
    refresh_gap(s, mu, set, ctx);
    return s;
}

RunReport run(const SolverConfig& config, const VIOperator& op, const FeasibleSet& set, const NormContext& ctx) {
    validate(config, op, set, ctx);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };

    RunReport report;
    report.variant = config.variant;
    report.mu = config.mu;
    report.lipschitz = effective_lipschitz(config, op);
    report.beta0 = resolve_beta0(config, op, ctx);
    if (!(report.beta0 > 0.0) || !std::isfinite(report.beta0)) throw ConfigError("beta0 resolved to a non-positive value");

    const bool model = uses_model(config.variant);
    const double mu = config.mu;
    std::optional<BoundCurve> fixed_curve;
    if (report.lipschitz) fixed_curve = BoundCurve::fixed_rate(*report.lipschitz, mu);

    EngineState state = initialize(config, report.beta0, op, set, ctx);
    report.delta0 = state.gap_bar;

    auto make_record = [&](const EngineState& s) {
        RunRecord r;
        r.k = s.k;
        r.beta_k = s.beta;
        r.trials_k = s.last_trials;
        r.log_S = s.log_S;
        r.gap_bar = s.gap_bar;
        r.gap_floor = model ? s.gap_floor : kNaN;
        r.step_norm = s.last_step;
        r.bound_fixed = fixed_curve ? bound_value(*fixed_curve, s.k) : kNaN;
        if (model) {
            r.beta_hat_k = s.k == 0 ? s.beta : beta_hat(s.sum_log_factors, s.k, mu);
            r.bound_adaptive = bound_value(BoundCurve::adaptive_rate(r.beta_hat_k, mu), s.k);
        } else {
            r.beta_hat_k = kNaN;
            r.bound_adaptive = kNaN;
        }
        r.elapsed_ms = elapsed_ms();
        return r;
    };

    report.records.push_back(make_record(state));
    if (config.keep_history) report.states.push_back(state);

    while (state.k < config.max_iters) {
        if (model && config.gap_tolerance && state.gap_bar <= *config.gap_tolerance) {
            report.stop = StopReason::gap_tolerance;
            break;
        }
        if (config.variant == Variant::adaptive_halving && 0.5 * state.beta < kBetaUnderflow) {
            report.stop = StopReason::beta_underflow;
            report.diagnostic = "stopped at k=" + std::to_string(state.k) + ": beta would drop below 1e-300";
            break;
        }
        StepTrace trace{state.x, state.x, state.x, state.x, 0.0, 0};
        state = iterate(state, config, op, set, ctx, config.keep_history ? &trace : nullptr);
        report.records.push_back(make_record(state));
        if (config.keep_history) {
            report.history.push_back(std::move(trace));
            report.states.push_back(state);
        }
    }
    report.total_trials = state.inner_evals;
    report.final_point = state.y_bar;
    return report;
}

} // namespace visolve
