#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "visolve/linalg.hpp"
#include "visolve/operators.hpp"
#include "visolve/sets.hpp"

namespace visolve {

/// Solver variants.
///  - fixed: known Lipschitz constant, beta = L every iteration.
///  - adaptive_halving: each iteration starts the search at beta_k / 2.
///  - adaptive_nondecreasing: each iteration starts the search at beta_k.
///  - baseline: plain projection method x_{k+1} = P(x_k - (mu/L^2) B^{-1} g(x_k)).
enum class Variant { fixed, adaptive_halving, adaptive_nondecreasing, baseline };

std::string_view variant_name(Variant v) noexcept;
/// Accepts the canonical names and the aliases alg1, alg2, alg3.
std::optional<Variant> parse_variant(std::string_view name) noexcept;

/// Initial beta from the ratio ||g(x)-g(y)||_* / ||x-y|| at two distinct feasible points.
struct AutoBeta0 {
    Vector x;
    Vector y;
};

using Beta0 = std::variant<double, AutoBeta0>;

struct SolverConfig {
    Variant variant = Variant::adaptive_halving;
    double mu = 0.0;
    /// Required by the fixed and baseline variants; falls back to the operator's declared constant.
    std::optional<double> lipschitz;
    Beta0 beta0 = 1.0;
    Vector y0 = Vector::zeros(1);
    std::size_t max_iters = 100;
    /// Stop once gap_bar <= tolerance.
    std::optional<double> gap_tolerance;
    /// Keep per-iteration vectors and state snapshots in the report.
    bool keep_history = false;
};

/// Running state of the weighted-average schemes. Every sum over the y_i is
/// kept normalized by S_k, so only log S_k is stored and nothing overflows
/// when beta shrinks geometrically.
struct EngineState {
    std::size_t k = 0;
    double log_S = 0.0;
    double beta = 0.0;
    Vector y_bar = Vector::zeros(1); ///< averaged output (1/S) sum lambda_i y_i
    Vector u_bar = Vector::zeros(1); ///< same recurrence, used as the model center
    Vector g_bar = Vector::zeros(1); ///< (1/S) sum lambda_i g(y_i)
    double a_bar = 0.0;              ///< (1/S) sum lambda_i <g(y_i), y_i>
    double w_bar = 0.0;              ///< (1/S) sum lambda_i ||y_i||_B^2
    double gap_bar = 0.0;            ///< Delta_k / S_k
    double log_gap = 0.0;            ///< log Delta_k; -inf when gap_bar <= 0
    double sum_log_factors = 0.0;    ///< sum_i ln(beta_i / (beta_i + mu))
    std::size_t inner_evals = 0;     ///< operator evaluations spent on line-search trials

    Vector x = Vector::zeros(1); ///< argmax of the model for the next iteration (baseline: current iterate)
    std::size_t last_trials = 0;
    double last_step = 0.0;     ///< ||y_{k} - x_{k-1}||_B (baseline: ||x_k - x_{k-1}||_B)
    double gap_floor = 0.0;     ///< rounding floor below which gap_bar is noise
};

/// argmax_{z in Q} <g_x, x - z> - beta/2 ||z - x||_B^2 = P_Q(x - B^{-1} g_x / beta).
Vector step_y(const Vector& x_k, const Vector& g_xk, double beta, const FeasibleSet& set,
              const NormContext& ctx);

/// argmax over Q of the accumulated model: P_Q(u_bar - B^{-1} g_bar / mu).
Vector step_x(const EngineState& state, double mu, const FeasibleSet& set, const NormContext& ctx);

/// Delta_k / S_k evaluated at the model maximizer x_k.
double gap_value(const EngineState& state, const Vector& x_k, double mu, const NormContext& ctx);

/// Size of the rounding error in gap_value: a small multiple of machine
/// epsilon times the sum of magnitudes of the terms it cancels.
double gap_rounding_floor(const EngineState& state, const Vector& x_k, double mu, const NormContext& ctx);

/// Rounding allowance added to the right side of the line-search criterion:
/// proportional to the magnitude of the terms entering g(x) and g(y).
double criterion_allowance(const VIOperator& op, const NormContext& ctx, const Vector& x, const Vector& y);

/// ||g_y - g_x||_* <= sqrt(beta (beta + mu)) ||y - x|| + allowance. Equality passes.
bool criterion_holds(const NormContext& ctx, const Vector& x, const Vector& g_x, const Vector& y,
                     const Vector& g_y, double beta, double mu, double allowance);

struct LineSearchResult {
    Vector y;
    Vector g_y;
    double beta;
    std::size_t trials;
};

/// Doubles beta from beta_start until the criterion holds. g_xk is reused
/// across trials; each trial costs one evaluation at the candidate. Throws
/// NumericalError once the trial count passes the budget implied by the
/// declared Lipschitz constant (plus 64), or if beta overflows.
LineSearchResult line_search(const Vector& x_k, const Vector& g_xk, double beta_start, double mu,
                             const VIOperator& op, const FeasibleSet& set, const NormContext& ctx,
                             std::optional<double> declared_lipschitz = std::nullopt);

LineSearchResult line_search(const Vector& x_k, double beta_start, double mu, const VIOperator& op,
                             const FeasibleSet& set, const NormContext& ctx,
                             std::optional<double> declared_lipschitz = std::nullopt);

/// Effective constant from the accumulated log factors: with
/// G = exp(sum_log_factors / k), returns mu G / (1 - G) = mu / expm1(-sum_log_factors / k).
double beta_hat(double sum_log_factors, std::size_t k, double mu);

/// Lipschitz constant a config resolves to: its own, else the operator's declared one.
std::optional<double> effective_lipschitz(const SolverConfig& config, const VIOperator& op);

/// Throws ConfigError describing the first problem found.
void validate(const SolverConfig& config, const VIOperator& op, const FeasibleSet& set, const NormContext& ctx);

/// Explicit beta0, or the auto estimate.
double resolve_beta0(const SolverConfig& config, const VIOperator& op, const NormContext& ctx);

/// State after the initialization step (k = 0, lambda_0 = 1).
EngineState initialize(const SolverConfig& config, double beta0, const VIOperator& op, const FeasibleSet& set,
                       const NormContext& ctx);

/// What iterate() saw on the way; only filled when requested.
struct StepTrace {
    Vector x;   ///< x_k (baseline: iterate before the step)
    Vector g_x;
    Vector y;   ///< accepted y_{k+1} (baseline: new iterate)
    Vector g_y;
    double beta;
    std::size_t trials;
};

/// One outer iteration of the configured variant.
EngineState iterate(const EngineState& state, const SolverConfig& config, const VIOperator& op,
                    const FeasibleSet& set, const NormContext& ctx, StepTrace* trace = nullptr);

inline constexpr double kBetaUnderflow = 1e-300;

enum class StopReason { max_iters, gap_tolerance, beta_underflow };
std::string_view stop_reason_name(StopReason r) noexcept;

/// One row of telemetry per iteration (k = 0 is the initialization).
struct RunRecord {
    std::size_t k = 0;
    double beta_k = 0.0;
    std::size_t trials_k = 0;
    double log_S = 0.0;
    double gap_bar = 0.0;
    double beta_hat_k = 0.0;
    double bound_fixed = 0.0;
    double bound_adaptive = 0.0;
    double elapsed_ms = 0.0;
    double step_norm = 0.0;
    double gap_floor = 0.0;
};

struct RunReport {
    Variant variant = Variant::adaptive_halving;
    double mu = 0.0;
    std::optional<double> lipschitz;
    double beta0 = 0.0;
    double delta0 = 0.0;
    std::vector<RunRecord> records;
    Vector final_point = Vector::zeros(1);
    StopReason stop = StopReason::max_iters;
    std::string diagnostic;
    std::size_t total_trials = 0;
    /// Present when SolverConfig::keep_history is set: states[k] is the state
    /// after k iterations, history[k] the step that produced states[k+1].
    std::vector<EngineState> states;
    std::vector<StepTrace> history;
};

/// Validates, resolves beta0, and iterates until max_iters, the gap
/// tolerance, or beta underflow.
RunReport run(const SolverConfig& config, const VIOperator& op, const FeasibleSet& set, const NormContext& ctx);

} // namespace visolve
