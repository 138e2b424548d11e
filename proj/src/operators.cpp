#include "visolve/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "visolve/errors.hpp"

namespace visolve {

namespace exp_chain_constants {

double coupling() { return 1.0 / (10.0 * std::exp(3.0)); }
double lipschitz() { return std::sqrt(202.0) / 10.0 * std::exp(std::sqrt(2.0)); }
double strong_monotonicity() { return 0.9 * std::exp(-std::sqrt(2.0)); }

} // namespace exp_chain_constants

namespace {

constexpr double kMaxExponent = 700.0;

void check_constants(std::optional<double> lipschitz, std::optional<double> mu) {
    if (lipschitz && !(*lipschitz > 0.0 && std::isfinite(*lipschitz))) {
        throw ConfigError("operator: declared Lipschitz constant must be positive");
    }
    if (mu && !(*mu > 0.0 && std::isfinite(*mu))) {
        throw ConfigError("operator: declared strong monotonicity must be positive");
    }
    if (lipschitz && mu && *mu > *lipschitz) {
        throw ConfigError("operator: declared strong monotonicity exceeds declared Lipschitz constant");
    }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

} // namespace

VIOperator::VIOperator(std::variant<ExpChain, Affine> spec, std::optional<double> lipschitz,
                       std::optional<double> mu)
    : spec_(std::move(spec)), lipschitz_(lipschitz), mu_(mu) {
    check_constants(lipschitz_, mu_);
}

VIOperator VIOperator::exp_chain(std::size_t n, double coupling, std::optional<double> lipschitz,
                                 std::optional<double> strong_monotonicity) {
    if (n < 2) throw ConfigError("exp-chain operator needs dimension >= 2");
    if (!std::isfinite(coupling)) throw ConfigError("exp-chain coupling must be finite");
    return VIOperator(ExpChain{n, coupling}, lipschitz, strong_monotonicity);
}

VIOperator VIOperator::standard_exp_chain(std::size_t n) {
    return exp_chain(n, exp_chain_constants::coupling(), exp_chain_constants::lipschitz(),
                     exp_chain_constants::strong_monotonicity());
}

VIOperator VIOperator::affine(Matrix a, Vector b, std::optional<double> lipschitz,
                              std::optional<double> strong_monotonicity) {
    if (!a.square() || a.rows() != b.size()) {
        throw DimensionError("affine operator: A must be n x n with b of length n");
    }
    return VIOperator(Affine{std::move(a), std::move(b)}, lipschitz, strong_monotonicity);
}

VIOperator::Kind VIOperator::kind() const noexcept {
    return std::holds_alternative<ExpChain>(spec_) ? Kind::exp_chain : Kind::affine;
}

std::string_view VIOperator::kind_name() const noexcept {
    return kind() == Kind::exp_chain ? "exp-chain" : "affine";
}

std::size_t VIOperator::dimension() const noexcept {
    if (const auto* e = as_exp_chain()) return e->n;
    return as_affine()->b.size();
}

Vector VIOperator::eval(const Vector& x) const {
    if (x.size() != dimension()) throw DimensionError("operator eval: dimension mismatch");
    if (const auto* e = as_exp_chain()) {
        Vector g = Vector::zeros(e->n);
        for (std::size_t i = 0; i < e->n; ++i) {
            const double arg = x[i] + e->coupling * x[(i + 1) % e->n];
            if (arg > kMaxExponent) {
                throw NumericalError("exp-chain eval: exponent " + std::to_string(arg) + " exceeds 700");
            }
            g[i] = std::exp(arg);
        }
        return g;
    }
    const auto& aff = *as_affine();
    return aff.a * x + aff.b;
}

Vector VIOperator::eval_magnitude(const Vector& x) const {
    if (as_exp_chain() != nullptr) return eval(x);
    const auto& aff = *as_affine();
    Vector ax = x;
    for (std::size_t i = 0; i < ax.size(); ++i) ax[i] = std::abs(ax[i]);
    Vector m = aff.a.abs() * ax;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += std::abs(aff.b[i]);
    return m;
}

double estimate_beta0(const VIOperator& op, const NormContext& ctx, const Vector& x, const Vector& y) {
    const double dist = ctx.norm(x - y);
    if (!(dist > 0.0)) throw std::invalid_argument("estimate_beta0: the two points must be distinct");
    return ctx.dual_norm(op.eval(x) - op.eval(y)) / dist;
}

ConstantEstimate sample_constants(const VIOperator& op, const FeasibleSet& set, const NormContext& ctx,
                                  std::size_t num_pairs, std::uint64_t seed) {
    if (num_pairs == 0) throw std::invalid_argument("sample_constants: num_pairs must be >= 1");
    require_projection_support(set, ctx);
    const auto [lo, hi] = set.bounding_box();
    const std::size_t n = set.dimension();
    std::mt19937_64 rng(seed);
    auto draw = [&] {
        Vector p = Vector::zeros(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * uniform01(rng);
        return project(set, ctx, p);
    };

    ConstantEstimate est{0.0, std::numeric_limits<double>::infinity(), 0};
    const std::size_t max_draws = 100 * num_pairs + 100;
    for (std::size_t draws = 0; est.pairs < num_pairs; ++draws) {
        if (draws >= max_draws) throw std::runtime_error("sample_constants: too many degenerate pairs");
        const Vector x = draw();
        const Vector y = draw();
        const Vector dx = x - y;
        const double dist = ctx.norm(dx);
        if (!(dist > 0.0)) continue;
        const Vector dg = op.eval(x) - op.eval(y);
        est.lipschitz = std::max(est.lipschitz, ctx.dual_norm(dg) / dist);
        est.strong_monotonicity = std::min(est.strong_monotonicity, inner(dg, dx) / (dist * dist));
        ++est.pairs;
    }
    return est;
}

} // namespace visolve
