#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "visolve/linalg.hpp"
#include "visolve/sets.hpp"

namespace visolve {

/// Constants of the 20-dimensional exponential-chain test problem on the unit ball.
namespace exp_chain_constants {

inline constexpr std::size_t dimension = 20;

/// Default coupling 1 / (10 e^3).
double coupling();
/// L = sqrt(202) / 10 * e^{sqrt 2}, valid on the unit ball with the default coupling.
double lipschitz();
/// mu = 9 / 10 * e^{-sqrt 2}, valid on the unit ball with the default coupling.
double strong_monotonicity();

} // namespace exp_chain_constants

/// g_i(x) = exp(x_i + c * x_{(i+1) mod n}), n >= 2.
struct ExpChain {
    std::size_t n;
    double coupling;
};

/// g(x) = A x + b.
struct Affine {
    Matrix a;
    Vector b;
};

/// A map g: Q -> R^n with optional declared constants.
class VIOperator {
public:
    enum class Kind { exp_chain, affine };

    static VIOperator exp_chain(std::size_t n, double coupling = exp_chain_constants::coupling(),
                                std::optional<double> lipschitz = std::nullopt,
                                std::optional<double> strong_monotonicity = std::nullopt);
    /// Exponential chain with the default coupling and the unit-ball constants attached.
    static VIOperator standard_exp_chain(std::size_t n = exp_chain_constants::dimension);
    static VIOperator affine(Matrix a, Vector b, std::optional<double> lipschitz = std::nullopt,
                             std::optional<double> strong_monotonicity = std::nullopt);

    Kind kind() const noexcept;
    std::string_view kind_name() const noexcept;
    std::size_t dimension() const noexcept;

    std::optional<double> declared_lipschitz() const noexcept { return lipschitz_; }
    std::optional<double> declared_strong_monotonicity() const noexcept { return mu_; }

    const ExpChain* as_exp_chain() const noexcept { return std::get_if<ExpChain>(&spec_); }
    const Affine* as_affine() const noexcept { return std::get_if<Affine>(&spec_); }

    /// Throws NumericalError if an exponent argument exceeds 700.
    Vector eval(const Vector& x) const;

    /// Componentwise magnitude of the terms summed when evaluating g at x:
    /// |A||x| + |b| for affine maps, |g(x)| for the exponential chain.
    /// Used to size rounding allowances.
    Vector eval_magnitude(const Vector& x) const;

private:
    VIOperator(std::variant<ExpChain, Affine> spec, std::optional<double> lipschitz,
               std::optional<double> mu);

    std::variant<ExpChain, Affine> spec_;
    std::optional<double> lipschitz_;
    std::optional<double> mu_;
};

inline Vector eval(const VIOperator& op, const Vector& x) { return op.eval(x); }

/// ||g(x) - g(y)||_* / ||x - y||. Throws std::invalid_argument when x == y in the B-norm.
double estimate_beta0(const VIOperator& op, const NormContext& ctx, const Vector& x, const Vector& y);

struct ConstantEstimate {
    double lipschitz;           // max ||g(x)-g(y)||_* / ||x-y||
    double strong_monotonicity; // min <g(x)-g(y), x-y> / ||x-y||^2
    std::size_t pairs;
};

/// Empirical L and mu from num_pairs random pairs in Q. Points are drawn
/// uniformly from the bounding box of Q and projected; pairs that coincide
/// are redrawn. Deterministic in the seed.
ConstantEstimate sample_constants(const VIOperator& op, const FeasibleSet& set, const NormContext& ctx,
                                  std::size_t num_pairs, std::uint64_t seed);

} // namespace visolve
