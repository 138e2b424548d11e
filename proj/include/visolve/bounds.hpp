#pragma once

#include <cstddef>

namespace visolve {

/// Theoretical rate factors.
///  - fixed_rate:    exp(-k / (1 + gamma)), gamma = L / mu
///  - adaptive_rate: exp(-k / (1 + beta_hat / mu))
///  - baseline_rate: exp(-k / gamma^2)
class BoundCurve {
public:
    enum class Kind { fixed_rate, adaptive_rate, baseline_rate };

    static BoundCurve fixed_rate(double gamma);
    static BoundCurve fixed_rate(double lipschitz, double mu) { return fixed_rate(lipschitz / mu); }
    static BoundCurve adaptive_rate(double beta_hat, double mu);
    static BoundCurve baseline_rate(double gamma);

    Kind kind() const noexcept { return kind_; }
    /// Per-iteration exponent r with bound(k) = exp(-r k).
    double rate() const noexcept { return rate_; }

private:
    BoundCurve(Kind kind, double rate) : kind_(kind), rate_(rate) {}

    Kind kind_;
    double rate_;
};

double bound_value(const BoundCurve& curve, std::size_t k);

} // namespace visolve
