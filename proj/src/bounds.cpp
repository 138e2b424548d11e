#include "visolve/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace visolve {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("BoundCurve: ") + what + " must be positive");
}

} // namespace

BoundCurve BoundCurve::fixed_rate(double gamma) {
    require_positive(gamma, "gamma");
    return BoundCurve(Kind::fixed_rate, 1.0 / (1.0 + gamma));
}

BoundCurve BoundCurve::adaptive_rate(double beta_hat, double mu) {
    require_positive(beta_hat, "beta_hat");
    require_positive(mu, "mu");
    return BoundCurve(Kind::adaptive_rate, 1.0 / (1.0 + beta_hat / mu));
}

BoundCurve BoundCurve::baseline_rate(double gamma) {
    require_positive(gamma, "gamma");
    return BoundCurve(Kind::baseline_rate, 1.0 / (gamma * gamma));
}

double bound_value(const BoundCurve& curve, std::size_t k) {
    return std::exp(-curve.rate() * static_cast<double>(k));
}

} // namespace visolve
