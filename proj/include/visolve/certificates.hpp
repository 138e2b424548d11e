#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "visolve/engine.hpp"

namespace visolve {

struct Violation {
    std::string invariant;
    std::size_t k;
    std::string detail;
};

struct CertificateResult {
    std::size_t checks = 0;
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    void merge(const CertificateResult& other);
};

/// Tolerances for the run invariants.
struct CertificateTolerances {
    double monotonicity = 1e-9; ///< log-domain slack on Delta_{k+1} <= Delta_k
    double rate = 1e-9;         ///< relative slack on the rate certificates
    double distance = 1e-9;     ///< absolute slack on mu/2 ||y_bar - x*||^2 <= gap_bar
    double criterion = 1e-12;   ///< relative slack on the accepted line-search criterion
    double negative_gap = 1e-10;
};

/// Checks a finished run against the guarantees of its variant:
///  - gap_bar >= -1e-10 and y_bar feasible;
///  - Delta_k non-increasing (in log domain, with the rounding floor as absolute slack);
///  - accepted steps satisfy the line-search criterion (re-evaluated from the trace);
///  - beta_k < 2L when beta_0 <= 2L;
///  - cumulative trial budgets (halving: 2N + log2(2L/beta_0) + 1, non-decreasing: N + ceil(log2(2L/beta_0)));
///  - gap_bar_k <= Delta_0 exp(-k mu / (mu + beta_hat_k)) and the product form Delta_0 / S_k;
///  - with a known solution, mu/2 ||y_bar_k - x*||^2 <= gap_bar_k
///    (baseline: ||x_k - x*||^2 <= ||x_0 - x*||^2 exp(-k / gamma^2)).
/// When x_star is only a reference point within `x_star_radius` of the
/// solution, the distance check widens by the worst case over that ball.
/// Per-k vector checks need a report produced with keep_history.
CertificateResult check_certificates(const RunReport& report, const VIOperator& op, const FeasibleSet& set,
                                     const NormContext& ctx, const std::optional<Vector>& x_star,
                                     const CertificateTolerances& tol = {}, double x_star_radius = 0.0);

} // namespace visolve
