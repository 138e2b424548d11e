#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "visolve/certificates.hpp"
#include "visolve/instances.hpp"

namespace visolve {

struct VerifyOptions {
    std::uint64_t seed = 1;
    /// Multiplies the strong-monotonicity constant handed to the solver.
    /// Anything other than 1 is a deliberate corruption (negative control).
    double mu_scale = 1.0;
    std::size_t random_instances = 60;
    std::size_t iterations = 30;
};

struct SuiteFailure {
    std::string check;
    std::string detail;
    nlohmann::json instance; ///< replayable experiment file, or null
};

struct SuiteReport {
    std::string name;
    std::size_t checks = 0;
    std::vector<SuiteFailure> failures;

    bool ok() const noexcept { return failures.empty(); }
};

/// projections, operators, engine, certificates, oracles.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws ConfigError for an unknown name.
std::vector<SuiteReport> run_suites(std::string_view name, const VerifyOptions& options);

/// Member `index` of the randomized certificate family: cycles through affine
/// n in {1, 2, 5, 20} (ball/identity, box/diagonal, whole-space/dense) and the
/// exponential chain with n in {2, 5, 20} (with a reference solution).
Instance certificate_instance(std::uint64_t seed, std::size_t index);

/// Sets x_star to the output of a long adaptive-halving run with the
/// instance's own mu, and x_star_radius to sqrt(2 (gap + floor) / mu), which
/// bounds its distance to the true solution.
void attach_reference_solution(Instance& inst, std::size_t iterations = 300);

/// beta0 used for a certificate instance: L 10^u with u uniform in [-3, 0.3],
/// so beta0 <= 2L and every budget applies.
double certificate_beta0(std::uint64_t seed, std::size_t index, double lipschitz);

/// Runs one variant with history and checks every certificate. `mu_scale`
/// corrupts the solver's mu (the instance itself is left alone).
CertificateResult certify(const Instance& inst, Variant variant, std::size_t iterations, const Beta0& beta0,
                          double mu_scale = 1.0);

} // namespace visolve
