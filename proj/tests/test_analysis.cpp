#include <cmath>
#include <random>

#include "doctest.h"
#include "visolve/bounds.hpp"
#include "visolve/errors.hpp"
#include "visolve/instances.hpp"
#include "visolve/oracles.hpp"

using namespace visolve;

namespace {
const double kMu = 0.9 * std::exp(-std::sqrt(2.0));
const double kLip = std::sqrt(202.0) / 10.0 * std::exp(std::sqrt(2.0));
} // namespace

TEST_CASE("rate curves on the standard constants") {
    const BoundCurve fixed = BoundCurve::fixed_rate(kLip, kMu);
    CHECK(bound_value(fixed, 3) == doctest::Approx(0.89742).epsilon(1e-4));
    CHECK(bound_value(fixed, 45) == doctest::Approx(0.19721).epsilon(1e-4));
    CHECK(bound_value(fixed, 0) == 1.0);

    // Non-decreasing variant with beta_hat = beta0 from the auto estimate.
    const BoundCurve adaptive = BoundCurve::adaptive_rate(1.7157917124336948, kMu);
    CHECK(bound_value(adaptive, 3) == doctest::Approx(0.71228).epsilon(1e-4));
    CHECK(bound_value(adaptive, 0) == 1.0);

    const BoundCurve base = BoundCurve::baseline_rate(kLip / kMu);
    CHECK(bound_value(base, 1) == doctest::Approx(std::exp(-kMu * kMu / (kLip * kLip))));
    CHECK(base.kind() == BoundCurve::Kind::baseline_rate);
}

TEST_CASE("rate curves are multiplicative in k") {
    std::mt19937_64 rng(3);
    for (int s = 0; s < 50; ++s) {
        const BoundCurve c = BoundCurve::adaptive_rate(uniform(rng, 0.01, 50.0), uniform(rng, 0.01, 5.0));
        const std::size_t a = rng() % 60;
        const std::size_t b = rng() % 60;
        CHECK(bound_value(c, a + b) == doctest::Approx(bound_value(c, a) * bound_value(c, b)).epsilon(1e-12));
        CHECK(bound_value(c, a + 1) <= bound_value(c, a));
    }
}

TEST_CASE("rate curve arguments") {
    CHECK_THROWS_AS(BoundCurve::fixed_rate(0.0), std::invalid_argument);
    CHECK_THROWS_AS(BoundCurve::adaptive_rate(1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(BoundCurve::baseline_rate(NAN), std::invalid_argument);
}

TEST_CASE("grid maximizer on hand-solvable objectives") {
    // Unconstrained peak inside the disc.
    const FeasibleSet disc = FeasibleSet::unit_ball(2);
    const Vector peak{0.3, -0.4};
    const Vector a = brute_force_argmax([&](const Vector& z) { return -std::pow(norm2(z - peak), 2); }, disc, 400, 4);
    CHECK(norm_inf(a - peak) <= 1e-6);
    // Peak outside: the maximizer is the radial projection.
    const Vector far{3.0, 4.0};
    const Vector b = brute_force_argmax([&](const Vector& z) { return -std::pow(norm2(z - far), 2); }, disc, 400, 4);
    CHECK(norm_inf(b - Vector{0.6, 0.8}) <= 1e-6);
    // Box corner and 1-D interval.
    const FeasibleSet box = FeasibleSet::box(Vector{-1.0, 0.0}, Vector{1.0, 2.0});
    const Vector c = brute_force_argmax([](const Vector& z) { return z[0] + 2.0 * z[1]; }, box, 100);
    CHECK(c == Vector{1.0, 2.0});
    const FeasibleSet seg = FeasibleSet::box(Vector{0.0}, Vector{1.0});
    const Vector d = brute_force_argmax([](const Vector& z) { return -(z[0] - 0.123456) * (z[0] - 0.123456); }, seg,
                                        400, 4);
    CHECK(d[0] == doctest::Approx(0.123456).epsilon(1e-6));

    CHECK_THROWS_AS(brute_force_argmax([](const Vector&) { return 0.0; }, FeasibleSet::unit_ball(3), 400),
                    std::invalid_argument);
    CHECK_THROWS_AS(brute_force_argmax([](const Vector&) { return 0.0; }, disc, 10), std::invalid_argument);
    CHECK_THROWS(brute_force_argmax([](const Vector&) { return 0.0; }, FeasibleSet::whole_space(2), 400));
}

TEST_CASE("exact affine solutions") {
    const Matrix a{{2.0, 1.0}, {-1.0, 3.0}};
    const Vector x_star{0.1, -0.2};
    const Vector b = -(a * x_star);
    const Vector x = exact_affine_solution(a, b, FeasibleSet::unit_ball(2));
    CHECK(norm_inf(x - x_star) <= 1e-15);
    CHECK(exact_affine_solution(Matrix{{2.0}}, Vector{-1.0}, FeasibleSet::whole_space(1))[0] == 0.5);
    // Needs pivoting: zero leading entry.
    const Vector p = exact_affine_solution(Matrix{{0.0, 1.0}, {1.0, 0.0}}, Vector{-0.25, -0.5}, FeasibleSet::unit_ball(2));
    CHECK(p == Vector{0.5, 0.25});

    CHECK_THROWS_AS(exact_affine_solution(Matrix{{1.0, 2.0}, {2.0, 4.0}}, Vector{0.0, 0.0}, FeasibleSet::unit_ball(2)),
                    std::domain_error);
    CHECK_THROWS_AS(exact_affine_solution(Matrix{{1.0}}, Vector{-5.0}, FeasibleSet::unit_ball(1)), std::domain_error);
    CHECK_THROWS_AS(exact_affine_solution(Matrix{{1.0}}, Vector{0.0, 0.0}, FeasibleSet::unit_ball(1)), DimensionError);
}

TEST_CASE("finite-difference Jacobian of an affine map is its matrix") {
    const Matrix a{{2.0, 1.0, 0.0}, {-1.0, 3.0, 0.5}, {0.0, 0.0, 1.0}};
    const Matrix j = finite_difference_jacobian(VIOperator::affine(a, Vector{1.0, 2.0, 3.0}), Vector{0.3, -0.1, 0.7});
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(j(r, c) == doctest::Approx(a(r, c)).epsilon(1e-8));
}
