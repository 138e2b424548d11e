#include <cmath>
#include <random>

#include "doctest.h"
#include "visolve/errors.hpp"
#include "visolve/instances.hpp"
#include "visolve/operators.hpp"
#include "visolve/oracles.hpp"

using namespace visolve;

namespace {
const double kC = 1.0 / (10.0 * std::exp(3.0));
} // namespace

TEST_CASE("exp-chain constants") {
    CHECK(exp_chain_constants::coupling() == doctest::Approx(4.9787e-3).epsilon(1e-4));
    CHECK(exp_chain_constants::lipschitz() == doctest::Approx(std::sqrt(202.0) / 10.0 * std::exp(std::sqrt(2.0))));
    CHECK(exp_chain_constants::lipschitz() == doctest::Approx(5.8461).epsilon(1e-4));
    CHECK(exp_chain_constants::strong_monotonicity() == doctest::Approx(0.9 * std::exp(-std::sqrt(2.0))));
    CHECK(exp_chain_constants::strong_monotonicity() == doctest::Approx(0.21881).epsilon(1e-4));
}

TEST_CASE("exp-chain evaluation") {
    const VIOperator op = VIOperator::standard_exp_chain(20);
    CHECK(op.eval(Vector::zeros(20)) == Vector::filled(20, 1.0));

    const Vector g = op.eval(Vector::unit(20, 0));
    CHECK(g[0] == doctest::Approx(2.7182818).epsilon(1e-7));
    CHECK(g[19] == doctest::Approx(1.0049911).epsilon(1e-7));
    for (std::size_t i = 1; i < 19; ++i) CHECK(g[i] == 1.0);

    // Component i couples to i+1 (cyclically).
    const VIOperator small = VIOperator::exp_chain(3, 0.5);
    const Vector x{0.1, -0.2, 0.3};
    const Vector h = small.eval(x);
    CHECK(h[0] == doctest::Approx(std::exp(0.1 - 0.1)));
    CHECK(h[1] == doctest::Approx(std::exp(-0.2 + 0.15)));
    CHECK(h[2] == doctest::Approx(std::exp(0.3 + 0.05)));

    CHECK_THROWS_AS(small.eval(Vector{701.0, 0.0, 0.0}), NumericalError);
    CHECK_THROWS_AS(small.eval(Vector{1.0, 2.0}), DimensionError);
    CHECK_THROWS_AS(VIOperator::exp_chain(1), ConfigError);
}

TEST_CASE("affine evaluation") {
    const VIOperator id = VIOperator::affine(Matrix::identity(3), Vector::zeros(3));
    const Vector x{1.5, -2.0, 0.25};
    CHECK(id.eval(x) == x);
    const VIOperator op = VIOperator::affine(Matrix{{1.0, 2.0}, {-2.0, 3.0}}, Vector{1.0, -1.0});
    CHECK(op.eval(Vector{1.0, 1.0}) == Vector{4.0, 0.0});
}

TEST_CASE("declared constants are checked") {
    CHECK_THROWS_AS(VIOperator::affine(Matrix::identity(1), Vector{0.0}, 1.0, 2.0), ConfigError);
    CHECK_THROWS_AS(VIOperator::affine(Matrix::identity(1), Vector{0.0}, -1.0, std::nullopt), ConfigError);
    CHECK_THROWS_AS(VIOperator::affine(Matrix::identity(1), Vector{0.0}, std::nullopt, 0.0), ConfigError);
    CHECK_NOTHROW(VIOperator::affine(Matrix::identity(1), Vector{0.0}, 1.0, 1.0));
}

TEST_CASE("initial beta estimate") {
    const std::size_t n = 20;
    const VIOperator op = VIOperator::standard_exp_chain(n);
    const NormContext id = NormContext::identity(n);
    const double beta0 = estimate_beta0(op, id, Vector::unit(n, 0), Vector::unit(n, 1));

    // Hand computation: g(e1) - g(e2) = (e - e^c, 1 - e, 0, ..., 0, e^c - 1), ||e1 - e2|| = sqrt 2.
    const double e = std::exp(1.0);
    const double ec = std::exp(kC);
    const double hand = std::sqrt((e - ec) * (e - ec) + (1 - e) * (1 - e) + (ec - 1) * (ec - 1)) / std::sqrt(2.0);
    CHECK(beta0 == doctest::Approx(hand).epsilon(1e-14));
    CHECK(std::abs(beta0 - 1.7158) <= 5e-4);

    const double lip = 2.5;
    const VIOperator scaled = VIOperator::affine(Matrix::diagonal(Vector::filled(3, lip)), Vector{1.0, 2.0, 3.0});
    CHECK(estimate_beta0(scaled, NormContext::identity(3), Vector{0.1, 0.0, 0.0}, Vector{-1.0, 4.0, 2.0}) ==
          doctest::Approx(lip));

    CHECK_THROWS_AS(estimate_beta0(op, id, Vector::unit(n, 0), Vector::unit(n, 0)), std::invalid_argument);

    std::mt19937_64 rng(31);
    const FeasibleSet ball = FeasibleSet::unit_ball(n);
    for (int s = 0; s < 1000; ++s) {
        const Vector x = random_feasible_point(rng, ball);
        const Vector y = random_feasible_point(rng, ball);
        CHECK(estimate_beta0(op, id, x, y) <= exp_chain_constants::lipschitz());
    }
}

TEST_CASE("sampled constants of a diagonal affine operator") {
    const VIOperator op = VIOperator::affine(Matrix{{1.0, 0.0}, {0.0, 3.0}}, Vector{0.0, 0.0});
    const FeasibleSet box = FeasibleSet::box(Vector{-1.0, -1.0}, Vector{1.0, 1.0});
    const NormContext id = NormContext::identity(2);
    const ConstantEstimate few = sample_constants(op, box, id, 50, 7);
    const ConstantEstimate many = sample_constants(op, box, id, 20000, 7);
    CHECK(many.pairs == 20000);
    CHECK(many.lipschitz <= 3.0 + 1e-12);
    CHECK(many.strong_monotonicity >= 1.0 - 1e-12);
    CHECK(many.lipschitz == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(many.strong_monotonicity == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(3.0 - many.lipschitz <= 3.0 - few.lipschitz + 1e-15);

    // Deterministic given the seed.
    const ConstantEstimate again = sample_constants(op, box, id, 50, 7);
    CHECK(again.lipschitz == few.lipschitz);
    CHECK(again.strong_monotonicity == few.strong_monotonicity);

    CHECK_THROWS_AS(sample_constants(op, box, id, 0, 7), std::invalid_argument);
    CHECK_THROWS_AS(sample_constants(op, FeasibleSet::whole_space(2), id, 10, 7), ConfigError);
}

TEST_CASE("exp-chain constants hold on the unit ball") {
    const std::size_t n = 20;
    const ConstantEstimate est = sample_constants(VIOperator::standard_exp_chain(n), FeasibleSet::unit_ball(n),
                                                  NormContext::identity(n), 5000, 99);
    CHECK(est.strong_monotonicity >= exp_chain_constants::strong_monotonicity());
    CHECK(est.lipschitz <= exp_chain_constants::lipschitz());
}

TEST_CASE("exp-chain Jacobian is not symmetric") {
    const VIOperator op = VIOperator::standard_exp_chain(20);
    const Matrix j = finite_difference_jacobian(op, Vector::zeros(20));
    CHECK(j(0, 1) == doctest::Approx(kC).epsilon(1e-6));
    CHECK(std::abs(j(1, 0)) <= 1e-9);
    CHECK(j(0, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(j(19, 0) == doctest::Approx(kC).epsilon(1e-6));
}

TEST_CASE("random affine instances are strongly monotone with their declared constant") {
    std::mt19937_64 rng(33);
    for (unsigned layout = 0; layout < 2; ++layout) {
        for (std::size_t n : {1u, 2u, 5u}) {
            const Instance inst = random_affine_instance(rng, n, layout);
            const ConstantEstimate est = sample_constants(inst.op, inst.set, inst.ctx, 2000, 5);
            CHECK(est.strong_monotonicity >= inst.mu * (1.0 - 1e-12));
            CHECK(est.lipschitz <= *inst.lipschitz * (1.0 + 1e-12));
            REQUIRE(inst.x_star);
            CHECK(norm_inf(inst.op.eval(*inst.x_star)) <= 1e-12);
        }
    }
}
