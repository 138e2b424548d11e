#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "visolve/errors.hpp"
#include "visolve/instances.hpp"
#include "visolve/linalg.hpp"

using namespace visolve;

namespace {

// B = c I + Q Q^T with random Q: symmetric positive definite by construction.
Matrix random_spd(std::mt19937_64& rng, std::size_t n) {
    Matrix q = Matrix::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) = uniform(rng, -1.0, 1.0);
    Matrix b = Matrix::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += q(i, k) * q(j, k);
            b(i, j) = s + (i == j ? 0.5 : 0.0);
        }
    return b;
}

Vector random_vector(std::mt19937_64& rng, std::size_t n, double scale = 3.0) {
    Vector v = Vector::zeros(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = uniform(rng, -scale, scale);
    return v;
}

} // namespace

TEST_CASE("vector construction rejects empty and non-finite input") {
    CHECK_THROWS_AS(Vector(std::vector<double>{}), DimensionError);
    CHECK_THROWS_AS((Vector{1.0, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
    CHECK_THROWS_AS((Vector{std::numeric_limits<double>::infinity()}), std::invalid_argument);
    CHECK(Vector::unit(3, 1) == Vector{0.0, 1.0, 0.0});
    CHECK_THROWS_AS(Vector::unit(3, 3), DimensionError);
}

TEST_CASE("inner product") {
    CHECK(inner(Vector{1.0, 0.0}, Vector{0.0, 1.0}) == 0.0);
    CHECK(inner(Vector{1.0, 2.0}, Vector{3.0, 4.0}) == 11.0);
    const Vector x{0.3, -1.7, 2.2};
    CHECK(inner(x, x) == doctest::Approx(norm2(x) * norm2(x)).epsilon(1e-15));
    CHECK_THROWS_AS(inner(Vector{1.0}, Vector{1.0, 2.0}), DimensionError);
}

TEST_CASE("primal norm") {
    CHECK(norm_b(NormContext::identity(2), Vector{3.0, 4.0}) == 5.0);
    CHECK(norm_b(NormContext::diagonal(Vector{4.0, 1.0}), Vector{1.0, 0.0}) == 2.0);
    std::mt19937_64 rng(11);
    const NormContext dense = NormContext::dense(random_spd(rng, 4));
    CHECK(norm_b(dense, Vector::zeros(4)) == 0.0);
    CHECK(norm_b(NormContext::diagonal(Vector{4.0, 1.0}), Vector::zeros(2)) == 0.0);
    CHECK_THROWS_AS(norm_b(NormContext::identity(2), Vector{1.0, 2.0, 3.0}), DimensionError);

    for (int s = 0; s < 50; ++s) {
        const Vector x = random_vector(rng, 4);
        const double alpha = uniform(rng, -5.0, 5.0);
        CHECK(norm_b(dense, alpha * x) == doctest::Approx(std::abs(alpha) * norm_b(dense, x)).epsilon(1e-13));
        CHECK(norm_b(dense, x) > 0.0);
    }
}

TEST_CASE("dual norm") {
    CHECK(dual_norm_b(NormContext::diagonal(Vector{4.0, 1.0}), Vector{1.0, 0.0}) == 0.5);
    std::mt19937_64 rng(12);
    const NormContext id = NormContext::identity(3);
    for (int s = 0; s < 20; ++s) {
        const Vector v = random_vector(rng, 3);
        CHECK(dual_norm_b(id, v) == norm_b(id, v));
    }
    // Generalized Cauchy-Schwarz on sampled pairs, for every kind of B.
    const NormContext contexts[] = {NormContext::identity(5), NormContext::diagonal(Vector{0.2, 1.0, 3.0, 7.0, 0.5}),
                                    NormContext::dense(random_spd(rng, 5))};
    for (const NormContext& ctx : contexts) {
        for (int s = 0; s < 200; ++s) {
            const Vector x = random_vector(rng, 5);
            const Vector y = random_vector(rng, 5);
            const double lhs = inner(y, x) * inner(y, x);
            const double rhs = std::pow(dual_norm_b(ctx, y), 2) * std::pow(norm_b(ctx, x), 2);
            CHECK(lhs <= rhs * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("applying the inverse of B") {
    const Vector s{8.0, 3.0};
    CHECK(apply_b_inv(NormContext::identity(2), s) == s);
    CHECK(apply_b_inv(NormContext::diagonal(Vector{4.0, 1.0}), s) == Vector{2.0, 3.0});

    std::mt19937_64 rng(13);
    for (std::size_t n : {1u, 2u, 6u, 15u}) {
        const Matrix b = random_spd(rng, n);
        const NormContext ctx = NormContext::dense(b);
        for (int t = 0; t < 20; ++t) {
            const Vector v = random_vector(rng, n);
            const Vector back = b * apply_b_inv(ctx, v);
            CHECK(norm2(back - v) <= 1e-12 * norm2(v) * std::max(1.0, b.frobenius_norm()));
            CHECK(norm2(ctx.apply(v) - b * v) <= 1e-14 * norm2(b * v) + 1e-15);
        }
    }
}

TEST_CASE("norm context validation") {
    CHECK_THROWS_AS(NormContext::diagonal(Vector{1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(NormContext::diagonal(Vector{1.0, -2.0}), ConfigError);
    CHECK_THROWS_AS(NormContext::dense(Matrix{{1.0, 0.5}, {0.4, 1.0}}), ConfigError); // not symmetric
    CHECK_THROWS_AS(NormContext::dense(Matrix{{1.0, 2.0}, {2.0, 1.0}}), ConfigError); // indefinite
    CHECK_THROWS_AS(NormContext::dense(Matrix{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}}), ConfigError);
    CHECK_NOTHROW(NormContext::dense(Matrix{{2.0, 1.0}, {1.0, 2.0}}));
    // Symmetry is judged relative to the entries: tiny asymmetry from rounding passes.
    CHECK_NOTHROW(NormContext::dense(Matrix{{2.0, 1.0}, {1.0 + 1e-15, 2.0}}));
}
