#include "visolve/instances.hpp"

#include <cmath>

#include "visolve/oracles.hpp"

namespace visolve {

Instance standard_exp_chain_instance() {
    const std::size_t n = exp_chain_constants::dimension;
    return Instance{"standard-exp-chain",
                    VIOperator::standard_exp_chain(n),
                    FeasibleSet::unit_ball(n),
                    NormContext::identity(n),
                    exp_chain_constants::strong_monotonicity(),
                    exp_chain_constants::lipschitz(),
                    Vector::filled(n, 0.2),
                    std::nullopt};
}

AutoBeta0 standard_beta0_pair(std::size_t n) { return AutoBeta0{Vector::unit(n, 0), Vector::unit(n, 1)}; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Vector random_point_in_ball(std::mt19937_64& rng, const Vector& center, double radius) {
    const std::size_t n = center.size();
    // Direction drawn from the cube: not exactly uniform, adequate for test instances.
    Vector dir = Vector::zeros(n);
    double len = 0.0;
    while (len < 1e-12) {
        for (std::size_t i = 0; i < n; ++i) dir[i] = uniform(rng, -1.0, 1.0);
        len = norm2(dir);
    }
    const double r = radius * std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(n));
    return center + (r / len) * dir;
}

Vector random_feasible_point(std::mt19937_64& rng, const FeasibleSet& set) {
    const std::size_t n = set.dimension();
    switch (set.kind()) {
    case FeasibleSet::Kind::ball: return random_point_in_ball(rng, set.center(), set.radius());
    case FeasibleSet::Kind::box: {
        Vector p = set.lower();
        for (std::size_t i = 0; i < n; ++i) p[i] = uniform(rng, set.lower()[i], set.upper()[i]);
        return p;
    }
    case FeasibleSet::Kind::whole_space: break;
    }
    Vector p = Vector::zeros(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = uniform(rng, -1.0, 1.0);
    return p;
}

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale) {
    Matrix m = Matrix::zeros(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, -scale, scale);
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::zeros(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

} // namespace

Instance random_affine_instance(std::mt19937_64& rng, std::size_t n, unsigned layout) {
    const double m = uniform(rng, 0.2, 1.0);
    const Matrix p = random_matrix(rng, n, 1.0 / std::sqrt(static_cast<double>(n)));
    const Matrix s = multiply(p, p.transpose());
    const Matrix r = random_matrix(rng, n, 0.5);
    Matrix a = Matrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? m : 0.0) + s(i, j) + (r(i, j) - r(j, i));

    // <A v, v> >= m ||v||^2 by construction; convert both constants to the B-norm.
    const unsigned kind = layout % 3;
    FeasibleSet set = FeasibleSet::whole_space(n);
    NormContext ctx = NormContext::identity(n);
    double mu = m;
    double lipschitz = a.frobenius_norm();
    Vector x_star = Vector::zeros(n);

    if (kind == 0) {
        set = FeasibleSet::unit_ball(n);
        x_star = random_point_in_ball(rng, Vector::zeros(n), 0.5);
    } else if (kind == 1) {
        Vector d = Vector::zeros(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = uniform(rng, 0.5, 2.0);
        double d_max = 0.0;
        Matrix scaled = a; // D^{-1/2} A D^{-1/2}
        for (std::size_t i = 0; i < n; ++i) {
            d_max = std::max(d_max, d[i]);
            for (std::size_t j = 0; j < n; ++j) scaled(i, j) = a(i, j) / std::sqrt(d[i] * d[j]);
        }
        mu = m / d_max;
        lipschitz = scaled.frobenius_norm();
        set = FeasibleSet::box(Vector::filled(n, -1.0), Vector::filled(n, 1.0));
        ctx = NormContext::diagonal(d);
        for (std::size_t i = 0; i < n; ++i) x_star[i] = uniform(rng, -0.5, 0.5);
    } else {
        // B = c I + Q Q^T, so lambda_min(B) >= c and lambda_max(B) <= ||B||_F.
        const double c = uniform(rng, 0.5, 1.5);
        const Matrix q = random_matrix(rng, n, 0.5 / std::sqrt(static_cast<double>(n)));
        Matrix b = multiply(q, q.transpose());
        for (std::size_t i = 0; i < n; ++i) b(i, i) += c;
        mu = m / b.frobenius_norm();
        lipschitz = a.frobenius_norm() / c;
        ctx = NormContext::dense(b);
        for (std::size_t i = 0; i < n; ++i) x_star[i] = uniform(rng, -1.0, 1.0);
    }

    Vector b = -(a * x_star);
    Vector solved = exact_affine_solution(a, b, set);
    Vector y0 = random_feasible_point(rng, set);
    return Instance{"affine-n" + std::to_string(n) + "-" + std::string(set.kind_name()),
                    VIOperator::affine(a, b, lipschitz, mu),
                    set,
                    ctx,
                    mu,
                    lipschitz,
                    y0,
                    solved};
}

Instance random_exp_chain_instance(std::mt19937_64& rng, std::size_t n) {
    Vector y0 = random_point_in_ball(rng, Vector::zeros(n), 1.0);
    return Instance{"exp-chain-n" + std::to_string(n),
                    VIOperator::standard_exp_chain(n),
                    FeasibleSet::unit_ball(n),
                    NormContext::identity(n),
                    exp_chain_constants::strong_monotonicity(),
                    exp_chain_constants::lipschitz(),
                    y0,
                    std::nullopt};
}

SolverConfig solver_config_for(const Instance& inst, Variant variant, std::size_t max_iters, Beta0 beta0) {
    SolverConfig cfg;
    cfg.variant = variant;
    cfg.mu = inst.mu;
    cfg.lipschitz = inst.lipschitz;
    cfg.beta0 = std::move(beta0);
    cfg.y0 = inst.y0;
    cfg.max_iters = max_iters;
    return cfg;
}

} // namespace visolve
