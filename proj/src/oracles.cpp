#include "visolve/oracles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "visolve/errors.hpp"

namespace visolve {

namespace {

struct Incumbent {
    Vector point;
    double value;
};

// Evaluates the projected grid lo + step * i (i = 0..count-1 per axis) and
// keeps the best point seen.
void scan(const Objective& objective, const FeasibleSet& set, const NormContext& euclid, const Vector& lo,
          const Vector& step, std::size_t count, Incumbent& best) {
    const std::size_t n = lo.size();
    const std::size_t total = n == 1 ? count : count * count;
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector p = lo;
        p[0] += step[0] * static_cast<double>(idx % count);
        if (n == 2) p[1] += step[1] * static_cast<double>(idx / count);
        Vector q = project(set, euclid, p);
        const double v = objective(q);
        if (v > best.value) best = Incumbent{std::move(q), v};
    }
}

} // namespace

Vector brute_force_argmax(const Objective& objective, const FeasibleSet& set, std::size_t resolution,
                          std::size_t refinements) {
    const std::size_t n = set.dimension();
    if (n > 2) throw std::invalid_argument("brute_force_argmax: dimension must be <= 2");
    if (resolution < 100) throw std::invalid_argument("brute_force_argmax: resolution must be >= 100");
    const auto [lo, hi] = set.bounding_box();
    const NormContext euclid = NormContext::identity(n);

    Vector step = hi - lo;
    step *= 1.0 / static_cast<double>(resolution);
    Incumbent best{lo, -std::numeric_limits<double>::infinity()};
    scan(objective, set, euclid, lo, step, resolution + 1, best);

    for (std::size_t pass = 0; pass < refinements; ++pass) {
        const Vector center = best.point;
        const Vector window = step;
        step *= 0.1;
        scan(objective, set, euclid, center - window, step, 21, best);
    }
    return best.point;
}

Vector exact_affine_solution(const Matrix& a, const Vector& b, const FeasibleSet& set) {
    const std::size_t n = b.size();
    if (!a.square() || a.rows() != n || set.dimension() != n) {
        throw DimensionError("exact_affine_solution: shape mismatch");
    }
    // Augmented system [A | -b].
    std::vector<std::vector<double>> m(n, std::vector<double>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a(i, j);
        m[i][n] = -b[i];
    }
    const double tiny = 1e-14 * std::max(1.0, a.max_abs());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (std::abs(m[piv][col]) <= tiny) throw std::domain_error("exact_affine_solution: A is singular");
        std::swap(m[piv], m[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    Vector x = Vector::zeros(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = m[i][n];
        for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
        x[i] = s / m[i][i];
    }

    bool interior = true;
    switch (set.kind()) {
    case FeasibleSet::Kind::whole_space: break;
    case FeasibleSet::Kind::ball: interior = norm2(x - set.center()) < set.radius(); break;
    case FeasibleSet::Kind::box:
        for (std::size_t i = 0; i < n; ++i)
            interior = interior && set.lower()[i] < x[i] && x[i] < set.upper()[i];
        break;
    }
    if (!interior) throw std::domain_error("exact_affine_solution: unconstrained solution is not interior to the set");
    return x;
}

Matrix finite_difference_jacobian(const VIOperator& op, const Vector& x, double h) {
    const std::size_t n = x.size();
    Matrix j = Matrix::zeros(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        Vector xp = x;
        Vector xm = x;
        xp[col] += h;
        xm[col] -= h;
        const Vector d = op.eval(xp) - op.eval(xm);
        for (std::size_t row = 0; row < n; ++row) j(row, col) = d[row] / (2.0 * h);
    }
    return j;
}

ReplayedAverages replay_averages(const Vector& y0, std::span<const StepTrace> history, double mu,
                                 const VIOperator& op, const NormContext& ctx) {
    const std::size_t n = y0.size();
    std::vector<long double> sum_y(n, 0.0L);
    std::vector<long double> sum_g(n, 0.0L);
    long double sum_a = 0.0L;
    long double sum_w = 0.0L;
    long double s = 0.0L;

    auto accumulate = [&](long double lambda, const Vector& y) {
        const Vector g = op.eval(y);
        const Vector by = ctx.apply(y);
        long double gy = 0.0L;
        long double yby = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            sum_y[i] += lambda * y[i];
            sum_g[i] += lambda * g[i];
            gy += static_cast<long double>(g[i]) * y[i];
            yby += static_cast<long double>(by[i]) * y[i];
        }
        sum_a += lambda * gy;
        sum_w += lambda * yby;
        s += lambda;
    };

    accumulate(1.0L, y0);
    for (const StepTrace& step : history) {
        const long double lambda = static_cast<long double>(mu) / step.beta * s;
        accumulate(lambda, step.y);
    }

    ReplayedAverages out{std::log(s), std::move(sum_y), std::move(sum_g), sum_a / s, sum_w / s};
    for (auto& v : out.u_bar) v /= s;
    for (auto& v : out.g_bar) v /= s;
    return out;
}

} // namespace visolve
