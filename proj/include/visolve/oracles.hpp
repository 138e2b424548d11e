#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "visolve/engine.hpp"
#include "visolve/linalg.hpp"
#include "visolve/operators.hpp"
#include "visolve/sets.hpp"

namespace visolve {

using Objective = std::function<double(const Vector&)>;

/// Grid search over the bounding box of a bounded set of dimension <= 2.
/// Grid points are projected (Euclidean) onto the set, then the incumbent is
/// refined `refinements` times on a 10x finer local grid. For a strongly
/// concave objective the result lies within one refined cell of the true maximizer.
Vector brute_force_argmax(const Objective& objective, const FeasibleSet& set, std::size_t resolution,
                          std::size_t refinements = 2);

/// Solves A x = -b by Gaussian elimination with partial pivoting and checks
/// that the solution is interior to the set. Throws std::domain_error when A
/// is singular or the solution is not interior.
Vector exact_affine_solution(const Matrix& a, const Vector& b, const FeasibleSet& set);

/// Central-difference Jacobian, J(i, j) = d g_i / d x_j.
Matrix finite_difference_jacobian(const VIOperator& op, const Vector& x, double h = 1e-6);

/// Normalized averages recomputed from scratch in extended precision.
struct ReplayedAverages {
    long double log_S;
    std::vector<long double> u_bar;
    std::vector<long double> g_bar;
    long double a_bar;
    long double w_bar;
};

/// Rebuilds u_bar, g_bar, a_bar, w_bar from y0 and the accepted (y, beta)
/// pairs with explicit weights lambda_0 = 1, lambda_{i+1} = mu / beta_{i+1} S_i.
/// Operator values are re-evaluated rather than taken from the trace.
ReplayedAverages replay_averages(const Vector& y0, std::span<const StepTrace> history, double mu,
                                 const VIOperator& op, const NormContext& ctx);

} // namespace visolve
