#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>

#include "visolve/engine.hpp"
#include "visolve/linalg.hpp"
#include "visolve/operators.hpp"
#include "visolve/sets.hpp"

namespace visolve {

/// A complete problem: operator, set, norm, constants, and a starting point.
struct Instance {
    std::string name;
    VIOperator op;
    FeasibleSet set;
    NormContext ctx;
    double mu;
    std::optional<double> lipschitz;
    Vector y0;
    std::optional<Vector> x_star; ///< known or reference solution
    double x_star_radius = 0.0;   ///< the true solution lies within this B-norm distance of x_star
};

/// The 20-dimensional exponential chain on the unit ball with y0 = (0.2, ..., 0.2).
Instance standard_exp_chain_instance();

/// Pair (e_1, e_2) used for the automatic beta0 on the standard instance.
AutoBeta0 standard_beta0_pair(std::size_t n = exp_chain_constants::dimension);

/// Uniform double in [lo, hi).
double uniform(std::mt19937_64& rng, double lo, double hi);

/// Uniform point in the Euclidean ball of the given center and radius.
Vector random_point_in_ball(std::mt19937_64& rng, const Vector& center, double radius);

/// Random feasible point of a bounded set (or of [-1, 1]^n for the whole space).
Vector random_feasible_point(std::mt19937_64& rng, const FeasibleSet& set);

/// A = m I + S + K with S symmetric PSD, K skew; b = -A x* for an interior x*.
/// The set/norm pair cycles through (ball, identity), (box, diagonal),
/// (whole space, dense) by `layout` % 3. Declared constants are valid upper
/// (L) and lower (mu) bounds in the chosen B-norm.
Instance random_affine_instance(std::mt19937_64& rng, std::size_t n, unsigned layout = 0);

/// Standard-coupling exponential chain of dimension n >= 2 on the unit ball,
/// random y0, with the unit-ball constants.
Instance random_exp_chain_instance(std::mt19937_64& rng, std::size_t n);

/// Solver configuration for an instance.
SolverConfig solver_config_for(const Instance& inst, Variant variant, std::size_t max_iters, Beta0 beta0);

} // namespace visolve
