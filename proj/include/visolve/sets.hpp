#pragma once

#include <cstddef>
#include <string_view>
#include <utility>

#include "visolve/linalg.hpp"

namespace visolve {

/// Closed convex feasible set Q: the whole space, a Euclidean ball, or a box.
class FeasibleSet {
public:
    enum class Kind { whole_space, ball, box };

    static FeasibleSet whole_space(std::size_t n);
    static FeasibleSet ball(Vector center, double radius);
    static FeasibleSet unit_ball(std::size_t n);
    static FeasibleSet box(Vector lower, Vector upper);

    Kind kind() const noexcept { return kind_; }
    std::string_view kind_name() const noexcept;
    std::size_t dimension() const noexcept { return n_; }

    // Only meaningful for the matching kind.
    const Vector& center() const noexcept { return a_; }
    double radius() const noexcept { return radius_; }
    const Vector& lower() const noexcept { return a_; }
    const Vector& upper() const noexcept { return b_; }

    bool bounded() const noexcept { return kind_ != Kind::whole_space; }
    /// Smallest axis-aligned box containing the set. Throws ConfigError when unbounded.
    std::pair<Vector, Vector> bounding_box() const;

private:
    FeasibleSet(Kind kind, std::size_t n, Vector a, Vector b, double radius)
        : kind_(kind), n_(n), a_(std::move(a)), b_(std::move(b)), radius_(radius) {}

    Kind kind_;
    std::size_t n_;
    Vector a_;
    Vector b_;
    double radius_;
};

/// True when project() has a closed form for this (set, B) pair:
/// ball needs identity B, box needs identity or diagonal B, whole space takes any B.
bool projection_supported(const FeasibleSet& set, const NormContext& ctx) noexcept;

/// Throws ConfigError naming both kinds when the pair is unsupported.
void require_projection_support(const FeasibleSet& set, const NormContext& ctx);

/// argmin_{x in Q} ||x - z||_B.
Vector project(const FeasibleSet& set, const NormContext& ctx, const Vector& z);

/// Whether x violates the constraints of Q by at most tol (Euclidean distance
/// for the ball, largest coordinate violation for the box).
bool contains(const FeasibleSet& set, const NormContext& ctx, const Vector& x, double tol);

} // namespace visolve
