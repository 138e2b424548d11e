#include "visolve/sets.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "visolve/errors.hpp"

namespace visolve {

FeasibleSet FeasibleSet::whole_space(std::size_t n) {
    if (n == 0) throw DimensionError("FeasibleSet: dimension must be at least 1");
    return FeasibleSet(Kind::whole_space, n, Vector::zeros(n), Vector::zeros(n), 0.0);
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("FeasibleSet: ball radius must be positive and finite");
    }
    const std::size_t n = center.size();
    return FeasibleSet(Kind::ball, n, std::move(center), Vector::zeros(n), radius);
}

FeasibleSet FeasibleSet::unit_ball(std::size_t n) { return ball(Vector::zeros(n), 1.0); }

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
    if (lower.size() != upper.size()) throw DimensionError("FeasibleSet: box bounds differ in length");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) {
            throw ConfigError("FeasibleSet: box requires lower <= upper (coordinate " + std::to_string(i) +
                              ")");
        }
    }
    const std::size_t n = lower.size();
    return FeasibleSet(Kind::box, n, std::move(lower), std::move(upper), 0.0);
}

std::string_view FeasibleSet::kind_name() const noexcept {
    switch (kind_) {
    case Kind::whole_space: return "whole-space";
    case Kind::ball: return "ball";
    case Kind::box: return "box";
    }
    return "unknown";
}

std::pair<Vector, Vector> FeasibleSet::bounding_box() const {
    switch (kind_) {
    case Kind::ball: return {a_ - Vector::filled(n_, radius_), a_ + Vector::filled(n_, radius_)};
    case Kind::box: return {a_, b_};
    case Kind::whole_space: break;
    }
    throw ConfigError("FeasibleSet: whole-space has no bounding box");
}

bool projection_supported(const FeasibleSet& set, const NormContext& ctx) noexcept {
    switch (set.kind()) {
    case FeasibleSet::Kind::whole_space: return true;
    case FeasibleSet::Kind::ball: return ctx.kind() == NormContext::Kind::identity;
    case FeasibleSet::Kind::box: return ctx.kind() != NormContext::Kind::dense;
    }
    return false;
}

void require_projection_support(const FeasibleSet& set, const NormContext& ctx) {
    if (set.dimension() != ctx.dimension()) {
        throw DimensionError("set dimension " + std::to_string(set.dimension()) +
                             " does not match norm dimension " + std::to_string(ctx.dimension()));
    }
    if (!projection_supported(set, ctx)) {
        throw ConfigError("unsupported projection: set kind '" + std::string(set.kind_name()) +
                          "' with norm kind '" + std::string(ctx.kind_name()) + "'");
    }
}

Vector project(const FeasibleSet& set, const NormContext& ctx, const Vector& z) {
    require_projection_support(set, ctx);
    if (z.size() != set.dimension()) throw DimensionError("project: point dimension mismatch");

    switch (set.kind()) {
    case FeasibleSet::Kind::whole_space: return z;
    case FeasibleSet::Kind::ball: {
        Vector d = z - set.center();
        const double r = norm2(d);
        if (r <= set.radius()) return z;
        d *= set.radius() / r;
        return set.center() + d;
    }
    case FeasibleSet::Kind::box: {
        // Diagonal B makes the objective separable, so clamping is exact.
        Vector x = z;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], set.lower()[i], set.upper()[i]);
        return x;
    }
    }
    return z;
}

bool contains(const FeasibleSet& set, const NormContext& /*ctx*/, const Vector& x, double tol) {
    if (x.size() != set.dimension()) throw DimensionError("contains: point dimension mismatch");
    switch (set.kind()) {
    case FeasibleSet::Kind::whole_space: return true;
    case FeasibleSet::Kind::ball: return norm2(x - set.center()) <= set.radius() + tol;
    case FeasibleSet::Kind::box:
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] < set.lower()[i] - tol || x[i] > set.upper()[i] + tol) return false;
        }
        return true;
    }
    return false;
}

} // namespace visolve
