#pragma once

#include <cstdint>
#include <string_view>

#include "bregfw/bregman.hpp"
#include "bregfw/types.hpp"

namespace bregfw {

enum class SetKind { UnitSimplex, L1Ball, L2Ball };

std::string_view to_string(SetKind kind);
SetKind set_kind_from_string(std::string_view name);

struct LmoResult {
    Vector vertex;
    /// L2Ball only: the gradient was numerically zero and the center was returned.
    bool zero_gradient = false;
};

/// Compact convex feasible set with a linear minimization oracle.
class FeasibleSet {
public:
    static FeasibleSet unit_simplex(long dim);
    static FeasibleSet l1_ball(Vector center, double radius);
    static FeasibleSet l2_ball(Vector center, double radius);

    SetKind kind() const { return kind_; }
    long dim() const { return dim_; }
    const Vector& center() const { return center_; }
    double radius() const { return radius_; }

    /// argmin over the set of <g, z>. Ties go to the lowest index.
    LmoResult lmo(const Vector& g) const;

    bool contains(const Vector& x, double tol) const;

    /// Natural starting point: barycenter of the simplex, center of a ball.
    Vector default_start() const;

    /// Euclidean diameter of the set.
    double diameter() const;

private:
    FeasibleSet(SetKind kind, long dim, Vector center, double radius)
        : kind_(kind), dim_(dim), center_(std::move(center)), radius_(radius) {}

    SetKind kind_;
    long dim_;
    Vector center_;
    double radius_ = 0.0;
};

struct DiameterOptions {
    /// NegativeEntropy on the simplex: restrict to {x : x_i >= floor}. 0 means unrestricted.
    double interior_floor = 0.0;
    int samples = 100000;
    double safety = 1.1;
    std::uint64_t seed = 0;
};

struct DiameterBound {
    /// R^2 with V(x, y) <= R^2 / 2 on the set.
    double R2 = 0.0;
    /// True when R^2 is a sampled estimate rather than a closed form.
    bool empirical = false;
};

/// Closed form for SquaredEuclidean (R^2 = diameter^2); otherwise
/// `safety` times the largest divergence seen over sampled pairs.
DiameterBound diameter_bound(const FeasibleSet& set, const BregmanDivergence& d,
                             const DiameterOptions& opts = {});

} // namespace bregfw
