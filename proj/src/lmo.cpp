#include "bregfw/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bregfw {

std::string_view to_string(SetKind kind) {
    switch (kind) {
    case SetKind::UnitSimplex: return "simplex";
    case SetKind::L1Ball: return "l1ball";
    case SetKind::L2Ball: return "l2ball";
    }
    return "unknown";
}

SetKind set_kind_from_string(std::string_view name) {
    if (name == "simplex") return SetKind::UnitSimplex;
    if (name == "l1ball") return SetKind::L1Ball;
    if (name == "l2ball") return SetKind::L2Ball;
    throw ConfigError("unknown set kind '" + std::string(name) + "'");
}

FeasibleSet FeasibleSet::unit_simplex(long dim) {
    if (dim < 1) throw ConfigError("simplex dimension must be >= 1");
    return {SetKind::UnitSimplex, dim, Vector::Zero(dim), 0.0};
}

FeasibleSet FeasibleSet::l1_ball(Vector center, double radius) {
    if (center.size() < 1) throw ConfigError("ball dimension must be >= 1");
    if (!(radius > 0.0)) throw ConfigError("ball radius must be > 0");
    const long dim = center.size();
    return {SetKind::L1Ball, dim, std::move(center), radius};
}

FeasibleSet FeasibleSet::l2_ball(Vector center, double radius) {
    if (center.size() < 1) throw ConfigError("ball dimension must be >= 1");
    if (!(radius > 0.0)) throw ConfigError("ball radius must be > 0");
    const long dim = center.size();
    return {SetKind::L2Ball, dim, std::move(center), radius};
}

LmoResult FeasibleSet::lmo(const Vector& g) const {
    check_dim("lmo", dim_, g.size());
    LmoResult out;
    switch (kind_) {
    case SetKind::UnitSimplex: {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < g.size(); ++i)
            if (g[i] < g[best]) best = i;
        out.vertex = Vector::Zero(dim_);
        out.vertex[best] = 1.0;
        break;
    }
    case SetKind::L1Ball: {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < g.size(); ++i)
            if (std::abs(g[i]) > std::abs(g[best])) best = i;
        out.vertex = center_;
        out.vertex[best] -= g[best] < 0.0 ? -radius_ : radius_;
        break;
    }
    case SetKind::L2Ball: {
        const double norm = g.norm();
        if (norm <= 1e-15) {
            out.vertex = center_;
            out.zero_gradient = true;
        } else {
            out.vertex = center_ - (radius_ / norm) * g;
        }
        break;
    }
    }
    return out;
}

bool FeasibleSet::contains(const Vector& x, double tol) const {
    check_dim("contains", dim_, x.size());
    switch (kind_) {
    case SetKind::UnitSimplex:
        return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
    case SetKind::L1Ball: return (x - center_).lpNorm<1>() <= radius_ + tol;
    case SetKind::L2Ball: return (x - center_).norm() <= radius_ + tol;
    }
    return false;
}

Vector FeasibleSet::default_start() const {
    if (kind_ == SetKind::UnitSimplex) return Vector::Constant(dim_, 1.0 / double(dim_));
    return center_;
}

double FeasibleSet::diameter() const {
    switch (kind_) {
    case SetKind::UnitSimplex: return dim_ >= 2 ? std::sqrt(2.0) : 0.0;
    case SetKind::L1Ball:
    case SetKind::L2Ball: return 2.0 * radius_;
    }
    return 0.0;
}

namespace {

class PairSampler {
public:
    PairSampler(const FeasibleSet& set, double floor, std::uint64_t seed)
        : set_(set), floor_(floor), rng_(seed) {}

    // Half the draws land on (restricted) vertices or the boundary, where
    // divergences of convex references peak; the rest are spread inside.
    Vector draw() {
        const long n = set_.dim();
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const bool extreme = unif(rng_) < 0.5;
        switch (set_.kind()) {
        case SetKind::UnitSimplex: {
            Vector u(n);
            if (extreme) {
                u.setZero();
                u[std::uniform_int_distribution<long>(0, n - 1)(rng_)] = 1.0;
            } else {
                std::exponential_distribution<double> expo(1.0);
                for (long i = 0; i < n; ++i) u[i] = expo(rng_);
                u /= u.sum();
            }
            return Vector::Constant(n, floor_) + (1.0 - double(n) * floor_) * u;
        }
        case SetKind::L1Ball: {
            Vector v = Vector::Zero(n);
            if (extreme) {
                v[std::uniform_int_distribution<long>(0, n - 1)(rng_)] =
                    unif(rng_) < 0.5 ? -1.0 : 1.0;
            } else {
                std::exponential_distribution<double> expo(1.0);
                for (long i = 0; i < n; ++i) v[i] = (unif(rng_) < 0.5 ? -1.0 : 1.0) * expo(rng_);
                v *= std::pow(unif(rng_), 1.0 / double(n)) / v.lpNorm<1>();
            }
            return set_.center() + set_.radius() * v;
        }
        case SetKind::L2Ball: {
            std::normal_distribution<double> gauss(0.0, 1.0);
            Vector v(n);
            for (long i = 0; i < n; ++i) v[i] = gauss(rng_);
            v /= v.norm();
            if (!extreme) v *= std::pow(unif(rng_), 1.0 / double(n));
            last_direction_ = v;
            return set_.center() + set_.radius() * v;
        }
        }
        return set_.default_start();
    }

    // Antipode of the most recent l2 draw.
    Vector antipode() const { return set_.center() - set_.radius() * last_direction_; }

private:
    const FeasibleSet& set_;
    double floor_;
    std::mt19937_64 rng_;
    Vector last_direction_;
};

} // namespace

DiameterBound diameter_bound(const FeasibleSet& set, const BregmanDivergence& d,
                             const DiameterOptions& opts) {
    if (d.kind() == DivergenceKind::SquaredEuclidean) {
        const double diam = set.diameter();
        return {diam * diam, false};
    }

    double floor = 0.0;
    if (d.kind() == DivergenceKind::NegativeEntropy) {
        if (set.kind() != SetKind::UnitSimplex)
            throw Incompatible("negative entropy is undefined on part of a ball");
        if (!(opts.interior_floor > 0.0))
            throw Incompatible("negative entropy on the full simplex is unbounded; "
                               "configure an interior floor");
        if (!(double(set.dim()) * opts.interior_floor < 1.0))
            throw Incompatible("interior floor leaves no room inside the simplex");
        floor = std::max(opts.interior_floor, d.domain_floor() * 2.0);
    }

    PairSampler sampler(set, floor, opts.seed);
    double worst = 0.0;
    for (int s = 0; s < opts.samples; ++s) {
        const Vector x = sampler.draw();
        const Vector y = sampler.draw();
        worst = std::max(worst, d.divergence(x, y));
        if (set.kind() == SetKind::L2Ball) worst = std::max(worst, d.divergence(sampler.antipode(), y));
    }
    return {opts.safety * worst, true};
}

} // namespace bregfw
