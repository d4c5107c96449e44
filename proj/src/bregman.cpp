#include "bregfw/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bregfw {

std::string_view to_string(DivergenceKind kind) {
    switch (kind) {
    case DivergenceKind::SquaredEuclidean: return "squared_euclidean";
    case DivergenceKind::NegativeEntropy: return "negative_entropy";
    case DivergenceKind::SvmQuartic: return "svm_quartic";
    }
    return "unknown";
}

DivergenceKind divergence_kind_from_string(std::string_view name) {
    if (name == "squared_euclidean") return DivergenceKind::SquaredEuclidean;
    if (name == "negative_entropy") return DivergenceKind::NegativeEntropy;
    if (name == "svm_quartic") return DivergenceKind::SvmQuartic;
    throw ConfigError("unknown divergence kind '" + std::string(name) + "'");
}

BregmanDivergence BregmanDivergence::squared_euclidean() {
    return {DivergenceKind::SquaredEuclidean, 0.0, 0.0, 0.0, 0.0};
}

BregmanDivergence BregmanDivergence::negative_entropy(double domain_floor) {
    if (!(domain_floor >= 0.0)) throw ConfigError("negative entropy floor must be >= 0");
    return {DivergenceKind::NegativeEntropy, 0.0, 0.0, 0.0, domain_floor};
}

BregmanDivergence BregmanDivergence::svm_quartic(double lambda, double s1, double s2) {
    if (!(lambda > 0.0)) throw ConfigError("svm quartic reference needs lambda > 0");
    if (!(s1 >= 0.0) || !(s2 >= 0.0)) throw ConfigError("svm quartic row sums must be >= 0");
    return {DivergenceKind::SvmQuartic, lambda, s1, s2, 0.0};
}

namespace {

void require_nonnegative(const Vector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] >= 0.0))
            throw DomainError("negative entropy: entry " + std::to_string(i) + " = " +
                              std::to_string(x[i]) + " is negative");
    }
}

void require_above(const Vector& x, double floor) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] > floor))
            throw DomainError("negative entropy: entry " + std::to_string(i) + " = " +
                              std::to_string(x[i]) + " is not above the domain floor");
    }
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

} // namespace

bool BregmanDivergence::is_interior(const Vector& x) const {
    if (kind_ != DivergenceKind::NegativeEntropy) return x.allFinite();
    return (x.array() > floor_).all();
}

double BregmanDivergence::h_value(const Vector& x) const {
    switch (kind_) {
    case DivergenceKind::SquaredEuclidean: return 0.5 * x.squaredNorm();
    case DivergenceKind::NegativeEntropy: {
        require_nonnegative(x);
        double s = 0.0;
        for (double v : x) s += xlogx(v);
        return s;
    }
    case DivergenceKind::SvmQuartic: {
        const double r2 = x.squaredNorm();
        const double r = std::sqrt(r2);
        return 0.25 * lambda_ * lambda_ * r2 * r2 + (2.0 * lambda_ * s1_ / 3.0) * r2 * r +
               0.5 * s2_ * r2;
    }
    }
    return 0.0;
}

Vector BregmanDivergence::h_grad(const Vector& x) const {
    switch (kind_) {
    case DivergenceKind::SquaredEuclidean: return x;
    case DivergenceKind::NegativeEntropy:
        require_above(x, floor_);
        return (x.array().log() + 1.0).matrix();
    case DivergenceKind::SvmQuartic: {
        const double r2 = x.squaredNorm();
        const double r = std::sqrt(r2);
        return (lambda_ * lambda_ * r2 + 2.0 * lambda_ * s1_ * r + s2_) * x;
    }
    }
    return x;
}

double BregmanDivergence::divergence(const Vector& x, const Vector& y) const {
    check_dim("divergence", x.size(), y.size());
    switch (kind_) {
    case DivergenceKind::SquaredEuclidean: return 0.5 * (x - y).squaredNorm();
    case DivergenceKind::NegativeEntropy: {
        require_nonnegative(x);
        require_above(y, floor_);
        double s = 0.0;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            const double yi = y[i];
            s += (xi > 0.0 ? xi * std::log(xi / yi) : 0.0) - xi + yi;
        }
        return s;
    }
    case DivergenceKind::SvmQuartic: {
        // With a = |x|, b = |y|, e = |x - y|^2 each power term splits into
        // non-negative pieces:
        //   |x|^4/4 term:  (a^2 - b^2)^2 / 4 + b^2 e / 2
        //   |x|^3/3 term:  (a - b)^2 (2a + b) / 6 + b e / 2
        //   |x|^2/2 term:  e / 2
        const double a = x.norm();
        const double b = y.norm();
        const double e = (x - y).squaredNorm();
        const double a2 = a * a;
        const double b2 = b * b;
        const double d4 = 0.25 * (a2 - b2) * (a2 - b2) + 0.5 * b2 * e;
        const double d3 = (a - b) * (a - b) * (2.0 * a + b) / 6.0 + 0.5 * b * e;
        const double d2 = 0.5 * e;
        return lambda_ * lambda_ * d4 + 2.0 * lambda_ * s1_ * d3 + s2_ * d2;
    }
    }
    return 0.0;
}

TseReport probe_triangle_scaling(const BregmanDivergence& d, long dim, double gamma, int triples,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(0.05, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto draw = [&] {
        Vector v(dim);
        for (long i = 0; i < dim; ++i)
            v[i] = d.kind() == DivergenceKind::NegativeEntropy ? box(rng) : gauss(rng);
        return v;
    };

    TseReport report;
    report.gamma = gamma;
    for (int s = 0; s < triples; ++s) {
        const Vector x = draw();
        const Vector z = draw();
        const Vector zt = draw();
        const double base = d.divergence(z, zt);
        if (!(base > 0.0)) continue;
        for (int step = 1; step <= 20; ++step) {
            const double t = 0.05 * step;
            const double lhs = d.divergence((1.0 - t) * x + t * z, (1.0 - t) * x + t * zt);
            const double ratio = lhs / (std::pow(t, gamma) * base);
            ++report.samples;
            report.worst_ratio = std::max(report.worst_ratio, ratio);
            if (ratio > 1.0 + 1e-12) ++report.violations;
        }
    }
    return report;
}

} // namespace bregfw
