#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bregfw/types.hpp"

namespace bregfw {

enum class DivergenceKind { SquaredEuclidean, NegativeEntropy, SvmQuartic };

std::string_view to_string(DivergenceKind kind);
DivergenceKind divergence_kind_from_string(std::string_view name);

/// Reference function h and the Bregman divergence it induces,
///
///   D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
///
/// Three references are supported:
///   SquaredEuclidean  h(x) = 1/2 |x|^2
///   NegativeEntropy   h(x) = sum_i x_i log x_i          (D_h is the generalized KL)
///   SvmQuartic        h(x) = lambda^2/4 |x|^4 + 2 lambda s1/3 |x|^3 + s2/2 |x|^2
///
/// where s1 and s2 are the mean row norm and mean squared row norm of an SVM
/// dataset. Divergences are evaluated in a direct per-kind form that is a sum
/// of non-negative terms, never through the three-term identity above.
///
/// For NegativeEntropy the first argument of `divergence` may have entries in
/// [0, floor) (0 log 0 = 0); the second argument must be strictly above the floor.
class BregmanDivergence {
public:
    static BregmanDivergence squared_euclidean();
    static BregmanDivergence negative_entropy(double domain_floor = 1e-12);
    static BregmanDivergence svm_quartic(double lambda, double s1, double s2);

    DivergenceKind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    double s1() const { return s1_; }
    double s2() const { return s2_; }
    double domain_floor() const { return floor_; }

    double h_value(const Vector& x) const;
    Vector h_grad(const Vector& x) const;
    double divergence(const Vector& x, const Vector& y) const;

    /// True when `x` can be used as the second argument of `divergence`.
    bool is_interior(const Vector& x) const;

private:
    BregmanDivergence(DivergenceKind kind, double lambda, double s1, double s2, double floor)
        : kind_(kind), lambda_(lambda), s1_(s1), s2_(s2), floor_(floor) {}

    DivergenceKind kind_;
    double lambda_ = 0.0;
    double s1_ = 0.0;
    double s2_ = 0.0;
    double floor_ = 0.0;
};

/// Outcome of probing the triangle scaling inequality
///   D((1-t)x + t z, (1-t)x + t z~) <= t^gamma D(z, z~)
/// on random triples. Violations are diagnostics: the inequality is an
/// assumption about the geometry, not something the library guarantees.
struct TseReport {
    double gamma = 0.0;
    int samples = 0;
    int violations = 0;
    /// max over samples of  D(...) / (t^gamma D(z, z~)).  <= 1 means no violation.
    double worst_ratio = 0.0;
};

/// Samples `triples` random (x, z, z~) from the interior of the divergence
/// domain (positive box for NegativeEntropy, Gaussian otherwise) and checks
/// the inequality on the grid t in {0.05, 0.1, ..., 1}.
TseReport probe_triangle_scaling(const BregmanDivergence& d, long dim, double gamma, int triples,
                                 std::uint64_t seed);

} // namespace bregfw
