#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <variant>

#include "bregfw/bregman.hpp"
#include "bregfw/lmo.hpp"
#include "bregfw/types.hpp"

namespace bregfw {

enum class ObjectiveKind { PoissonKL, HingeSvm, QuadraticTest };

std::string_view to_string(ObjectiveKind kind);

struct PoissonData {
    Matrix A; // m x n, nonnegative
    Vector b; // length m, strictly positive
};

struct HingeData {
    RowMatrix W; // one sample per row
    Vector y;    // labels, exactly +-1
    double lambda = 0.0;
    bool squared_reg = false;
};

struct QuadraticData {
    Matrix M; // symmetric positive definite
    Vector q;
};

/// Objective with value and (sub)gradient oracles.
///
///   PoissonKL      f(x) = sum_i b_i log(b_i / (Ax)_i) - b_i + (Ax)_i
///   HingeSvm       f(x) = 1/n sum_i max(0, 1 - y_i <x, w_i>) + lambda/2 |x|
///                  (|x|^2 when squared_reg is set)
///   QuadraticTest  f(x) = 1/2 x'Mx + q'x
class Objective {
public:
    static Objective poisson_kl(Matrix A, Vector b);
    static Objective hinge_svm(RowMatrix W, Vector y, double lambda, bool squared_reg = false);
    static Objective quadratic(Matrix M, Vector q);

    ObjectiveKind kind() const;
    long dim() const;

    double value(const Vector& x) const;
    Vector gradient(const Vector& x) const;

    /// Lipschitz constant of the gradient in the Euclidean norm, when known.
    std::optional<double> lipschitz_bound() const { return lipschitz_; }

    const PoissonData& poisson() const { return std::get<PoissonData>(data_); }
    const HingeData& hinge() const { return std::get<HingeData>(data_); }
    const QuadraticData& quadratic() const { return std::get<QuadraticData>(data_); }

private:
    using Data = std::variant<PoissonData, HingeData, QuadraticData>;
    explicit Objective(Data data, std::optional<double> lipschitz = std::nullopt)
        : data_(std::move(data)), lipschitz_(lipschitz) {}

    Data data_;
    std::optional<double> lipschitz_;
};

/// Everything the solver needs about one problem.
struct ProblemInstance {
    Objective objective;
    FeasibleSet set;
    BregmanDivergence divergence;
    double gamma = 2.0;
    std::optional<double> f_star;
    std::uint64_t rng_seed = 0;

    /// Throws ConfigError on gamma outside (1, 2] or a dimension mismatch.
    void validate() const;
};

struct PoissonInstance {
    Objective objective;
    Vector x_true;
    /// |b|_1, the smoothness constant reported for this problem.
    double L_reported = 0.0;
};

/// A ~ U(0,1)^{m x n}, x_true uniform on the simplex, b = A x_true (1 + noise eta)
/// with eta standard normal, clipped below at 1e-8.
PoissonInstance generate_poisson(long n, long m, double noise, std::uint64_t seed);

struct QuadraticInstance {
    Objective objective;
    Vector minimizer;
    double f_star = 0.0;
};

/// Random SPD M with spectrum spread over [mu, L] and q = -M x_min, so the
/// unconstrained minimizer is x_min and f* = -1/2 x_min' M x_min.
QuadraticInstance random_quadratic(const Vector& x_min, double mu, double L, std::uint64_t seed);

struct SvmCsvOptions {
    bool header = false;
    bool squared_reg = false;
    /// Keep only the first max_rows data rows; 0 keeps all.
    long max_rows = 0;
};

struct SvmProblem {
    Objective objective;
    FeasibleSet set;
    BregmanDivergence divergence;
    long native_dim = 0;
};

/// Reads features + final label column, zero-pads features to pad_dim, and
/// derives the l2-ball (origin, r = min(s1 / lambda, sqrt(2 / lambda))) and
/// the SvmQuartic reference from the row norms.
/// Two distinct label values are mapped to -1 (smaller) and +1 (larger).
SvmProblem load_svm_csv(const std::filesystem::path& path, double lambda, long pad_dim,
                        const SvmCsvOptions& opts = {});

/// Row-norm statistics (s1, s2) = (mean |w_i|, mean |w_i|^2).
std::pair<double, double> row_norm_sums(const RowMatrix& W);

} // namespace bregfw
