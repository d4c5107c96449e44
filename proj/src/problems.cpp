#include "bregfw/problems.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bregfw/csv.hpp"

namespace bregfw {

std::string_view to_string(ObjectiveKind kind) {
    switch (kind) {
    case ObjectiveKind::PoissonKL: return "poisson";
    case ObjectiveKind::HingeSvm: return "svm";
    case ObjectiveKind::QuadraticTest: return "quadratic";
    }
    return "unknown";
}

Objective Objective::poisson_kl(Matrix A, Vector b) {
    check_dim("poisson_kl: b", A.rows(), b.size());
    if (A.size() == 0) throw ConfigError("poisson_kl: empty matrix");
    if ((A.array() < 0.0).any()) throw ConfigError("poisson_kl: A must be nonnegative");
    if (!(b.array() > 0.0).all()) throw ConfigError("poisson_kl: b must be strictly positive");
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        if (!(A.col(j).maxCoeff() > 0.0))
            throw ConfigError("poisson_kl: column " + std::to_string(j) + " of A is zero");
    return Objective(PoissonData{std::move(A), std::move(b)});
}

Objective Objective::hinge_svm(RowMatrix W, Vector y, double lambda, bool squared_reg) {
    check_dim("hinge_svm: labels", W.rows(), y.size());
    if (W.rows() == 0) throw ConfigError("hinge_svm: no samples");
    if (!(lambda > 0.0)) throw ConfigError("hinge_svm: lambda must be > 0");
    for (double v : y)
        if (v != 1.0 && v != -1.0) throw LabelError("hinge_svm: labels must be exactly +-1");
    return Objective(HingeData{std::move(W), std::move(y), lambda, squared_reg});
}

Objective Objective::quadratic(Matrix M, Vector q) {
    check_dim("quadratic: q", M.rows(), q.size());
    check_dim("quadratic: M", M.rows(), M.cols());
    if (!M.isApprox(M.transpose(), 1e-12)) throw ConfigError("quadratic: M must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0))
        throw ConfigError("quadratic: M must be positive definite");
    const double L = eig.eigenvalues().maxCoeff();
    return Objective(QuadraticData{std::move(M), std::move(q)}, L);
}

ObjectiveKind Objective::kind() const {
    switch (data_.index()) {
    case 0: return ObjectiveKind::PoissonKL;
    case 1: return ObjectiveKind::HingeSvm;
    default: return ObjectiveKind::QuadraticTest;
    }
}

long Objective::dim() const {
    return std::visit(
        [](const auto& d) -> long {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PoissonData>) return d.A.cols();
            else if constexpr (std::is_same_v<T, HingeData>) return d.W.cols();
            else return d.M.cols();
        },
        data_);
}

namespace {

Vector checked_forward(const PoissonData& d, const Vector& x) {
    Vector ax = d.A * x;
    for (Eigen::Index i = 0; i < ax.size(); ++i)
        if (!(ax[i] > 0.0))
            throw DomainError("poisson_kl: (Ax)_" + std::to_string(i) + " = " +
                              std::to_string(ax[i]) + " is not positive");
    return ax;
}

} // namespace

double Objective::value(const Vector& x) const {
    check_dim("objective value", dim(), x.size());
    switch (kind()) {
    case ObjectiveKind::PoissonKL: {
        const auto& d = poisson();
        const Vector ax = checked_forward(d, x);
        double s = 0.0;
        for (Eigen::Index i = 0; i < ax.size(); ++i) {
            // b (t - log(1 + t)) with t = (Ax - b) / b; exact zero when Ax == b.
            const double t = (ax[i] - d.b[i]) / d.b[i];
            s += d.b[i] * (t - std::log1p(t));
        }
        return s;
    }
    case ObjectiveKind::HingeSvm: {
        const auto& d = hinge();
        const Vector margins = d.W * x;
        double loss = 0.0;
        for (Eigen::Index i = 0; i < margins.size(); ++i)
            loss += std::max(0.0, 1.0 - d.y[i] * margins[i]);
        loss /= double(d.W.rows());
        const double reg = d.squared_reg ? x.squaredNorm() : x.norm();
        return loss + 0.5 * d.lambda * reg;
    }
    case ObjectiveKind::QuadraticTest: {
        const auto& d = quadratic();
        return 0.5 * x.dot(d.M * x) + d.q.dot(x);
    }
    }
    return 0.0;
}

Vector Objective::gradient(const Vector& x) const {
    check_dim("objective gradient", dim(), x.size());
    switch (kind()) {
    case ObjectiveKind::PoissonKL: {
        const auto& d = poisson();
        const Vector ax = checked_forward(d, x);
        const Vector r = (1.0 - d.b.array() / ax.array()).matrix();
        return d.A.transpose() * r;
    }
    case ObjectiveKind::HingeSvm: {
        const auto& d = hinge();
        const Vector margins = d.W * x;
        // Rows with 1 - y <x, w> exactly 0 take the zero branch.
        Vector coeff = Vector::Zero(margins.size());
        for (Eigen::Index i = 0; i < margins.size(); ++i)
            if (1.0 - d.y[i] * margins[i] > 0.0) coeff[i] = -d.y[i];
        Vector g = d.W.transpose() * coeff / double(d.W.rows());
        if (d.squared_reg) {
            g += d.lambda * x;
        } else {
            const double nx = x.norm();
            if (nx > 0.0) g += (0.5 * d.lambda / nx) * x;
        }
        return g;
    }
    case ObjectiveKind::QuadraticTest: {
        const auto& d = quadratic();
        return d.M * x + d.q;
    }
    }
    return x;
}

void ProblemInstance::validate() const {
    if (!(gamma > 1.0 && gamma <= 2.0)) throw ConfigError("gamma must lie in (1, 2]");
    if (objective.dim() != set.dim())
        throw ConfigError("objective dimension " + std::to_string(objective.dim()) +
                          " does not match set dimension " + std::to_string(set.dim()));
}

PoissonInstance generate_poisson(long n, long m, double noise, std::uint64_t seed) {
    if (n < 1 || m < 1) throw ConfigError("generate_poisson: n and m must be >= 1");
    if (!(noise >= 0.0 && noise < 1.0)) throw ConfigError("generate_poisson: noise must be in [0, 1)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Matrix A(m, n);
    for (long i = 0; i < m; ++i)
        for (long j = 0; j < n; ++j) A(i, j) = unif(rng);

    Vector x_true(n);
    for (long j = 0; j < n; ++j) x_true[j] = expo(rng);
    x_true /= x_true.sum();

    Vector b = A * x_true;
    if (noise > 0.0) {
        for (long i = 0; i < m; ++i) b[i] = std::max(b[i] * (1.0 + noise * gauss(rng)), 1e-8);
    }
    const double L = b.lpNorm<1>();
    return {Objective::poisson_kl(std::move(A), std::move(b)), std::move(x_true), L};
}

QuadraticInstance random_quadratic(const Vector& x_min, double mu, double L, std::uint64_t seed) {
    const long n = x_min.size();
    if (n < 1) throw ConfigError("random_quadratic: dimension must be >= 1");
    if (!(mu > 0.0 && L >= mu)) throw ConfigError("random_quadratic: need 0 < mu <= L");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix G(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) G(i, j) = gauss(rng);
    const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();

    Vector spectrum(n);
    for (long i = 0; i < n; ++i)
        spectrum[i] = n == 1 ? L : mu + (L - mu) * double(i) / double(n - 1);
    Matrix M = Q * spectrum.asDiagonal() * Q.transpose();
    M = 0.5 * (M + M.transpose()).eval();

    Vector q = -(M * x_min);
    const double f_star = 0.5 * x_min.dot(M * x_min) + q.dot(x_min);
    return {Objective::quadratic(std::move(M), std::move(q)), x_min, f_star};
}

std::pair<double, double> row_norm_sums(const RowMatrix& W) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
        const double sq = W.row(i).squaredNorm();
        s1 += std::sqrt(sq);
        s2 += sq;
    }
    return {s1 / double(W.rows()), s2 / double(W.rows())};
}

SvmProblem load_svm_csv(const std::filesystem::path& path, double lambda, long pad_dim,
                        const SvmCsvOptions& opts) {
    if (!(lambda > 0.0)) throw ConfigError("load_svm_csv: lambda must be > 0");
    const csv::Table table = csv::read_numeric(path, opts.header);
    const long width = long(table.rows.front().size());
    if (width < 2) throw ParseError(path.string() + ": need at least one feature and a label");
    const long native = width - 1;
    if (pad_dim < native)
        throw ConfigError("load_svm_csv: pad_dim " + std::to_string(pad_dim) +
                          " is below the native feature count " + std::to_string(native));

    long rows = long(table.rows.size());
    if (opts.max_rows > 0) rows = std::min(rows, opts.max_rows);

    std::set<double> distinct;
    for (long i = 0; i < rows; ++i) distinct.insert(table.rows[i].back());
    const bool already_signed =
        std::all_of(distinct.begin(), distinct.end(), [](double v) { return v == 1.0 || v == -1.0; });
    if (!already_signed && distinct.size() != 2)
        throw LabelError(path.string() + ": labels must take two distinct values, found " +
                         std::to_string(distinct.size()));
    const double low = already_signed ? -1.0 : *distinct.begin();

    RowMatrix W = RowMatrix::Zero(rows, pad_dim);
    Vector y(rows);
    for (long i = 0; i < rows; ++i) {
        const auto& r = table.rows[i];
        for (long j = 0; j < native; ++j) W(i, j) = r[j];
        y[i] = r.back() == low ? -1.0 : 1.0;
    }

    const auto [s1, s2] = row_norm_sums(W);
    const double radius = std::min(s1 / lambda, std::sqrt(2.0 / lambda));
    if (!(radius > 0.0)) throw ConfigError("load_svm_csv: all rows are zero");

    return {Objective::hinge_svm(std::move(W), std::move(y), lambda, opts.squared_reg),
            FeasibleSet::l2_ball(Vector::Zero(pad_dim), radius),
            BregmanDivergence::svm_quartic(lambda, s1, s2), native};
}

} // namespace bregfw
