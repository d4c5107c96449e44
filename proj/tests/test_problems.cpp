#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"

#include "bregfw/problems.hpp"
#include "test_util.hpp"

using namespace bregfw;
using bregfw::testing::fd_gradient;

namespace fs = std::filesystem;

namespace {

fs::path scratch_file(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "bregfw_test_problems";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("poisson value and gradient examples") {
    const auto f = Objective::poisson_kl(Matrix::Identity(2, 2), v2(1, 1));
    CHECK(f.value(v2(1, 1)) == 0.0);
    CHECK(f.gradient(v2(1, 1)) == v2(0, 0));
    // b log(b / Ax) - b + Ax with b = 1, Ax = 2: log(1/2) + 1
    CHECK(f.value(v2(2, 1)) == doctest::Approx(1.0 - std::log(2.0)));
    CHECK(f.gradient(v2(2, 1))[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(f.value(v2(0, 1)), DomainError);
    CHECK_THROWS_AS(Objective::poisson_kl(mat2(1, -1, 0, 1), v2(1, 1)), ConfigError);
    CHECK_THROWS_AS(Objective::poisson_kl(mat2(1, 0, 0, 1), v2(1, 0)), ConfigError);
}

TEST_CASE("hinge value and subgradient examples") {
    RowMatrix W(2, 2);
    W << 1, 0, 0, 1;
    const auto f = Objective::hinge_svm(W, v2(1, -1), 2.0);
    // At x = 0 both margins are 1, the regularizer term is 0.
    CHECK(f.value(v2(0, 0)) == 1.0);
    CHECK(f.gradient(v2(0, 0)) == v2(-0.5, 0.5));
    // x = (1, 0): first margin 0, exactly on the kink, takes the zero branch.
    CHECK(f.value(v2(1, 0)) == doctest::Approx(0.5 + 1.0));
    CHECK(f.gradient(v2(1, 0)) == v2(1.0, 0.5));

    const auto sq = Objective::hinge_svm(W, v2(1, -1), 2.0, true);
    CHECK(sq.value(v2(1, 0)) == doctest::Approx(0.5 + 1.0));
    CHECK(sq.gradient(v2(1, 0)) == v2(2.0, 0.5));

    CHECK_THROWS_AS(Objective::hinge_svm(W, v2(1, 0), 1.0), LabelError);
    CHECK_THROWS_AS(Objective::hinge_svm(W, v2(1, -1), 0.0), ConfigError);
}

TEST_CASE("quadratic value and gradient examples") {
    const auto f = Objective::quadratic(mat2(2, 0, 0, 4), v2(-2, 0));
    CHECK(f.value(v2(1, 0)) == -1.0);
    CHECK(f.gradient(v2(1, 0)) == v2(0, 0));
    CHECK(*f.lipschitz_bound() == doctest::Approx(4.0));
    CHECK_THROWS_AS(Objective::quadratic(mat2(1, 2, 0, 1), v2(0, 0)), ConfigError);
    CHECK_THROWS_AS(Objective::quadratic(mat2(1, 0, 0, -1), v2(0, 0)), ConfigError);
    CHECK_THROWS_AS(f.value(Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("gradients match finite differences") {
    std::mt19937_64 rng(11);
    const auto poisson = generate_poisson(8, 15, 0.05, 4).objective;
    Vector x_min = bregfw::testing::gaussian(rng, 6);
    const auto quad = random_quadratic(x_min, 0.5, 7.0, 9).objective;

    for (int t = 0; t < 50; ++t) {
        const Vector xp = bregfw::testing::simplex_interior(rng, 8, 0.01);
        const Vector gp = poisson.gradient(xp);
        CHECK((gp - fd_gradient([&](const Vector& z) { return poisson.value(z); }, xp)).norm() /
                  (1.0 + gp.norm()) <= 1e-6);

        const Vector xq = bregfw::testing::gaussian(rng, 6);
        const Vector gq = quad.gradient(xq);
        CHECK((gq - fd_gradient([&](const Vector& z) { return quad.value(z); }, xq)).norm() /
                  (1.0 + gq.norm()) <= 1e-6);
    }

    RowMatrix W(12, 5);
    for (long i = 0; i < 12; ++i) W.row(i) = bregfw::testing::gaussian(rng, 5).transpose();
    Vector y(12);
    for (long i = 0; i < 12; ++i) y[i] = i % 2 ? 1.0 : -1.0;
    for (bool squared : {false, true}) {
        const auto hinge = Objective::hinge_svm(W, y, 0.3, squared);
        int tested = 0;
        while (tested < 50) {
            const Vector x = bregfw::testing::gaussian(rng, 5);
            const Vector margins = W * x;
            // Stay clear of the kinks, where the finite difference straddles two branches.
            bool near_kink = false;
            for (long i = 0; i < 12; ++i) near_kink |= std::abs(1.0 - y[i] * margins[i]) < 1e-3;
            if (near_kink) continue;
            const Vector g = hinge.gradient(x);
            CHECK((g - fd_gradient([&](const Vector& z) { return hinge.value(z); }, x)).norm() /
                      (1.0 + g.norm()) <= 1e-6);
            ++tested;
        }
    }
}

TEST_CASE("poisson objective is nonnegative") {
    std::mt19937_64 rng(2);
    const auto f = generate_poisson(10, 30, 0.2, 1).objective;
    for (int t = 0; t < 500; ++t) CHECK(f.value(bregfw::testing::simplex_interior(rng, 10, 1e-4)) >= 0.0);
}

TEST_CASE("noiseless poisson generation") {
    const auto a = generate_poisson(5, 8, 0.0, 17);
    CHECK(a.objective.value(a.x_true) == 0.0);
    CHECK(a.x_true.sum() == doctest::Approx(1.0));
    CHECK((a.x_true.array() > 0.0).all());
    CHECK(a.L_reported == doctest::Approx(a.objective.poisson().b.lpNorm<1>()));

    const auto b = generate_poisson(5, 8, 0.0, 17);
    CHECK(a.objective.poisson().A == b.objective.poisson().A);
    CHECK(a.objective.poisson().b == b.objective.poisson().b);
    CHECK(a.x_true == b.x_true);
    CHECK(generate_poisson(5, 8, 0.0, 18).x_true != a.x_true);

    const auto noisy = generate_poisson(5, 8, 0.3, 17);
    CHECK(noisy.objective.poisson().A == a.objective.poisson().A);
    CHECK(noisy.objective.poisson().b != a.objective.poisson().b);

    CHECK_THROWS_AS(generate_poisson(0, 8, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(generate_poisson(5, 8, 1.0, 1), ConfigError);
}

TEST_CASE("random quadratic has the requested minimizer and spectrum") {
    Vector x_min(4);
    x_min << 0.1, -0.2, 0.3, 0.0;
    const auto q = random_quadratic(x_min, 1.0, 10.0, 3);
    CHECK(q.objective.gradient(x_min).norm() < 1e-12);
    CHECK(q.objective.value(x_min) == doctest::Approx(q.f_star).epsilon(1e-14));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q.objective.quadratic().M);
    CHECK(eig.eigenvalues().minCoeff() == doctest::Approx(1.0));
    CHECK(eig.eigenvalues().maxCoeff() == doctest::Approx(10.0));
}

TEST_CASE("svm csv toy example") {
    // Row norms 1 and 1: s1 = s2 = 1, r = min(1 / 4, sqrt(2 / 4)) = 0.25.
    const auto p = scratch_file("toy.csv", "1,0,1\n0,1,-1\n");
    const auto svm = load_svm_csv(p, 4.0, 2);
    CHECK(svm.set.radius() == doctest::Approx(0.25));
    CHECK(svm.native_dim == 2);
    CHECK(svm.objective.hinge().y == v2(1, -1));

    // lambda = 2: s1 / lambda = 0.5 wins over sqrt(2 / lambda) = 1.
    const auto wide = load_svm_csv(p, 2.0, 2);
    CHECK(wide.set.radius() == doctest::Approx(0.5));
    const Vector y = v2(0.1, 0.2);
    const Vector x = v2(-0.3, 0.05);
    CHECK(wide.divergence.divergence(x, y) ==
          doctest::Approx(BregmanDivergence::svm_quartic(2.0, 1.0, 1.0).divergence(x, y)));
}

TEST_CASE("svm csv labels, padding and errors") {
    const auto zero_one = scratch_file("zo.csv", "3,4,0\n0,1,1\n1,1,1\n");
    const auto svm = load_svm_csv(zero_one, 1.0, 5);
    CHECK(svm.objective.dim() == 5);
    CHECK(svm.objective.hinge().y == Vector((Vector(3) << -1, 1, 1).finished()));
    CHECK(svm.objective.hinge().W.rightCols(3).isZero());
    CHECK(svm.objective.hinge().W(0, 1) == 4.0);

    const auto limited = load_svm_csv(zero_one, 1.0, 2, {false, false, 2});
    CHECK(limited.objective.hinge().W.rows() == 2);

    CHECK_THROWS_AS(load_svm_csv(zero_one, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("three.csv", "1,0\n2,1\n3,2\n"), 1.0, 1), LabelError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("one.csv", "1,5\n2,5\n"), 1.0, 1), LabelError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("empty.csv", ""), 1.0, 1), ParseError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("bad.csv", "1,2,1\n1,x,-1\n"), 1.0, 2), ParseError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("ragged.csv", "1,2,1\n1,-1\n"), 1.0, 2), ParseError);
    CHECK_THROWS_AS(load_svm_csv(scratch_file("hdr.csv", "a,b,y\n1,2,1\n"), 1.0, 2), ParseError);
    CHECK(load_svm_csv(scratch_file("hdr2.csv", "a,b,y\n1,2,1\n0,1,-1\n"), 1.0, 2, {true}).native_dim == 2);
}

TEST_CASE("problem instance validation") {
    const auto f = Objective::quadratic(Matrix::Identity(2, 2), Vector::Zero(2));
    ProblemInstance ok{f, FeasibleSet::l2_ball(Vector::Zero(2), 1.0), BregmanDivergence::squared_euclidean()};
    CHECK_NOTHROW(ok.validate());
    ProblemInstance bad_gamma = ok;
    bad_gamma.gamma = 2.5;
    CHECK_THROWS_AS(bad_gamma.validate(), ConfigError);
    ProblemInstance bad_dim{f, FeasibleSet::unit_simplex(3), BregmanDivergence::squared_euclidean()};
    CHECK_THROWS_AS(bad_dim.validate(), ConfigError);
}
