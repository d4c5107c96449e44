#include <cmath>
#include <random>

#include "doctest.h"

#include "bregfw/bregman.hpp"
#include "test_util.hpp"

using namespace bregfw;
using bregfw::testing::fd_gradient;
using bregfw::testing::rel_error;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// Interior draw for each kind's domain.
Vector draw(const BregmanDivergence& d, std::mt19937_64& rng, long n) {
    if (d.kind() == DivergenceKind::NegativeEntropy) return bregfw::testing::uniform(rng, n, 0.01, 2.0);
    return bregfw::testing::gaussian(rng, n);
}

std::vector<BregmanDivergence> all_kinds() {
    return {BregmanDivergence::squared_euclidean(), BregmanDivergence::negative_entropy(),
            BregmanDivergence::svm_quartic(2.0, 1.3, 2.1)};
}

} // namespace

TEST_CASE("h_value examples") {
    CHECK(BregmanDivergence::squared_euclidean().h_value(v2(3, 4)) == doctest::Approx(12.5));
    CHECK(BregmanDivergence::negative_entropy().h_value(v2(1, 1)) == 0.0);

    // lambda^2/4 r^4 + 2 lambda s1/3 r^3 + s2/2 r^2 at lambda=2, s1=s2=1, r=1.
    const double lambda = 2.0, s1 = 1.0, s2 = 1.0, r = 1.0;
    const double expected = lambda * lambda / 4.0 * std::pow(r, 4) + 2.0 * lambda * s1 / 3.0 * std::pow(r, 3) +
                            s2 / 2.0 * r * r;
    CHECK(expected == doctest::Approx(17.0 / 6.0));
    CHECK(BregmanDivergence::svm_quartic(2, 1, 1).h_value(v2(1, 0)) == doctest::Approx(17.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("h_grad examples") {
    CHECK(BregmanDivergence::squared_euclidean().h_grad(v2(3, 4)) == v2(3, 4));
    CHECK(BregmanDivergence::negative_entropy().h_grad(v2(1, 1)) == v2(1, 1));

    const auto q = BregmanDivergence::svm_quartic(2, 1, 1);
    const Vector fd = fd_gradient([&](const Vector& x) { return q.h_value(x); }, v2(1, 0));
    CHECK(fd[0] == doctest::Approx(9.0).epsilon(1e-8));
    CHECK(std::abs(fd[1]) < 1e-8);
    CHECK(rel_error(q.h_grad(v2(1, 0)), v2(9, 0)) < 1e-15);
}

TEST_CASE("divergence examples") {
    for (const auto& d : all_kinds()) CHECK(d.divergence(v2(0.3, 0.7), v2(0.3, 0.7)) == 0.0);
    CHECK(BregmanDivergence::squared_euclidean().divergence(v2(1, 0), v2(0, 0)) == 0.5);

    // 1 log(1/1) - 1 + 1 + 1 log(1/2) - 1 + 2
    const double kl = 1.0 * std::log(1.0 / 1.0) - 1.0 + 1.0 + 1.0 * std::log(1.0 / 2.0) - 1.0 + 2.0;
    CHECK(kl == doctest::Approx(0.306853).epsilon(1e-6));
    CHECK(BregmanDivergence::negative_entropy().divergence(v2(1, 1), v2(1, 2)) == doctest::Approx(kl).epsilon(1e-15));
}

TEST_CASE("negative entropy domain handling") {
    const auto ne = BregmanDivergence::negative_entropy(1e-12);
    // Zero entries in the first argument follow 0 log 0 = 0.
    CHECK(ne.divergence(v2(1, 0), v2(0.5, 0.5)) == doctest::Approx(std::log(2.0)));
    CHECK(ne.h_value(v2(1, 0)) == 0.0);
    CHECK_THROWS_AS(ne.divergence(v2(-0.1, 1.1), v2(0.5, 0.5)), DomainError);
    CHECK_THROWS_AS(ne.divergence(v2(0.5, 0.5), v2(1, 0)), DomainError);
    CHECK_THROWS_AS(ne.h_grad(v2(1, 0)), DomainError);
    CHECK_THROWS_AS(ne.h_value(v2(-1, 2)), DomainError);
    CHECK_FALSE(ne.is_interior(v2(1, 0)));
    CHECK(ne.is_interior(v2(0.5, 0.5)));
    CHECK_THROWS_AS(BregmanDivergence::squared_euclidean().divergence(v2(1, 0), Vector::Zero(3)),
                    DimensionMismatch);
}

TEST_CASE("divergence properties over random points") {
    std::mt19937_64 rng(20240501);
    for (const auto& d : all_kinds()) {
        CAPTURE(to_string(d.kind()));
        for (int t = 0; t < 1000; ++t) {
            const long n = 1 + t % 12;
            const Vector x = draw(d, rng, n);
            const Vector y = draw(d, rng, n);
            CHECK(d.divergence(x, y) >= -1e-12);
            if (t < 100) CHECK(d.divergence(x, x) <= 1e-12);
        }
    }
}

TEST_CASE("h_grad matches finite differences") {
    std::mt19937_64 rng(7);
    for (const auto& d : all_kinds()) {
        CAPTURE(to_string(d.kind()));
        for (int t = 0; t < 100; ++t) {
            const Vector x = draw(d, rng, 1 + t % 9);
            const Vector g = d.h_grad(x);
            const Vector fd = fd_gradient([&](const Vector& z) { return d.h_value(z); }, x);
            CHECK((g - fd).norm() / (1.0 + g.norm()) <= 1e-6);
        }
    }
}

TEST_CASE("direct divergence agrees with the three-term identity") {
    std::mt19937_64 rng(99);
    for (const auto& d : all_kinds()) {
        for (int t = 0; t < 200; ++t) {
            const Vector x = draw(d, rng, 6);
            const Vector y = draw(d, rng, 6);
            const double generic = d.h_value(x) - d.h_value(y) - d.h_grad(y).dot(x - y);
            const double scale = std::abs(d.h_value(x)) + std::abs(d.h_value(y)) + 1.0;
            CHECK(std::abs(d.divergence(x, y) - generic) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("squared Euclidean scales exactly with exponent 2") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto d = BregmanDivergence::squared_euclidean();
    for (int t = 0; t < 1000; ++t) {
        const long n = 1 + t % 20;
        const Vector x = bregfw::testing::gaussian(rng, n);
        const Vector z = bregfw::testing::gaussian(rng, n);
        const Vector zt = bregfw::testing::gaussian(rng, n);
        const double th = unit(rng);
        const double lhs = d.divergence((1 - th) * x + th * z, (1 - th) * x + th * zt);
        const double rhs = th * th * d.divergence(z, zt);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(rhs), 1e-300));
    }
}

TEST_CASE("triangle scaling probe reports instead of asserting") {
    const auto euclid = probe_triangle_scaling(BregmanDivergence::squared_euclidean(), 5, 2.0, 200, 1);
    CHECK(euclid.violations == 0);
    CHECK(euclid.worst_ratio == doctest::Approx(1.0).epsilon(1e-9));

    for (double gamma : {1.5, 2.0}) {
        const auto kl = probe_triangle_scaling(BregmanDivergence::negative_entropy(), 5, gamma, 200, 2);
        const auto quartic = probe_triangle_scaling(BregmanDivergence::svm_quartic(100, 0.5, 0.3), 5, gamma, 200, 3);
        MESSAGE("gamma=" << gamma << " KL worst ratio " << kl.worst_ratio << " (" << kl.violations << "/"
                         << kl.samples << "), quartic worst ratio " << quartic.worst_ratio << " ("
                         << quartic.violations << "/" << quartic.samples << ")");
        CHECK(kl.samples > 0);
        CHECK(std::isfinite(kl.worst_ratio));
        CHECK(std::isfinite(quartic.worst_ratio));
    }
}

TEST_CASE("factory validation") {
    CHECK_THROWS_AS(BregmanDivergence::svm_quartic(0.0, 1, 1), ConfigError);
    CHECK_THROWS_AS(BregmanDivergence::svm_quartic(1.0, -1, 1), ConfigError);
    CHECK(divergence_kind_from_string("svm_quartic") == DivergenceKind::SvmQuartic);
    CHECK_THROWS_AS(divergence_kind_from_string("burg"), ConfigError);
}
