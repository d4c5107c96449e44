#include <algorithm>
#include <cmath>

#include "doctest.h"

#include "bregfw/verify.hpp"

using namespace bregfw;

namespace {

ProblemInstance ball_quadratic() {
    Vector c(3);
    c << 0.8, -0.9, 0.4;
    ProblemInstance p{Objective::quadratic(Matrix::Identity(3, 3), -c), FeasibleSet::l2_ball(Vector::Zero(3), 1.0),
                      BregmanDivergence::squared_euclidean()};
    p.f_star = -0.5 * c.squaredNorm() + 0.5 * (c.norm() - 1.0) * (c.norm() - 1.0);
    return p;
}

RunResult solve(const ProblemInstance& p, int iters = 200) {
    SolverConfig c;
    c.max_iters = iters;
    c.L_init = 0.1;
    return run(p, p.set.default_start(), c);
}

long count(const VerifyReport& r, const char* name) {
    return std::count_if(r.violations.begin(), r.violations.end(),
                         [&](const Violation& v) { return v.check == name; });
}

} // namespace

TEST_CASE("a clean run verifies") {
    const auto p = ball_quadratic();
    const auto r = solve(p);
    VerifyOptions o;
    o.R2 = 4.0;
    const auto rep = verify_run(r, p, o);
    CHECK(rep.ok());
    CHECK(rep.acceptance_checked == r.steps());
    CHECK(rep.rate_checked == int(r.records.size()) - 1);
    CHECK(rep.halving_checked + rep.decrease_checked + rep.equality_clamps == r.steps());
    CHECK(rep.backtracks_checked);
}

TEST_CASE("forged iterates are caught") {
    const auto p = ball_quadratic();
    auto r = solve(p);
    std::size_t k = 0;
    while (k + 1 < r.records.size() && r.records[k].alpha >= 1.0) ++k;
    REQUIRE(k + 1 < r.records.size());
    r.records[k + 1].f_x = r.records[k].f_x + 0.1;
    const auto rep = verify_run(r, p);
    CHECK(count(rep, checks::kDecrease) >= 1);
    CHECK(count(rep, checks::kAcceptance) >= 1);

    auto lied = solve(p);
    lied.records[0].checks += 100;
    CHECK(count(verify_run(lied, p), checks::kBacktracks) == 1);
}

TEST_CASE("rate bound at k = 1 with gamma 2") {
    // (2/3) L_0 R^2 with L_0 = 3, R^2 = 1, f* = 0.
    LoggedRunInfo info;
    info.gamma = 2.0;
    info.L_init = 6.0;
    info.f_star = 0.0;
    info.R2 = 1.0;
    info.tol = 0.0;
    std::vector<LoggedRow> rows{{0, 5.0, 0.0, 0.0, 3.0, 1}, {1, 2.0, 0.0, 0.0, 3.0, 0}};
    CHECK(verify_logged(rows, info).ok());
    rows[1].f = 2.0 + 1e-9;
    const auto rep = verify_logged(rows, info);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].check == std::string(checks::kRate));
    CHECK(rep.violations[0].rhs == doctest::Approx(2.0));
}

TEST_CASE("verify_logged decrease and backtracking checks") {
    LoggedRunInfo info;
    info.L_init = 1.0;
    info.lipschitz = 1.0;
    // Three steps with two checks each: 6 <= 2 * 3 + log2(2).
    std::vector<LoggedRow> rows{{0, 4.0, 2.0, 0.5, 1.0, 2},
                                {1, 3.5, 1.0, 0.5, 1.0, 2},
                                {2, 3.25, 0.5, 0.5, 1.0, 2},
                                {3, 3.125, 0.2, 0.0, 1.0, 0}};
    auto rep = verify_logged(rows, info);
    CHECK(rep.ok());
    CHECK(rep.decrease_checked == 3);
    CHECK(rep.backtracks_checked);

    for (auto& r : rows) r.checks = r.alpha > 0 ? 3 : 0;
    CHECK(count(verify_logged(rows, info), checks::kBacktracks) == 1);

    for (auto& r : rows) r.checks = 2;
    rows[2].f = 3.45; // 3.45 - 3.5 > -0.5 * 0.5 * 1.0
    CHECK(count(verify_logged(rows, info), checks::kDecrease) == 1);

    CHECK_THROWS_AS(verify_logged({}, info), ParseError);
}

TEST_CASE("verify_run preconditions") {
    auto p = ball_quadratic();
    SolverConfig classic;
    classic.method = Method::ClassicFW;
    classic.max_iters = 5;
    CHECK_THROWS_AS(verify_run(run(p, p.set.default_start(), classic), p), ConfigError);

    p.f_star.reset();
    const auto r = solve(p, 20);
    CHECK_THROWS_AS(verify_run(r, p), MissingFStar);
    VerifyOptions lax;
    lax.require_f_star = false;
    const auto rep = verify_run(r, p, lax);
    CHECK(rep.halving_checked == 0);
    CHECK(rep.rate_checked == 0);
}
