#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bregfw/solver.hpp"

namespace bregfw {

/// Names used in Violation::check.
namespace checks {
inline constexpr const char* kAcceptance = "acceptance";   // accepted step satisfies the model inequality
inline constexpr const char* kHalving = "halving";         // clamped strict step halves f - f*
inline constexpr const char* kDecrease = "decrease";       // interior step decreases f enough
inline constexpr const char* kRate = "rate";               // f_k - f* <= (2/(k+2))^(gamma-1) max L R^2
inline constexpr const char* kBacktracks = "backtracks";   // total checks <= 2N + log2(2L/L_init)
inline constexpr const char* kLBound = "L_bound";          // L_k <= 2L
} // namespace checks

struct VerifyOptions {
    /// R^2 with V <= R^2/2 on the set; the rate check is skipped when absent.
    std::optional<double> R2;
    /// Ask for the f*-dependent checks (halving, rate). Throws MissingFStar without f*.
    bool require_f_star = true;
    double tol = 1e-9;
};

struct VerifyReport {
    std::vector<Violation> violations;
    /// Clamped steps where 2 L V == -<grad f, d>: logged, not checked.
    int equality_clamps = 0;
    /// How many inequalities were evaluated, per check name.
    int acceptance_checked = 0;
    int halving_checked = 0;
    int decrease_checked = 0;
    int rate_checked = 0;
    bool backtracks_checked = false;

    bool ok() const { return violations.empty(); }
};

/// Re-checks a completed adaptive run against the descent and rate guarantees,
/// each to tolerance tol (1 + |f_k|). f* is taken from result.f_star_used,
/// falling back to problem.f_star. The backtracking bound is evaluated only when
/// the objective declares a Euclidean Lipschitz constant L, the step geometry is
/// SquaredEuclidean and L_init <= 2L; it is exact (no tolerance).
VerifyReport verify_run(const RunResult& result, const ProblemInstance& problem,
                        const VerifyOptions& opts = {});

/// One row of a method log.
struct LoggedRow {
    int k = 0;
    double f = 0.0;
    double fw_gap = 0.0;
    double alpha = 0.0;
    double L_k = 0.0;
    int checks = 0;
};

struct LoggedRunInfo {
    double gamma = 2.0;
    double L_init = 0.0;
    std::optional<double> f_star;
    std::optional<double> R2;
    /// Euclidean Lipschitz constant, declared only when the backtracking bound applies.
    std::optional<double> lipschitz;
    double tol = 1e-9;
};

/// Checks the decrease, rate and backtracking guarantees from logged
/// quantities alone. For a < 1 the decrease bound simplifies to
/// f_{k+1} - f_k <= -a gap / 2, which needs no divergence value.
VerifyReport verify_logged(const std::vector<LoggedRow>& rows, const LoggedRunInfo& info);

} // namespace bregfw
