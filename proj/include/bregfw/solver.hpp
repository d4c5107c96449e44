#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bregfw/problems.hpp"
#include "bregfw/types.hpp"

namespace bregfw {

enum class Method { AdaptiveBregmanFW, ClassicFW, AdaptiveEuclideanFW };

std::string_view to_string(Method m);
Method method_from_string(std::string_view name);

struct SolverConfig {
    Method method = Method::AdaptiveBregmanFW;
    int max_iters = 1000;
    double L_init = 1.0;
    double gamma = 2.0;
    /// Stop as soon as the FW gap is <= gap_tol. Gaps <= kStationaryGap always stop.
    double gap_tol = 0.0;
    int max_backtracks_per_iter = 60;
    bool check_invariants = true;

    void validate() const;
};

/// Telemetry for one iterate x_k.
///
/// Every run ends with a terminal record describing the returned iterate: no
/// step is taken from it, so it carries alpha = 0 and checks = 0.
struct IterationRecord {
    int k = 0;
    double f_x = 0.0;
    /// -<grad f(x_k), s_k - x_k>
    double fw_gap = 0.0;
    double alpha = 0.0;
    /// Accepted smoothness estimate; 0 for ClassicFW.
    double L_k = 0.0;
    /// Evaluations of the acceptance inequality at this step.
    int checks = 0;
    /// V(s_k, x_k)
    double div_step = 0.0;
    bool clamped = false;
    bool zero_gradient = false;
};

struct Violation {
    std::string check;
    int k = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct RunResult {
    Method method = Method::AdaptiveBregmanFW;
    double gamma = 2.0;
    double L_init = 0.0;
    /// Divergence actually used for step lengths (SquaredEuclidean for AdaptiveEuclideanFW).
    DivergenceKind divergence = DivergenceKind::SquaredEuclidean;

    std::vector<IterationRecord> records;
    Vector x_final;
    std::optional<double> f_star_used;
    /// max_{j <= k} L_j, one entry per record.
    std::vector<double> L_max_running;
    /// Breaches found by the inline checks (descent, feasibility, FW gap sign).
    std::vector<Violation> violations;

    /// Number of steps taken (records minus the terminal one).
    int steps() const { return records.empty() ? 0 : int(records.size()) - 1; }
    double f_final() const { return records.back().f_x; }
};

/// FW gaps at or below this count as stationary.
inline constexpr double kStationaryGap = 1e-15;

/// Step length
///   min{ (-grad_dot_d / (2 L V))^(1/(gamma-1)), 1 }
/// with 0 at stationarity (grad_dot_d >= -kStationaryGap) and 1 when V <= 1e-15.
double step_length(double grad_dot_d, double L, double V_step, double gamma);

/// Relative slack in the acceptance inequality, absorbing round-off in f.
inline constexpr double kAcceptSlack = 1e-12;

/// Runs the configured Frank-Wolfe variant from x0.
///
/// The adaptive variants halve L at the start of each iteration and double it
/// until
///   f(x + a d) <= f(x) + a <grad f(x), d> + a^gamma L V(s, x)
/// holds, recomputing a after every doubling. AdaptiveEuclideanFW is the same
/// loop with gamma = 2 and V = 1/2 |.|^2. ClassicFW uses a = 2 / (k + 2).
RunResult run(const ProblemInstance& problem, const Vector& x0, const SolverConfig& cfg);

} // namespace bregfw
