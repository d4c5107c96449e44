#include "bregfw/solver.hpp"

#include <algorithm>
#include <cmath>

namespace bregfw {

std::string_view to_string(Method m) {
    switch (m) {
    case Method::AdaptiveBregmanFW: return "adaptive_bregman";
    case Method::ClassicFW: return "classic";
    case Method::AdaptiveEuclideanFW: return "adaptive_euclidean";
    }
    return "unknown";
}

Method method_from_string(std::string_view name) {
    if (name == "adaptive_bregman") return Method::AdaptiveBregmanFW;
    if (name == "classic") return Method::ClassicFW;
    if (name == "adaptive_euclidean") return Method::AdaptiveEuclideanFW;
    throw ConfigError("unknown method '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (!(L_init > 0.0) || !std::isfinite(L_init)) throw ConfigError("L_init must be > 0");
    if (!(gamma > 1.0 && gamma <= 2.0)) throw ConfigError("gamma must lie in (1, 2]");
    if (!(gap_tol >= 0.0)) throw ConfigError("gap_tol must be >= 0");
    if (max_backtracks_per_iter < 0) throw ConfigError("max_backtracks_per_iter must be >= 0");
}

double step_length(double grad_dot_d, double L, double V_step, double gamma) {
    if (V_step < -1e-12) throw InvalidCurvature("negative divergence " + std::to_string(V_step));
    if (grad_dot_d >= -kStationaryGap) return 0.0;
    if (V_step <= 1e-15) return 1.0;
    const double ratio = -grad_dot_d / (2.0 * L * V_step);
    if (ratio >= 1.0) return 1.0;
    return std::min(std::pow(ratio, 1.0 / (gamma - 1.0)), 1.0);
}

namespace {

struct Probe {
    double gap = 0.0;
    Vector s;
    bool zero_gradient = false;
};

Probe probe(const ProblemInstance& p, const Vector& x) {
    const Vector g = p.objective.gradient(x);
    LmoResult l = p.set.lmo(g);
    Probe out;
    out.gap = -g.dot(l.vertex - x);
    out.s = std::move(l.vertex);
    out.zero_gradient = l.zero_gradient;
    return out;
}

} // namespace

RunResult run(const ProblemInstance& problem, const Vector& x0, const SolverConfig& cfg) {
    problem.validate();
    cfg.validate();
    check_dim("run: x0", problem.set.dim(), x0.size());
    if (!problem.set.contains(x0, 1e-9)) throw ConfigError("run: x0 is not feasible");

    const bool adaptive = cfg.method != Method::ClassicFW;
    const bool euclidean = cfg.method == Method::AdaptiveEuclideanFW;
    const BregmanDivergence V = euclidean ? BregmanDivergence::squared_euclidean() : problem.divergence;
    const double gamma = euclidean ? 2.0 : cfg.gamma;
    if (adaptive && !V.is_interior(x0))
        throw DomainError("run: x0 is not interior to the divergence domain");

    RunResult result;
    result.method = cfg.method;
    result.gamma = gamma;
    result.L_init = cfg.L_init;
    result.divergence = V.kind();
    result.f_star_used = problem.f_star;

    Vector x = x0;
    double fx = problem.objective.value(x);
    double L_prev = cfg.L_init;
    double L_max = 0.0;

    for (int k = 0;; ++k) {
        Probe pr = probe(problem, x);
        IterationRecord rec;
        rec.k = k;
        rec.f_x = fx;
        rec.fw_gap = pr.gap;
        rec.zero_gradient = pr.zero_gradient;
        if (cfg.check_invariants && pr.gap < -1e-12 * (1.0 + std::abs(fx)))
            result.violations.push_back({"fw_gap_sign", k, pr.gap, 0.0});

        // Below kStationaryGap the step would be 0 and x could never move again.
        if (k == cfg.max_iters || pr.gap <= std::max(cfg.gap_tol, kStationaryGap)) {
            rec.L_k = adaptive ? L_prev : 0.0;
            result.records.push_back(rec);
            result.L_max_running.push_back(std::max(L_max, rec.L_k));
            break;
        }

        const Vector d = pr.s - x;
        const double gd = -pr.gap;
        Vector x_next;
        double f_next = 0.0;

        if (!adaptive) {
            rec.alpha = 2.0 / (double(k) + 2.0);
            x_next = x + rec.alpha * d;
            f_next = problem.objective.value(x_next);
        } else {
            const double v_step = V.divergence(pr.s, x);
            const double slack = kAcceptSlack * (1.0 + std::abs(fx));
            double L = L_prev / 2.0;
            int checks = 0;
            double alpha = 0.0;
            while (true) {
                ++checks;
                alpha = step_length(gd, L, v_step, gamma);
                x_next = x + alpha * d;
                f_next = problem.objective.value(x_next);
                const double model = fx + alpha * gd + std::pow(alpha, gamma) * L * v_step;
                if (f_next <= model + slack) break;
                if (checks > cfg.max_backtracks_per_iter) throw BacktrackOverflow(k, L);
                L *= 2.0;
            }
            rec.alpha = alpha;
            rec.L_k = L;
            rec.checks = checks;
            rec.div_step = v_step;
            rec.clamped = alpha == 1.0;
            L_prev = L;
        }

        if (cfg.check_invariants) {
            if (!problem.set.contains(x_next, 1e-9))
                result.violations.push_back({"feasibility", k + 1, 0.0, 0.0});
            if (adaptive && f_next > fx + 1e-12 * (1.0 + std::abs(fx)))
                result.violations.push_back({"monotone_descent", k, f_next, fx});
        }

        L_max = std::max(L_max, rec.L_k);
        result.records.push_back(rec);
        result.L_max_running.push_back(L_max);
        x = std::move(x_next);
        fx = f_next;
    }

    result.x_final = std::move(x);
    return result;
}

} // namespace bregfw
