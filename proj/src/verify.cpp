#include "bregfw/verify.hpp"

#include <algorithm>
#include <cmath>

namespace bregfw {

namespace {

double slack(double tol, double f) { return tol * (1.0 + std::abs(f)); }

double rate_bound(int k, double gamma, double L_max, double R2) {
    return std::pow(2.0 / (double(k) + 2.0), gamma - 1.0) * L_max * R2;
}

// Shared by both verifiers: f_k - f* against the rate bound for k >= 1,
// using max_{j<k} L_j.
void check_rate(const std::vector<double>& f, const std::vector<double>& L, double gamma,
                double f_star, double R2, double tol, VerifyReport& report) {
    double L_max = L.empty() ? 0.0 : L[0];
    for (std::size_t k = 1; k < f.size(); ++k) {
        const double lhs = f[k] - f_star;
        const double rhs = rate_bound(int(k), gamma, L_max, R2);
        ++report.rate_checked;
        if (lhs > rhs + slack(tol, f[k]))
            report.violations.push_back({checks::kRate, int(k), lhs, rhs});
        L_max = std::max(L_max, L[k]);
    }
}

void check_backtracks(const std::vector<int>& step_checks, const std::vector<double>& step_L,
                      double L_init, double lipschitz, VerifyReport& report) {
    if (!(L_init <= 2.0 * lipschitz)) return;
    report.backtracks_checked = true;
    long total = 0;
    for (std::size_t k = 0; k < step_checks.size(); ++k) {
        total += step_checks[k];
        if (step_L[k] > 2.0 * lipschitz)
            report.violations.push_back({checks::kLBound, int(k), step_L[k], 2.0 * lipschitz});
    }
    const double N = double(step_checks.size());
    const double bound = 2.0 * N + std::log2(2.0 * lipschitz / L_init);
    if (double(total) > bound)
        report.violations.push_back({checks::kBacktracks, int(step_checks.size()), double(total), bound});
}

} // namespace

VerifyReport verify_run(const RunResult& result, const ProblemInstance& problem,
                        const VerifyOptions& opts) {
    if (result.method == Method::ClassicFW)
        throw ConfigError("verify_run: classic FW runs carry no adaptive guarantees");
    if (result.records.empty()) throw ConfigError("verify_run: empty run");

    const std::optional<double> f_star =
        result.f_star_used ? result.f_star_used : problem.f_star;
    if (opts.require_f_star && !f_star)
        throw MissingFStar("verify_run: f* is required for the halving and rate checks");

    VerifyReport report;
    const double gamma = result.gamma;
    const auto& recs = result.records;
    const double p = 1.0 / (gamma - 1.0);

    for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
        const auto& r = recs[k];
        const double f0 = r.f_x;
        const double f1 = recs[k + 1].f_x;
        const double gd = -r.fw_gap;
        const double eps = slack(opts.tol, f0);

        const double model = f0 + r.alpha * gd + std::pow(r.alpha, gamma) * r.L_k * r.div_step;
        ++report.acceptance_checked;
        if (f1 > model + eps) report.violations.push_back({checks::kAcceptance, int(k), f1, model});

        if (r.alpha == 1.0) {
            if (2.0 * r.L_k * r.div_step < r.fw_gap) {
                if (f_star) {
                    const double lhs = f1 - *f_star;
                    const double rhs = 0.5 * (f0 - *f_star);
                    ++report.halving_checked;
                    if (lhs > rhs + eps) report.violations.push_back({checks::kHalving, int(k), lhs, rhs});
                }
            } else {
                ++report.equality_clamps;
            }
        } else {
            double rhs = 0.0;
            if (r.fw_gap > 0.0 && r.div_step > 0.0)
                rhs = -0.5 * std::exp(gamma * p * std::log(r.fw_gap) -
                                      p * std::log(2.0 * r.L_k * r.div_step));
            const double lhs = f1 - f0;
            ++report.decrease_checked;
            if (lhs > rhs + eps) report.violations.push_back({checks::kDecrease, int(k), lhs, rhs});
        }
    }

    if (f_star && opts.R2) {
        std::vector<double> f;
        std::vector<double> L;
        for (const auto& r : recs) {
            f.push_back(r.f_x);
            L.push_back(r.L_k);
        }
        check_rate(f, L, gamma, *f_star, *opts.R2, opts.tol, report);
    }

    const auto lipschitz = problem.objective.lipschitz_bound();
    if (lipschitz && result.divergence == DivergenceKind::SquaredEuclidean) {
        std::vector<int> c;
        std::vector<double> L;
        for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
            c.push_back(recs[k].checks);
            L.push_back(recs[k].L_k);
        }
        check_backtracks(c, L, result.L_init, *lipschitz, report);
    }
    return report;
}

VerifyReport verify_logged(const std::vector<LoggedRow>& rows, const LoggedRunInfo& info) {
    if (rows.empty()) throw ParseError("verify_logged: no rows");
    VerifyReport report;

    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const auto& r = rows[k];
        if (!(r.alpha < 1.0)) continue;
        const double lhs = rows[k + 1].f - r.f;
        const double rhs = -0.5 * r.alpha * std::max(r.fw_gap, 0.0);
        ++report.decrease_checked;
        if (lhs > rhs + slack(info.tol, r.f))
            report.violations.push_back({checks::kDecrease, int(k), lhs, rhs});
    }

    if (info.f_star && info.R2) {
        std::vector<double> f;
        std::vector<double> L;
        for (const auto& r : rows) {
            f.push_back(r.f);
            L.push_back(r.L_k);
        }
        check_rate(f, L, info.gamma, *info.f_star, *info.R2, info.tol, report);
    }

    if (info.lipschitz) {
        std::vector<int> c;
        std::vector<double> L;
        for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
            c.push_back(rows[k].checks);
            L.push_back(rows[k].L_k);
        }
        check_backtracks(c, L, info.L_init, *info.lipschitz, report);
    }
    return report;
}

} // namespace bregfw
