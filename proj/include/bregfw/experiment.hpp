#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bregfw/problems.hpp"
#include "bregfw/solver.hpp"
#include "bregfw/verify.hpp"

namespace bregfw {

using json = nlohmann::json;

struct ProblemSpec {
    std::string kind = "poisson"; // poisson | svm | quadratic
    // poisson
    long n = 50;
    long m = 100;
    double noise = 0.01;
    std::string data_dir; // load A.csv / b.csv written by `gen` instead of generating
    // svm
    std::string path;
    double lambda = 100.0;
    long pad_dim = 0; // 0 keeps the native width
    bool header = false;
    bool squared_reg = false;
    long max_rows = 0;
    // quadratic
    long dim = 20;
    double mu = 1.0;
    double L = 10.0;
    double minimizer_norm = 0.5;
};

struct SetSpec {
    std::string kind = "auto"; // auto | simplex | l1ball | l2ball
    double radius = 1.0;
    std::vector<double> center; // empty = origin
};

struct DivergenceSpec {
    std::string kind = "auto"; // auto | squared_euclidean | negative_entropy | svm_quartic
    double floor = 1e-12;
};

struct MethodSpec {
    std::string label;
    Method method = Method::AdaptiveBregmanFW;
    double gamma = 2.0;
    /// Either a number or "b_norm1" / "lipschitz" / "default".
    std::string L_init_rule = "default";
    double L_init = 1.0;
    int max_iters = 500;
    double gap_tol = 0.0;
    int max_backtracks = 60;
};

struct R2Spec {
    std::optional<double> value;
    double interior_floor = 1e-6;
    int samples = 100000;
};

/// A fully resolved experiment. Every field has a default, and `to_json`
/// writes all of them so a manifest is enough to repeat a run.
struct ExperimentConfig {
    std::string name = "experiment";
    ProblemSpec problem;
    SetSpec set;
    DivergenceSpec divergence;
    std::vector<MethodSpec> methods;
    std::uint64_t seed = 0;
    std::string output_dir = "runs/experiment";
    std::string f_star_policy = "best_found"; // known | best_found
    std::optional<double> f_star_value;
    std::string x0 = "default"; // default | explicit via x0_values
    std::vector<double> x0_values;
    R2Spec r2;
    bool check_invariants = true;

    /// `base_dir` resolves relative data paths.
    static ExperimentConfig from_json(const json& j, const std::filesystem::path& base_dir = {});
    json to_json() const;
    void validate() const;
};

/// Parses and validates a config file. ConfigError messages carry line:column
/// for syntax errors.
ExperimentConfig load_config(const std::filesystem::path& path);

struct BuiltProblem {
    ProblemInstance instance;
    Vector x0;
    std::optional<double> known_f_star;
    std::optional<double> L_reported; // |b|_1 for Poisson
    DiameterBound R2;
};

BuiltProblem build_problem(const ExperimentConfig& cfg);

/// L_init after resolving symbolic rules against the built problem.
double resolve_L_init(const MethodSpec& m, const BuiltProblem& p);

struct MethodOutcome {
    MethodSpec spec;
    RunResult result;
    VerifyReport report;
    /// Rate-bound breaches under an empirical R^2: reported, never fatal.
    std::vector<Violation> advisory;
    /// R^2 the rate check used: closed form for Euclidean steps, else the problem's.
    std::optional<DiameterBound> R2_used;
    double wall_seconds = 0.0;
    std::string error;
};

struct ExperimentResult {
    std::vector<MethodOutcome> methods;
    std::optional<double> f_star_used;
    DiameterBound R2;
    std::optional<double> lipschitz;
    double wall_seconds = 0.0;

    bool has_errors() const;
    bool has_violations() const;
};

/// Runs every method (up to `threads` at once), fixes f*, and verifies each
/// adaptive run.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

/// Method log: header `k,f,fw_gap,alpha,L_k,checks`, one row per record.
std::string format_log(const RunResult& r);
std::vector<LoggedRow> parse_log(const std::filesystem::path& path);

json make_manifest(const ExperimentConfig& cfg, const ExperimentResult& res);

/// Writes `<dir>/<label>.csv` per method, then `<dir>/manifest.json`.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                   const ExperimentResult& res);

struct GenParams {
    std::string kind = "poisson";
    long n = 0;
    long m = 0;
    double noise = 0.0;
    std::uint64_t seed = 0;
};

/// Writes A.csv, b.csv, x_true.csv and meta.json into `out`.
void generate_dataset(const GenParams& p, const std::filesystem::path& out);

// Exit codes: 0 ok, 1 error, 2 invariant violations (run: only with strict).
int cmd_run(const std::filesystem::path& config, bool strict, int threads,
            const std::optional<std::filesystem::path>& out_override, std::ostream& out,
            std::ostream& err);
int cmd_gen(const GenParams& p, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);
int cmd_verify(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

} // namespace bregfw
