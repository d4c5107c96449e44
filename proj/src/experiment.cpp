#include "bregfw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "bregfw/csv.hpp"

namespace fs = std::filesystem;

namespace bregfw {

namespace {

const char* const kLogHeader = "k,f,fw_gap,alpha,L_k,checks";

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
    }
}

template <class T>
void read_field(const json& j, const char* key, T& out, const char* where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

std::string default_label(const MethodSpec& m) {
    switch (m.method) {
    case Method::ClassicFW: return "FW-classic";
    case Method::AdaptiveEuclideanFW: return "FW-sqL2";
    case Method::AdaptiveBregmanFW: {
        char buf[32];
        if (std::abs(m.gamma * 10.0 - std::round(m.gamma * 10.0)) < 1e-12)
            std::snprintf(buf, sizeof buf, "FW-%.1f", m.gamma);
        else
            std::snprintf(buf, sizeof buf, "FW-%s", csv::format_double(m.gamma).c_str());
        return buf;
    }
    }
    return "FW";
}

MethodSpec method_from_json(const json& j, std::size_t idx) {
    const std::string where = "methods[" + std::to_string(idx) + "]";
    reject_unknown(j, where.c_str(),
                   {"label", "method", "gamma", "L_init", "max_iters", "gap_tol", "max_backtracks"});
    MethodSpec m;
    std::string method = "adaptive_bregman";
    read_field(j, "method", method, where.c_str());
    m.method = method_from_string(method);
    read_field(j, "gamma", m.gamma, where.c_str());
    if (j.contains("L_init")) {
        const auto& v = j.at("L_init");
        if (v.is_number()) {
            m.L_init_rule = "value";
            m.L_init = v.get<double>();
        } else if (v.is_string()) {
            m.L_init_rule = v.get<std::string>();
            if (m.L_init_rule != "b_norm1" && m.L_init_rule != "lipschitz" && m.L_init_rule != "default")
                throw ConfigError(where + ".L_init: unknown rule '" + m.L_init_rule + "'");
        } else {
            throw ConfigError(where + ".L_init: expected a number or a rule name");
        }
    }
    read_field(j, "max_iters", m.max_iters, where.c_str());
    read_field(j, "gap_tol", m.gap_tol, where.c_str());
    read_field(j, "max_backtracks", m.max_backtracks, where.c_str());
    read_field(j, "label", m.label, where.c_str());
    if (m.label.empty()) m.label = default_label(m);
    return m;
}

json violations_json(const std::vector<Violation>& vs) {
    json out = json::array();
    for (const auto& v : vs) out.push_back({{"check", v.check}, {"k", v.k}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    return out;
}

// Line and column of a byte offset, for parse diagnostics.
std::string locate(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

Vector column_vector(const Matrix& m, const char* what) {
    if (m.cols() != 1) throw ParseError(std::string(what) + ": expected a single column");
    return m.col(0);
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
    reject_unknown(j, "config",
                   {"name", "problem", "set", "divergence", "methods", "seed", "output_dir", "f_star",
                    "x0", "R2", "check_invariants"});
    ExperimentConfig c;
    read_field(j, "name", c.name, "config");
    read_field(j, "seed", c.seed, "config");
    read_field(j, "output_dir", c.output_dir, "config");
    read_field(j, "check_invariants", c.check_invariants, "config");
    if (!j.contains("output_dir")) c.output_dir = "runs/" + c.name;

    if (!j.contains("problem")) throw ConfigError("config: missing 'problem'");
    const json& p = j.at("problem");
    reject_unknown(p, "problem",
                   {"kind", "n", "m", "noise", "data_dir", "path", "lambda", "pad_dim", "header",
                    "squared_reg", "max_rows", "dim", "mu", "L", "minimizer_norm"});
    read_field(p, "kind", c.problem.kind, "problem");
    read_field(p, "n", c.problem.n, "problem");
    read_field(p, "m", c.problem.m, "problem");
    read_field(p, "noise", c.problem.noise, "problem");
    read_field(p, "data_dir", c.problem.data_dir, "problem");
    read_field(p, "path", c.problem.path, "problem");
    read_field(p, "lambda", c.problem.lambda, "problem");
    read_field(p, "pad_dim", c.problem.pad_dim, "problem");
    read_field(p, "header", c.problem.header, "problem");
    read_field(p, "squared_reg", c.problem.squared_reg, "problem");
    read_field(p, "max_rows", c.problem.max_rows, "problem");
    read_field(p, "dim", c.problem.dim, "problem");
    read_field(p, "mu", c.problem.mu, "problem");
    read_field(p, "L", c.problem.L, "problem");
    read_field(p, "minimizer_norm", c.problem.minimizer_norm, "problem");
    auto resolve = [&](std::string& path) {
        if (!path.empty() && fs::path(path).is_relative() && !base_dir.empty())
            path = (base_dir / path).lexically_normal().string();
    };
    resolve(c.problem.path);
    resolve(c.problem.data_dir);

    if (j.contains("set")) {
        const json& s = j.at("set");
        reject_unknown(s, "set", {"kind", "radius", "center"});
        read_field(s, "kind", c.set.kind, "set");
        read_field(s, "radius", c.set.radius, "set");
        read_field(s, "center", c.set.center, "set");
    }
    if (j.contains("divergence")) {
        const json& d = j.at("divergence");
        reject_unknown(d, "divergence", {"kind", "floor"});
        read_field(d, "kind", c.divergence.kind, "divergence");
        read_field(d, "floor", c.divergence.floor, "divergence");
    }
    if (!j.contains("methods") || !j.at("methods").is_array())
        throw ConfigError("config: 'methods' must be a list");
    for (std::size_t i = 0; i < j.at("methods").size(); ++i)
        c.methods.push_back(method_from_json(j.at("methods")[i], i));

    if (j.contains("f_star")) {
        const json& f = j.at("f_star");
        reject_unknown(f, "f_star", {"policy", "value"});
        read_field(f, "policy", c.f_star_policy, "f_star");
        if (f.contains("value") && !f.at("value").is_null()) c.f_star_value = f.at("value").get<double>();
    }
    if (j.contains("x0")) {
        const json& x = j.at("x0");
        if (x.is_string()) {
            c.x0 = x.get<std::string>();
        } else if (x.is_array()) {
            c.x0 = "explicit";
            c.x0_values = x.get<std::vector<double>>();
        } else {
            throw ConfigError("config.x0: expected \"default\" or a list of numbers");
        }
    }
    if (j.contains("R2")) {
        const json& r = j.at("R2");
        reject_unknown(r, "R2", {"value", "interior_floor", "samples"});
        if (r.contains("value") && !r.at("value").is_null()) c.r2.value = r.at("value").get<double>();
        read_field(r, "interior_floor", c.r2.interior_floor, "R2");
        read_field(r, "samples", c.r2.samples, "R2");
    }
    c.validate();
    return c;
}

json ExperimentConfig::to_json() const {
    json methods_j = json::array();
    for (const auto& m : methods) {
        json mj = {{"label", m.label},
                   {"method", std::string(to_string(m.method))},
                   {"gamma", m.gamma},
                   {"max_iters", m.max_iters},
                   {"gap_tol", m.gap_tol},
                   {"max_backtracks", m.max_backtracks}};
        if (m.L_init_rule == "value") mj["L_init"] = m.L_init;
        else mj["L_init"] = m.L_init_rule;
        methods_j.push_back(mj);
    }
    json j = {
        {"name", name},
        {"problem",
         {{"kind", problem.kind}, {"n", problem.n}, {"m", problem.m}, {"noise", problem.noise},
          {"data_dir", problem.data_dir}, {"path", problem.path}, {"lambda", problem.lambda},
          {"pad_dim", problem.pad_dim}, {"header", problem.header},
          {"squared_reg", problem.squared_reg}, {"max_rows", problem.max_rows},
          {"dim", problem.dim}, {"mu", problem.mu}, {"L", problem.L},
          {"minimizer_norm", problem.minimizer_norm}}},
        {"set", {{"kind", set.kind}, {"radius", set.radius}, {"center", set.center}}},
        {"divergence", {{"kind", divergence.kind}, {"floor", divergence.floor}}},
        {"methods", methods_j},
        {"seed", seed},
        {"output_dir", output_dir},
        {"f_star", {{"policy", f_star_policy}, {"value", f_star_value ? json(*f_star_value) : json()}}},
        {"R2",
         {{"value", r2.value ? json(*r2.value) : json()},
          {"interior_floor", r2.interior_floor},
          {"samples", r2.samples}}},
        {"check_invariants", check_invariants},
    };
    if (x0 == "explicit") j["x0"] = x0_values;
    else j["x0"] = x0;
    return j;
}

void ExperimentConfig::validate() const {
    if (methods.empty()) throw ConfigError("config: at least one method is required");
    const std::set<std::string> kinds{"poisson", "svm", "quadratic"};
    if (!kinds.count(problem.kind)) throw ConfigError("problem.kind: unknown kind '" + problem.kind + "'");
    if (problem.kind == "poisson" && problem.data_dir.empty()) {
        if (problem.n < 1 || problem.m < 1) throw ConfigError("problem: n and m must be >= 1");
        if (!(problem.noise >= 0.0 && problem.noise < 1.0))
            throw ConfigError("problem.noise must be in [0, 1)");
    }
    if (problem.kind == "svm" && problem.path.empty()) throw ConfigError("problem.path is required for svm");
    if (problem.kind == "quadratic" && problem.dim < 1) throw ConfigError("problem.dim must be >= 1");
    if (set.kind != "auto") set_kind_from_string(set.kind);
    if (divergence.kind != "auto") divergence_kind_from_string(divergence.kind);
    if (f_star_policy != "known" && f_star_policy != "best_found")
        throw ConfigError("f_star.policy must be 'known' or 'best_found'");
    if (x0 != "default" && x0 != "explicit") throw ConfigError("x0: unknown rule '" + x0 + "'");

    std::set<std::string> labels;
    for (const auto& m : methods) {
        if (!labels.insert(m.label).second) throw ConfigError("methods: duplicate label '" + m.label + "'");
        if (m.label.find_first_of("/\\") != std::string::npos)
            throw ConfigError("methods: label '" + m.label + "' must not contain path separators");
        SolverConfig sc;
        sc.method = m.method;
        sc.gamma = m.gamma;
        sc.max_iters = m.max_iters;
        sc.gap_tol = m.gap_tol;
        sc.max_backtracks_per_iter = m.max_backtracks;
        if (m.L_init_rule == "value") sc.L_init = m.L_init;
        try {
            sc.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("methods '" + m.label + "': " + e.what());
        }
    }
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ":" + locate(text, e.byte) + ": " + e.what());
    }
    try {
        return ExperimentConfig::from_json(j, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

BuiltProblem build_problem(const ExperimentConfig& cfg) {
    const auto& ps = cfg.problem;
    std::optional<Objective> objective;
    std::optional<FeasibleSet> derived_set;
    std::optional<BregmanDivergence> derived_div;
    std::optional<double> known_f_star;
    std::optional<double> L_reported;

    if (ps.kind == "poisson") {
        if (!ps.data_dir.empty()) {
            const fs::path dir(ps.data_dir);
            Matrix A = csv::read_matrix(dir / "A.csv");
            Vector b = column_vector(csv::read_matrix(dir / "b.csv"), "b.csv");
            L_reported = b.lpNorm<1>();
            objective = Objective::poisson_kl(std::move(A), std::move(b));
            if (fs::exists(dir / "x_true.csv")) {
                const Vector xt = column_vector(csv::read_matrix(dir / "x_true.csv"), "x_true.csv");
                if (objective->value(xt) == 0.0) known_f_star = 0.0;
            }
        } else {
            PoissonInstance inst = generate_poisson(ps.n, ps.m, ps.noise, cfg.seed);
            L_reported = inst.L_reported;
            if (ps.noise == 0.0) known_f_star = 0.0;
            objective = std::move(inst.objective);
        }
    } else if (ps.kind == "svm") {
        SvmCsvOptions opts;
        opts.header = ps.header;
        opts.squared_reg = ps.squared_reg;
        opts.max_rows = ps.max_rows;
        long pad = ps.pad_dim;
        if (pad == 0) {
            const csv::Table t = csv::read_numeric(ps.path, ps.header);
            pad = long(t.rows.front().size()) - 1;
        }
        SvmProblem svm = load_svm_csv(ps.path, ps.lambda, pad, opts);
        objective = std::move(svm.objective);
        derived_set = std::move(svm.set);
        derived_div = svm.divergence;
    } else {
        std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vector x_min(ps.dim);
        for (long i = 0; i < ps.dim; ++i) x_min[i] = gauss(rng);
        x_min *= ps.minimizer_norm / x_min.norm();
        QuadraticInstance q = random_quadratic(x_min, ps.mu, ps.L, cfg.seed);
        known_f_star = q.f_star;
        objective = std::move(q.objective);
    }
    const long dim = objective->dim();

    auto make_set = [&]() -> FeasibleSet {
        std::string kind = cfg.set.kind;
        if (kind == "auto") {
            if (derived_set) return *derived_set;
            kind = ps.kind == "poisson" ? "simplex" : "l2ball";
        }
        const SetKind sk = set_kind_from_string(kind);
        if (sk == SetKind::UnitSimplex) return FeasibleSet::unit_simplex(dim);
        Vector center = Vector::Zero(dim);
        if (!cfg.set.center.empty()) {
            check_dim("set.center", dim, long(cfg.set.center.size()));
            center = Eigen::Map<const Vector>(cfg.set.center.data(), dim);
        }
        return sk == SetKind::L1Ball ? FeasibleSet::l1_ball(center, cfg.set.radius)
                                     : FeasibleSet::l2_ball(center, cfg.set.radius);
    };
    FeasibleSet set = make_set();

    auto make_div = [&]() -> BregmanDivergence {
        std::string kind = cfg.divergence.kind;
        if (kind == "auto") {
            if (derived_div) return *derived_div;
            kind = ps.kind == "poisson" ? "negative_entropy" : "squared_euclidean";
        }
        switch (divergence_kind_from_string(kind)) {
        case DivergenceKind::SquaredEuclidean: return BregmanDivergence::squared_euclidean();
        case DivergenceKind::NegativeEntropy:
            if (set.kind() != SetKind::UnitSimplex)
                throw ConfigError("divergence: negative_entropy needs the simplex");
            return BregmanDivergence::negative_entropy(cfg.divergence.floor);
        case DivergenceKind::SvmQuartic:
            if (!derived_div) throw ConfigError("divergence: svm_quartic needs an svm problem");
            return *derived_div;
        }
        throw ConfigError("divergence: unsupported kind");
    };
    BregmanDivergence div = make_div();

    Vector x0 = set.default_start();
    if (cfg.x0 == "explicit") {
        check_dim("x0", dim, long(cfg.x0_values.size()));
        x0 = Eigen::Map<const Vector>(cfg.x0_values.data(), dim);
    }

    DiameterBound R2;
    if (cfg.r2.value) {
        R2 = {*cfg.r2.value, false};
    } else {
        DiameterOptions opts;
        opts.interior_floor = cfg.r2.interior_floor;
        opts.samples = cfg.r2.samples;
        opts.seed = cfg.seed;
        R2 = diameter_bound(set, div, opts);
    }

    ProblemInstance inst{std::move(*objective), std::move(set), div, 2.0, known_f_star, cfg.seed};
    inst.validate();
    return {std::move(inst), std::move(x0), known_f_star, L_reported, R2};
}

double resolve_L_init(const MethodSpec& m, const BuiltProblem& p) {
    std::string rule = m.L_init_rule;
    if (rule == "value") return m.L_init;
    if (rule == "default") {
        if (p.L_reported) rule = "b_norm1";
        else if (p.instance.objective.lipschitz_bound()) rule = "lipschitz";
        else return 1.0;
    }
    if (rule == "b_norm1") {
        if (!p.L_reported) throw ConfigError("L_init rule b_norm1 needs a poisson problem");
        return *p.L_reported;
    }
    if (rule == "lipschitz") {
        const auto L = p.instance.objective.lipschitz_bound();
        if (!L) throw ConfigError("L_init rule lipschitz needs an objective with a known constant");
        return *L;
    }
    throw ConfigError("unknown L_init rule '" + rule + "'");
}

bool ExperimentResult::has_errors() const {
    return std::any_of(methods.begin(), methods.end(), [](const auto& m) { return !m.error.empty(); });
}

bool ExperimentResult::has_violations() const {
    return std::any_of(methods.begin(), methods.end(), [](const auto& m) {
        return !m.report.violations.empty() || !m.result.violations.empty();
    });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const BuiltProblem built = build_problem(cfg);

    ExperimentResult res;
    res.R2 = built.R2;
    res.methods.resize(cfg.methods.size());
    for (std::size_t i = 0; i < cfg.methods.size(); ++i) res.methods[i].spec = cfg.methods[i];

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < res.methods.size(); i = next++) {
            auto& out = res.methods[i];
            const auto start = std::chrono::steady_clock::now();
            try {
                SolverConfig sc;
                sc.method = out.spec.method;
                sc.gamma = out.spec.gamma;
                sc.max_iters = out.spec.max_iters;
                sc.gap_tol = out.spec.gap_tol;
                sc.max_backtracks_per_iter = out.spec.max_backtracks;
                sc.check_invariants = cfg.check_invariants;
                sc.L_init = resolve_L_init(out.spec, built);
                out.spec.L_init = sc.L_init;
                out.result = run(built.instance, built.x0, sc);
            } catch (const std::exception& e) {
                out.error = e.what();
            }
            out.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    const int n_threads = std::clamp(threads, 1, int(res.methods.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    if (cfg.f_star_policy == "known") {
        res.f_star_used = cfg.f_star_value ? cfg.f_star_value : built.known_f_star;
        if (!res.f_star_used) throw ConfigError("f_star policy 'known' but this problem has no known optimum");
    } else {
        for (const auto& m : res.methods) {
            if (!m.error.empty()) continue;
            for (const auto& r : m.result.records)
                res.f_star_used = res.f_star_used ? std::min(*res.f_star_used, r.f_x) : r.f_x;
        }
    }

    const auto lipschitz = built.instance.objective.lipschitz_bound();
    for (auto& m : res.methods) {
        if (!m.error.empty() || m.spec.method == Method::ClassicFW) continue;
        m.result.f_star_used = res.f_star_used;
        const bool euclid = m.result.divergence == DivergenceKind::SquaredEuclidean;
        VerifyOptions vo;
        vo.require_f_star = res.f_star_used.has_value();
        DiameterBound R2 = built.R2;
        if (euclid) {
            const double diam = built.instance.set.diameter();
            R2 = {diam * diam, false};
        }
        vo.R2 = R2.R2;
        m.R2_used = R2;
        m.report = verify_run(m.result, built.instance, vo);
        if (R2.empirical) {
            auto& v = m.report.violations;
            auto it = std::stable_partition(v.begin(), v.end(),
                                            [](const Violation& x) { return x.check != checks::kRate; });
            m.advisory.assign(it, v.end());
            v.erase(it, v.end());
        }
        if (euclid && lipschitz) res.lipschitz = lipschitz;
    }

    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::string format_log(const RunResult& r) {
    std::string out = kLogHeader;
    out += '\n';
    for (const auto& rec : r.records) {
        out += std::to_string(rec.k);
        for (double v : {rec.f_x, rec.fw_gap, rec.alpha, rec.L_k}) {
            out += ',';
            out += csv::format_double(v);
        }
        out += ',';
        out += std::to_string(rec.checks);
        out += '\n';
    }
    return out;
}

std::vector<LoggedRow> parse_log(const fs::path& path) {
    const csv::Table t = csv::read_numeric(path, true);
    std::string header;
    for (std::size_t i = 0; i < t.header.size(); ++i) header += (i ? "," : "") + t.header[i];
    if (header != kLogHeader)
        throw ParseError(path.string() + ": unexpected header '" + header + "'");
    std::vector<LoggedRow> rows;
    for (const auto& r : t.rows) rows.push_back({int(r[0]), r[1], r[2], r[3], r[4], int(r[5])});
    return rows;
}

json make_manifest(const ExperimentConfig& cfg, const ExperimentResult& res) {
    json methods = json::array();
    for (const auto& m : res.methods) {
        const bool euclid = m.result.divergence == DivergenceKind::SquaredEuclidean;
        json mj = {{"label", m.spec.label},
                   {"method", std::string(to_string(m.spec.method))},
                   {"gamma", m.spec.method == Method::AdaptiveEuclideanFW ? 2.0 : m.spec.gamma},
                   {"L_init", m.spec.L_init},
                   {"csv", m.spec.label + ".csv"},
                   {"wall_seconds", m.wall_seconds},
                   {"error", m.error.empty() ? json() : json(m.error)}};
        if (m.error.empty()) {
            mj["divergence"] = std::string(to_string(m.result.divergence));
            mj["steps"] = m.result.steps();
            mj["f_final"] = m.result.f_final();
            mj["fw_gap_final"] = m.result.records.back().fw_gap;
        }
        if (m.error.empty() && m.spec.method != Method::ClassicFW) {
            mj["R2_used"] = m.R2_used ? json(m.R2_used->R2) : json();
            mj["R2_empirical"] = m.R2_used && m.R2_used->empirical;
            mj["lipschitz"] = euclid && res.lipschitz ? json(*res.lipschitz) : json();
            mj["violations"] = violations_json(m.report.violations);
            mj["inline_violations"] = violations_json(m.result.violations);
            mj["advisory"] = violations_json(m.advisory);
            mj["verify"] = {{"acceptance_checked", m.report.acceptance_checked},
                            {"halving_checked", m.report.halving_checked},
                            {"decrease_checked", m.report.decrease_checked},
                            {"rate_checked", m.report.rate_checked},
                            {"backtracks_checked", m.report.backtracks_checked},
                            {"equality_clamps", m.report.equality_clamps}};
        }
        methods.push_back(mj);
    }
    return {{"name", cfg.name},
            {"config", cfg.to_json()},
            {"seed", cfg.seed},
            {"f_star_policy", cfg.f_star_policy},
            {"f_star_used", res.f_star_used ? json(*res.f_star_used) : json()},
            {"R2", {{"value", res.R2.R2}, {"empirical", res.R2.empirical}}},
            {"lipschitz", res.lipschitz ? json(*res.lipschitz) : json()},
            {"wall_seconds", res.wall_seconds},
            {"methods", methods}};
}

} // namespace bregfw

namespace bregfw {

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::optional<double> opt_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

void write_outputs(const fs::path& dir, const ExperimentConfig& cfg, const ExperimentResult& res) {
    fs::create_directories(dir);
    for (const auto& m : res.methods)
        if (m.error.empty()) write_text(dir / (m.spec.label + ".csv"), format_log(m.result));
    write_text(dir / "manifest.json", make_manifest(cfg, res).dump(2) + "\n");
}

void generate_dataset(const GenParams& p, const fs::path& out) {
    if (p.kind != "poisson") throw ConfigError("gen: unknown kind '" + p.kind + "' (supported: poisson)");
    PoissonInstance inst = generate_poisson(p.n, p.m, p.noise, p.seed);
    fs::create_directories(out);
    csv::write_matrix(out / "A.csv", inst.objective.poisson().A);
    csv::write_matrix(out / "b.csv", inst.objective.poisson().b);
    csv::write_matrix(out / "x_true.csv", inst.x_true);
    const json meta = {{"kind", p.kind},      {"n", p.n},
                       {"m", p.m},            {"noise", p.noise},
                       {"seed", p.seed},      {"L_reported", inst.L_reported},
                       {"files", {{"A", "A.csv"}, {"b", "b.csv"}, {"x_true", "x_true.csv"}}}};
    write_text(out / "meta.json", meta.dump(2) + "\n");
}

int cmd_run(const fs::path& config, bool strict, int threads, const std::optional<fs::path>& out_override,
            std::ostream& out, std::ostream& err) {
    try {
        const ExperimentConfig cfg = load_config(config);
        const ExperimentResult res = run_experiment(cfg, threads);
        const fs::path dir = out_override ? *out_override : fs::path(cfg.output_dir);
        write_outputs(dir, cfg, res);

        for (const auto& m : res.methods) {
            if (!m.error.empty()) {
                err << m.spec.label << ": error: " << m.error << "\n";
                continue;
            }
            out << std::left << std::setw(14) << m.spec.label << " steps=" << m.result.steps()
                << " f=" << csv::format_double(m.result.f_final())
                << " violations=" << (m.report.violations.size() + m.result.violations.size())
                << " advisory=" << m.advisory.size() << "\n";
        }
        out << "wrote " << dir.string() << "\n";
        if (res.has_errors()) return 1;
        if (strict && res.has_violations()) return 2;
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_gen(const GenParams& p, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
    try {
        generate_dataset(p, out_dir);
        out << "wrote " << out_dir.string() << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_verify(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
    try {
        const fs::path manifest_path = run_dir / "manifest.json";
        if (!fs::exists(manifest_path)) throw ParseError("no manifest.json in " + run_dir.string());
        const json manifest = read_json(manifest_path);
        const std::optional<double> f_star = opt_number(manifest, "f_star_used");

        bool failed = false;
        int verified = 0;
        out << std::left << std::setw(14) << "method" << std::setw(12) << "check" << std::setw(10)
            << "checked" << std::setw(12) << "violations" << "status\n";
        for (const auto& m : manifest.at("methods")) {
            const std::string label = m.at("label").get<std::string>();
            if (m.at("method") == "classic" || !m.at("error").is_null()) continue;
            const auto rows = parse_log(run_dir / m.at("csv").get<std::string>());

            LoggedRunInfo info;
            info.gamma = m.at("gamma").get<double>();
            info.L_init = m.at("L_init").get<double>();
            info.f_star = f_star;
            info.R2 = opt_number(m, "R2_used");
            info.lipschitz = opt_number(m, "lipschitz");
            const bool empirical = m.value("R2_empirical", false);
            const VerifyReport rep = verify_logged(rows, info);
            ++verified;

            auto count = [&](const char* name) {
                return std::count_if(rep.violations.begin(), rep.violations.end(),
                                     [&](const Violation& v) { return v.check == name; });
            };
            auto line = [&](const char* name, long checked, long bad, bool advisory, bool applicable) {
                std::string status = !applicable ? "skipped" : bad == 0 ? "pass" : advisory ? "advisory" : "FAIL";
                if (applicable && bad > 0 && !advisory) failed = true;
                out << std::setw(14) << label << std::setw(12) << name << std::setw(10) << checked
                    << std::setw(12) << bad << status << "\n";
            };
            line(checks::kDecrease, rep.decrease_checked, count(checks::kDecrease), false, true);
            line(checks::kRate, rep.rate_checked, count(checks::kRate), empirical,
                 info.f_star && info.R2);
            line(checks::kBacktracks, rep.backtracks_checked ? 1 : 0,
                 count(checks::kBacktracks) + count(checks::kLBound), false, rep.backtracks_checked);
        }
        if (verified == 0) out << "no adaptive runs to verify\n";
        return failed ? 2 : 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace bregfw
