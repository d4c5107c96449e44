#include <iostream>

#include "CLI11.hpp"

#include "bregfw/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adaptive Bregman Frank-Wolfe experiments"};
    app.require_subcommand(1);

    bool strict = false;
    int threads = 1;
    app.add_flag("--strict", strict, "exit with status 2 when any invariant check fails");
    app.add_option("--threads", threads, "methods run in parallel")->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "run every method of an experiment config");
    std::string config;
    std::string run_out;
    run->add_option("config", config, "experiment JSON")->required();
    run->add_option("--out", run_out, "output directory (overrides output_dir)");

    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    bregfw::GenParams gp;
    std::string gen_out;
    gen->add_option("kind", gp.kind, "dataset kind (poisson)")->required();
    gen->add_option("--n", gp.n, "signal dimension")->required();
    gen->add_option("--m", gp.m, "number of observations")->required();
    gen->add_option("--noise", gp.noise, "multiplicative noise level");
    gen->add_option("--seed", gp.seed, "random seed");
    gen->add_option("--out", gen_out, "output directory")->required();

    auto* verify = app.add_subcommand("verify", "re-check the guarantees from a run directory's logs");
    std::string run_dir;
    verify->add_option("dir", run_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) {
        std::optional<std::filesystem::path> out;
        if (!run_out.empty()) out = run_out;
        return bregfw::cmd_run(config, strict, threads, out, std::cout, std::cerr);
    }
    if (*gen) return bregfw::cmd_gen(gp, gen_out, std::cout, std::cerr);
    return bregfw::cmd_verify(run_dir, std::cout, std::cerr);
}
