// Command-line front end: run, bench, demo-segment, lmo-check.

#include "fwsliding/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
    fwsliding::configure_logging();

    CLI::App app{"Conditional gradient sliding with backtracking linesearch"};
    app.require_subcommand(1);

    std::string config_path;
    auto *run = app.add_subcommand("run", "Solve one configured instance");
    run->add_option("config", config_path, "RunConfig JSON")->required();

    std::string suite_path;
    int parallel = 1;
    auto *bench = app.add_subcommand("bench", "Run a suite and compare algorithms");
    bench->add_option("suite", suite_path, "Suite JSON")->required();
    bench->add_option("--parallel,-p", parallel, "Concurrent runs")->check(CLI::PositiveNumber);

    auto *demo = app.add_subcommand("demo-segment", "CG on 1/2 ||x||^2 over the unit segment");

    std::string family;
    long size = 0, trials = 0;
    std::uint64_t seed = 0;
    auto *check = app.add_subcommand("lmo-check", "Compare an oracle with brute force");
    check->add_option("family", family, "simplex | spectrahedron | hamiltonian")->required();
    check->add_option("size", size, "Set size")->required();
    check->add_option("trials", trials, "Random cost vectors")->required();
    check->add_option("seed", seed, "Seed")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*run) return fwsliding::cli_run(config_path, std::cout, std::cerr);
    if (*bench) return fwsliding::cli_bench(suite_path, parallel, std::cout, std::cerr);
    if (*demo) return fwsliding::cli_demo_segment(std::cout, std::cerr);
    if (*check) return fwsliding::cli_lmo_check(family, size, trials, seed, std::cout, std::cerr);
    return 1;
}
