#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "dlq/cli.hpp"

int main(int argc, char** argv) {
    using dlq::cli::RunConfig;
    RunConfig cfg;

    CLI::App app{"Discrete logarithms over F_2^n as QUBO problems: transform, solve, verify."};
    app.require_subcommand(1);

    auto add_target = [&cfg](CLI::App* cmd) {
        cmd->add_option("--n", cfg.n, "field extension degree")->required();
        cmd->add_option("--h-nb", cfg.h_nb,
                        "target element as normal-basis bits, most significant first");
        cmd->add_option("--h-hex", cfg.h_hex, "target element as polynomial-basis hex mask");
    };
    auto add_solver = [&cfg](CLI::App* cmd) {
        cmd->add_option("--method", cfg.method, "exhaustive, sa, or auto (default auto)");
        cmd->add_option("--reads", cfg.reads, "annealing reads (default 1000)");
        cmd->add_option("--sweeps", cfg.sweeps, "annealing sweeps per read (default 200)");
        cmd->add_option("--beta-start", cfg.beta_start, "initial inverse temperature (0.5)");
        cmd->add_option("--beta-end", cfg.beta_end, "final inverse temperature (5.0)");
        cmd->add_option("--seed", cfg.seed, "RNG seed (default 12345, fixed for reproducibility)");
        cmd->add_option("--threads", cfg.threads, "parallel annealing threads (default 1)");
    };

    auto* field_info = app.add_subcommand("field-info", "print f(t), transition matrices, T(0)");
    field_info->add_option("--n", cfg.n, "field extension degree")->required();

    auto* transform = app.add_subcommand("transform", "reduce a DLP instance to a QUBO file");
    add_target(transform);
    transform->add_option("--out", cfg.out_path, "QUBO output file")->required();
    transform->add_option("--meta", cfg.meta_path, "metadata sidecar (default <out>.meta)");

    auto* solve = app.add_subcommand("solve", "minimize a QUBO file");
    solve->add_option("--in", cfg.in_path, "QUBO input file")->required();
    solve->add_option("--out", cfg.out_path, "solution output file");
    add_solver(solve);

    auto* decode = app.add_subcommand("decode", "decode and verify exponents from a solution");
    decode->add_option("--meta", cfg.meta_path, "metadata sidecar from transform")->required();
    decode->add_option("--solution", cfg.solution_path, "solution file from solve");
    decode->add_option("--assignment", cfg.assignment, "inline assignment bits");

    auto* e2e = app.add_subcommand("e2e", "transform, solve, decode, and verify in one run");
    add_target(e2e);
    add_solver(e2e);

    auto* report = app.add_subcommand("report", "measured vs estimated variable counts");
    report->add_option("--n-list", cfg.n_list, "comma-separated field degrees")
        ->required()
        ->delimiter(',');

    auto* stats = app.add_subcommand("stats", "probability analysis");
    stats->require_subcommand(1);
    auto* tail = stats->add_subcommand("tail", "log10 cumulative binomial tail");
    tail->add_option("--trials", cfg.trials, "number of trials")->required();
    tail->add_option("--threshold", cfg.threshold, "success threshold")->required();
    tail->add_option("--p", cfg.p_spec, "single-trial probability, e.g. 1/2048");
    tail->add_option("--space-bits", cfg.space_bits, "log2 of the solution space (p = 2^-bits)");
    auto* rate = stats->add_subcommand("rate", "exact success rate");
    rate->add_option("--trials", cfg.trials, "number of trials")->required();
    rate->add_option("--successes", cfg.successes, "number of successes")->required();

    CLI11_PARSE(app, argc, argv);

    if (field_info->parsed()) cfg.command = RunConfig::Command::FieldInfo;
    else if (transform->parsed()) cfg.command = RunConfig::Command::Transform;
    else if (solve->parsed()) cfg.command = RunConfig::Command::Solve;
    else if (decode->parsed()) cfg.command = RunConfig::Command::Decode;
    else if (e2e->parsed()) cfg.command = RunConfig::Command::E2e;
    else if (report->parsed()) cfg.command = RunConfig::Command::Report;
    else if (tail->parsed()) cfg.command = RunConfig::Command::StatsTail;
    else if (rate->parsed()) cfg.command = RunConfig::Command::StatsRate;

    return dlq::cli::run(cfg, std::cout, std::cerr);
}
