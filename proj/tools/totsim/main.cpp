#include <iostream>

#include <CLI11.hpp>

#include "totsim/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"totsim: tip-of-the-tongue retrieval simulator"};
    app.require_subcommand(1);

    totsim::SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write records, summary and metadata");
    simulate->add_option("--config", sim.config_path, "Scenario config (JSON)")->required();
    simulate->add_option("--out", sim.out_dir, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "Override the config seed");
    simulate->add_option("--workers", sim.workers, "Worker threads (does not change output)");
    simulate->add_option("--format", sim.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    totsim::OracleOptions oracle;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact per-attempt success probability by enumeration");
    oracle_cmd->add_option("--config", oracle.config_path, "Scenario config (JSON)")->required();
    oracle_cmd->add_option("--word", oracle.word, "Word id")->required();
    oracle_cmd->add_option("--component", oracle.component, "semantic, lexical or phonological")->required();
    oracle_cmd->add_option("--cue-size", oracle.cue_size, "Number of cued units (the first k)")->required();

    std::filesystem::path validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config and print it with defaults resolved");
    validate->add_option("--config", validate_path, "Scenario config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : totsim::kExitConfigError;
    }

    if (*simulate) return totsim::cmd_simulate(sim, std::cout, std::cerr);
    if (*oracle_cmd) return totsim::cmd_oracle(oracle, std::cout, std::cerr);
    return totsim::cmd_validate(validate_path, std::cout, std::cerr);
}
