// Command-line front end for the opto-electrical cooling simulation suite.
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "molcool/commands.hpp"
#include "molcool/errors.hpp"

namespace {

struct Args {
    std::string config_path;
    molcool::CliOverrides overrides;
};

void add_common(CLI::App* sub, Args& args, std::string& out, std::string& seed,
                std::string& duration) {
    sub->add_option("--config", args.config_path, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (overrides config)");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--duration", duration, "duration in seconds (overrides config)");
}

int run(const std::string& name, const Args& args) {
    molcool::RunConfig cfg = molcool::load_config(args.config_path);
    molcool::apply_overrides(cfg, args.overrides);
    if (name == "stark-map") {
        molcool::cmd_stark_map(cfg);
    } else if (name == "branching") {
        molcool::cmd_branching(cfg);
    } else if (name == "cool") {
        molcool::cmd_cool(cfg);
    } else {
        molcool::cmd_trajectories(cfg);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opto-electrical Sisyphus cooling of symmetric-top molecules: "
                 "Stark maps, branching ratios, rate-equation cooling runs, and "
                 "trap trajectory studies"};
    app.require_subcommand(1);

    Args args;
    std::string out, seed, duration;
    const char* names[] = {"stark-map", "branching", "cool", "trajectories"};
    const char* descs[] = {"eigenvalues of the rotor+field Hamiltonian vs field",
                           "zero-field and field-dressed decay branching tables",
                           "two-region rate-equation cooling run (Fig.-4-style outputs)",
                           "trajectory Monte Carlo and velocity-mixing analysis"};
    for (int i = 0; i < 4; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        add_common(sub, args, out, seed, duration);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!out.empty()) args.overrides.output_dir = out;
        if (!seed.empty()) args.overrides.seed = std::stoull(seed);
        if (!duration.empty()) args.overrides.duration_s = std::stod(duration);
        return run(app.get_subcommands().front()->get_name(), args);
    } catch (const molcool::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const molcool::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const molcool::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 3;
    } catch (const molcool::IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
