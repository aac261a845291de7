#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "isowall/scenario.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<long> seed;  // accepted for interface stability; pipeline is deterministic
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
    cmd->add_option("--config", args.config_path, "scenario file (INI, or a manifest.json)")
        ->required();
    if (with_out) cmd->add_option("--out", args.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", args.seed, "accepted and recorded; no stage consumes randomness");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isowall: reflectionless domain walls between isospectral 1-D lattices"};
    app.require_subcommand(1);

    CommonArgs bands_args, synth_args, scatter_args, surface_args, verify_args;
    bool control = false;

    CLI::App* bands = app.add_subcommand("bands", "band structure and edges of the base lattice");
    add_common(bands, bands_args);
    CLI::App* synth = app.add_subcommand("synth", "synthesize the wall potential and surface state");
    add_common(synth, synth_args);
    CLI::App* scatter = app.add_subcommand("scatter", "wave-packet transmission across the wall");
    add_common(scatter, scatter_args);
    scatter->add_flag("--control", control, "replace the wall by an abrupt junction");
    CLI::App* surface = app.add_subcommand("surface", "evolve the surface state; stationarity");
    add_common(surface, surface_args);
    CLI::App* verify = app.add_subcommand("verify", "run the self-consistency checks");
    add_common(verify, verify_args, false);

    CLI11_PARSE(app, argc, argv);

    auto load = [](const CommonArgs& args) {
        isowall::ScenarioConfig cfg = isowall::ScenarioConfig::from_file(args.config_path);
        cfg.seed = args.seed;
        return cfg;
    };

    try {
        if (bands->parsed()) return isowall::cmd_bands(load(bands_args), bands_args.out_dir);
        if (synth->parsed()) return isowall::cmd_synth(load(synth_args), synth_args.out_dir);
        if (scatter->parsed())
            return isowall::cmd_scatter(load(scatter_args), scatter_args.out_dir, control);
        if (surface->parsed()) return isowall::cmd_surface(load(surface_args), surface_args.out_dir);
        if (verify->parsed()) return isowall::cmd_verify(load(verify_args));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
