#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "epscope/errors.hpp"
#include "epscope/io.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    auto* cfg = cmd->add_option("--config", args.config_path, "JSON config file");
    auto* pre = cmd->add_option("--preset", args.preset, "named preset (fig1-top, fig1-bottom, fig1-mu0, fig1-real-ep)");
    cfg->excludes(pre);
    cmd->add_option("-o,--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "RNG seed for the Aberth jitter")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

int load_and_run(const CommonArgs& args,
                 int (*runner)(const epscope::RunConfig&, const std::string&, std::string&)) {
    epscope::RunConfig cfg;
    try {
        if (!args.preset.empty()) cfg = epscope::preset_config(args.preset);
        else if (!args.config_path.empty()) cfg = epscope::load_config(args.config_path);
        else {
            std::fprintf(stderr, "error: one of --config or --preset is required\n");
            return 2;
        }
        if (args.seed_set) cfg.seed = args.seed;
    } catch (const epscope::InvalidInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    std::string err;
    const int rc = runner(cfg, args.out_dir, err);
    if (rc != 0) std::fprintf(stderr, "error: %s\n", err.c_str());
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"epscope: exceptional points of parametrized non-Hermitian matrix families"};
    app.require_subcommand(1);

    CommonArgs sweep_args, locate_args, encircle_args;
    auto* cmd_sweep = app.add_subcommand(
        "sweep", "sweep real lambda, write trajectories and the crossing classification");
    add_common(cmd_sweep, sweep_args);
    auto* cmd_locate =
        app.add_subcommand("locate", "locate exceptional points (closed form or grid scan)");
    add_common(cmd_locate, locate_args);
    auto* cmd_encircle = app.add_subcommand(
        "encircle", "encircle an exceptional point and report the monodromy");
    add_common(cmd_encircle, encircle_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2; // usage problems are validation errors
    }

    if (cmd_sweep->parsed()) return load_and_run(sweep_args, epscope::cmd_sweep);
    if (cmd_locate->parsed()) return load_and_run(locate_args, epscope::cmd_locate);
    if (cmd_encircle->parsed()) return load_and_run(encircle_args, epscope::cmd_encircle);
    return 2;
}
