#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pqt/execute.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<long> seed;
    std::optional<std::string> mode;
    std::optional<long> trajectories;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_out) {
    cmd->add_option("--config", flags.config_path, "JSON config file")
        ->required();
    if (needs_out)
        cmd->add_option("--out", flags.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", flags.seed, "override the config master seed");
    cmd->add_option("--mode", flags.mode, "override the config mode (oqt|pqt)");
    cmd->add_option("--trajectories", flags.trajectories,
                    "override the ensemble size");
    cmd->add_option("--threads", flags.threads, "parallelism hint (no semantic effect)");
}

pqt::RunConfig load(const CommonFlags& flags) {
    pqt::RunConfig cfg = pqt::parse_config(flags.config_path);
    if (flags.seed) {
        if (*flags.seed < 0) throw std::invalid_argument("--seed must be nonnegative");
        cfg.seed = static_cast<std::uint64_t>(*flags.seed);
    }
    if (flags.mode) {
        cfg.mode = pqt::parse_mode(*flags.mode);
        cfg.scattering.mode = cfg.mode;
        cfg.decay.mode = cfg.mode;
    }
    if (flags.trajectories) {
        if (*flags.trajectories < 1)
            throw std::invalid_argument("--trajectories must be >= 1");
        cfg.trajectories = static_cast<std::size_t>(*flags.trajectories);
    }
    if (flags.threads) {
        if (*flags.threads < 1) throw std::invalid_argument("--threads must be >= 1");
        cfg.threads = *flags.threads;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collapse-model simulator: scattering, decay, plate and sphere-toy "
                 "experiments with reproducible ensembles"};
    app.require_subcommand(1);

    CommonFlags run_flags, scan_flags, plot_flags, check_flags;
    CLI::App* run = app.add_subcommand("run", "run the configured experiment/ensemble");
    add_common(run, run_flags, true);
    CLI::App* scan =
        app.add_subcommand("scan-epsilon", "scan the collapse threshold epsilon");
    add_common(scan, scan_flags, true);
    CLI::App* plot =
        app.add_subcommand("plot", "regenerate SVG plots from a completed run");
    add_common(plot, plot_flags, true);
    CLI::App* check = app.add_subcommand("validate-config",
                                         "parse and validate a config, then exit");
    add_common(check, check_flags, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            pqt::execute_run(load(run_flags), run_flags.out_dir);
        } else if (scan->parsed()) {
            pqt::execute_scan(load(scan_flags), scan_flags.out_dir);
        } else if (plot->parsed()) {
            pqt::emit_plots(load(plot_flags), plot_flags.out_dir);
        } else if (check->parsed()) {
            pqt::RunConfig cfg = load(check_flags);
            std::printf("ok: %s experiment, mode %s\n",
                        pqt::experiment_name(cfg.experiment).c_str(),
                        pqt::mode_name(cfg.mode).c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\": \"%s\"}\n", e.what());
        return 1;
    }
    return 0;
}
