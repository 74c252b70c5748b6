// Command-line front end: single runs, topology comparisons, and
// parameter sweeps with CSV waveform export.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tlisim/config.hpp"
#include "tlisim/scenario.hpp"

namespace {

using namespace tlisim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
    std::string config_path;
    std::string topology;
    double duration = -1.0;
    double dt = -1.0;
    std::string out_dir = "out";
    std::size_t decimate = 1;
    bool no_waveforms = false;
};

void add_common(CLI::App* cmd, CommonArgs* args) {
    cmd->add_option("--config", args->config_path,
                    "Key-value config file (defaults apply to missing keys)");
    cmd->add_option("--topology", args->topology,
                    "h4_unipolar | h4_bipolar | h5_plain | hch5_d2");
    cmd->add_option("--duration", args->duration, "Simulated time [s]");
    cmd->add_option("--dt", args->dt, "Integrator step [s], at most 2e-6");
    cmd->add_option("--out", args->out_dir, "Output directory");
    cmd->add_option("--decimate", args->decimate,
                    "Keep every n-th sample in waveform CSVs");
    cmd->add_flag("--no-waveforms", args->no_waveforms,
                  "Skip CSV export, write reports only");
}

SimConfig build_config(const CommonArgs& args) {
    SimConfig cfg;
    if (!args.config_path.empty()) {
        cfg = load_config(args.config_path);
    }
    if (!args.topology.empty()) {
        apply_config_entry(cfg, "topology", args.topology);
    }
    if (args.duration > 0.0) cfg.duration = args.duration;
    if (args.dt > 0.0) cfg.dt = args.dt;
    validate(cfg);
    return cfg;
}

ScenarioOptions build_options(const CommonArgs& args) {
    return {.out_dir = args.out_dir,
            .decimate = args.decimate == 0 ? 1 : args.decimate,
            .write_waveforms = !args.no_waveforms};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::istringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Switched-circuit simulator and common-mode analysis "
                 "toolkit for transformerless grid-tied PV inverters"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Simulate one topology and export results");
    add_common(run_cmd, &run_args);

    CommonArgs cmp_args;
    std::string cmp_list = "h4_unipolar,hch5_d2";
    CLI::App* cmp_cmd = app.add_subcommand(
        "compare", "Run several topologies under one configuration");
    add_common(cmp_cmd, &cmp_args);
    cmp_cmd->add_option("--topologies", cmp_list,
                        "Comma-separated topology list; the last entry is "
                        "the ratio reference");

    CommonArgs sweep_args;
    std::string sweep_key;
    std::string sweep_values;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Vary one config key over a list of values");
    add_common(sweep_cmd, &sweep_args);
    sweep_cmd->add_option("--param", sweep_key, "Config key to sweep")
        ->required();
    sweep_cmd->add_option("--values", sweep_values,
                          "Comma-separated values for the swept key")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitValidation;
    }

    if (run_cmd->parsed()) {
        const SimConfig cfg = build_config(run_args);
        const ScenarioOptions opts = build_options(run_args);
        run_single(cfg, opts);
        std::cout << "wrote " << (opts.out_dir / "report.txt").string() << "\n";
        return kExitOk;
    }
    if (cmp_cmd->parsed()) {
        const SimConfig cfg = build_config(cmp_args);
        const ScenarioOptions opts = build_options(cmp_args);
        std::vector<TopologyKind> kinds;
        for (const std::string& name : split_list(cmp_list)) {
            const auto kind = topology_from_string(name);
            if (!kind) throw ConfigError("unknown topology '" + name + "'");
            kinds.push_back(*kind);
        }
        const ComparisonReport report = run_compare(cfg, kinds, opts);
        std::cout << render_text_report(report);
        return kExitOk;
    }
    const SimConfig cfg = build_config(sweep_args);
    const ScenarioOptions opts = build_options(sweep_args);
    const auto points = run_sweep(cfg, sweep_key, split_list(sweep_values), opts);
    for (const SweepPoint& point : points) {
        std::cout << sweep_key << " = " << point.value << ": leakage RMS = "
                  << 1e3 * point.metrics.leakage_rms << " mA\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kExitValidation;
    } catch (const SimulationDiverged& err) {
        std::cerr << "simulation diverged: " << err.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& err) {
        std::cerr << "i/o error: " << err.what() << "\n";
        return kExitIo;
    }
}
