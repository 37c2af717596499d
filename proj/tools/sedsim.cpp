// Command-line front end for the multiscale sediment transport solver.
//
//   sedsim run <preset> [--set key=value]... [--config file] --out <dir>
//   sedsim study convergence|timing|linear-orders [--set key=value]... --out <dir>
//
// Exit codes: 0 success, 2 solver failure, 3 configuration error.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sedsim/csv.hpp"
#include "sedsim/scenarios.hpp"

namespace {

sedsim::ConfigMap build_overrides(const std::string& config_path,
                                  const std::vector<std::string>& sets) {
    sedsim::ConfigMap ov;
    if (!config_path.empty()) ov = sedsim::ConfigMap::parse_file(config_path);
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw sedsim::ConfigError("--set expects key=value, got: " + kv);
        ov.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return ov;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"time-homogenized multiscale sediment transport solver"};
    app.require_subcommand(1);

    std::string preset, outdir = "out", config_path;
    std::vector<std::string> sets;

    auto* run_cmd = app.add_subcommand("run", "run a scenario preset");
    run_cmd->add_option("preset", preset, "dune1d|mpm1d|dune2d|convergence1d|timing1d|linear-orders")
        ->required();
    run_cmd->add_option("--set", sets, "override: key=value");
    run_cmd->add_option("--config", config_path, "configuration file");
    run_cmd->add_option("--out", outdir, "output directory");

    std::string study_name;
    auto* study_cmd = app.add_subcommand("study", "run a benchmark study");
    study_cmd->add_option("name", study_name, "convergence|timing|linear-orders")->required();
    study_cmd->add_option("--set", sets, "override: key=value");
    study_cmd->add_option("--config", config_path, "configuration file");
    study_cmd->add_option("--out", outdir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        sedsim::ConfigMap ov = build_overrides(config_path, sets);

        if (run_cmd->parsed()) {
            if (!sedsim::is_known_preset(preset)) throw sedsim::ConfigError("unknown preset: " + preset);
            if (preset == "convergence1d") {
                sedsim::convergence_study(ov, outdir);
            } else if (preset == "timing1d") {
                sedsim::timing_study(ov, outdir);
            } else if (preset == "linear-orders") {
                auto r = sedsim::linear_orders_study(ov, outdir);
                std::printf("fitted slopes: zeroth %.4f, first %.4f\n", r.slope0, r.slope1);
            } else {
                sedsim::RunRecord rec = sedsim::run_scenario(preset, ov, outdir);
                std::printf("%s: %ld macro steps, %ld steady solves, t=%.6g s, wall=%.3f s%s\n",
                            preset.c_str(), rec.macro_steps, rec.steady_solves, rec.t_final,
                            rec.wall_total_ms / 1000.0,
                            rec.any_steady_nonconverged ? " [steady solver hit iteration cap]" : "");
            }
            return 0;
        }

        if (study_name == "convergence") {
            auto rep = sedsim::convergence_study(ov, outdir);
            for (const auto& r : rep.rows)
                std::printf("%-14s N=%5d  L1=%.6g  order=%.3f\n", r.variant.c_str(), r.N,
                            r.l1_error, r.order);
        } else if (study_name == "timing") {
            auto rows = sedsim::timing_study(ov, outdir);
            for (const auto& r : rows)
                std::printf("Ag=%.4g N=%d coupled=%.3fs first=%.3fs second=%.3fs speedup=%.1fx\n",
                            r.Ag, r.N, r.coupled_s, r.first_s, r.second_s,
                            r.coupled_s / r.second_s);
        } else if (study_name == "linear-orders") {
            auto r = sedsim::linear_orders_study(ov, outdir);
            std::printf("fitted slopes: zeroth %.4f, first %.4f\n", r.slope0, r.slope1);
        } else {
            throw sedsim::ConfigError("unknown study: " + study_name);
        }
        return 0;
    } catch (const sedsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        // machine-readable error record
        std::error_code ec;
        std::filesystem::create_directories(outdir, ec);
        if (!ec) {
            std::ofstream os(outdir + "/error.txt");
            os << e.what() << "\n";
        }
        return 2;
    }
}
