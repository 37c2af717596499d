#pragma once

#include <array>
#include <string>
#include <vector>

#include "sedsim/config_file.hpp"
#include "sedsim/hmm.hpp"

namespace sedsim {

/// Scenario presets: dune1d, mpm1d, dune2d, convergence1d, timing1d,
/// linear-orders. Every field can be overridden through the config map
/// (see README for the key schema).
bool is_study_preset(const std::string& name);
bool is_known_preset(const std::string& name);

SimConfig scenario_config(const std::string& preset, const ConfigMap& overrides);
BedField scenario_bed(const std::string& preset, const Grid& grid);

/// Resolved configuration as config-file text (round-trips through the
/// parser).
std::string scenario_config_text(const std::string& preset, const ConfigMap& overrides);

/// Run a single-run preset; writes state_final.csv, runlog.csv, config.txt.
RunRecord run_scenario(const std::string& preset, const ConfigMap& overrides,
                       const std::string& outdir);

/// Conservative cell-average restriction from a fine 1D field to a coarse one
/// (sizes must divide evenly).
Field restrict_cell_average(const Field& fine, int coarse_n);

/// Coupled reference run for a 1D scenario configuration (runs in the
/// nondimensional frame; returns the dimensional final bed).
struct ReferenceRun {
    BedField bed;
    FlowState flow;
    long steps = 0;
    double wall_ms = 0.0;
};
ReferenceRun run_coupled_reference(const SimConfig& config, const BedField& B0, double cfl = 0.9);

struct ConvergenceRow {
    std::string variant;
    int N = 0;
    double l1_error = 0.0;  // dx-weighted
    double order = 0.0;     // log2(e_N / e_2N), 0 for the first row
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double fitted_order(const std::string& variant, int n_min, int n_max) const;
    double error_at(const std::string& variant, int N) const;
};

/// Reference on the fine mesh, restricted per test mesh; L1(dx) errors and
/// orders for the three scheme variants.
ConvergenceReport convergence_study(const ConfigMap& overrides, const std::string& outdir);

struct TimingRow {
    double Ag = 0.0;
    int N = 0;
    double coupled_s = 0.0;
    double first_s = 0.0;
    double second_s = 0.0;
};
std::vector<TimingRow> timing_study(const ConfigMap& overrides, const std::string& outdir);

struct LinearOrdersResult {
    std::vector<std::array<double, 3>> rows;
    double slope0 = 0.0, slope1 = 0.0;
};
LinearOrdersResult linear_orders_study(const ConfigMap& overrides, const std::string& outdir);

/// Spread angle of a star-shaped bed: ridge points (arg-max-B y per x column)
/// of one lobe beyond the initial dune footprint, restricted to the level set
/// B >= 0.2 max(B), fitted by least squares; returns degrees.
double spread_angle(const Grid& grid, const Field& B, double footprint_x = 500.0,
                    bool lower_lobe = false);

}  // namespace sedsim
