#pragma once

#include "sedsim/bed_evolution.hpp"
#include "sedsim/correction.hpp"
#include "sedsim/roe_swe.hpp"
#include "sedsim/sediment_law.hpp"
#include "sedsim/sparse.hpp"
#include "sedsim/types.hpp"

namespace sedsim {

enum class SchemeOrder { first, second, second_no_eps };

struct Scales {
    double L = 1.0, H = 1.0, U = 1.0;  // length, height, velocity; T = L/U, G = U^2/H
};

struct SimConfig {
    explicit SimConfig(SedimentLaw l) : law(l) {}

    Grid grid;  // dimensional
    SedimentLaw law;
    double water_level = 10.0;  // m
    double discharge = 10.0;    // m^2/s
    SchemeOrder scheme = SchemeOrder::second;
    double T_end = 0.0;  // s
    MacroConfig macro;
    SteadyConfig steady;
    SolverParams linsolve;
    Scales scales;
    double harten_factor = 0.05;
    double transcritical_floor = 1e-8;
    int initial_steady_max_iters = 0;  // 0: use steady.max_iters
};

/// Rescales a configuration into the internal frame (x/L, h/H, u/U, t/(L/U),
/// g -> g H/U^2, sediment law rescaled accordingly). Identity scales leave the
/// configuration unchanged.
SimConfig nondimensionalize(const SimConfig& config);

struct StepLog {
    long step = 0;
    double tau = 0.0;        // nondimensional slow time after the step
    double dtau = 0.0;       // nondimensional macro step
    double t_seconds = 0.0;  // physical time after the step
    int resample = 0;        // 1 when this step began a sample window
    int steady_iters = 0;
    double steady_residual = 0.0;
    double wall_steady_ms = 0.0;
    double wall_corr_ms = 0.0;
    double wall_macro_ms = 0.0;
};

struct RunRecord {
    FlowState flow;  // dimensional
    BedField bed;    // dimensional
    std::vector<StepLog> log;
    long macro_steps = 0;
    long steady_solves = 0;
    bool any_steady_nonconverged = false;
    double t_final = 0.0;    // seconds
    double tau_final = 0.0;  // nondimensional
    double wall_steady_ms = 0.0;
    double wall_corr_ms = 0.0;
    double wall_macro_ms = 0.0;
    double wall_total_ms = 0.0;
};

/// The multiscale loop: sample the steady state, apply the O(eps) correction,
/// predict the riverbed, approximate the next steady state by the O(tau~)
/// correction, correct the riverbed, and resample every K macro steps.
/// The first-order scheme omits the O(eps) correction and the correction
/// stage; `second_no_eps` keeps both stages but zeroes the O(eps) fields.
RunRecord run(const SimConfig& config, const BedField& B0);

/// Initial flow for a flat water surface at `level`: h = level - B, u = Q/h.
FlowState initial_flow(const Grid& grid, const BedField& bed, double level, double discharge);

}  // namespace sedsim
