#include "sedsim/hmm.hpp"

#include <chrono>
#include <cmath>

namespace sedsim {

namespace {
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}
}  // namespace

SimConfig nondimensionalize(const SimConfig& config) {
    const double L = config.scales.L, H = config.scales.H, U = config.scales.U;
    if (!(L > 0.0 && H > 0.0 && U > 0.0))
        throw std::invalid_argument("nondimensionalize: scales must be positive");
    SimConfig c = config;
    c.grid = (config.grid.dim == 1)
                 ? Grid::make_1d(config.grid.Lx / L, config.grid.nx)
                 : Grid::make_2d(config.grid.Lx / L, config.grid.Ly / L, config.grid.nx,
                                 config.grid.ny);
    c.law = config.law.nondimensionalized(U, H);
    c.water_level = config.water_level / H;
    c.discharge = config.discharge / (U * H);
    c.T_end = config.T_end / (L / U);
    c.scales = Scales{1.0, 1.0, 1.0};
    return c;
}

FlowState initial_flow(const Grid& grid, const BedField& bed, double level, double discharge) {
    FlowState f = FlowState::zeros(grid);
    for (int c = 0; c < grid.cells(); ++c) {
        f.h[c] = level - bed.B[c];
        if (!(f.h[c] > 0.0))
            throw PositivityError("initial_flow: water level does not cover the bed");
        f.u[c] = discharge / f.h[c];
    }
    return f;
}

RunRecord run(const SimConfig& config_in, const BedField& B0) {
    const SimConfig cfg = nondimensionalize(config_in);
    const Grid& grid = cfg.grid;
    const double H = config_in.scales.H;
    const double Tscale = config_in.scales.L / config_in.scales.U;
    const double g = cfg.law.gravity();
    const double eps = cfg.law.eps();
    const bool second_stage = cfg.scheme != SchemeOrder::first;
    const bool with_eps = cfg.scheme == SchemeOrder::second;
    const int order = (cfg.scheme == SchemeOrder::first) ? 0 : 1;

    auto t_start = Clock::now();

    Field B(grid.cells());
    for (int c = 0; c < grid.cells(); ++c) B[c] = B0.B[c] / H;

    SteadyConfig scfg = cfg.steady;
    scfg.discharge = cfg.discharge;

    RunRecord rec;
    FlowState warm = initial_flow(grid, BedField{B}, cfg.water_level, cfg.discharge);

    Field h = warm.h, u = warm.u, v = warm.v;  // corrected fast variables
    CorrectionEps epsc;
    const bool is2d = grid.dim == 2;
    BedBc bedbc;  // x extrapolate, y mirror

    const double T = cfg.T_end;
    double t = 0.0, tau = 0.0;
    long step = 0;
    bool first_sample = true;

    while (t < T * (1.0 - 1e-14)) {
        // ---- Step 2: sampling and O(eps) correction
        auto t0 = Clock::now();
        SteadyConfig scur = scfg;
        if (first_sample && cfg.initial_steady_max_iters > 0)
            scur.max_iters = cfg.initial_steady_max_iters;
        first_sample = false;
        FlowState init;
        init.h = h;
        init.u = u;
        init.v = v;
        SteadyResult sres = solve_steady(grid, BedField{B}, g, scur, init);
        rec.steady_solves++;
        if (!sres.converged) rec.any_steady_nonconverged = true;
        double wall_steady = ms_since(t0);
        rec.wall_steady_ms += wall_steady;

        t0 = Clock::now();
        const FlowState& steady = sres.state;
        if (with_eps) {
            epsc = is2d ? eps_correction_2d(grid, steady, B, cfg.law, cfg.linsolve,
                                            cfg.harten_factor, cfg.transcritical_floor)
                        : eps_correction_1d(grid, steady, B, cfg.law, cfg.linsolve,
                                            cfg.transcritical_floor);
            for (int c = 0; c < grid.cells(); ++c) {
                h[c] = steady.h[c] + eps * epsc.phi_h[c];
                u[c] = steady.u[c] + eps * epsc.phi_u[c];
                if (is2d) v[c] = steady.v[c] + eps * epsc.phi_v[c];
            }
        } else {
            h = steady.h;
            u = steady.u;
            if (is2d) v = steady.v;
        }
        double wall_eps = ms_since(t0);
        rec.wall_corr_ms += wall_eps;

        const Field* hat_h = (with_eps && is2d) ? &epsc.hat_h : nullptr;
        const Field* hat_u = (with_eps && is2d) ? &epsc.hat_u : nullptr;
        const Field* hat_v = (with_eps && is2d) ? &epsc.hat_v : nullptr;

        for (int m = 0; m < cfg.macro.K && t < T * (1.0 - 1e-14); ++m) {
            StepLog lg;
            lg.resample = (m == 0) ? 1 : 0;
            lg.steady_iters = (m == 0) ? sres.iterations : 0;
            lg.steady_residual = (m == 0) ? sres.residual : 0.0;
            lg.wall_steady_ms = (m == 0) ? wall_steady : 0.0;
            lg.wall_corr_ms = (m == 0) ? wall_eps : 0.0;

            // ---- Step 3: riverbed prediction
            t0 = Clock::now();
            FlowState cur;
            cur.h = h;
            cur.u = u;
            cur.v = v;
            BedSpeeds sp = is2d ? lambda_S_2d(order, grid, cur, cfg.law, hat_h, hat_u, hat_v,
                                              DerivMode::limited, cfg.transcritical_floor)
                                : bed_speeds_1d(order, cur, cfg.law, cfg.transcritical_floor);
            double dtau = cfl_dtau(sp, grid, cfg.macro.cfl, cfg.macro.dtau_cap);
            if (t + dtau / eps > T) dtau = eps * (T - t);
            BedRecon recon =
                second_stage ? BedRecon::muscl_minmod : BedRecon::donor_cell;
            Field Btil = bed_stage1(grid, B, sp, dtau, bedbc, recon);
            double wall_macro = ms_since(t0);

            // ---- Step 4: approximate the next steady state by time correction
            t0 = Clock::now();
            FlowState bar;
            bar.h = h;
            bar.u = u;
            bar.v = v;
            if (with_eps)
                for (int c = 0; c < grid.cells(); ++c) {
                    bar.h[c] -= eps * epsc.phi_h[c];
                    bar.u[c] -= eps * epsc.phi_u[c];
                    if (is2d) bar.v[c] -= eps * epsc.phi_v[c];
                }
            CorrectionTau tc = is2d ? tau_correction_2d(grid, bar, B, Btil, g, cfg.linsolve,
                                                        cfg.harten_factor, cfg.transcritical_floor)
                                    : tau_correction_1d(bar, B, Btil, g, cfg.transcritical_floor);
            for (int c = 0; c < grid.cells(); ++c) {
                h[c] = bar.h[c] + tc.total_h(c) + (with_eps ? eps * epsc.phi_h[c] : 0.0);
                u[c] = bar.u[c] + tc.total_u(c) + (with_eps ? eps * epsc.phi_u[c] : 0.0);
                if (is2d) v[c] = bar.v[c] + tc.total_v(c) + (with_eps ? eps * epsc.phi_v[c] : 0.0);
            }
            lg.wall_corr_ms += ms_since(t0);
            rec.wall_corr_ms += ms_since(t0);

            // ---- Step 5: riverbed correction
            t0 = Clock::now();
            if (second_stage) {
                FlowState nxt;
                nxt.h = h;
                nxt.u = u;
                nxt.v = v;
                BedSpeeds sp2 = is2d ? lambda_S_2d(order, grid, nxt, cfg.law, hat_h, hat_u, hat_v,
                                                   DerivMode::limited, cfg.transcritical_floor)
                                     : bed_speeds_1d(order, nxt, cfg.law, cfg.transcritical_floor);
                B = bed_stage2(grid, B, Btil, sp2, dtau, bedbc);
            } else {
                B = std::move(Btil);
            }
            wall_macro += ms_since(t0);
            rec.wall_macro_ms += wall_macro;

            t += dtau / eps;
            tau += dtau;
            ++step;
            lg.step = step;
            lg.tau = tau;
            lg.dtau = dtau;
            lg.t_seconds = t * Tscale;
            lg.wall_macro_ms = wall_macro;
            rec.log.push_back(lg);
        }
    }

    rec.macro_steps = step;
    rec.t_final = t * Tscale;
    rec.tau_final = tau;
    rec.wall_total_ms = ms_since(t_start);

    rec.bed.B.resize(grid.cells());
    rec.flow.h.resize(grid.cells());
    rec.flow.u.resize(grid.cells());
    if (is2d) rec.flow.v.resize(grid.cells());
    const double U = config_in.scales.U;
    for (int c = 0; c < grid.cells(); ++c) {
        rec.bed.B[c] = B[c] * H;
        rec.flow.h[c] = h[c] * H;
        rec.flow.u[c] = u[c] * U;
        if (is2d) rec.flow.v[c] = v[c] * U;
    }
    return rec;
}

}  // namespace sedsim
