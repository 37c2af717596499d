#pragma once

#include "sedsim/types.hpp"

namespace sedsim {

enum class HydroBc { channel, periodic };

struct SteadyConfig {
    double tol = 1e-6;       // L1 of the step-to-step change in (h, hu (, hv))
    int max_iters = 20000;
    double pseudo_cfl = 0.9;
    double discharge = 0.0;  // upstream hu per unit width (channel boundary)
    HydroBc boundary = HydroBc::channel;
};

struct PositivityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteadyResult {
    FlowState state;
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    bool subcritical = true;  // warning flag when false
};

/// Well-balanced flux-limited Roe stepper for shallow water over a fixed bed,
/// 1D. Flux differences and the bed-slope source are decomposed together into
/// Roe waves, so the lake-at-rest state is preserved exactly; second-order
/// minmod-limited corrections ride on the waves.
class FixedBedStepper1D {
  public:
    FixedBedStepper1D(const Grid& grid, double gravity, const FlowState& initial,
                      const BedField& bed, double discharge, HydroBc bc);

    double max_wave_speed();
    void step(double dt);

    FlowState state() const;
    const Grid& grid() const { return grid_; }

  private:
    void fill_ghosts();
    void compute_waves();

    Grid grid_;
    double g_;
    double Q_;
    HydroBc bc_;
    int n_;
    // padded cell arrays, size n+4 (two ghost layers per side)
    Field h_, hu_, b_;
    Field u_, sq_;  // per-cell scratch
    // interface scratch, size n+3 (faces -3/2 .. n+1/2)
    Field s1_, s2_, z1h_, z1m_, z2h_, z2m_, ft_h_, ft_m_;
    bool waves_valid_ = false;
};

/// Same scheme in 2D (x/y sweeps, unsplit update). Channel boundary: fixed
/// discharge upstream, transmissive downstream, reflective side walls.
class FixedBedStepper2D {
  public:
    FixedBedStepper2D(const Grid& grid, double gravity, const FlowState& initial,
                      const BedField& bed, double discharge, HydroBc bc);

    double max_wave_speed();  // max over cells of (|u|+c)/dx + (|v|+c)/dy
    void step(double dt);

    FlowState state() const;

  private:
    void fill_ghosts();

    Grid grid_;
    double g_;
    double Q_;
    HydroBc bc_;
    int nx_, ny_, pnx_, pny_;
    int pidx(int i, int j) const { return (j + 2) * pnx_ + (i + 2); }
    Field h_, hu_, hv_, b_;
    Field dh_, dhu_, dhv_;  // accumulated update
    // per-row interface scratch
    Field s1_, s2_, s3_, w1_[3], w2_[3], w3_[3], ft_[3];
};

/// One conservative update of the fixed-bed Roe scheme (1D or 2D as per grid).
FlowState roe_step_fixed_bed(const Grid& grid, const FlowState& state, const BedField& bed,
                             double gravity, double dt, const SteadyConfig& cfg);

/// Pseudo-time iteration of the fixed-bed stepper to the steady state:
/// stops when  ||h'-h||_1 + ||h'u'-hu||_1 (+ ||h'v'-hv||_1)  < cfg.tol
/// or after cfg.max_iters iterations (non-convergence flagged).
SteadyResult solve_steady(const Grid& grid, const BedField& bed, double gravity,
                          const SteadyConfig& cfg, const FlowState& initial);

}  // namespace sedsim
