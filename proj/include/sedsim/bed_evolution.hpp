#pragma once

#include "sedsim/operators2d.hpp"
#include "sedsim/sediment_law.hpp"
#include "sedsim/types.hpp"

namespace sedsim {

/// Cell falls inside the transcritical floor |u|^2 - g h ~ 0; the homogenized
/// model is restricted to subcritical flow.
struct TranscriticalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Homogenized characteristic speeds and source for the riverbed equation.
struct BedSpeeds {
    Field lx;
    Field ly;   // empty in 1D
    Field src;  // zeros in 1D
};

struct MacroConfig {
    double cfl = 0.65;     // 1D default; 2D runs use 0.5
    int K = 2;             // macro steps per micro sample
    double dtau_cap = 1.0; // step when all speeds vanish
};

/// Boundary closure for the bed advection.
struct BedBc {
    enum class Mode { extrapolate, mirror, periodic };
    Mode x = Mode::extrapolate;
    Mode y = Mode::mirror;
};

/// Face reconstruction: MUSCL-minmod for the second-order schemes, donor-cell
/// for the single-stage first-order scheme (forward Euler with second-order
/// faces is compressive).
enum class BedRecon { muscl_minmod, donor_cell };

/// Zeroth order speed  -g u lambda_b_tilde(|u|) / (u^2 - g h); 0 at u = 0.
double lambda0_1d(double h, double u, const SedimentLaw& law, double floor = 1e-8);

/// First order speed  lambda0 * (1 - eps g (u^2 + g h) lambda_b_tilde / (u^2 - g h)^2),
/// evaluated at the eps-corrected fast variables.
double lambda1_1d(double h, double u, const SedimentLaw& law, double floor = 1e-8);

BedSpeeds bed_speeds_1d(int order, const FlowState& flow, const SedimentLaw& law,
                        double floor = 1e-8);

/// 2D speeds and source. order 0 uses the zeroth-order formulas; order 1
/// applies the first-order factors, including the (h hat_h - u^T hat_u)
/// source contribution from the auxiliary hat-fields of the eps-correction.
BedSpeeds lambda_S_2d(int order, const Grid& g, const FlowState& flow, const SedimentLaw& law,
                      const Field* hat_h = nullptr, const Field* hat_u = nullptr,
                      const Field* hat_v = nullptr, DerivMode mode = DerivMode::limited,
                      double floor = 1e-8);

/// MUSCL face values with the minmod limiter for one 1D field.
/// faceL[k], faceR[k] are the values just left/right of face k = i-1/2,
/// k = 0..n (faces 0 and n at the domain boundary).
void muscl_faces(const Field& B, BedBc::Mode bc, Field& faceL, Field& faceR);

double cfl_dtau(const BedSpeeds& speeds, const Grid& g, double c_cfl, double cap);

/// Forward-Euler upwind stage of the TVD-RK2 update.
Field bed_stage1(const Grid& g, const Field& B, const BedSpeeds& speeds, double dtau,
                 const BedBc& bc, BedRecon recon = BedRecon::muscl_minmod);

/// Averaging stage using the speeds at the predicted state.
Field bed_stage2(const Grid& g, const Field& B, const Field& Btilde, const BedSpeeds& speeds_np1,
                 double dtau, const BedBc& bc, BedRecon recon = BedRecon::muscl_minmod);

/// Both stages chained (constant-speed convenience form).
Field rk2_bed_step(const Grid& g, const Field& B, const BedSpeeds& speeds_n,
                   const BedSpeeds& speeds_np1, double dtau, const BedBc& bc,
                   BedRecon recon = BedRecon::muscl_minmod);

}  // namespace sedsim
