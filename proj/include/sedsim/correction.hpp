#pragma once

#include "sedsim/operators2d.hpp"
#include "sedsim/sediment_law.hpp"
#include "sedsim/sparse.hpp"
#include "sedsim/types.hpp"

namespace sedsim {

/// O(tau~) correction of the fast variables. The bar part is analytic; the
/// hat part (2D only) solves a steady linear-hyperbolic system.
struct CorrectionTau {
    Field bar_h, bar_u, bar_v;
    Field hat_h, hat_u, hat_v;  // zeros in 1D
    double total_h(int c) const { return bar_h[c] + (hat_h.empty() ? 0.0 : hat_h[c]); }
    double total_u(int c) const { return bar_u[c] + (hat_u.empty() ? 0.0 : hat_u[c]); }
    double total_v(int c) const { return bar_v.empty() ? 0.0 : bar_v[c] + hat_v[c]; }
};

/// O(eps) correction fields phi^(0); in 2D the auxiliary hat fields feed the
/// corrected source S_B^(1).
struct CorrectionEps {
    Field phi_h, phi_u, phi_v;
    Field hat_h, hat_u, hat_v;  // 2D only
    bool solver_ok = true;
    int solver_iterations = 0;
};

/// Assembled steady linear system (wave-decomposition discretization).
struct LinearSystem {
    CsrMatrix A;
    std::vector<double> rhs;
    int fields = 2;  // unknowns per cell
};

/// 1D steady system  F(phi)_x = S  with flux F = (u phi_h + h phi_u,
/// g phi_h + u phi_u), flux-based wave decomposition with Roe-averaged
/// interface eigenstructure, zero Dirichlet boundary cells.
/// Unknown ordering: 2*i + {0,1}.
LinearSystem assemble_steady_linear_1d(const Grid& grid, const FlowState& base, double gravity,
                                       const Field& S_h, const Field& S_u);

/// 2D generic system in the recast flux form with the L_f fixing term on the
/// left-hand side and Harten's entropy fix (absolute parameter delta).
/// Zero Dirichlet at the x boundaries, reflective ghosts at the y walls.
/// Unknown ordering: 3*(j*nx+i) + {0,1,2} (row-major cells, field-minor).
LinearSystem assemble_steady_linear_2d(const Grid& grid, const FlowState& base, double gravity,
                                       const Field& S_h, const Field& S_u, const Field& S_v,
                                       double harten_delta);

/// Largest |interface wave speed| of the 2D assembly; the default Harten
/// parameter is 0.05 times this value.
double max_interface_speed_2d(const Grid& grid, const FlowState& base, double gravity);

struct LinearFields {
    Field phi_h, phi_u, phi_v;
    SolveResult solve;
};

LinearFields solve_steady_linear_1d(const Grid& grid, const FlowState& base, double gravity,
                                    const Field& S_h, const Field& S_u,
                                    const SolverParams& params);

LinearFields solve_steady_linear_2d(const Grid& grid, const FlowState& base, double gravity,
                                    const Field& S_h, const Field& S_u, const Field& S_v,
                                    const SolverParams& params, double harten_delta);

/// phi^(1) of the 1D model: phi_h = g h/(u^2-gh) dB, phi_u = -g u/(u^2-gh) dB.
CorrectionTau tau_correction_1d(const FlowState& steady, const Field& B_old, const Field& B_new,
                                double gravity, double floor = 1e-8);

/// O(eps) term of the 1D model, solved from the flux-based wave decomposition
/// with central-difference source.
CorrectionEps eps_correction_1d(const Grid& grid, const FlowState& steady, const Field& B,
                                const SedimentLaw& law, const SolverParams& params,
                                double floor = 1e-8);

/// 2D O(tau~) term: analytic bar part plus hat part solved with right-hand
/// side -L^u(bar part).
CorrectionTau tau_correction_2d(const Grid& grid, const FlowState& steady, const Field& B_old,
                                const Field& B_new, double gravity, const SolverParams& params,
                                double harten_factor = 0.05, double floor = 1e-8);

/// 2D O(eps) term: solves the hat system first, then the main system; the
/// hat fields are retained for the corrected source.
CorrectionEps eps_correction_2d(const Grid& grid, const FlowState& steady, const Field& B,
                                const SedimentLaw& law, const SolverParams& params,
                                double harten_factor = 0.05, double floor = 1e-8);

}  // namespace sedsim
