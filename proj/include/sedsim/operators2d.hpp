#pragma once

#include "sedsim/types.hpp"

namespace sedsim {

/// Derivative discretization for source-term operators.
/// central: second-order central differences (one-sided at x-boundaries,
///          reflected ghosts at y-walls).
/// limited: minmod-limited slopes (used for the macro source term).
enum class DerivMode { central, limited };

inline double minmod(double a, double b) {
    if (a > 0.0 && b > 0.0) return a < b ? a : b;
    if (a < 0.0 && b < 0.0) return a > b ? a : b;
    return 0.0;
}

/// d/dx of a cell field; one-sided at the x-boundaries.
Field ddx_field(const Grid& g, const Field& f, DerivMode mode);

/// d/dy of a cell field; wall ghosts take sign*interior (sign=+1 mirror for
/// tangential/scalar quantities, sign=-1 for wall-normal components).
Field ddy_field(const Grid& g, const Field& f, double wall_sign, DerivMode mode);

/// Rotational invariant operator L^S u = u^T (u . grad u) - |u|^2 (div u),
/// in the grouped form u (v u_y - u v_y) + v (u v_x - v u_x) so it vanishes
/// identically when v = 0.
Field op_LS(const Grid& g, const Field& u, const Field& v, DerivMode mode);

/// L^u(phi) = phi . grad u + u . grad phi - grad(u^T phi), grouped as
///   x: phi_v (u_y - v_x) + v (phi_u,y - phi_v,x)
///   y: phi_u (v_x - u_y) + u (phi_v,x - phi_u,y)
/// so it vanishes identically on 1D-embedded fields.
void op_Lu(const Grid& g, const Field& u, const Field& v, const Field& phi_u,
           const Field& phi_v, DerivMode mode, Field& out_x, Field& out_y);

/// Flux fixing term L_f(phi) = (v_y phi_u - u_y phi_v, u_x phi_v - v_x phi_u).
void op_Lf(const Grid& g, const Field& u, const Field& v, const Field& phi_u,
           const Field& phi_v, DerivMode mode, Field& out_x, Field& out_y);

}  // namespace sedsim
