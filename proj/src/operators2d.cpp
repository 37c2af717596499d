#include "sedsim/operators2d.hpp"

namespace sedsim {

Field ddx_field(const Grid& g, const Field& f, DerivMode mode) {
    Field d(g.cells(), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int c = g.idx(i, j);
            double dm, dp;
            if (i == 0) {
                dp = f[g.idx(1, j)] - f[c];
                dm = dp;
            } else if (i == g.nx - 1) {
                dm = f[c] - f[g.idx(i - 1, j)];
                dp = dm;
            } else {
                dm = f[c] - f[g.idx(i - 1, j)];
                dp = f[g.idx(i + 1, j)] - f[c];
            }
            d[c] = (mode == DerivMode::central) ? (dm + dp) / (2.0 * g.dx)
                                                : minmod(dm, dp) / g.dx;
        }
    }
    return d;
}

Field ddy_field(const Grid& g, const Field& f, double wall_sign, DerivMode mode) {
    Field d(g.cells(), 0.0);
    if (g.dim == 1) return d;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int c = g.idx(i, j);
            double fm = (j == 0) ? wall_sign * f[c] : f[g.idx(i, j - 1)];
            double fp = (j == g.ny - 1) ? wall_sign * f[c] : f[g.idx(i, j + 1)];
            double dm = f[c] - fm;
            double dp = fp - f[c];
            d[c] = (mode == DerivMode::central) ? (dm + dp) / (2.0 * g.dy)
                                                : minmod(dm, dp) / g.dy;
        }
    }
    return d;
}

Field op_LS(const Grid& g, const Field& u, const Field& v, DerivMode mode) {
    Field ux = ddx_field(g, u, mode);
    Field uy = ddy_field(g, u, +1.0, mode);
    Field vx = ddx_field(g, v, mode);
    Field vy = ddy_field(g, v, -1.0, mode);
    Field out(g.cells(), 0.0);
    for (int c = 0; c < g.cells(); ++c)
        out[c] = u[c] * (v[c] * uy[c] - u[c] * vy[c]) + v[c] * (u[c] * vx[c] - v[c] * ux[c]);
    return out;
}

void op_Lu(const Grid& g, const Field& u, const Field& v, const Field& phi_u,
           const Field& phi_v, DerivMode mode, Field& out_x, Field& out_y) {
    Field uy = ddy_field(g, u, +1.0, mode);
    Field vx = ddx_field(g, v, mode);
    Field puy = ddy_field(g, phi_u, +1.0, mode);
    Field pvx = ddx_field(g, phi_v, mode);
    out_x.assign(g.cells(), 0.0);
    out_y.assign(g.cells(), 0.0);
    for (int c = 0; c < g.cells(); ++c) {
        out_x[c] = phi_v[c] * (uy[c] - vx[c]) + v[c] * (puy[c] - pvx[c]);
        out_y[c] = phi_u[c] * (vx[c] - uy[c]) + u[c] * (pvx[c] - puy[c]);
    }
}

void op_Lf(const Grid& g, const Field& u, const Field& v, const Field& phi_u,
           const Field& phi_v, DerivMode mode, Field& out_x, Field& out_y) {
    Field ux = ddx_field(g, u, mode);
    Field uy = ddy_field(g, u, +1.0, mode);
    Field vx = ddx_field(g, v, mode);
    Field vy = ddy_field(g, v, -1.0, mode);
    out_x.assign(g.cells(), 0.0);
    out_y.assign(g.cells(), 0.0);
    for (int c = 0; c < g.cells(); ++c) {
        out_x[c] = vy[c] * phi_u[c] - uy[c] * phi_v[c];
        out_y[c] = ux[c] * phi_v[c] - vx[c] * phi_u[c];
    }
}

}  // namespace sedsim
