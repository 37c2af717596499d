#include "sedsim/correction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sedsim/bed_evolution.hpp"

namespace sedsim {

namespace {

double denom(double h, double u2, double gravity, double floor) {
    double d = u2 - gravity * h;
    if (std::abs(d) < floor) {
        std::ostringstream os;
        os << "correction: transcritical cell, |u|^2 - g h = " << d << " below floor " << floor;
        throw TranscriticalError(os.str());
    }
    return d;
}

struct Mat2 {
    double a[2][2];
};

Mat2 mat2_mul(const Mat2& A, const Mat2& B) {
    Mat2 C{};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) C.a[r][c] = A.a[r][0] * B.a[0][c] + A.a[r][1] * B.a[1][c];
    return C;
}

struct Mat3 {
    double a[3][3];
};

Mat3 mat3_mul(const Mat3& A, const Mat3& B) {
    Mat3 C{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += A.a[r][k] * B.a[k][c];
            C.a[r][c] = s;
        }
    return C;
}

Mat3 mat3_add(const Mat3& A, const Mat3& B, double wB) {
    Mat3 C{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) C.a[r][c] = A.a[r][c] + wB * B.a[r][c];
    return C;
}

// ------------------------------------------------------------- 1D assembly

// flux Jacobian dF/dphi at one cell
Mat2 flux_mat_1d(double h, double u, double g) { return Mat2{{{u, h}, {g, u}}}; }

// wave projections at a Roe-averaged interface (subcritical: s1 = u+c > 0,
// s2 = u-c < 0)
void wave_proj_1d(double hb, double g, Mat2& Pp, Mat2& Pm) {
    double sh = std::sqrt(hb / g);
    double sg = std::sqrt(g / hb);
    // r1 = (sqrt(h/g), 1), row1 of R^-1 = (0.5 sqrt(g/h), 0.5)
    Pp = Mat2{{{0.5, 0.5 * sh}, {0.5 * sg, 0.5}}};
    // r2 = (-sqrt(h/g), 1), row2 of R^-1 = (-0.5 sqrt(g/h), 0.5)
    Pm = Mat2{{{0.5, -0.5 * sh}, {-0.5 * sg, 0.5}}};
}

}  // namespace

LinearSystem assemble_steady_linear_1d(const Grid& grid, const FlowState& base, double gravity,
                                       const Field& S_h, const Field& S_u) {
    const int n = grid.nx;
    LinearSystem sys;
    sys.fields = 2;
    sys.rhs.assign(2 * n, 0.0);
    TripletList trip(2 * n);

    auto unk = [&](int i, int f) { return 2 * i + f; };

    // Dirichlet boundary cells
    for (int f = 0; f < 2; ++f) {
        trip.add(unk(0, f), unk(0, f), 1.0);
        trip.add(unk(n - 1, f), unk(n - 1, f), 1.0);
    }

    for (int i = 1; i < n - 1; ++i) {
        // left interface (i-1, i), right interface (i, i+1)
        for (int side = 0; side < 2; ++side) {
            int L = side == 0 ? i - 1 : i;
            int R = L + 1;
            double hb = 0.5 * (base.h[L] + base.h[R]);
            Mat2 Pp, Pm;
            wave_proj_1d(hb, gravity, Pp, Pm);
            Mat2 ML = flux_mat_1d(base.h[L], base.u[L], gravity);
            Mat2 MR = flux_mat_1d(base.h[R], base.u[R], gravity);
            const Mat2& P = side == 0 ? Pp : Pm;
            // side 0: +P+ (M_R phi_R - M_L phi_L), R = i
            // side 1: +P- (M_R phi_R - M_L phi_L), L = i
            Mat2 CR = mat2_mul(P, MR);
            Mat2 CL = mat2_mul(P, ML);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    trip.add(unk(i, r), unk(R, c), CR.a[r][c]);
                    trip.add(unk(i, r), unk(L, c), -CL.a[r][c]);
                }
        }
        sys.rhs[unk(i, 0)] = grid.dx * S_h[i];
        sys.rhs[unk(i, 1)] = grid.dx * S_u[i];
    }
    sys.A = trip.build();
    return sys;
}

namespace {

// --------------------------------------------------------------- 2D assembly

// dir 0: x-interface (normal u, layout (h,u,v)); dir 1: y (normal v)
Mat3 flux_mat_2d(double h, double u, double v, double g, int dir) {
    if (dir == 0) return Mat3{{{u, h, 0.0}, {g, u, 0.0}, {0.0, 0.0, u}}};
    return Mat3{{{v, 0.0, h}, {0.0, v, 0.0}, {g, 0.0, v}}};
}

struct WaveMats {
    Mat3 Pp, Pm, Mh;
    double smax;
};

// Roe-averaged interface wave matrices with Harten viscosity
WaveMats wave_mats_2d(double g, double hb, double nb, double delta, int dir) {
    double cb = std::sqrt(g * hb);
    double sh = std::sqrt(hb / g);
    double sg = std::sqrt(g / hb);
    double s[3] = {nb + cb, nb, nb - cb};
    // columns r_p; rows of Rinv
    double R[3][3], Ri[3][3];
    if (dir == 0) {
        // r1=(sh,1,0), r2=(0,0,1), r3=(-sh,1,0)
        double Rx[3][3] = {{sh, 0, -sh}, {1, 0, 1}, {0, 1, 0}};
        double Rix[3][3] = {{0.5 * sg, 0.5, 0}, {0, 0, 1}, {-0.5 * sg, 0.5, 0}};
        std::copy(&Rx[0][0], &Rx[0][0] + 9, &R[0][0]);
        std::copy(&Rix[0][0], &Rix[0][0] + 9, &Ri[0][0]);
    } else {
        // r1=(sh,0,1), r2=(0,1,0), r3=(-sh,0,1)
        double Ry[3][3] = {{sh, 0, -sh}, {0, 1, 0}, {1, 0, 1}};
        double Riy[3][3] = {{0.5 * sg, 0, 0.5}, {0, 1, 0}, {-0.5 * sg, 0, 0.5}};
        std::copy(&Ry[0][0], &Ry[0][0] + 9, &R[0][0]);
        std::copy(&Riy[0][0], &Riy[0][0] + 9, &Ri[0][0]);
    }
    WaveMats W{};
    W.smax = 0.0;
    double ind_p[3], ind_m[3], rho[3];
    for (int p = 0; p < 3; ++p) {
        ind_p[p] = s[p] > 0.0 ? 1.0 : 0.0;
        ind_m[p] = s[p] < 0.0 ? 1.0 : 0.0;
        double as = std::abs(s[p]);
        rho[p] = (delta <= 0.0 || as > delta)
                     ? 0.0
                     : ((s[p] * s[p] + delta * delta) / (2.0 * delta) - as);
        if (as > W.smax) W.smax = as;
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double ap = 0.0, am = 0.0, ah = 0.0;
            for (int p = 0; p < 3; ++p) {
                ap += R[r][p] * ind_p[p] * Ri[p][c];
                am += R[r][p] * ind_m[p] * Ri[p][c];
                ah += R[r][p] * rho[p] * Ri[p][c];
            }
            W.Pp.a[r][c] = ap;
            W.Pm.a[r][c] = am;
            W.Mh.a[r][c] = ah;
        }
    return W;
}

struct CellRef {
    double h, u, v;
    int col;      // cell unknown column base, -1 for wall ghost of `mirror`
    int mirror;   // when col == -1: reflected interior cell base column
};

}  // namespace

double max_interface_speed_2d(const Grid& grid, const FlowState& base, double gravity) {
    double m = 0.0;
    auto upd = [&](double hb, double nb) {
        double cb = std::sqrt(gravity * hb);
        double s = std::abs(nb) + cb;
        if (s > m) m = s;
    };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i + 1 < grid.nx; ++i) {
            int L = grid.idx(i, j), R = grid.idx(i + 1, j);
            double sqL = std::sqrt(base.h[L]), sqR = std::sqrt(base.h[R]);
            upd(0.5 * (base.h[L] + base.h[R]),
                (sqL * base.u[L] + sqR * base.u[R]) / (sqL + sqR));
        }
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j + 1 < grid.ny; ++j) {
            int L = grid.idx(i, j), R = grid.idx(i, j + 1);
            double sqL = std::sqrt(base.h[L]), sqR = std::sqrt(base.h[R]);
            upd(0.5 * (base.h[L] + base.h[R]),
                (sqL * base.v[L] + sqR * base.v[R]) / (sqL + sqR));
        }
    return m;
}

LinearSystem assemble_steady_linear_2d(const Grid& grid, const FlowState& base, double gravity,
                                       const Field& S_h, const Field& S_u, const Field& S_v,
                                       double harten_delta) {
    const int nx = grid.nx, ny = grid.ny;
    const int N = 3 * nx * ny;
    LinearSystem sys;
    sys.fields = 3;
    sys.rhs.assign(N, 0.0);
    TripletList trip(N);

    auto colbase = [&](int i, int j) { return 3 * grid.idx(i, j); };

    // L_f coefficient fields (central differences of the base flow)
    Field ux = ddx_field(grid, base.u, DerivMode::central);
    Field uy = ddy_field(grid, base.u, +1.0, DerivMode::central);
    Field vx = ddx_field(grid, base.v, DerivMode::central);
    Field vy = ddy_field(grid, base.v, -1.0, DerivMode::central);

    const double area = grid.dx * grid.dy;

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int row = colbase(i, j);
            if (i == 0 || i == nx - 1) {
                for (int f = 0; f < 3; ++f) trip.add(row + f, row + f, 1.0);
                continue;
            }

            // add contribution  sign * W * (M_R phi_R - M_L phi_L) + sign_fix * Mh/2 (phi_R - phi_L)
            auto add_iface = [&](const CellRef& L, const CellRef& R, int dir, double scale,
                                 const Mat3& P, const Mat3& Mh, double fix_sign) {
                Mat3 MR = flux_mat_2d(R.h, R.u, R.v, gravity, dir);
                Mat3 ML = flux_mat_2d(L.h, L.u, L.v, gravity, dir);
                Mat3 CR = mat3_mul(P, MR);
                Mat3 CL = mat3_mul(P, ML);
                // entropy viscosity: fix_sign * 0.5 * Mh (phi_R - phi_L)
                CR = mat3_add(CR, Mh, fix_sign * 0.5);
                CL = mat3_add(CL, Mh, fix_sign * 0.5);
                auto put = [&](const CellRef& cell, const Mat3& C, double sgn_cells) {
                    static const double reflect[3] = {1.0, 1.0, -1.0};
                    for (int r = 0; r < 3; ++r)
                        for (int c = 0; c < 3; ++c) {
                            double val = scale * sgn_cells * C.a[r][c];
                            if (val == 0.0) continue;
                            if (cell.col >= 0)
                                trip.add(row + r, cell.col + c, val);
                            else
                                trip.add(row + r, cell.mirror + c, val * reflect[c]);
                        }
                };
                put(R, CR, +1.0);
                put(L, CL, -1.0);
            };

            auto cell_ref = [&](int ii, int jj) {
                // jj may be -1 or ny: reflective wall ghost
                if (jj >= 0 && jj < ny) {
                    int c = grid.idx(ii, jj);
                    return CellRef{base.h[c], base.u[c], base.v[c], colbase(ii, jj), 0};
                }
                int js = jj < 0 ? 0 : ny - 1;
                int c = grid.idx(ii, js);
                return CellRef{base.h[c], base.u[c], -base.v[c], -1, colbase(ii, js)};
            };

            auto roe_pair = [&](const CellRef& L, const CellRef& R, int dir) {
                double sqL = std::sqrt(L.h), sqR = std::sqrt(R.h);
                double hb = 0.5 * (L.h + R.h);
                double nb = dir == 0 ? (sqL * L.u + sqR * R.u) / (sqL + sqR)
                                     : (sqL * L.v + sqR * R.v) / (sqL + sqR);
                return wave_mats_2d(gravity, hb, nb, harten_delta, dir);
            };

            // x interfaces (no entropy fix needed in principle, but harmless;
            // keep it uniform in both directions as the fix is identity away
            // from stagnation)
            {
                CellRef L = cell_ref(i - 1, j), R = cell_ref(i, j);
                WaveMats W = roe_pair(L, R, 0);
                add_iface(L, R, 0, grid.dy, W.Pp, W.Mh, +1.0);
            }
            {
                CellRef L = cell_ref(i, j), R = cell_ref(i + 1, j);
                WaveMats W = roe_pair(L, R, 0);
                add_iface(L, R, 0, grid.dy, W.Pm, W.Mh, -1.0);
            }
            // y interfaces
            {
                CellRef L = cell_ref(i, j - 1), R = cell_ref(i, j);
                WaveMats W = roe_pair(L, R, 1);
                add_iface(L, R, 1, grid.dx, W.Pp, W.Mh, +1.0);
            }
            {
                CellRef L = cell_ref(i, j), R = cell_ref(i, j + 1);
                WaveMats W = roe_pair(L, R, 1);
                add_iface(L, R, 1, grid.dx, W.Pm, W.Mh, -1.0);
            }

            // -area * L_f(phi) on the left-hand side
            int c = grid.idx(i, j);
            trip.add(row + 1, row + 1, -area * vy[c]);
            trip.add(row + 1, row + 2, area * uy[c]);
            trip.add(row + 2, row + 1, area * vx[c]);
            trip.add(row + 2, row + 2, -area * ux[c]);

            sys.rhs[row + 0] = area * S_h[c];
            sys.rhs[row + 1] = area * S_u[c];
            sys.rhs[row + 2] = area * S_v[c];
        }
    }
    sys.A = trip.build();
    return sys;
}

namespace {

LinearFields run_solver(const Grid& grid, LinearSystem sys, const SolverParams& params,
                        int fields) {
    std::vector<double> x0(sys.rhs.size(), 0.0);
    SolveResult sr = bicgstab(sys.A, sys.rhs, x0, params);
    LinearFields out;
    out.solve = std::move(sr);
    const int n = grid.cells();
    out.phi_h.resize(n);
    out.phi_u.resize(n);
    if (fields == 3) out.phi_v.resize(n);
    for (int c = 0; c < n; ++c) {
        out.phi_h[c] = out.solve.x[fields * c + 0];
        out.phi_u[c] = out.solve.x[fields * c + 1];
        if (fields == 3) out.phi_v[c] = out.solve.x[fields * c + 2];
    }
    return out;
}

}  // namespace

LinearFields solve_steady_linear_1d(const Grid& grid, const FlowState& base, double gravity,
                                    const Field& S_h, const Field& S_u,
                                    const SolverParams& params) {
    return run_solver(grid, assemble_steady_linear_1d(grid, base, gravity, S_h, S_u), params, 2);
}

LinearFields solve_steady_linear_2d(const Grid& grid, const FlowState& base, double gravity,
                                    const Field& S_h, const Field& S_u, const Field& S_v,
                                    const SolverParams& params, double harten_delta) {
    return run_solver(grid,
                      assemble_steady_linear_2d(grid, base, gravity, S_h, S_u, S_v, harten_delta),
                      params, 3);
}

// ------------------------------------------------------------- corrections

CorrectionTau tau_correction_1d(const FlowState& steady, const Field& B_old, const Field& B_new,
                                double gravity, double floor) {
    const int n = (int)steady.h.size();
    CorrectionTau t;
    t.bar_h.resize(n);
    t.bar_u.resize(n);
    for (int i = 0; i < n; ++i) {
        double dB = B_new[i] - B_old[i];
        double den = denom(steady.h[i], steady.u[i] * steady.u[i], gravity, floor);
        t.bar_h[i] = gravity * steady.h[i] / den * dB;
        t.bar_u[i] = -gravity * steady.u[i] / den * dB;
    }
    return t;
}

CorrectionEps eps_correction_1d(const Grid& grid, const FlowState& steady, const Field& B,
                                const SedimentLaw& law, const SolverParams& params, double floor) {
    const int n = grid.nx;
    const double g = law.gravity();
    Field S1(n, 0.0), S2(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        double h = steady.h[i], u = steady.u[i];
        double den = denom(h, u * u, g, floor);
        double lam = lambda0_1d(h, u, law, floor);
        double Bx = (B[i + 1] - B[i - 1]) / (2.0 * grid.dx);
        S1[i] = g * h * lam / den * Bx;
        S2[i] = -u / h * S1[i];
    }
    LinearFields lf = solve_steady_linear_1d(grid, steady, g, S1, S2, params);
    CorrectionEps out;
    out.phi_h = std::move(lf.phi_h);
    out.phi_u = std::move(lf.phi_u);
    out.solver_ok = lf.solve.converged();
    out.solver_iterations = lf.solve.iterations;
    if (!out.solver_ok) throw std::runtime_error("eps_correction_1d: linear solver failed");
    return out;
}

CorrectionTau tau_correction_2d(const Grid& grid, const FlowState& steady, const Field& B_old,
                                const Field& B_new, double gravity, const SolverParams& params,
                                double harten_factor, double floor) {
    const int n = grid.cells();
    CorrectionTau t;
    t.bar_h.resize(n);
    t.bar_u.resize(n);
    t.bar_v.resize(n);
    for (int c = 0; c < n; ++c) {
        double dB = B_new[c] - B_old[c];
        double u2 = steady.u[c] * steady.u[c] + steady.v[c] * steady.v[c];
        double den = denom(steady.h[c], u2, gravity, floor);
        t.bar_h[c] = gravity * steady.h[c] / den * dB;
        t.bar_u[c] = -gravity * steady.u[c] / den * dB;
        t.bar_v[c] = -gravity * steady.v[c] / den * dB;
    }
    Field Sx, Sy;
    op_Lu(grid, steady.u, steady.v, t.bar_u, t.bar_v, DerivMode::central, Sx, Sy);
    for (int c = 0; c < n; ++c) {
        Sx[c] = -Sx[c];
        Sy[c] = -Sy[c];
    }
    Field Sh(n, 0.0);
    double delta = harten_factor * max_interface_speed_2d(grid, steady, gravity);
    LinearFields lf = solve_steady_linear_2d(grid, steady, gravity, Sh, Sx, Sy, params, delta);
    if (!lf.solve.converged())
        throw std::runtime_error("tau_correction_2d: linear solver failed");
    t.hat_h = std::move(lf.phi_h);
    t.hat_u = std::move(lf.phi_u);
    t.hat_v = std::move(lf.phi_v);
    return t;
}

CorrectionEps eps_correction_2d(const Grid& grid, const FlowState& steady, const Field& B,
                                const SedimentLaw& law, const SolverParams& params,
                                double harten_factor, double floor) {
    const int n = grid.cells();
    const double g = law.gravity();
    BedSpeeds sp = lambda_S_2d(0, grid, steady, law, nullptr, nullptr, nullptr,
                               DerivMode::central, floor);
    Field Bx = ddx_field(grid, B, DerivMode::central);
    Field By = ddy_field(grid, B, +1.0, DerivMode::central);

    // w = -lambda . grad B + S0;  psi = g u w / den
    Field psi_x(n), psi_y(n), w(n);
    for (int c = 0; c < n; ++c) {
        double u2 = steady.u[c] * steady.u[c] + steady.v[c] * steady.v[c];
        double den = denom(steady.h[c], u2, g, floor);
        w[c] = -(sp.lx[c] * Bx[c] + sp.ly[c] * By[c]) + sp.src[c];
        psi_x[c] = g * steady.u[c] * w[c] / den;
        psi_y[c] = g * steady.v[c] * w[c] / den;
    }
    double delta = harten_factor * max_interface_speed_2d(grid, steady, g);

    CorrectionEps out;
    {
        Field Sx, Sy, Sh(n, 0.0);
        op_Lu(grid, steady.u, steady.v, psi_x, psi_y, DerivMode::central, Sx, Sy);
        LinearFields hat = solve_steady_linear_2d(grid, steady, g, Sh, Sx, Sy, params, delta);
        if (!hat.solve.converged())
            throw std::runtime_error("eps_correction_2d: hat-system solver failed");
        out.hat_h = std::move(hat.phi_h);
        out.hat_u = std::move(hat.phi_u);
        out.hat_v = std::move(hat.phi_v);
    }
    {
        Field Sh(n), Su(n), Sv(n);
        for (int c = 0; c < n; ++c) {
            double u2 = steady.u[c] * steady.u[c] + steady.v[c] * steady.v[c];
            double den = denom(steady.h[c], u2, g, floor);
            Sh[c] = -g * steady.h[c] * w[c] / den - out.hat_h[c];
            Su[c] = psi_x[c] - out.hat_u[c];
            Sv[c] = psi_y[c] - out.hat_v[c];
        }
        LinearFields main = solve_steady_linear_2d(grid, steady, g, Sh, Su, Sv, params, delta);
        if (!main.solve.converged())
            throw std::runtime_error("eps_correction_2d: main-system solver failed");
        out.phi_h = std::move(main.phi_h);
        out.phi_u = std::move(main.phi_u);
        out.phi_v = std::move(main.phi_v);
        out.solver_iterations = main.solve.iterations;
    }
    return out;
}

}  // namespace sedsim
