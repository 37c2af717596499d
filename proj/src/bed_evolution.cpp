#include "sedsim/bed_evolution.hpp"

#include <cmath>
#include <sstream>

namespace sedsim {

namespace {

[[noreturn]] void throw_transcritical(double h, double speed2, int cell) {
    std::ostringstream os;
    os << "transcritical cell " << cell << ": |u|^2 - g h = " << speed2
       << " is below the configured floor (h=" << h << ")";
    throw TranscriticalError(os.str());
}

double denom_checked(double h, double u2, double gravity, double floor, int cell) {
    double d = u2 - gravity * h;
    if (std::abs(d) < floor) throw_transcritical(h, d, cell);
    return d;
}

}  // namespace

double lambda0_1d(double h, double u, const SedimentLaw& law, double floor) {
    if (u == 0.0) return 0.0;
    double g = law.gravity();
    double d = denom_checked(h, u * u, g, floor, -1);
    return -g * u * law.lambda_b_tilde(std::abs(u)) / d;
}

double lambda1_1d(double h, double u, const SedimentLaw& law, double floor) {
    if (u == 0.0) return 0.0;
    double g = law.gravity();
    double d = denom_checked(h, u * u, g, floor, -1);
    double lb = law.lambda_b_tilde(std::abs(u));
    double l0 = -g * u * lb / d;
    return l0 * (1.0 - law.eps() * g * (u * u + g * h) * lb / (d * d));
}

BedSpeeds bed_speeds_1d(int order, const FlowState& flow, const SedimentLaw& law, double floor) {
    BedSpeeds sp;
    const int n = (int)flow.h.size();
    sp.lx.resize(n);
    sp.src.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        sp.lx[i] = (order == 0) ? lambda0_1d(flow.h[i], flow.u[i], law, floor)
                                : lambda1_1d(flow.h[i], flow.u[i], law, floor);
    return sp;
}

BedSpeeds lambda_S_2d(int order, const Grid& g, const FlowState& flow, const SedimentLaw& law,
                      const Field* hat_h, const Field* hat_u, const Field* hat_v, DerivMode mode,
                      double floor) {
    BedSpeeds sp;
    const int n = g.cells();
    sp.lx.resize(n);
    sp.ly.resize(n);
    sp.src.resize(n);
    const double grav = law.gravity();
    Field ls = op_LS(g, flow.u, flow.v, mode);
    for (int c = 0; c < n; ++c) {
        double h = flow.h[c], u = flow.u[c], v = flow.v[c];
        double u2 = u * u + v * v;
        double speed = std::sqrt(u2);
        double den = denom_checked(h, u2, grav, floor, c);
        double lb = law.lambda_b_tilde(speed);
        double lx0 = -grav * lb * u / den;
        double ly0 = -grav * lb * v / den;
        double s0 = (law.qb_tilde(speed) + grav * h * law.qb_prime_over_speed(speed)) / den * ls[c];
        if (order == 0) {
            sp.lx[c] = lx0;
            sp.ly[c] = ly0;
            sp.src[c] = s0;
        } else {
            double corr = law.eps() * grav * (u2 + grav * h) * lb / (den * den);
            sp.lx[c] = lx0 * (1.0 - corr);
            sp.ly[c] = ly0 * (1.0 - corr);
            double hat_term = 0.0;
            if (hat_h && hat_u && hat_v)
                hat_term = (h * (*hat_h)[c] - u * (*hat_u)[c] - v * (*hat_v)[c]) * lb / den;
            sp.src[c] = s0 - law.eps() * (s0 * grav * (u2 + grav * h) * lb / (den * den) + hat_term);
        }
    }
    return sp;
}

namespace {

// padded 1D row with two ghost layers per side
void pad_row(const double* b, int n, BedBc::Mode bc, std::vector<double>& p) {
    p.resize(n + 4);
    for (int i = 0; i < n; ++i) p[i + 2] = b[i];
    switch (bc) {
        case BedBc::Mode::extrapolate:
            p[0] = p[1] = b[0];
            p[n + 2] = p[n + 3] = b[n - 1];
            break;
        case BedBc::Mode::mirror:
            p[1] = b[0];
            p[0] = b[1];
            p[n + 2] = b[n - 1];
            p[n + 3] = b[n - 2];
            break;
        case BedBc::Mode::periodic:
            p[0] = b[n - 2];
            p[1] = b[n - 1];
            p[n + 2] = b[0];
            p[n + 3] = b[1];
            break;
    }
}

// upwind limited difference B_i^R - B_i^L for every cell of one row
void upwind_face_diff(const std::vector<double>& p, int n, const double* lam,
                      std::vector<double>& diff, BedRecon recon) {
    diff.resize(n);
    // slopes for padded cells 1..n+2
    static thread_local std::vector<double> slope;
    slope.resize(n + 4);
    if (recon == BedRecon::donor_cell)
        for (int k = 1; k <= n + 2; ++k) slope[k] = 0.0;
    else
        for (int k = 1; k <= n + 2; ++k) slope[k] = minmod(p[k] - p[k - 1], p[k + 1] - p[k]);
    for (int i = 0; i < n; ++i) {
        int k = i + 2;
        double fl_m = p[k - 1] + 0.5 * slope[k - 1];  // left value at face i-1/2
        double fr_m = p[k] - 0.5 * slope[k];          // right value at face i-1/2
        double fl_p = p[k] + 0.5 * slope[k];          // left value at face i+1/2
        double fr_p = p[k + 1] - 0.5 * slope[k + 1];  // right value at face i+1/2
        double BL = (lam[i] >= 0.0) ? fl_m : fr_m;
        double BR = (lam[i] >= 0.0) ? fl_p : fr_p;
        diff[i] = BR - BL;
    }
}

Field stage_apply(const Grid& g, const Field& base, const Field& Bspat, const BedSpeeds& sp,
                  double dtau, const BedBc& bc, double w_base, double w_step, BedRecon recon) {
    // out = w_base*base + w_step*(Bspat - dtau*(lam . upwind grad Bspat) + dtau*S)
    const int nx = g.nx, ny = g.ny;
    Field out(g.cells());
    std::vector<double> prow, diff, lrow(nx);
    for (int j = 0; j < ny; ++j) {
        pad_row(&Bspat[g.idx(0, j)], nx, bc.x, prow);
        for (int i = 0; i < nx; ++i) lrow[i] = sp.lx[g.idx(i, j)];
        upwind_face_diff(prow, nx, lrow.data(), diff, recon);
        for (int i = 0; i < nx; ++i) {
            int c = g.idx(i, j);
            out[c] = Bspat[c] - dtau / g.dx * sp.lx[c] * diff[i] + dtau * sp.src[c];
        }
    }
    if (g.dim == 2) {
        std::vector<double> col(ny), lcol(ny);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny; ++j) {
                col[j] = Bspat[g.idx(i, j)];
                lcol[j] = sp.ly[g.idx(i, j)];
            }
            pad_row(col.data(), ny, bc.y, prow);
            upwind_face_diff(prow, ny, lcol.data(), diff, recon);
            for (int j = 0; j < ny; ++j) out[g.idx(i, j)] -= dtau / g.dy * lcol[j] * diff[j];
        }
    }
    if (w_base != 0.0)
        for (int c = 0; c < g.cells(); ++c) out[c] = w_base * base[c] + w_step * out[c];
    return out;
}

}  // namespace

void muscl_faces(const Field& B, BedBc::Mode bc, Field& faceL, Field& faceR) {
    const int n = (int)B.size();
    std::vector<double> p;
    pad_row(B.data(), n, bc, p);
    std::vector<double> slope(n + 4, 0.0);
    for (int k = 1; k <= n + 2; ++k) slope[k] = minmod(p[k] - p[k - 1], p[k + 1] - p[k]);
    faceL.resize(n + 1);
    faceR.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        faceL[k] = p[k + 1] + 0.5 * slope[k + 1];
        faceR[k] = p[k + 2] - 0.5 * slope[k + 2];
    }
}

double cfl_dtau(const BedSpeeds& speeds, const Grid& g, double c_cfl, double cap) {
    double m = 0.0;
    const int n = (int)speeds.lx.size();
    for (int c = 0; c < n; ++c) {
        double r = std::abs(speeds.lx[c]) / g.dx;
        if (!speeds.ly.empty()) r += std::abs(speeds.ly[c]) / g.dy;
        if (r > m) m = r;
    }
    if (m == 0.0) return cap;
    double dt = c_cfl / m;
    return dt < cap ? dt : cap;
}

Field bed_stage1(const Grid& g, const Field& B, const BedSpeeds& speeds, double dtau,
                 const BedBc& bc, BedRecon recon) {
    return stage_apply(g, B, B, speeds, dtau, bc, 0.0, 1.0, recon);
}

Field bed_stage2(const Grid& g, const Field& B, const Field& Btilde, const BedSpeeds& speeds_np1,
                 double dtau, const BedBc& bc, BedRecon recon) {
    return stage_apply(g, B, Btilde, speeds_np1, dtau, bc, 0.5, 0.5, recon);
}

Field rk2_bed_step(const Grid& g, const Field& B, const BedSpeeds& speeds_n,
                   const BedSpeeds& speeds_np1, double dtau, const BedBc& bc, BedRecon recon) {
    Field Bt = bed_stage1(g, B, speeds_n, dtau, bc, recon);
    return bed_stage2(g, B, Bt, speeds_np1, dtau, bc, recon);
}

}  // namespace sedsim
