#include "sedsim/roe_swe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fwave_kernels.hpp"

namespace sedsim {

using detail::sgn;
using detail::swe_fwave;
using detail::wave_limiter;

namespace {

[[noreturn]] void throw_positivity(const char* where, int cell, double h) {
    std::ostringstream os;
    os << where << ": non-positive depth h=" << h << " in cell " << cell
       << " (scenario outside subcritical scope)";
    throw PositivityError(os.str());
}

}  // namespace

// ---------------------------------------------------------------- 1D stepper

FixedBedStepper1D::FixedBedStepper1D(const Grid& grid, double gravity, const FlowState& initial,
                                     const BedField& bed, double discharge, HydroBc bc)
    : grid_(grid), g_(gravity), Q_(discharge), bc_(bc), n_(grid.nx) {
    h_.assign(n_ + 4, 0.0);
    hu_.assign(n_ + 4, 0.0);
    b_.assign(n_ + 4, 0.0);
    for (int i = 0; i < n_; ++i) {
        h_[i + 2] = initial.h[i];
        hu_[i + 2] = initial.h[i] * initial.u[i];
        b_[i + 2] = bed.B[i];
    }
    const int m = n_ + 3;
    s1_.assign(m, 0.0);
    s2_.assign(m, 0.0);
    z1h_.assign(m, 0.0);
    z1m_.assign(m, 0.0);
    z2h_.assign(m, 0.0);
    z2m_.assign(m, 0.0);
    ft_h_.assign(m, 0.0);
    ft_m_.assign(m, 0.0);
}

void FixedBedStepper1D::fill_ghosts() {
    if (bc_ == HydroBc::periodic) {
        h_[0] = h_[n_];
        h_[1] = h_[n_ + 1];
        h_[n_ + 2] = h_[2];
        h_[n_ + 3] = h_[3];
        hu_[0] = hu_[n_];
        hu_[1] = hu_[n_ + 1];
        hu_[n_ + 2] = hu_[2];
        hu_[n_ + 3] = hu_[3];
        b_[0] = b_[n_];
        b_[1] = b_[n_ + 1];
        b_[n_ + 2] = b_[2];
        b_[n_ + 3] = b_[3];
        return;
    }
    // upstream: fixed discharge, extrapolated depth; downstream: transmissive
    h_[0] = h_[1] = h_[2];
    hu_[0] = hu_[1] = Q_;
    b_[0] = b_[1] = b_[2];
    h_[n_ + 2] = h_[n_ + 3] = h_[n_ + 1];
    hu_[n_ + 2] = hu_[n_ + 3] = hu_[n_ + 1];
    b_[n_ + 2] = b_[n_ + 3] = b_[n_ + 1];
}

double FixedBedStepper1D::max_wave_speed() {
    fill_ghosts();
    double m = 0.0;
    for (int p = 2; p < n_ + 2; ++p) {
        double u = hu_[p] / h_[p];
        double s = std::abs(u) + std::sqrt(g_ * h_[p]);
        if (s > m) m = s;
    }
    return m;
}

void FixedBedStepper1D::compute_waves() {
    u_.resize(n_ + 4);
    sq_.resize(n_ + 4);
    for (int p = 0; p < n_ + 4; ++p) {
        u_[p] = hu_[p] / h_[p];
        sq_[p] = std::sqrt(h_[p]);
    }
    for (int k = 0; k <= n_ + 2; ++k) {
        double hL = h_[k], hR = h_[k + 1];
        double uL = u_[k], uR = u_[k + 1];
        auto w = swe_fwave(g_, hL, hR, uL, uR, sq_[k], sq_[k + 1], b_[k + 1] - b_[k]);
        s1_[k] = w.s1;
        s2_[k] = w.s2;
        z1h_[k] = w.Z1h;
        z1m_[k] = w.Z1m;
        z2h_[k] = w.Z2h;
        z2m_[k] = w.Z2m;
    }
}

void FixedBedStepper1D::step(double dt) {
    fill_ghosts();
    compute_waves();
    const double nu = dt / grid_.dx;
    // limited second-order correction fluxes
    for (int k = 1; k <= n_ + 1; ++k) {
        int up1 = s1_[k] > 0.0 ? k - 1 : k + 1;
        int up2 = s2_[k] > 0.0 ? k - 1 : k + 1;
        double self1 = z1h_[k] * z1h_[k] + z1m_[k] * z1m_[k];
        double self2 = z2h_[k] * z2h_[k] + z2m_[k] * z2m_[k];
        double phi1 = wave_limiter(z1h_[up1] * z1h_[k] + z1m_[up1] * z1m_[k], self1);
        double phi2 = wave_limiter(z2h_[up2] * z2h_[k] + z2m_[up2] * z2m_[k], self2);
        double t1 = sgn(s1_[k]) * (1.0 - nu * std::abs(s1_[k])) * phi1;
        double t2 = sgn(s2_[k]) * (1.0 - nu * std::abs(s2_[k])) * phi2;
        ft_h_[k] = 0.5 * (t1 * z1h_[k] + t2 * z2h_[k]);
        ft_m_[k] = 0.5 * (t1 * z1m_[k] + t2 * z2m_[k]);
    }
    for (int i = 0; i < n_; ++i) {
        int kl = i + 1, kr = i + 2;
        double ah = (s1_[kl] > 0.0 ? z1h_[kl] : 0.0) + (s2_[kl] > 0.0 ? z2h_[kl] : 0.0) +
                    (s1_[kr] < 0.0 ? z1h_[kr] : 0.0) + (s2_[kr] < 0.0 ? z2h_[kr] : 0.0) +
                    ft_h_[kr] - ft_h_[kl];
        double am = (s1_[kl] > 0.0 ? z1m_[kl] : 0.0) + (s2_[kl] > 0.0 ? z2m_[kl] : 0.0) +
                    (s1_[kr] < 0.0 ? z1m_[kr] : 0.0) + (s2_[kr] < 0.0 ? z2m_[kr] : 0.0) +
                    ft_m_[kr] - ft_m_[kl];
        h_[i + 2] -= nu * ah;
        hu_[i + 2] -= nu * am;
        if (!(h_[i + 2] > 0.0)) throw_positivity("FixedBedStepper1D", i, h_[i + 2]);
    }
}

FlowState FixedBedStepper1D::state() const {
    FlowState s;
    s.h.resize(n_);
    s.u.resize(n_);
    for (int i = 0; i < n_; ++i) {
        s.h[i] = h_[i + 2];
        s.u[i] = hu_[i + 2] / h_[i + 2];
    }
    return s;
}

// ---------------------------------------------------------------- 2D stepper

FixedBedStepper2D::FixedBedStepper2D(const Grid& grid, double gravity, const FlowState& initial,
                                     const BedField& bed, double discharge, HydroBc bc)
    : grid_(grid), g_(gravity), Q_(discharge), bc_(bc), nx_(grid.nx), ny_(grid.ny) {
    pnx_ = nx_ + 4;
    pny_ = ny_ + 4;
    h_.assign(pnx_ * pny_, 1.0);
    hu_.assign(pnx_ * pny_, 0.0);
    hv_.assign(pnx_ * pny_, 0.0);
    b_.assign(pnx_ * pny_, 0.0);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            int c = grid.idx(i, j), p = pidx(i, j);
            h_[p] = initial.h[c];
            hu_[p] = initial.h[c] * initial.u[c];
            hv_[p] = initial.h[c] * initial.v[c];
            b_[p] = bed.B[c];
        }
    dh_.assign(nx_ * ny_, 0.0);
    dhu_.assign(nx_ * ny_, 0.0);
    dhv_.assign(nx_ * ny_, 0.0);
    int m = std::max(nx_, ny_) + 3;
    s1_.assign(m, 0.0);
    s2_.assign(m, 0.0);
    s3_.assign(m, 0.0);
    for (int c = 0; c < 3; ++c) {
        w1_[c].assign(m, 0.0);
        w2_[c].assign(m, 0.0);
        w3_[c].assign(m, 0.0);
        ft_[c].assign(m, 0.0);
    }
}

void FixedBedStepper2D::fill_ghosts() {
    auto P = [&](int i, int j) { return pidx(i, j); };
    if (bc_ == HydroBc::periodic) {
        for (int j = -2; j < ny_ + 2; ++j)
            for (int i = -2; i < nx_ + 2; ++i) {
                if (i >= 0 && i < nx_ && j >= 0 && j < ny_) continue;
                int si = (i + nx_) % nx_, sj = (j + ny_) % ny_;
                int p = P(i, j), q = P(si, sj);
                h_[p] = h_[q];
                hu_[p] = hu_[q];
                hv_[p] = hv_[q];
                b_[p] = b_[q];
            }
        return;
    }
    // side walls: mirror depth/tangential momentum/bed, negate normal momentum
    for (int i = 0; i < nx_; ++i) {
        for (int l = 1; l <= 2; ++l) {
            int pg = P(i, -l), ps = P(i, l - 1);
            h_[pg] = h_[ps];
            hu_[pg] = hu_[ps];
            hv_[pg] = -hv_[ps];
            b_[pg] = b_[ps];
            pg = P(i, ny_ - 1 + l);
            ps = P(i, ny_ - l);
            h_[pg] = h_[ps];
            hu_[pg] = hu_[ps];
            hv_[pg] = -hv_[ps];
            b_[pg] = b_[ps];
        }
    }
    // inflow: fixed discharge; outflow: transmissive (include wall-ghost rows)
    for (int j = -2; j < ny_ + 2; ++j) {
        for (int l = 1; l <= 2; ++l) {
            int pg = P(-l, j), ps = P(0, j);
            h_[pg] = h_[ps];
            hu_[pg] = Q_;
            hv_[pg] = 0.0;
            b_[pg] = b_[ps];
            pg = P(nx_ - 1 + l, j);
            ps = P(nx_ - 1, j);
            h_[pg] = h_[ps];
            hu_[pg] = hu_[ps];
            hv_[pg] = hv_[ps];
            b_[pg] = b_[ps];
        }
    }
}

double FixedBedStepper2D::max_wave_speed() {
    fill_ghosts();
    double m = 0.0;
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            int p = pidx(i, j);
            double c = std::sqrt(g_ * h_[p]);
            double s = (std::abs(hu_[p] / h_[p]) + c) / grid_.dx +
                       (std::abs(hv_[p] / h_[p]) + c) / grid_.dy;
            if (s > m) m = s;
        }
    return m;
}

void FixedBedStepper2D::step(double dt) {
    fill_ghosts();
    std::fill(dh_.begin(), dh_.end(), 0.0);
    std::fill(dhu_.begin(), dhu_.end(), 0.0);
    std::fill(dhv_.begin(), dhv_.end(), 0.0);

    // sweep one padded line: padded cells base + (pos-2)*stride for line
    // position pos; mn/mt are the sweep-normal and transverse momenta.
    auto sweep = [&](int n, int base, int stride, const Field& mn, const Field& mt, double dX,
                     Field& dmn, Field& dmt, auto cell_of) {
        Field* W[3][3] = {{&w1_[0], &w1_[1], &w1_[2]},
                          {&w2_[0], &w2_[1], &w2_[2]},
                          {&w3_[0], &w3_[1], &w3_[2]}};
        for (int k = 0; k <= n + 2; ++k) {
            int pL = base + (k - 2) * stride, pR = pL + stride;
            double hL = h_[pL], hR = h_[pR];
            double unL = mn[pL] / hL, unR = mn[pR] / hR;
            double utL = mt[pL] / hL, utR = mt[pR] / hR;
            double sqL = std::sqrt(hL), sqR = std::sqrt(hR);
            double hbar = 0.5 * (hL + hR);
            double ub = (sqL * unL + sqR * unR) / (sqL + sqR);
            double vb = (sqL * utL + sqR * utR) / (sqL + sqR);
            double cb = std::sqrt(g_ * hbar);
            double d1 = hR * unR - hL * unL;
            double d2 =
                (hR * unR * unR - hL * unL * unL) + g_ * hbar * ((hR - hL) + (b_[pR] - b_[pL]));
            double d3 = hR * unR * utR - hL * unL * utL;
            double sA = ub - cb, sC = ub + cb;
            double inv2c = 1.0 / (2.0 * cb);
            double z1 = (sC * d1 - d2) * inv2c;
            double z3 = (d2 - sA * d1) * inv2c;
            double z2 = d3 - vb * d1;
            s1_[k] = sA;
            s2_[k] = ub;
            s3_[k] = sC;
            w1_[0][k] = z1;
            w1_[1][k] = z1 * sA;
            w1_[2][k] = z1 * vb;
            w2_[0][k] = 0.0;
            w2_[1][k] = 0.0;
            w2_[2][k] = z2;
            w3_[0][k] = z3;
            w3_[1][k] = z3 * sC;
            w3_[2][k] = z3 * vb;
        }
        double nu = dt / dX;
        for (int k = 1; k <= n + 1; ++k) {
            double sp[3] = {s1_[k], s2_[k], s3_[k]};
            for (int c = 0; c < 3; ++c) ft_[c][k] = 0.0;
            for (int p = 0; p < 3; ++p) {
                int up = sp[p] > 0.0 ? k - 1 : k + 1;
                double self = 0.0, dup = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double zc = (*W[p][c])[k];
                    self += zc * zc;
                    dup += (*W[p][c])[up] * zc;
                }
                double t = sgn(sp[p]) * (1.0 - nu * std::abs(sp[p])) * wave_limiter(dup, self);
                for (int c = 0; c < 3; ++c) ft_[c][k] += 0.5 * t * (*W[p][c])[k];
            }
        }
        for (int i = 0; i < n; ++i) {
            int kl = i + 1, kr = i + 2;
            int cell = cell_of(i);
            double a[3];
            for (int c = 0; c < 3; ++c) {
                a[c] = (s1_[kl] > 0.0 ? w1_[c][kl] : 0.0) + (s2_[kl] > 0.0 ? w2_[c][kl] : 0.0) +
                       (s3_[kl] > 0.0 ? w3_[c][kl] : 0.0) + (s1_[kr] < 0.0 ? w1_[c][kr] : 0.0) +
                       (s2_[kr] < 0.0 ? w2_[c][kr] : 0.0) + (s3_[kr] < 0.0 ? w3_[c][kr] : 0.0) +
                       ft_[c][kr] - ft_[c][kl];
            }
            dh_[cell] += nu * a[0];
            dmn[cell] += nu * a[1];
            dmt[cell] += nu * a[2];
        }
    };

    // x sweeps
    for (int j = 0; j < ny_; ++j)
        sweep(nx_, pidx(0, j), 1, hu_, hv_, grid_.dx, dhu_, dhv_,
              [&](int i) { return grid_.idx(i, j); });
    // y sweeps
    for (int i = 0; i < nx_; ++i)
        sweep(ny_, pidx(i, 0), pnx_, hv_, hu_, grid_.dy, dhv_, dhu_,
              [&](int j) { return grid_.idx(i, j); });

    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            int c = grid_.idx(i, j), p = pidx(i, j);
            h_[p] -= dh_[c];
            hu_[p] -= dhu_[c];
            hv_[p] -= dhv_[c];
            if (!(h_[p] > 0.0)) throw_positivity("FixedBedStepper2D", c, h_[p]);
        }
}

FlowState FixedBedStepper2D::state() const {
    FlowState s;
    s.h.resize(nx_ * ny_);
    s.u.resize(nx_ * ny_);
    s.v.resize(nx_ * ny_);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            int c = grid_.idx(i, j), p = pidx(i, j);
            s.h[c] = h_[p];
            s.u[c] = hu_[p] / h_[p];
            s.v[c] = hv_[p] / h_[p];
        }
    return s;
}

// ----------------------------------------------------------------- wrappers

FlowState roe_step_fixed_bed(const Grid& grid, const FlowState& state, const BedField& bed,
                             double gravity, double dt, const SteadyConfig& cfg) {
    if (grid.dim == 1) {
        FixedBedStepper1D st(grid, gravity, state, bed, cfg.discharge, cfg.boundary);
        st.step(dt);
        return st.state();
    }
    FixedBedStepper2D st(grid, gravity, state, bed, cfg.discharge, cfg.boundary);
    st.step(dt);
    return st.state();
}

namespace {

template <class Stepper>
SteadyResult steady_loop(Stepper& st, const Grid& grid, double gravity, const SteadyConfig& cfg) {
    SteadyResult res;
    FlowState prev = st.state();
    for (int it = 1; it <= cfg.max_iters; ++it) {
        double smax = st.max_wave_speed();
        double dt;
        if (grid.dim == 1)
            dt = cfg.pseudo_cfl * grid.dx / smax;
        else
            dt = cfg.pseudo_cfl / smax;  // smax already has the 1/dx+1/dy weighting
        st.step(dt);
        FlowState cur = st.state();
        double r = 0.0;
        for (std::size_t c = 0; c < cur.h.size(); ++c) {
            r += std::abs(cur.h[c] - prev.h[c]);
            r += std::abs(cur.h[c] * cur.u[c] - prev.h[c] * prev.u[c]);
            if (!cur.v.empty()) r += std::abs(cur.h[c] * cur.v[c] - prev.h[c] * prev.v[c]);
        }
        res.iterations = it;
        res.residual = r;
        if (r < cfg.tol) {
            res.converged = true;
            res.state = std::move(cur);
            res.subcritical = res.state.subcritical(gravity);
            return res;
        }
        prev = std::move(cur);
    }
    res.converged = false;
    res.state = std::move(prev);
    res.subcritical = res.state.subcritical(gravity);
    return res;
}

}  // namespace

SteadyResult solve_steady(const Grid& grid, const BedField& bed, double gravity,
                          const SteadyConfig& cfg, const FlowState& initial) {
    if (grid.dim == 1) {
        FixedBedStepper1D st(grid, gravity, initial, bed, cfg.discharge, cfg.boundary);
        return steady_loop(st, grid, gravity, cfg);
    }
    FixedBedStepper2D st(grid, gravity, initial, bed, cfg.discharge, cfg.boundary);
    return steady_loop(st, grid, gravity, cfg);
}

}  // namespace sedsim
