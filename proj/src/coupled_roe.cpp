#include "sedsim/coupled_roe.hpp"

#include <cmath>
#include <sstream>

#include "fwave_kernels.hpp"

namespace sedsim {

using detail::sgn;
using detail::swe_fwave;
using detail::wave_limiter;

CoupledStepper1D::CoupledStepper1D(const Grid& grid, const SedimentLaw& law,
                                   const FlowState& initial, const BedField& bed,
                                   double discharge, HydroBc bc)
    : grid_(grid), law_(law), g_(law.gravity()), Q_(discharge), bc_(bc), n_(grid.nx) {
    h_.assign(n_ + 4, 0.0);
    hu_.assign(n_ + 4, 0.0);
    b_.assign(n_ + 4, 0.0);
    for (int i = 0; i < n_; ++i) {
        h_[i + 2] = initial.h[i];
        hu_[i + 2] = initial.h[i] * initial.u[i];
        b_[i + 2] = bed.B[i];
    }
    const int m = n_ + 3;
    for (int p = 0; p < 3; ++p) {
        s_[p].assign(m, 0.0);
        ft_[p].assign(m, 0.0);
        for (int c = 0; c < 3; ++c) zc_[p][c].assign(m, 0.0);
    }
}

void CoupledStepper1D::fill_ghosts() {
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
    h_[0] = h_[1] = h_[2];
    hu_[0] = hu_[1] = Q_;
    b_[0] = b_[1] = b_[2];
    h_[n_ + 2] = h_[n_ + 3] = h_[n_ + 1];
    hu_[n_ + 2] = hu_[n_ + 3] = hu_[n_ + 1];
    b_[n_ + 2] = b_[n_ + 3] = b_[n_ + 1];
}

double CoupledStepper1D::max_wave_speed() {
    fill_ghosts();
    double m = 0.0;
    for (int p = 2; p < n_ + 2; ++p) {
        double u = hu_[p] / h_[p];
        double s = std::abs(u) + std::sqrt(g_ * h_[p]);
        if (s > m) m = s;
    }
    return m;
}

void CoupledStepper1D::step(double dt) {
    fill_ghosts();
    const double eps = law_.eps();
    // per-cell primitives and sediment flux
    u_.resize(n_ + 4);
    sq_.resize(n_ + 4);
    f3_.resize(n_ + 4);
    for (int p = 0; p < n_ + 4; ++p) {
        u_[p] = hu_[p] / h_[p];
        sq_[p] = std::sqrt(h_[p]);
        f3_[p] = eps * u_[p] * law_.qb_tilde(std::abs(u_[p]));
    }
    for (int k = 0; k <= n_ + 2; ++k) {
        double hL = h_[k], hR = h_[k + 1];
        double uL = u_[k], uR = u_[k + 1];
        double sqL = sq_[k], sqR = sq_[k + 1];
        double hbar = 0.5 * (hL + hR);
        double ub = (sqL * uL + sqR * uR) / (sqL + sqR);
        double d = eps * law_.lambda_b_tilde(std::abs(ub)) / hbar;
        if (d == 0.0) {
            // exactly decoupled interface: same arithmetic as the fixed-bed stepper
            auto w = swe_fwave(g_, hL, hR, uL, uR, sqL, sqR, b_[k + 1] - b_[k]);
            s_[0][k] = w.s1;
            s_[1][k] = 0.0;
            s_[2][k] = w.s2;
            zc_[0][0][k] = w.Z1h;
            zc_[0][1][k] = w.Z1m;
            zc_[0][2][k] = 0.0;
            zc_[1][0][k] = 0.0;
            zc_[1][1][k] = 0.0;
            zc_[1][2][k] = 0.0;
            zc_[2][0][k] = w.Z2h;
            zc_[2][1][k] = w.Z2m;
            zc_[2][2][k] = 0.0;
            continue;
        }
        double cb = std::sqrt(g_ * hbar);
        double gh = g_ * hbar;
        // characteristic cubic p(s) = s (s-ub)^2 - gh s - gh d (s-ub)
        auto newton = [&](double s) {
            for (int it = 0; it < 3; ++it) {
                double sm = s - ub;
                double pv = s * sm * sm - gh * s - gh * d * sm;
                double dv = sm * sm + 2.0 * s * sm - gh - gh * d;
                s -= pv / dv;
            }
            return s;
        };
        double sA = newton(ub - cb);
        double sC = newton(ub + cb);
        double den0 = gh - ub * ub;
        double sB = newton(std::abs(den0) > 1e-12 ? gh * d * ub / den0 : 0.0);
        double sep = 1e-10 * (std::abs(sA) + std::abs(sC) + 1.0);
        if (std::abs(sA - sB) < sep || std::abs(sC - sB) < sep || std::abs(sA - sC) < sep) {
            std::ostringstream os;
            os << "CoupledStepper1D: near-defective interface Jacobian at face " << k
               << " (s = " << sA << ", " << sB << ", " << sC << ")";
            throw std::runtime_error(os.str());
        }
        // flux difference minus source
        double d1 = hR * uR - hL * uL;
        double d2 = (hR * uR * uR - hL * uL * uL) + gh * ((hR - hL) + (b_[k + 1] - b_[k]));
        double d3 = f3_[k + 1] - f3_[k];
        // eigenvectors r(s) = (gh, s gh, (s-ub)^2 - gh); Vandermonde solve for z
        double inv_gh = 1.0 / gh;
        double m0 = d1 * inv_gh;
        double m1 = d2 * inv_gh;
        double m2 = d3 + 2.0 * ub * m1 - (ub * ub - gh) * m0;
        double sarr[3] = {sA, sB, sC};
        s_[0][k] = sA;
        s_[1][k] = sB;
        s_[2][k] = sC;
        for (int p = 0; p < 3; ++p) {
            double sp = sarr[p], sq = sarr[(p + 1) % 3], sr = sarr[(p + 2) % 3];
            double z = (m2 - (sq + sr) * m1 + sq * sr * m0) / ((sp - sq) * (sp - sr));
            zc_[p][0][k] = z * gh;
            zc_[p][1][k] = z * sp * gh;
            zc_[p][2][k] = z * ((sp - ub) * (sp - ub) - gh);
        }
    }

    const double nu = dt / grid_.dx;
    for (int k = 1; k <= n_ + 1; ++k) {
        for (int c = 0; c < 3; ++c) ft_[c][k] = 0.0;
        for (int p = 0; p < 3; ++p) {
            double sp = s_[p][k];
            int up = sp > 0.0 ? k - 1 : k + 1;
            double self = 0.0, dup = 0.0;
            for (int c = 0; c < 3; ++c) {
                double zc = zc_[p][c][k];
                self += zc * zc;
                dup += zc_[p][c][up] * zc;
            }
            double t = sgn(sp) * (1.0 - nu * std::abs(sp)) * wave_limiter(dup, self);
            for (int c = 0; c < 3; ++c) ft_[c][k] += 0.5 * t * zc_[p][c][k];
        }
    }
    for (int i = 0; i < n_; ++i) {
        int kl = i + 1, kr = i + 2;
        double a[3];
        for (int c = 0; c < 3; ++c) {
            a[c] = (s_[0][kl] > 0.0 ? zc_[0][c][kl] : 0.0) + (s_[1][kl] > 0.0 ? zc_[1][c][kl] : 0.0) +
                   (s_[2][kl] > 0.0 ? zc_[2][c][kl] : 0.0) + (s_[0][kr] < 0.0 ? zc_[0][c][kr] : 0.0) +
                   (s_[1][kr] < 0.0 ? zc_[1][c][kr] : 0.0) + (s_[2][kr] < 0.0 ? zc_[2][c][kr] : 0.0) +
                   ft_[c][kr] - ft_[c][kl];
        }
        h_[i + 2] -= nu * a[0];
        hu_[i + 2] -= nu * a[1];
        b_[i + 2] -= nu * a[2];
        if (!(h_[i + 2] > 0.0)) {
            std::ostringstream os;
            os << "CoupledStepper1D: non-positive depth h=" << h_[i + 2] << " in cell " << i;
            throw PositivityError(os.str());
        }
    }
}

FlowState CoupledStepper1D::state() const {
    FlowState s;
    s.h.resize(n_);
    s.u.resize(n_);
    for (int i = 0; i < n_; ++i) {
        s.h[i] = h_[i + 2];
        s.u[i] = hu_[i + 2] / h_[i + 2];
    }
    return s;
}

BedField CoupledStepper1D::bed() const {
    BedField bf;
    bf.B.resize(n_);
    for (int i = 0; i < n_; ++i) bf.B[i] = b_[i + 2];
    return bf;
}

CoupledRunResult coupled_roe_run_1d(const Grid& grid, const SedimentLaw& law,
                                    const FlowState& initial, const BedField& bed0, double T_end,
                                    double cfl, double discharge, HydroBc bc) {
    CoupledStepper1D st(grid, law, initial, bed0, discharge, bc);
    double t = 0.0;
    long steps = 0;
    while (t < T_end) {
        double smax = st.max_wave_speed();
        double dt = cfl * grid.dx / smax;
        if (t + dt > T_end) dt = T_end - t;
        st.step(dt);
        t += dt;
        ++steps;
    }
    CoupledRunResult r;
    r.flow = st.state();
    r.bed = st.bed();
    r.steps = steps;
    return r;
}

}  // namespace sedsim
