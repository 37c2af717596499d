#include "sedsim/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sedsim {

void CsrMatrix::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(n_, 0.0);
    for (int r = 0; r < n_; ++r) {
        double s = 0.0;
        for (int k = rowptr_[r]; k < rowptr_[r + 1]; ++k) s += vals_[k] * x[colidx_[k]];
        y[r] = s;
    }
}

CsrMatrix CsrMatrix::from_triplets(int n, std::vector<int> rows, std::vector<int> cols,
                                   std::vector<double> vals) {
    const std::size_t m = rows.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // stable: duplicates are summed in insertion order
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (rows[a] != rows[b]) return rows[a] < rows[b];
        return cols[a] < cols[b];
    });

    CsrMatrix A;
    A.n_ = n;
    A.rowptr_.assign(n + 1, 0);
    A.colidx_.reserve(m);
    A.vals_.reserve(m);
    int prev_r = -1, prev_c = -1;
    for (std::size_t t = 0; t < m; ++t) {
        int r = rows[order[t]];
        int c = cols[order[t]];
        double v = vals[order[t]];
        if (r < 0 || r >= n || c < 0 || c >= n)
            throw std::out_of_range("CsrMatrix: triplet index out of range");
        if (r == prev_r && c == prev_c) {
            A.vals_.back() += v;
        } else {
            A.colidx_.push_back(c);
            A.vals_.push_back(v);
            A.rowptr_[r + 1]++;
            prev_r = r;
            prev_c = c;
        }
    }
    for (int r = 0; r < n; ++r) A.rowptr_[r + 1] += A.rowptr_[r];
    return A;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

/// SSOR application  z = M^{-1} r  with
///   M = (D/w + L) * (w/(2-w)) * D^{-1} * (D/w + U),  A = L + D + U.
class SsorPreconditioner {
  public:
    SsorPreconditioner(const CsrMatrix& A, double omega, bool enabled)
        : A_(A), omega_(omega), enabled_(enabled) {
        const int n = A.rows();
        diag_.assign(n, 0.0);
        diag_pos_.assign(n, -1);
        const auto& rp = A.row_offsets();
        const auto& ci = A.col_indices();
        const auto& va = A.values();
        for (int r = 0; r < n; ++r) {
            for (int k = rp[r]; k < rp[r + 1]; ++k) {
                if (ci[k] == r) {
                    diag_[r] = va[k];
                    diag_pos_[r] = k;
                }
            }
        }
        valid_ = true;
        if (enabled_)
            for (int r = 0; r < n; ++r)
                if (diag_[r] == 0.0) valid_ = false;
    }

    bool valid() const { return valid_; }

    void apply(const std::vector<double>& r, std::vector<double>& z) const {
        if (!enabled_) {
            z = r;
            return;
        }
        const int n = A_.rows();
        const auto& rp = A_.row_offsets();
        const auto& ci = A_.col_indices();
        const auto& va = A_.values();
        z.assign(n, 0.0);
        // forward solve (D/w + L) y = r
        for (int i = 0; i < n; ++i) {
            double s = r[i];
            for (int k = rp[i]; k < rp[i + 1]; ++k) {
                int c = ci[k];
                if (c >= i) break;
                s -= va[k] * z[c];
            }
            z[i] = s * omega_ / diag_[i];
        }
        // scale by (2-w)/w * D
        for (int i = 0; i < n; ++i) z[i] *= (2.0 - omega_) / omega_ * diag_[i];
        // backward solve (D/w + U) z = y'
        for (int i = n - 1; i >= 0; --i) {
            double s = z[i];
            for (int k = rp[i + 1] - 1; k >= rp[i]; --k) {
                int c = ci[k];
                if (c <= i) break;
                s -= va[k] * z[c];
            }
            z[i] = s * omega_ / diag_[i];
        }
    }

  private:
    const CsrMatrix& A_;
    double omega_;
    bool enabled_;
    bool valid_ = false;
    std::vector<double> diag_;
    std::vector<int> diag_pos_;
};

}  // namespace

SolveResult bicgstab(const CsrMatrix& A, const std::vector<double>& b,
                     const std::vector<double>& x0, const SolverParams& params) {
    const int n = A.rows();
    if ((int)b.size() != n || (int)x0.size() != n)
        throw std::invalid_argument("bicgstab: dimension mismatch");
    if (!(params.ssor_omega > 0.0 && params.ssor_omega < 2.0))
        throw std::invalid_argument("bicgstab: SSOR omega must be in (0,2)");
    if (!(params.tol > 0.0)) throw std::invalid_argument("bicgstab: tolerance must be > 0");

    const int max_iters = params.max_iters > 0 ? params.max_iters : 10 * n;

    SolveResult res;
    res.x = x0;

    SsorPreconditioner M(A, params.ssor_omega, params.precondition);
    if (!M.valid()) {
        res.status = SolveStatus::invalid_diagonal;
        return res;
    }

    std::vector<double> r(n), r0(n), p(n), v(n, 0.0), s(n), t(n), phat(n), shat(n), Ax(n);
    A.multiply(res.x, Ax);
    for (int i = 0; i < n; ++i) r[i] = b[i] - Ax[i];
    r0 = r;

    const double bnorm = norm2(b);
    const double target = params.tol * (bnorm > 0.0 ? bnorm : 1.0);
    const double breakdown_floor = 1e-300;

    auto true_residual = [&](const std::vector<double>& x) {
        A.multiply(x, Ax);
        double rn = 0.0;
        for (int i = 0; i < n; ++i) {
            double d = b[i] - Ax[i];
            rn += d * d;
        }
        return std::sqrt(rn);
    };
    auto finish = [&](SolveStatus st) {
        res.residual = true_residual(res.x);
        res.status = (res.residual <= target) ? SolveStatus::converged : st;
        return res;
    };

    if (norm2(r) <= target) return finish(SolveStatus::converged);

    double rho_prev = 1.0, alpha = 1.0, omega = 1.0;
    for (int it = 1; it <= max_iters; ++it) {
        res.iterations = it;
        double rho = dot(r0, r);
        if (std::abs(rho) < breakdown_floor) return finish(SolveStatus::breakdown);
        if (it == 1) {
            p = r;
        } else {
            double beta = (rho / rho_prev) * (alpha / omega);
            for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        M.apply(p, phat);
        A.multiply(phat, v);
        double r0v = dot(r0, v);
        if (std::abs(r0v) < breakdown_floor) return finish(SolveStatus::breakdown);
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) <= target) {
            // tentative half-step exit; accept only if the true residual agrees
            std::vector<double> xt = res.x;
            for (int i = 0; i < n; ++i) xt[i] += alpha * phat[i];
            if (true_residual(xt) <= target) {
                res.x = std::move(xt);
                return finish(SolveStatus::converged);
            }
        }
        M.apply(s, shat);
        A.multiply(shat, t);
        double tt = dot(t, t);
        if (tt < breakdown_floor) return finish(SolveStatus::breakdown);
        omega = dot(t, s) / tt;
        for (int i = 0; i < n; ++i) res.x[i] += alpha * phat[i] + omega * shat[i];
        for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        if (norm2(r) <= target && true_residual(res.x) <= target)
            return finish(SolveStatus::converged);
        if (std::abs(omega) < breakdown_floor) return finish(SolveStatus::breakdown);
        rho_prev = rho;
    }
    return finish(SolveStatus::max_iterations);
}

}  // namespace sedsim
