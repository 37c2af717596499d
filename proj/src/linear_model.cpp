#include "sedsim/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sedsim {

namespace {

// real spectral decomposition M = W N W^-1 with ascending-eigenvalue order;
// throws on complex or defective spectra
struct RealEigen {
    Eigen::VectorXd vals;
    Eigen::MatrixXd W;     // right eigenvectors (columns)
    Eigen::MatrixXd Winv;  // rows are left eigenvectors
};

RealEigen real_eigen(const Eigen::MatrixXd& M, double imag_tol) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigen solver failed");
    const int n = (int)M.rows();
    double scale = M.cwiseAbs().maxCoeff();
    for (int k = 0; k < n; ++k)
        if (std::abs(es.eigenvalues()[k].imag()) > imag_tol * (scale + 1.0))
            throw std::runtime_error("complex spectrum rejected");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return es.eigenvalues()[a].real() < es.eigenvalues()[b].real();
    });
    RealEigen r;
    r.vals.resize(n);
    r.W.resize(n, n);
    for (int k = 0; k < n; ++k) {
        r.vals[k] = es.eigenvalues()[order[k]].real();
        r.W.col(k) = es.eigenvectors().col(order[k]).real();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(r.W);
    if (!lu.isInvertible()) throw std::runtime_error("defective spectrum rejected");
    r.Winv = lu.inverse();
    return r;
}

}  // namespace

LinearModelSpec LinearModelSpec::make(Eigen::MatrixXd A, Eigen::VectorXd g, Eigen::VectorXd c,
                                      double eps) {
    if (A.rows() != A.cols() || g.size() != A.rows() || c.size() != A.rows())
        throw std::invalid_argument("LinearModelSpec: dimension mismatch");
    if (!(eps > 0.0)) throw std::invalid_argument("LinearModelSpec: eps must be > 0");
    RealEigen re = real_eigen(A, 1e-12);
    double minabs = re.vals.cwiseAbs().minCoeff();
    if (!(minabs > 100.0 * eps))
        throw std::invalid_argument("LinearModelSpec: requires min|lambda_i| > 100 eps");
    for (int k = 0; k + 1 < (int)re.vals.size(); ++k)
        if (std::abs(re.vals[k + 1] - re.vals[k]) < 1e-10 * (minabs + 1.0))
            throw std::invalid_argument("LinearModelSpec: eigenvalues must be simple");
    LinearModelSpec s;
    s.A = std::move(A);
    s.g = std::move(g);
    s.c = std::move(c);
    s.eps = eps;
    return s;
}

Eigen::MatrixXd LinearModelSpec::C_eps() const {
    const int n = l();
    Eigen::MatrixXd C(n + 1, n + 1);
    C.setZero();
    C.topLeftCorner(n, n) = A;
    C.topRightCorner(n, 1) = g;
    C.bottomLeftCorner(1, n) = eps * c.transpose();
    return C;
}

Eigen::MatrixXd LinearModelSpec::C_zero() const {
    Eigen::MatrixXd C = C_eps();
    C.bottomLeftCorner(1, l()).setZero();
    return C;
}

PerturbedEigen decompose(const LinearModelSpec& spec) {
    const int l = spec.l();
    PerturbedEigen pe;

    RealEigen ra = real_eigen(spec.A, 1e-12);
    pe.lambda = ra.vals;
    pe.X = ra.Winv;  // X A = Lambda X with X v_k = e_k normalization

    pe.K.resize(l + 1, l + 1);
    pe.K.setZero();
    pe.K.topLeftCorner(l, l) = pe.X;
    pe.K.topRightCorner(l, 1) = pe.lambda.cwiseInverse().asDiagonal() * (pe.X * spec.g);
    pe.K(l, l) = 1.0;
    pe.D.resize(l + 1, l + 1);
    pe.D.setZero();
    pe.D.topLeftCorner(l, l) = pe.lambda.asDiagonal();

    RealEigen rc = real_eigen(spec.C_eps(), 1e-10);

    // match each perturbed eigenvalue to a base one (or to the small one)
    std::vector<int> pick(l + 1, -1);
    std::vector<bool> used(l + 1, false);
    Eigen::VectorXd targets(l + 1);
    targets.head(l) = pe.lambda;
    targets[l] = 0.0;
    for (int t = 0; t <= l; ++t) {
        double best = 1e300;
        int bk = -1;
        for (int k = 0; k <= l; ++k) {
            if (used[k]) continue;
            double d = std::abs(rc.vals[k] - targets[t]);
            if (d < best) {
                best = d;
                bk = k;
            }
        }
        pick[t] = bk;
        used[bk] = true;
    }

    pe.K_eps.resize(l + 1, l + 1);
    pe.eigvals.resize(l + 1);
    pe.X_hat.resize(l, l);
    pe.alpha_hat.resize(l);
    pe.beta_hat.resize(l);
    pe.lambda_hat.resize(l);

    // fast rows: normalize against the eps=0 right eigenvectors (v_k; 0)
    for (int k = 0; k < l; ++k) {
        Eigen::VectorXd row = rc.Winv.row(pick[k]);
        double s = row.head(l).dot(ra.W.col(k));
        if (std::abs(s) < 1e-14) throw std::runtime_error("decompose: degenerate normalization");
        row /= s;
        pe.K_eps.row(k) = row;
        pe.eigvals[k] = rc.vals[pick[k]];
        pe.X_hat.row(k) = (row.head(l).transpose() - pe.X.row(k)) / spec.eps;
        pe.alpha_hat[k] = (row[l] - pe.K(k, l)) / spec.eps;
        pe.lambda_hat[k] = (pe.eigvals[k] - pe.lambda[k]) / spec.eps;
    }
    // small row: normalize last entry to 1 (theta_hat = 0 convention)
    {
        Eigen::VectorXd row = rc.Winv.row(pick[l]);
        if (std::abs(row[l]) < 1e-14) throw std::runtime_error("decompose: degenerate small row");
        row /= row[l];
        pe.K_eps.row(l) = row;
        pe.eigvals[l] = rc.vals[pick[l]];
        pe.beta_hat = row.head(l) / spec.eps;
        pe.theta_hat = 0.0;
        pe.mu = pe.eigvals[l] / spec.eps;
    }
    return pe;
}

Eigen::MatrixXd exact_solve_system(const Eigen::MatrixXd& M, const VecFunc& V0, double t,
                                   const std::vector<double>& xs) {
    RealEigen re = real_eigen(M, 1e-10);
    const int n = (int)M.rows();
    Eigen::MatrixXd out(n, (int)xs.size());
    out.setZero();
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd lk = re.Winv.row(k);
        for (std::size_t s = 0; s < xs.size(); ++s) {
            double w = lk.dot(V0(xs[s] - re.vals[k] * t));
            out.col((int)s) += w * re.W.col(k);
        }
    }
    return out;
}

Eigen::MatrixXd exact_solve(const LinearModelSpec& spec, const VecFunc& V0, double t,
                            const std::vector<double>& xs) {
    return exact_solve_system(spec.C_eps(), V0, t, xs);
}

double periodic_mean(const ScalarFunc& f, int samples) {
    double s = 0.0;
    for (int i = 0; i < samples; ++i) s += f((i + 0.5) / samples);
    return s / samples;
}

VecFunc prepare_initial(const LinearModelSpec& spec, const ScalarFunc& B0, int order) {
    const int l = spec.l();
    Eigen::MatrixXd M = spec.A;
    Eigen::VectorXd m = spec.g;
    if (order == 1) {
        PerturbedEigen pe = decompose(spec);
        Eigen::MatrixXd Xinv = pe.X.inverse();
        M += spec.eps * Xinv * pe.lambda.asDiagonal() * pe.X_hat;
        m += spec.eps * Xinv * pe.lambda.asDiagonal() * pe.alpha_hat;
    } else if (order != 0) {
        throw std::invalid_argument("prepare_initial: order must be 0 or 1");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) throw std::runtime_error("prepare_initial: singular corrected matrix");
    Eigen::VectorXd coef = lu.solve(m);
    double mean = periodic_mean(B0);
    return [coef, B0, mean, l](double x) -> Eigen::VectorXd {
        return -coef * (B0(x) - mean);
    };
}

std::pair<double, double> homogenized_speeds(const LinearModelSpec& spec) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(spec.A);
    Eigen::VectorXd Ainv_g = lu.solve(spec.g);
    double l0 = -spec.c.dot(Ainv_g);
    Eigen::VectorXd Ainv2_g = lu.solve(Ainv_g);
    double l1 = l0 - spec.eps * l0 * spec.c.dot(Ainv2_g);
    return {l0, l1};
}

VarphiTerms varphi_terms(const LinearModelSpec& spec, const ScalarFunc& B0, double x, double tau) {
    const int l = spec.l();
    PerturbedEigen pe = decompose(spec);
    auto [l0, l1] = homogenized_speeds(spec);
    (void)l1;
    Eigen::VectorXd Xg = pe.X * spec.g;
    double mean = periodic_mean(B0);
    VarphiTerms vt;
    vt.eps_term.resize(l);
    vt.tau_term.resize(l);
    vt.high_init.resize(l);
    vt.high_trans.resize(l);
    for (int k = 0; k < l; ++k) {
        double lam = pe.lambda[k];
        double denom = lam - spec.eps * l0;
        double coef = spec.eps * Xg[k] * l0 / (lam * denom);
        vt.eps_term[k] = -coef * B0(x);
        vt.tau_term[k] = -Xg[k] / denom * (B0(x - l0 * tau) - B0(x));
        double xk = x - lam / spec.eps * tau;
        // initial condition (X phi)(y,0) = -eps lambda_B^(0) Lambda^-2 X g (B0(y)-mean)
        vt.high_init[k] = -spec.eps * l0 * Xg[k] / (lam * lam) * (B0(xk) - mean);
        vt.high_trans[k] = coef * B0(xk);
    }
    return vt;
}

OrderStudy order_study(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                       const Eigen::VectorXd& c, const ScalarFunc& B0,
                       const std::vector<double>& eps_sweep, double t_factor, int samples) {
    OrderStudy st;
    std::vector<double> xs(samples);
    for (int i = 0; i < samples; ++i) xs[i] = (i + 0.5) / samples;
    const int l = (int)A.rows();
    for (double eps : eps_sweep) {
        LinearModelSpec spec = LinearModelSpec::make(A, g, c, eps);
        auto [L0, L1] = homogenized_speeds(spec);
        VecFunc U0 = prepare_initial(spec, B0, 1);
        VecFunc V0 = [&U0, &B0, l](double x) {
            Eigen::VectorXd v(l + 1);
            v.head(l) = U0(x);
            v[l] = B0(x);
            return v;
        };
        double t = t_factor / eps;
        Eigen::MatrixXd V = exact_solve(spec, V0, t, xs);
        double tau = eps * t;
        double e0 = 0.0, e1 = 0.0;
        for (int i = 0; i < samples; ++i) {
            double b = V(l, i);
            e0 = std::max(e0, std::abs(b - B0(xs[i] - L0 * tau)));
            e1 = std::max(e1, std::abs(b - B0(xs[i] - L1 * tau)));
        }
        st.rows.push_back({eps, e0, e1});
    }
    // least-squares slopes in log-log
    auto fit = [&](int col) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = (int)st.rows.size();
        for (auto& r : st.rows) {
            double lx = std::log(r[0]), ly = std::log(r[col]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    st.slope0 = fit(1);
    st.slope1 = fit(2);
    return st;
}

}  // namespace sedsim
