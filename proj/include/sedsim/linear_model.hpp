#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

namespace sedsim {

using ScalarFunc = std::function<double(double)>;
using VecFunc = std::function<Eigen::VectorXd(double)>;

/// Linear model  U_t + A U_x = -g B_x,  B_t + eps c^T U_x = 0.
/// A must have real simple eigenvalues with min|lambda_i| > 100 eps.
struct LinearModelSpec {
    Eigen::MatrixXd A;
    Eigen::VectorXd g;
    Eigen::VectorXd c;
    double eps = 0.0;

    int l() const { return (int)A.rows(); }

    static LinearModelSpec make(Eigen::MatrixXd A, Eigen::VectorXd g, Eigen::VectorXd c,
                                double eps);

    Eigen::MatrixXd C_eps() const;   // [[A, g], [eps c^T, 0]]
    Eigen::MatrixXd C_zero() const;  // [[A, g], [0, 0]]
};

/// Exact blocks of the eps=0 decomposition plus first-order coefficients of
/// the perturbed one (by differencing against the eps=0 blocks; the last row
/// is normalized so theta_hat = 0).
struct PerturbedEigen {
    Eigen::MatrixXd X;           // rows: left eigenvectors of A, X A = Lambda X
    Eigen::VectorXd lambda;      // ascending
    Eigen::MatrixXd K;           // [[X, Lambda^-1 X g], [0, 1]]
    Eigen::MatrixXd D;           // diag(lambda, 0)
    Eigen::MatrixXd K_eps;       // normalized left eigenvector rows of C^eps
    Eigen::VectorXd eigvals;     // of C^eps, matched to (lambda, small)
    Eigen::MatrixXd X_hat;       // (K_eps - K)/eps blocks
    Eigen::VectorXd alpha_hat;
    Eigen::VectorXd beta_hat;
    Eigen::VectorXd lambda_hat;
    double theta_hat = 0.0;
    double mu = 0.0;  // small eigenvalue / eps
};

PerturbedEigen decompose(const LinearModelSpec& spec);

/// Characteristic solution of V_t + M V_x = 0 for an arbitrary real
/// diagonalizable matrix: each left-eigen projection of V0 translates at its
/// eigenvalue. Returns one column per sample point.
Eigen::MatrixXd exact_solve_system(const Eigen::MatrixXd& M, const VecFunc& V0, double t,
                                   const std::vector<double>& xs);

/// V(x,t) for the full model (matrix C^eps).
Eigen::MatrixXd exact_solve(const LinearModelSpec& spec, const VecFunc& V0, double t,
                            const std::vector<double>& xs);

/// Well-prepared fast variables: U0(x) = -M^-1 m (B0(x) - mean B0) with
/// order 0: M = A, m = g; order 1: M = A + eps X^-1 Lambda X_hat,
/// m = g + eps X^-1 Lambda alpha_hat.
VecFunc prepare_initial(const LinearModelSpec& spec, const ScalarFunc& B0, int order);

/// (lambda_B^(0), lambda_B^(1)) closed forms.
std::pair<double, double> homogenized_speeds(const LinearModelSpec& spec);

/// The four-term decomposition of (X phi)(x, tau): O(eps) term, O(tau) term,
/// and the two high-order terms.
struct VarphiTerms {
    Eigen::VectorXd eps_term;
    Eigen::VectorXd tau_term;
    Eigen::VectorXd high_init;   // translated initial phi
    Eigen::VectorXd high_trans;  // translated O(eps) image
    Eigen::VectorXd sum() const { return eps_term + tau_term + high_init + high_trans; }
};

VarphiTerms varphi_terms(const LinearModelSpec& spec, const ScalarFunc& B0, double x, double tau);

/// Error-order verification: for each eps, prepare order-1 initial data,
/// evaluate at t = t_factor/eps, and compare the exact riverbed against the
/// zeroth/first-order translated profiles. Slopes are least-squares fits of
/// log(error) against log(eps).
struct OrderStudy {
    std::vector<std::array<double, 3>> rows;  // (eps, err0, err1)
    double slope0 = 0.0;
    double slope1 = 0.0;
};

OrderStudy order_study(const Eigen::MatrixXd& A, const Eigen::VectorXd& g,
                       const Eigen::VectorXd& c, const ScalarFunc& B0,
                       const std::vector<double>& eps_sweep, double t_factor = 1.0,
                       int samples = 2048);

/// Mean over one period [0,1] (trapezoid on a fine uniform grid; exact for
/// band-limited periodic data).
double periodic_mean(const ScalarFunc& f, int samples = 8192);

}  // namespace sedsim
