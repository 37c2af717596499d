#pragma once

#include <cmath>
#include <string>

namespace sedsim {

/// Bedload transport closure in the unified form  xi*q_b = eps * u * qb_tilde(|u|).
///
/// Grass:              qb_tilde(s) = s^(m-1),             eps = xi * A_g
/// Meyer-Peter-Muller: qb_tilde(s) = (s^2 - u_cr^2)_+^(3/2) / s,
///                     eps = xi / ((srho-1) g) * sqrt(f^3 / 8),
///                     u_cr = sqrt(8 (srho-1) g d_s tau_cr_star / f)
///
/// Parameters are validated once at construction; evaluators are total
/// functions afterwards. Immutable, safe to share across threads.
class SedimentLaw {
  public:
    enum class Kind { grass, mpm };

    static SedimentLaw grass(double A_g, double m, double gamma, double gravity);
    static SedimentLaw meyer_peter_muller(double srho, double d_s, double f,
                                          double tau_cr_star, double gamma, double gravity);
    /// MPM parameterized directly by critical velocity and time scaling parameter.
    static SedimentLaw mpm_by_ucr(double u_cr, double eps, double gamma, double gravity);

    Kind kind() const { return kind_; }
    double exponent() const { return m_; }
    double grass_Ag() const { return A_g_; }
    double gamma() const { return gamma_; }
    double gravity() const { return gravity_; }
    double xi() const { return xi_; }
    double eps() const { return eps_; }

    /// Critical velocity; 0 for the Grass law.
    double critical_velocity() const { return u_cr_; }

    /// Flux factor qb_tilde(|u|), speed >= 0.
    double qb_tilde(double speed) const {
        if (kind_ == Kind::grass) {
            if (m_ == 1.0) return 1.0;
            if (speed == 0.0) return 0.0;
            return ipow(speed, m_ - 1.0);
        }
        // MPM, continuous extension: 0 for speed <= u_cr (including speed = 0)
        if (speed <= u_cr_) return 0.0;
        double d2 = speed * speed - u_cr_ * u_cr_;
        return d2 * std::sqrt(d2) / speed;
    }

    /// Derivative qb_tilde'(|u|) (right-hand derivative at the MPM threshold).
    double qb_tilde_prime(double speed) const {
        if (kind_ == Kind::grass) {
            if (m_ == 1.0) return 0.0;
            // pow(0, m-2) yields the correct limit for every m in [1,4]
            if (speed == 0.0) return (m_ - 1.0) * std::pow(speed, m_ - 2.0);
            return (m_ - 1.0) * ipow(speed, m_ - 2.0);
        }
        if (speed <= u_cr_) return 0.0;  // right-hand derivative is 0 at the threshold
        double d2 = speed * speed - u_cr_ * u_cr_;
        return std::sqrt(d2) * (2.0 * speed * speed + u_cr_ * u_cr_) / (speed * speed);
    }

    /// Characteristic factor lambda_b_tilde = qb_tilde + |u| qb_tilde', analytic.
    double lambda_b_tilde(double speed) const {
        if (kind_ == Kind::grass) {
            if (m_ == 1.0) return 1.0;
            if (speed == 0.0) return 0.0;
            return m_ * ipow(speed, m_ - 1.0);
        }
        if (speed <= u_cr_) return 0.0;
        return 3.0 * speed * std::sqrt(speed * speed - u_cr_ * u_cr_);
    }

    /// The product qb_tilde'(s)/s with the analytic limit at s -> 0
    /// (guarded floor 1e-12; Grass m in (1,2) is reduced-accuracy territory).
    double qb_prime_over_speed(double speed) const {
        double s = speed > 1e-12 ? speed : 1e-12;
        return qb_tilde_prime(s) / s;
    }

    /// Law in the nondimensional frame with velocity scale U and height scale H.
    SedimentLaw nondimensionalized(double U, double H) const;

    std::string describe() const;

  private:
    SedimentLaw() = default;

    // |u|^p with fast paths for the integer exponents of the Grass family
    static double ipow(double s, double p) {
        if (p == 0.0) return 1.0;
        if (p == 1.0) return s;
        if (p == 2.0) return s * s;
        if (p == 3.0) return s * s * s;
        return std::pow(s, p);
    }

    Kind kind_ = Kind::grass;
    double m_ = 3.0;      // grass exponent
    double A_g_ = 0.0;    // grass constant (0 allowed: decoupled bed)
    double u_cr_ = 0.0;   // mpm critical velocity
    double gamma_ = 0.0;  // porosity
    double gravity_ = 9.81;
    double xi_ = 1.0;   // 1/(1-gamma)
    double eps_ = 0.0;  // time scaling parameter
};

}  // namespace sedsim
