#include "sedsim/sediment_law.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sedsim {

namespace {
void check_common(double gamma, double gravity) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("SedimentLaw: porosity gamma must be in [0,1)");
    if (!(gravity > 0.0)) throw std::invalid_argument("SedimentLaw: gravity must be > 0");
}
}  // namespace

SedimentLaw SedimentLaw::grass(double A_g, double m, double gamma, double gravity) {
    check_common(gamma, gravity);
    if (!(m >= 1.0 && m <= 4.0))
        throw std::invalid_argument("SedimentLaw: Grass exponent m must be in [1,4]");
    if (!(A_g >= 0.0 && A_g <= 1.0))
        throw std::invalid_argument("SedimentLaw: Grass A_g must be in [0,1]");
    SedimentLaw law;
    law.kind_ = Kind::grass;
    law.m_ = m;
    law.A_g_ = A_g;
    law.gamma_ = gamma;
    law.gravity_ = gravity;
    law.xi_ = 1.0 / (1.0 - gamma);
    law.eps_ = law.xi_ * A_g;
    return law;
}

SedimentLaw SedimentLaw::meyer_peter_muller(double srho, double d_s, double f,
                                            double tau_cr_star, double gamma, double gravity) {
    check_common(gamma, gravity);
    if (!(srho > 1.0)) throw std::invalid_argument("SedimentLaw: MPM density ratio s must be > 1");
    if (!(d_s > 0.0)) throw std::invalid_argument("SedimentLaw: MPM grain diameter must be > 0");
    if (!(f > 0.0)) throw std::invalid_argument("SedimentLaw: MPM Darcy-Weisbach f must be > 0");
    if (!(tau_cr_star >= 0.0))
        throw std::invalid_argument("SedimentLaw: MPM critical Shields parameter must be >= 0");
    SedimentLaw law;
    law.kind_ = Kind::mpm;
    law.gamma_ = gamma;
    law.gravity_ = gravity;
    law.xi_ = 1.0 / (1.0 - gamma);
    law.u_cr_ = std::sqrt(8.0 * (srho - 1.0) * gravity * d_s * tau_cr_star / f);
    law.eps_ = law.xi_ / ((srho - 1.0) * gravity) * std::sqrt(f * f * f / 8.0);
    return law;
}

SedimentLaw SedimentLaw::mpm_by_ucr(double u_cr, double eps, double gamma, double gravity) {
    check_common(gamma, gravity);
    if (!(u_cr >= 0.0)) throw std::invalid_argument("SedimentLaw: u_cr must be >= 0");
    if (!(eps > 0.0)) throw std::invalid_argument("SedimentLaw: eps must be > 0");
    SedimentLaw law;
    law.kind_ = Kind::mpm;
    law.gamma_ = gamma;
    law.gravity_ = gravity;
    law.xi_ = 1.0 / (1.0 - gamma);
    law.u_cr_ = u_cr;
    law.eps_ = eps;
    return law;
}

SedimentLaw SedimentLaw::nondimensionalized(double U, double H) const {
    SedimentLaw law = *this;
    if (kind_ == Kind::grass) {
        // qb_tilde(U s) = U^(m-1) qb_tilde(s)
        law.eps_ = eps_ * std::pow(U, m_ - 1.0) / H;
        law.A_g_ = A_g_ * std::pow(U, m_ - 1.0) / H;
    } else {
        // qb_tilde(U s; u_cr) = U^2 qb_tilde(s; u_cr/U)
        law.eps_ = eps_ * U * U / H;
        law.u_cr_ = u_cr_ / U;
    }
    law.gravity_ = gravity_ * H / (U * U);
    return law;
}

std::string SedimentLaw::describe() const {
    std::ostringstream os;
    if (kind_ == Kind::grass)
        os << "grass(A_g=" << A_g_ << ", m=" << m_ << ")";
    else
        os << "mpm(u_cr=" << u_cr_ << ")";
    os << " gamma=" << gamma_ << " eps=" << eps_;
    return os.str();
}

}  // namespace sedsim
