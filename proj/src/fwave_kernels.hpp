#pragma once

#include <cmath>

// Shared interface kernels for the Roe-type solvers. The coupled solver's
// decoupled fast path must execute the exact same arithmetic as the fixed-bed
// stepper, so both are built on these inlines.

namespace sedsim::detail {

struct IfaceSWE {
    double s1, s2;              // Roe speeds u-c, u+c
    double Z1h, Z1m, Z2h, Z2m;  // f-waves (depth, momentum components)
};

// Flux-difference/source decomposition at one interface. dB = B_R - B_L.
// The momentum difference uses g*hbar*(dh+dB) so lake-at-rest waves vanish
// to rounding.
inline IfaceSWE swe_fwave(double g, double hL, double hR, double uL, double uR, double sqL,
                          double sqR, double dB) {
    double hbar = 0.5 * (hL + hR);
    double ub = (sqL * uL + sqR * uR) / (sqL + sqR);
    double cb = std::sqrt(g * hbar);
    double d1 = hR * uR - hL * uL;
    double d2 = (hR * uR * uR - hL * uL * uL) + g * hbar * ((hR - hL) + dB);
    double s1 = ub - cb, s2 = ub + cb;
    double inv2c = 1.0 / (2.0 * cb);
    double z1 = (s2 * d1 - d2) * inv2c;
    double z2 = (d2 - s1 * d1) * inv2c;
    IfaceSWE w;
    w.s1 = s1;
    w.s2 = s2;
    w.Z1h = z1;
    w.Z1m = z1 * s1;
    w.Z2h = z2;
    w.Z2m = z2 * s2;
    return w;
}

// minmod-type wave limiter phi(theta), theta = <Z_up, Z_self>/<Z_self, Z_self>
inline double wave_limiter(double dot_up, double dot_self) {
    if (dot_self <= 0.0) return 0.0;
    double th = dot_up / dot_self;
    if (th <= 0.0) return 0.0;
    return th < 1.0 ? th : 1.0;
}

inline double sgn(double s) { return (s > 0.0) ? 1.0 : ((s < 0.0) ? -1.0 : 0.0); }

}  // namespace sedsim::detail
