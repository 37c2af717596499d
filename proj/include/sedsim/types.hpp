#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sedsim {

using Field = std::vector<double>;

/// Uniform cell-centered grid, 1D or 2D.
struct Grid {
    int dim = 1;
    double Lx = 1.0;
    double Ly = 0.0;
    int nx = 0;
    int ny = 1;
    double dx = 0.0;
    double dy = 0.0;

    static Grid make_1d(double Lx, int nx) {
        if (nx < 8) throw std::invalid_argument("Grid: nx must be >= 8");
        Grid g;
        g.dim = 1;
        g.Lx = Lx;
        g.nx = nx;
        g.ny = 1;
        g.dx = Lx / nx;
        g.dy = 0.0;
        return g;
    }

    static Grid make_2d(double Lx, double Ly, int nx, int ny) {
        if (nx < 8 || ny < 8) throw std::invalid_argument("Grid: nx, ny must be >= 8");
        Grid g;
        g.dim = 2;
        g.Lx = Lx;
        g.Ly = Ly;
        g.nx = nx;
        g.ny = ny;
        g.dx = Lx / nx;
        g.dy = Ly / ny;
        return g;
    }

    int cells() const { return nx * ny; }
    // row-major cells: index = j*nx + i
    int idx(int i, int j) const { return j * nx + i; }
    double x(int i) const { return (i + 0.5) * dx; }
    double y(int j) const { return (j + 0.5) * dy; }
};

/// Cell-averaged fast variables (primitive): depth and velocity.
struct FlowState {
    Field h;
    Field u;
    Field v;  // empty in 1D

    static FlowState zeros(const Grid& g) {
        FlowState s;
        s.h.assign(g.cells(), 0.0);
        s.u.assign(g.cells(), 0.0);
        if (g.dim == 2) s.v.assign(g.cells(), 0.0);
        return s;
    }

    bool positive_depth() const {
        for (double hv : h)
            if (!(hv > 0.0)) return false;
        return true;
    }

    /// Subcritical predicate: u^2 (+v^2) < g h in every cell.
    bool subcritical(double gravity) const {
        for (std::size_t i = 0; i < h.size(); ++i) {
            double s2 = u[i] * u[i] + (v.empty() ? 0.0 : v[i] * v[i]);
            if (!(s2 < gravity * h[i])) return false;
        }
        return true;
    }
};

/// Cell-averaged riverbed elevation (slow variable).
struct BedField {
    Field B;

    static BedField zeros(const Grid& g) {
        BedField b;
        b.B.assign(g.cells(), 0.0);
        return b;
    }
};

inline double linf_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
        if (d > m) m = d;
    }
    return m;
}

inline double l1_sum(const Field& a) {
    double s = 0.0;
    for (double x : a) s += (x < 0 ? -x : x);
    return s;
}

}  // namespace sedsim
