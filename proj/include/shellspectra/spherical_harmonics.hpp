#pragma once

#include <vector>

#include "shellspectra/spinor_algebra.hpp"

namespace shellspectra {

// Orthonormal associated Legendre functions Pbar_l^m(cos theta), 0 <= m <= l <= L,
// without the Condon-Shortley phase: int |Pbar_l^m|^2 sin(theta) dtheta dphi = 1.
class LegendreTable {
public:
    LegendreTable(int L, double theta);
    int degree() const { return L_; }
    double value(int l, int m) const { return p_[idx(l, m)]; }
    double dtheta(int l, int m) const { return dp_[idx(l, m)]; }

private:
    static int idx(int l, int m) { return l * (l + 1) / 2 + m; }
    int L_;
    std::vector<double> p_, dp_;
};

// Real orthonormal spherical harmonics up to degree L at (theta, phi), index l*l + l + m.
// Outputs have (L+1)^2 entries; derivative arrays may be null.
void real_spherical_harmonics(int L, double theta, double phi, double* val, double* dtheta, double* dphi);

inline int real_sh_count(int L) { return (L + 1) * (L + 1); }

// Complex Y_lm with the Condon-Shortley phase; zero when |m| > l.
cplx spherical_harmonic(int l, int m, double theta, double phi);

// Two-component spin-angular function Omega_{kappa, mj}; kappa != 0, mj half-integer with |mj| <= |kappa| - 1/2.
// Orbital degree l = kappa for kappa > 0, -kappa - 1 for kappa < 0.
Spinor2 spinor_harmonic(int kappa, double mj, double theta, double phi);

}  // namespace shellspectra
