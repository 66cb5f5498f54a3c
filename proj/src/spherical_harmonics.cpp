#include "shellspectra/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>

#include "shellspectra/errors.hpp"

namespace shellspectra {

LegendreTable::LegendreTable(int L, double theta) : L_(L) {
    if (L < 0) throw InvalidArgument("LegendreTable: negative degree");
    const int n = (L + 1) * (L + 2) / 2;
    p_.assign(n, 0.0);
    dp_.assign(n, 0.0);
    const double x = std::cos(theta), s = std::sin(theta);

    double pmm = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    for (int m = 0; m <= L; ++m) {
        if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
        p_[idx(m, m)] = pmm;
        if (m + 1 <= L) p_[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
        for (int l = m + 2; l <= L; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt((4.0 * (l - 1.0) * (l - 1.0) - 1.0) / ((l - 1.0) * (l - 1.0) - double(m) * m));
            p_[idx(l, m)] = a * (x * p_[idx(l - 1, m)] - p_[idx(l - 2, m)] / b);
        }
    }
    // d/dtheta through neighbouring orders, regular at the poles
    for (int l = 0; l <= L; ++l)
        for (int m = 0; m <= l; ++m) {
            const double up = m + 1 <= l ? std::sqrt((l - m) * (l + m + 1.0)) * p_[idx(l, m + 1)] : 0.0;
            if (m == 0) {
                dp_[idx(l, 0)] = -up;
            } else {
                const double down = std::sqrt((l + m) * (l - m + 1.0)) * p_[idx(l, m - 1)];
                dp_[idx(l, m)] = 0.5 * (down - up);
            }
        }
}

void real_spherical_harmonics(int L, double theta, double phi, double* val, double* dtheta, double* dphi) {
    const LegendreTable P(L, theta);
    const double r2 = std::sqrt(2.0);
    for (int l = 0; l <= L; ++l) {
        const int base = l * l + l;
        val[base] = P.value(l, 0);
        if (dtheta) dtheta[base] = P.dtheta(l, 0);
        if (dphi) dphi[base] = 0.0;
        for (int m = 1; m <= l; ++m) {
            const double c = std::cos(m * phi), s = std::sin(m * phi);
            const double p = r2 * P.value(l, m), dp = r2 * P.dtheta(l, m);
            val[base + m] = p * c;
            val[base - m] = p * s;
            if (dtheta) {
                dtheta[base + m] = dp * c;
                dtheta[base - m] = dp * s;
            }
            if (dphi) {
                dphi[base + m] = -m * p * s;
                dphi[base - m] = m * p * c;
            }
        }
    }
}

cplx spherical_harmonic(int l, int m, double theta, double phi) {
    if (l < 0 || std::abs(m) > l) return 0.0;
    const LegendreTable P(l, theta);
    const int am = std::abs(m);
    const double sign = (am % 2) ? -1.0 : 1.0;
    const cplx y = sign * P.value(l, am) * std::polar(1.0, am * phi);
    return m >= 0 ? y : sign * std::conj(y);
}

Spinor2 spinor_harmonic(int kappa, double mj, double theta, double phi) {
    if (kappa == 0) throw InvalidArgument("spinor_harmonic: kappa must be nonzero");
    const double j = std::abs(kappa) - 0.5;
    if (std::abs(mj) > j + 1e-12 || std::abs(std::fmod(std::abs(mj), 1.0) - 0.5) > 1e-12)
        throw InvalidArgument("spinor_harmonic: invalid mj");
    const int l = kappa > 0 ? kappa : -kappa - 1;
    const int m_lo = static_cast<int>(std::lround(mj - 0.5));
    const int m_hi = m_lo + 1;
    const double d = 2.0 * l + 1.0;
    Spinor2 o;
    if (kappa < 0) {
        o(0) = std::sqrt((l + mj + 0.5) / d) * spherical_harmonic(l, m_lo, theta, phi);
        o(1) = std::sqrt((l - mj + 0.5) / d) * spherical_harmonic(l, m_hi, theta, phi);
    } else {
        o(0) = -std::sqrt((l - mj + 0.5) / d) * spherical_harmonic(l, m_lo, theta, phi);
        o(1) = std::sqrt((l + mj + 0.5) / d) * spherical_harmonic(l, m_hi, theta, phi);
    }
    return o;
}

}  // namespace shellspectra
