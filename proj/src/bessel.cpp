#include "shellspectra/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "shellspectra/errors.hpp"

namespace shellspectra {

namespace {

constexpr double kBig = 1e280;
const double kLogBig = std::log(kBig);

void check_domain(int l, double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x) || x > 1e6 || l < 0 || l > 100000)
        throw InvalidArgument(std::string(who) + ": argument outside 0 < x <= 1e6, 0 <= l <= 100000");
}

// exp(-x) i_0(x)
double i0_scaled(double x) { return -std::expm1(-2.0 * x) / (2.0 * x); }

// Terminating expansion, usable once x dominates l^2:
// 2x e^{-x} i_l(x) = sum_k (-1)^k c_k (2x)^{-k} - (-1)^l e^{-2x} sum_k c_k (2x)^{-k},
// c_k = (l+k)! / (k! (l-k)!).
double i_scaled_large_x(int l, double x) {
    double c = 1.0, s_alt = 0.0, s_pos = 0.0, p = 1.0;
    for (int k = 0; k <= l; ++k) {
        if (k > 0) {
            c *= double(l + k) * double(l - k + 1) / double(k);
            p /= 2.0 * x;
        }
        const double t = c * p;
        s_pos += t;
        s_alt += (k % 2 ? -t : t);
    }
    const double tail = (l % 2 ? -1.0 : 1.0) * std::exp(-2.0 * x) * s_pos;
    return (s_alt - tail) / (2.0 * x);
}

bool use_expansion(int l, double x) { return x > 20.0 + double(l) * double(l); }

}  // namespace

double ScaledValue::log_abs() const { return std::log(std::abs(value)) + log_scale; }

double bessel_i_ratio(int l, double x) {
    check_domain(l, x, "bessel_i_ratio");
    if (use_expansion(l + 1, x)) return i_scaled_large_x(l + 1, x) / i_scaled_large_x(l, x);
    // 1/r = b_0 + 1/(b_1 + 1/(b_2 + ...)), b_j = (2l + 3 + 2j)/x, modified Lentz
    const double tiny = 1e-300;
    double f = (2.0 * l + 3.0) / x;
    double C = f, D = 0.0;
    for (int j = 1; j < 10000000; ++j) {
        const double b = (2.0 * l + 3.0 + 2.0 * j) / x;
        D = b + D;
        if (std::abs(D) < tiny) D = tiny;
        D = 1.0 / D;
        C = b + 1.0 / C;
        if (std::abs(C) < tiny) C = tiny;
        const double delta = C * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return 1.0 / f;
    }
    throw NumericalFailure("bessel_i_ratio: continued fraction did not converge");
}

double bessel_k_ratio(int l, double x) {
    check_domain(l, x, "bessel_k_ratio");
    // t_j = k_j / k_{j-1}; t_1 = 1 + 1/x, t_{j+1} = 1/t_j + (2j + 1)/x
    double t = 1.0 + 1.0 / x;
    for (int j = 1; j <= l; ++j) t = 1.0 / t + (2.0 * j + 1.0) / x;
    return t;
}

double bessel_i_order_ratio(int l2, int l1, double x) {
    if (l2 == l1) return 1.0;
    if (l2 == l1 + 1) return bessel_i_ratio(l1, x);
    if (l2 == l1 - 1) return 1.0 / bessel_i_ratio(l2, x);
    throw InvalidArgument("bessel_i_order_ratio: orders must be adjacent");
}

double bessel_k_order_ratio(int l2, int l1, double x) {
    if (l2 == l1) return 1.0;
    if (l2 == l1 + 1) return bessel_k_ratio(l1, x);
    if (l2 == l1 - 1) return 1.0 / bessel_k_ratio(l2, x);
    throw InvalidArgument("bessel_k_order_ratio: orders must be adjacent");
}

ScaledValue bessel_i_scaled(int l, double x) {
    check_domain(l, x, "bessel_i_scaled");
    ScaledValue out;
    out.log_scale = x;
    if (use_expansion(l, x)) {
        out.value = i_scaled_large_x(l, x);
        return out;
    }
    // i_l = i_0 prod_{j=1..l} r_j with r_j = i_j / i_{j-1}, obtained downward from r_l
    double r = l > 0 ? bessel_i_ratio(l - 1, x) : 0.0;
    double p = i0_scaled(x);
    for (int j = l; j >= 1; --j) {
        p *= r;
        if (p < 1.0 / kBig) {
            p *= kBig;
            out.log_scale -= kLogBig;
        }
        r = 1.0 / ((2.0 * j - 1.0) / x + r);  // r_{j-1}
    }
    out.value = p;
    return out;
}

ScaledValue bessel_k_scaled(int l, double x) {
    check_domain(l, x, "bessel_k_scaled");
    ScaledValue out;
    out.log_scale = -x;
    const double k0 = std::numbers::pi / (2.0 * x);
    double km = k0, k = k0 * (1.0 + 1.0 / x);
    if (l == 0) {
        out.value = k0;
        return out;
    }
    for (int j = 1; j < l; ++j) {
        const double kn = km + (2.0 * j + 1.0) / x * k;
        km = k;
        k = kn;
        if (k > kBig) {
            k /= kBig;
            km /= kBig;
            out.log_scale += kLogBig;
        }
    }
    out.value = k;
    return out;
}

}  // namespace shellspectra
