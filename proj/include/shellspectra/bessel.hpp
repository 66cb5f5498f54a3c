#pragma once

namespace shellspectra {

// f(x) = value * exp(log_scale). For i_l the natural log_scale is x, for k_l it is -x;
// it only departs from that when value would leave the double range.
struct ScaledValue {
    double value = 0.0;
    double log_scale = 0.0;
    double log_abs() const;
};

// Modified spherical Bessel functions i_l(x) = sqrt(pi/(2x)) I_{l+1/2}(x) and
// k_l(x) = sqrt(pi/(2x)) K_{l+1/2}(x), so k_0(x) = (pi/2) e^{-x}/x.
// Domain: 0 < x <= 1e6, 0 <= l <= 100000; anything else throws InvalidArgument.
ScaledValue bessel_i_scaled(int l, double x);
ScaledValue bessel_k_scaled(int l, double x);

// i_{l+1}(x)/i_l(x) and k_{l+1}(x)/k_l(x), free of any exponential factor.
double bessel_i_ratio(int l, double x);
double bessel_k_ratio(int l, double x);

// Ratios of neighbouring orders in either direction: f_{l2}(x)/f_{l1}(x) with |l2 - l1| <= 1.
double bessel_i_order_ratio(int l2, int l1, double x);
double bessel_k_order_ratio(int l2, int l1, double x);

}  // namespace shellspectra
