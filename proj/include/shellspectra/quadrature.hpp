#pragma once

#include <vector>

namespace shellspectra {

struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// n-point Gauss-Legendre rule on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

// n-point trapezoidal rule for periodic integrands on [a, b), nodes at a + (i + shift) h.
Rule1D periodic_trapezoid(int n, double a, double b, double shift = 0.0);

// Composite Gauss-Legendre: [a, b] split into panels of width <= max_panel.
Rule1D composite_gauss_legendre(int n_per_panel, double a, double b, double max_panel);

}  // namespace shellspectra
