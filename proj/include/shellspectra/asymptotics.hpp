#pragma once

#include <string>
#include <vector>

#include "shellspectra/effective_operator.hpp"
#include "shellspectra/surface_geometry.hpp"

namespace shellspectra {

// |tau^2-4|/(tau^2+4) m + (tau^2+4)/|tau^2-4| E/(2m)
double two_term_prediction(double m, double tau, double e_eff);

// 16/pi tau^2/(tau^2+4)^2 |Sigma| m^2
double weyl_prediction(double m, double tau, double area);

// 4 log m / (mu m)
double default_delta(double m, double tau);

// sup |K - M^2| over the nodes of a grid
double curvature_offset(const SurfaceGrid& grid);

struct EnvelopeFit {
    double m = 0.0, delta = 0.0;
    double eps = 0.0;  // delta + m^2 exp(-2 mu m delta)
    double b = 0.0, c = 0.0;
    int checked = 0;
    int violations = 0;
    std::vector<double> deviation;  // E_j(A^2) - ((tau^2-4)/(tau^2+4))^2 m^2 - E_j
};

// Both lists ascending and repeated by multiplicity: a2 holds E_j(A^2), eff the doubled
// effective list E_j(Y + Y). The bracket is
//   |E_j(A^2) - q m^2 - E_j| <= b delta (E_j + c0) + c eps
// and the fit takes b = c as small as possible. A point with a nonpositive bracket scale
// and nonzero deviation cannot be fitted and counts as a violation.
EnvelopeFit envelope_check(const std::vector<double>& a2, const std::vector<double>& eff, double m, double tau,
                           double delta, double c0, int jmax);

struct OrderFit {
    double slope = 0.0;  // of log(|r| / log m) against log m
    int used = 0;
    bool order_two = false;  // slope <= -2 + 0.3
};

// Least-squares fit; residuals below `floor` are dropped. Needs >= 4 usable points spanning a factor of 8 in m.
OrderFit residual_order_fit(const std::vector<double>& m, const std::vector<double>& residual, double floor = 1e-13);

// Multiplicity-aware pairing: every cluster boundary of the effective list up to jmax must
// also be a cluster boundary of the shell list. Throws NumericalFailure otherwise.
void check_alignment(const std::vector<double>& shell, const std::vector<double>& effective, int jmax,
                     double tol = kGroupingTolerance);

// Copies each value twice: E(A^2) from mu, E(Y + Y) from E(Y).
std::vector<double> doubled(const std::vector<double>& v);

struct AsymptoticReport {
    double tau = 0.0, R = 1.0;
    int jmax = 0;
    int order = 0;
    std::vector<double> m;
    std::vector<double> effective;                // E_j(Y), j < jmax
    std::vector<std::vector<double>> mu;          // [m][j]
    std::vector<std::vector<double>> predicted;   // two-term values
    std::vector<std::vector<double>> residual;    // mu - predicted
    std::vector<std::vector<double>> scaled;      // residual m^2 / log m
    std::vector<int> weyl_count;
    std::vector<double> weyl_predicted, weyl_ratio;
    std::vector<EnvelopeFit> envelope;
    double c0 = 0.0;
    OrderFit fit;  // for j = 1
};

// Sphere of radius R: shooting spectrum per m, effective spectrum at Galerkin `order`.
AsymptoticReport sphere_asymptotics(double tau, double R, const std::vector<double>& m_values, int jmax = 10,
                                    int order = 16);

std::string report_json(const AsymptoticReport& r);

}  // namespace shellspectra
