#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shellspectra/spinor_algebra.hpp"

namespace shellspectra {

// Dirac operator with a scalar shell of strength tau on the sphere |x| = R.
struct ShellConfig {
    double m = 10.0;    // mass; negative values allowed
    double tau = -1.0;
    double R = 1.0;
    std::optional<int> kappa_max;    // overrides the adaptive channel bound
    std::optional<int> lambda_grid;  // overrides the per-channel scan size
    void validate() const;
    int channel_bound() const;  // ceil(2 mu |m| R) + 8 unless overridden
    int scan_points() const;    // 4 ceil(|m| R) + 64 unless overridden
};

// u = ((G/r) Omega_kappa, i (F/r) Omega_{-kappa}); orbital degrees of the two components.
struct RadialChannel {
    int kappa = -1;
    int l_upper = 0;
    int l_lower = 1;
    int degeneracy() const { return 2 * std::abs(kappa); }
};
RadialChannel radial_channel(int kappa);

enum class ModeSolver { shooting, birman_schwinger };
std::string to_string(ModeSolver s);

struct ModeResult {
    double lambda = 0.0;
    int kappa = 0;
    int multiplicity = 0;
    double residual = 0.0;  // |det| relative to its term scale
    ModeSolver solver = ModeSolver::shooting;
};

// (tau/2) I -+ b with b = [[0,-1],[-1,0]], the action of B(nu) on (G, F).
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> radial_jump_matrices(double tau);
Eigen::Matrix2d radial_b();

// Values at r = R of the regular inner pair and the decaying outer pair,
// each normalised to G = 1: (1, a) and (1, -c).
struct MatchingData {
    double q = 0.0;
    double a = 0.0;  // inner F/G
    double c = 0.0;  // minus outer F/G
};
MatchingData matching_data(const ShellConfig& cfg, int kappa, double lambda);

// det [P^- w_in | P^+ w_out] = -tau - (1 + tau^2/4)(a + c) - tau a c.
double channel_determinant(const ShellConfig& cfg, int kappa, double lambda);
// Sum of the absolute values of the terms above; the natural scale of the determinant.
double channel_determinant_scale(const ShellConfig& cfg, int kappa, double lambda);

enum class RadialDirection { inward_from_infinity, outward_from_origin };

// Samples of (G, F) carrying the factor e^{-q r} (outward) or e^{+q r} (inward).
struct RadialSolution {
    RadialDirection direction = RadialDirection::outward_from_origin;
    double q = 0.0;
    std::vector<double> r, G, F;
};

// Adaptive Dormand-Prince integration of G' = -kappa G/r + (m + lambda) F,
// F' = kappa F/r + (m - lambda) G, started from the small-r series or from the
// exact outer solution at r = R + 40/q, ending at r = R.
RadialSolution integrate_radial_ode(const ShellConfig& cfg, int kappa, double lambda, RadialDirection dir,
                                    double rtol = 1e-12);

struct ShellSpectrum {
    ShellConfig config;
    std::vector<ModeResult> modes;  // ascending lambda
    int channels_scanned = 0;       // largest |kappa| scanned
    bool truncation_warning = false;
    int total_multiplicity() const;
};

ShellSpectrum full_spectrum(const ShellConfig& cfg);

// All roots of one channel, ascending.
std::vector<ModeResult> channel_modes(const ShellConfig& cfg, int kappa);

// Positive eigenvalues repeated by multiplicity, ascending.
std::vector<double> positive_eigenvalues(const ShellSpectrum& s);

struct FormCheck {
    double lhs = 0.0;  // lambda^2 ||u||^2
    double rhs = 0.0;
    double deviation = 0.0;        // |lhs - rhs| / |lhs|
    double refinement_gap = 0.0;   // relative change of rhs between the two resolutions
    double norm2 = 0.0;
    double gradient2 = 0.0;
    double jump_term = 0.0;        // (2m/tau) int |u+ - u-|^2
    double curvature_term = 0.0;   // int M (|u+|^2 - |u-|^2)
};

// Both sides of the quadratic-form identity, computed on a Cartesian
// reconstruction of the mode with finite-difference gradients.
FormCheck quadratic_form_check(const ShellConfig& cfg, const ModeResult& mode);

}  // namespace shellspectra
