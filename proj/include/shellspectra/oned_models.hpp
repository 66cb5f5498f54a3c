#pragma once

#include <optional>

namespace shellspectra {

// mu = 4|tau|/(tau^2 + 4); rejects tau = 0.
double mu_of_tau(double tau);

// One-dimensional fiber problem on (-delta, delta) with the shell at t = 0.
// Without robin_c the outer ends carry Dirichlet conditions, otherwise
// v'(+-delta) = +-c v(+-delta).
struct OneDProblem {
    double m = 1.0;
    double tau = -1.0;
    double delta = 1.0;
    std::optional<double> robin_c;

    void validate() const;
};

enum class BoundaryKind { dirichlet, robin };

struct GroundMode {
    BoundaryKind kind = BoundaryKind::dirichlet;
    double k = 0.0;       // decay rate
    double E1 = 0.0;      // = -k^2
    double theta = 0.0;   // matching constant of psi(t) = theta e^{-kt} + e^{kt}; may be +-inf for large k*delta
    double delta = 0.0;
    double c = 0.0;
    int multiplicity = 4;

    // Profile on [0, delta], rescaled by 1/theta so that it stays finite:
    // psi(t) = e^{-kt} + rho e^{k(t - 2 delta)}.
    double rho = 0.0;
    double profile(double t) const;
    double profile_derivative(double t) const;
};

// k*delta solves x coth x = mu m delta; NoBoundState when mu m delta <= 1.
GroundMode solve_dirichlet_ground(const OneDProblem& p);

// k*delta solves x (x tanh x - eps)/(x - eps tanh x) = mu m delta, eps = c delta < 1.
GroundMode solve_robin_ground(const OneDProblem& p);

// (E1 + (mu m)^2)/(mu m)^2 evaluated through the secular equation at the
// computed root, so that exponentially small values keep full relative precision.
double relative_energy_defect(const GroundMode& g);

// Scalar transcendental functions, exposed for tests and diagnostics.
double x_coth_x(double x);
double robin_secular(double x, double eps);      // F_eps
double robin_gap_function(double x, double eps); // G_eps on (0, pi/4)

struct GapBound {
    double bound = 0.0;                   // pi^2/(16 delta^2)
    bool holds = true;                    // no root of G_eps(x) = mu m delta on (0, pi/4)
    std::optional<double> offending_root; // x = k delta if one was found
    double zero_exclusion = 0.0;          // c/(1 - c delta) + 4 m |tau|/(tau^2 + 4)
    bool zero_excluded = true;
};

GapBound robin_positive_spectrum_gap(const OneDProblem& p);

}  // namespace shellspectra
