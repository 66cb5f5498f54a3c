#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shellspectra/surface_geometry.hpp"

namespace shellspectra {

// Scalar global basis sampled on a grid: real spherical harmonics of degree
// <= order/2 on spheres and ellipsoids, real Fourier products with
// |p|, |q| <= order/4 on the torus. Rows are grid nodes.
struct ScalarBasis {
    std::string name;
    int order = 0;
    Eigen::MatrixXd val, d1, d2;
    int size() const { return static_cast<int>(val.cols()); }
};

ScalarBasis scalar_basis(const SurfaceGrid& grid, int order);

// A grid fine enough for `order`: 2*order + 2 nodes in each periodic
// direction, order + 2 Gauss nodes across the polar chart.
SurfaceGrid effective_grid(const ParamSurface& surface, int order);

enum class OperatorKind { bochner, upsilon, intermediate };

// Hermitian pencil (stiffness, mass) on the basis phi_p (x) e_c, index p*components + c.
struct GalerkinSystem {
    OperatorKind kind = OperatorKind::bochner;
    Eigen::MatrixXcd stiffness, mass;
    std::string basis;
    int order = 0;
    int scalar_size = 0;
    int components = 2;
    double theta = 0.0;  // connection strength (bochner/upsilon)
    double tau = 0.0;    // upsilon/intermediate
};

struct EigenGroup {
    double value = 0.0;  // mean of the grouped eigenvalues
    int multiplicity = 0;
    int first_index = 0;
};

struct HermitianSpectrum {
    std::vector<double> eigenvalues;  // ascending, repeated by multiplicity
    std::vector<EigenGroup> groups;
    double grouping_tolerance = 1e-7;
    int order = 0;
    int basis_size = 0;
};

inline constexpr double kGroupingTolerance = 1e-7;
inline constexpr double kMassConditionLimit = 1e12;

// Lambda(theta) = (d + i theta omega)^*(d + i theta omega) on C^2-valued functions.
GalerkinSystem assemble_bochner(const SurfaceGrid& grid, double theta, int order);

// Lambda(4/(tau^2+4)) - ((tau^2-4)/(tau^2+4))^2 M^2 + (tau^4+16)/(tau^2+4)^2 K
GalerkinSystem assemble_upsilon(const SurfaceGrid& grid, double tau, int order);

// Form |grad v+|^2 + |grad v-|^2 + (K - M^2)(|v+|^2 + |v-|^2) on C^4-valued v+,
// with v- = R^-_tau v+ eliminated; the mass carries both traces.
GalerkinSystem assemble_intermediate(const SurfaceGrid& grid, double tau, int order);

double upsilon_connection(double tau);  // 4/(tau^2+4)
double upsilon_potential(const GeomSample& s, double tau);

// Connection Laplacian with an arbitrary (possibly complex) scalar basis and a
// per-node Hermitian connection pair; the general path behind the gauge test.
struct ConnectionData {
    Eigen::MatrixXcd val, d1, d2;             // nodes x basis
    std::vector<PauliMatrix> a1, a2;          // connection one-form per node
    std::vector<double> potential;            // scalar potential per node
};
GalerkinSystem assemble_connection_laplacian(const SurfaceGrid& grid, const ConnectionData& data, int order);

// Sum g^{jk} A_j A_k with A_j = gamma5 alpha.(nu x d_j nu).
SpinorMatrix intermediate_w_potential(const GeomSample& s);

// c^H A c for a coefficient vector.
double form_value(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& c);

// Generalized eigenvalues of the pencil; count <= 0 means all.
HermitianSpectrum solve_pencil(const GalerkinSystem& sys, int count);
HermitianSpectrum solve_pencil(const Eigen::MatrixXcd& stiffness, const Eigen::MatrixXcd& mass, int count);

std::vector<EigenGroup> group_eigenvalues(const std::vector<double>& values, double tol = kGroupingTolerance);

// max over grid nodes of || F_12 - 2 theta (1 - theta) K (sigma.nu) |t1 x t2| ||,
// F_12 = theta (d1 w2 - d2 w1) + i theta^2 [w1, w2], derivatives by
// Richardson-extrapolated central differences of the analytic omega.
double connection_curvature_check(const SurfaceGrid& grid, double theta);

}  // namespace shellspectra
