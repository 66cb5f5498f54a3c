#pragma once

#include <vector>

#include <Eigen/Dense>

#include "shellspectra/spinor_algebra.hpp"
#include "shellspectra/surface_geometry.hpp"

namespace shellspectra {

// Spectral parameter and mass of the free resolvent kernel.
struct KernelParams {
    cplx lambda{0.0, 0.0};
    double m = 1.0;
    // sqrt(lambda^2 - m^2) on the branch with positive imaginary part;
    // i sqrt(m^2 - lambda^2) inside the gap.
    cplx k() const;
};

// (lambda + m beta + (1 - i k |x|) i alpha.x / |x|^2) e^{i k |x|} / (4 pi |x|); x = 0 throws.
SpinorMatrix green_kernel(const KernelParams& p, const Vec3& x);

// Helmholtz-type single layer kernel e^{i k |x|} / (4 pi |x|).
cplx single_layer_kernel(const KernelParams& p, const Vec3& x);

// Per-node geometric data for the singular parts of the kernel:
//   single[i] = int dS(y) / (4 pi |x_i - y|)            - sum_{j != i} w_j / (4 pi r_ij)
//   vec[i]    = pv int (x_i - y) dS(y) / (4 pi |x_i - y|^3) - sum_{j != i} w_j (x_i - x_j) / (4 pi r_ij^3)
// The exact integrals are also kept for inspection.
// The odd kernel applied to phi(y) - phi(x_i) is O(1/r), which leaves an O(h) error in the
// punctured sum; it is removed with the first moment
//   tensor[i] = int (x_i - y)(y - x_i)^T dS / (4 pi r^3) - (same punctured sum)
// contracted with a local least-squares surface gradient, grad phi(x_i) = sum_j gradient[i][j].second phi_j.
struct SurfaceMoments {
    std::vector<double> single_exact, single;
    std::vector<Vec3> vec_exact, vec;
    std::vector<Eigen::Matrix3d> tensor;
    std::vector<std::vector<std::pair<int, Vec3>>> gradient;
};

SurfaceMoments surface_moments(const SurfaceGrid& grid);

// Nystrom matrix of C_lambda, 4N x 4N, index node*4 + component.
struct BSMatrix {
    Eigen::MatrixXcd C;
    KernelParams params;
    int nodes = 0;
};

BSMatrix assemble_c_lambda(const SurfaceGrid& grid, const KernelParams& p);
BSMatrix assemble_c_lambda(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p);

// Same discretisation for the scalar single layer; used by the anticommutator check.
Eigen::MatrixXcd assemble_single_layer(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p);

// Densities on grid nodes, stacked as node*4 + component.
Eigen::VectorXcd stack_density(const std::vector<Spinor>& density);

struct PotentialValue {
    Spinor value;
    bool near_surface = false;  // closer than two mesh widths: plain quadrature is inaccurate
};

double mesh_width(const SurfaceGrid& grid);

// Phi_lambda phi(x) by plain quadrature over the grid.
PotentialValue phi_lambda_apply(const SurfaceGrid& grid, const KernelParams& p, const std::vector<Spinor>& density,
                                const Vec3& x);

// Smallest singular value of I + tau beta C_lambda.
double sigma_min_dense(const SurfaceGrid& grid, const SurfaceMoments& mom, double m, double tau, double lambda);

// Surfaces of revolution on the standard grid: C_lambda is block diagonal in the
// azimuthal Fourier modes of the co-rotating spinor frame (half-integer j_z).
// Returns the smallest singular value of each block, j_z = p + 1/2, p = 0..n-1.
bool supports_block_path(const SurfaceGrid& grid);
std::vector<double> sigma_min_blocks(const SurfaceGrid& grid, const SurfaceMoments& mom, double m, double tau,
                                     double lambda);

struct BSScan {
    std::vector<double> lambda;
    std::vector<double> sigma_min;                 // over the whole matrix
    std::vector<std::vector<double>> block_sigma;  // per scan point, empty on the dense path
    std::vector<double> candidates;                // refined local minima below the threshold
    std::vector<double> candidate_sigma;
    bool block_path = false;
    double threshold = 0.0;
};

// Scans lambda over [lo, hi] with `steps` points, refines local minima of sigma_min
// (per Fourier block when available) by golden-section search and keeps those below threshold.
BSScan bs_search(const SurfaceGrid& grid, double m, double tau, double lo, double hi, int steps,
                 double threshold = 0.05);

}  // namespace shellspectra
