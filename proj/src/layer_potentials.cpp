#include "shellspectra/layer_potentials.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <numbers>

#include "shellspectra/errors.hpp"
#include "shellspectra/parallel.hpp"
#include "shellspectra/quadrature.hpp"

namespace shellspectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx I{0.0, 1.0};

double wrap_pi(double a) { return std::remainder(a, 2.0 * kPi); }

// C-infinity step: 1 for rho <= a, 0 for rho >= b
double cutoff(double rho, double a, double b) {
    if (rho <= a) return 1.0;
    if (rho >= b) return 0.0;
    const double t = (rho - a) / (b - a);
    const double f0 = std::exp(-1.0 / (1.0 - t)), f1 = std::exp(-1.0 / t);
    return f0 / (f0 + f1);
}

constexpr double kPatchInner = 0.2, kPatchOuter = 0.6;

// Azimuthal layout of a grid on a surface of revolution.
struct AxisLayout {
    bool ok = false;
    int rings = 0, cols = 0;
    bool azimuth_first = false;  // torus: azimuth is s1
    double phase = 0.0;          // azimuth of column 0
    int node(int ring, int col) const { return azimuth_first ? col * rings + ring : ring * cols + col; }
};

AxisLayout axis_layout(const SurfaceGrid& grid) {
    AxisLayout L;
    if (!grid.surface.axisymmetric()) return L;
    const bool torus = grid.surface.kind() == SurfaceKind::torus;
    const Rule1D& az = torus ? grid.rule1 : grid.rule2;
    const int n = torus ? grid.n1 : grid.n2;
    if (static_cast<int>(az.x.size()) != n || n < 2) return L;
    for (int k = 1; k < n; ++k)
        if (std::abs(az.x[k] - az.x[0] - 2.0 * kPi * k / n) > 1e-12) return L;
    L.ok = true;
    L.azimuth_first = torus;
    L.cols = n;
    L.rings = torus ? grid.n2 : grid.n1;
    L.phase = az.x[0];
    return L;
}

// Parameters of node i in a chart where a disc of radius kPatchOuter stays regular.
std::pair<int, std::array<double, 2>> patch_chart(const SurfaceGrid& grid, std::size_t i) {
    const GridNode& nd = grid.nodes[i];
    if (grid.surface.kind() == SurfaceKind::torus) return {0, {nd.s1, nd.s2}};
    if (std::sin(nd.s1) >= 0.7) return {0, {nd.s1, nd.s2}};
    return {1, grid.surface.locate(1, nd.geom.point)};
}

struct MomentPair {
    double single = 0.0;
    Vec3 vec = Vec3::Zero();
    Eigen::Matrix3d tensor = Eigen::Matrix3d::Zero();

    void add(double w, const Vec3& d) {
        const double r = d.norm();
        single += w / r;
        vec += w * d / (r * r * r);
        tensor -= w * d * d.transpose() / (r * r * r);
    }
};

MomentPair exact_moments(const SurfaceGrid& grid, const SurfaceGrid& far, std::size_t i) {
    const ParamSurface& S = grid.surface;
    const Vec3 x = grid.nodes[i].geom.point;
    const auto [chart, s] = patch_chart(grid, i);
    const bool p1 = S.chart(chart).periodic1;
    MomentPair out;
    // local polar patch around the node in parameter space
    const Rule1D rr = gauss_legendre(28, 0.0, kPatchOuter);
    const Rule1D ps = periodic_trapezoid(36, 0.0, 2.0 * kPi, 0.5);
    for (std::size_t a = 0; a < rr.x.size(); ++a) {
        const double rho = rr.x[a];
        const double chi = cutoff(rho, kPatchInner, kPatchOuter);
        if (chi == 0.0) continue;
        for (std::size_t b = 0; b < ps.x.size(); ++b) {
            const ChartJet j = S.jet(chart, s[0] + rho * std::cos(ps.x[b]), s[1] + rho * std::sin(ps.x[b]));
            const double J = j.r1.cross(j.r2).norm();
            out.add(rr.w[a] * ps.w[b] * rho * J * chi / (4.0 * kPi), x - j.r);
        }
    }
    // the rest of the surface, where the integrand is smooth
    for (const GridNode& fn : far.nodes) {
        const auto t = S.locate(chart, fn.geom.point);
        const double d1 = p1 ? wrap_pi(t[0] - s[0]) : t[0] - s[0];
        const double rho = std::hypot(d1, wrap_pi(t[1] - s[1]));
        const double w = fn.weight * (1.0 - cutoff(rho, kPatchInner, kPatchOuter)) / (4.0 * kPi);
        if (w == 0.0) continue;
        out.add(w, x - fn.geom.point);
    }
    return out;
}

// Least-squares fit of a quadratic in tangent-plane coordinates; returns the weights of
// the surface gradient at node i. Neighbours are taken per angular sector so that rings
// packed tightly near a pole do not leave the fit blind across them.
std::vector<std::pair<int, Vec3>> gradient_stencil(const SurfaceGrid& grid, std::size_t i) {
    constexpr int kSectors = 8, kPerSector = 2;
    const Vec3 x = grid.nodes[i].geom.point;
    const Vec3 nu = grid.nodes[i].geom.nu.vec();
    Vec3 e1 = grid.nodes[i].geom.t1 - grid.nodes[i].geom.t1.dot(nu) * nu;
    e1.normalize();
    const Vec3 e2 = nu.cross(e1);
    // sectors are symmetric under v -> -v, which keeps mirror-image stencils mirror images
    std::vector<std::vector<std::pair<double, int>>> sector(kSectors);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (j == i) continue;
        const Vec3 d = grid.nodes[j].geom.point - x;
        // a point straight along the normal has no usable direction
        if ((d - d.dot(nu) * nu).norm() < 1e-6 * d.norm()) continue;
        const double ang = std::atan2(d.dot(e2), d.dot(e1));
        const int s = (static_cast<int>(std::floor((ang + kPi / kSectors) / (2.0 * kPi / kSectors))) + kSectors) % kSectors;
        sector[s].emplace_back(d.norm(), int(j));
    }
    std::vector<std::pair<double, int>> pick{{0.0, int(i)}};
    for (auto& sec : sector) {
        std::sort(sec.begin(), sec.end());
        // take ties at the cut as a whole so the stencil respects grid symmetries
        std::size_t k = std::min<std::size_t>(kPerSector, sec.size());
        while (k < sec.size() && sec[k].first <= sec[k - 1].first * (1.0 + 1e-9)) ++k;
        pick.insert(pick.end(), sec.begin(), sec.begin() + k);
    }
    double h = 0.0;
    for (const auto& [d, j] : pick) h = std::max(h, d);
    const int n = static_cast<int>(pick.size());
    Eigen::MatrixXd A(n, 6);
    for (int r = 0; r < n; ++r) {
        const Vec3 d = (grid.nodes[pick[r].second].geom.point - x) / h;
        const double u = d.dot(e1), v = d.dot(e2);
        A.row(r) << 1.0, u, v, u * u, u * v, v * v;
    }
    // rows 1, 2 of the pseudo-inverse give d/du, d/dv (scaled by 1/h)
    const Eigen::MatrixXd P = A.completeOrthogonalDecomposition().pseudoInverse();
    std::vector<std::pair<int, Vec3>> out;
    for (int r = 0; r < n; ++r) out.emplace_back(pick[r].second, (P(1, r) * e1 + P(2, r) * e2) / h);
    return out;
}

Eigen::Matrix3d rotation_z(double phi) {
    return Eigen::AngleAxisd(phi, Vec3::UnitZ()).toRotationMatrix();
}

SpinorMatrix beta_block(const SpinorMatrix& M) { return beta() * M; }

}  // namespace

cplx KernelParams::k() const {
    cplx k = std::sqrt(lambda * lambda - cplx(m * m));
    if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
    return k;
}

cplx single_layer_kernel(const KernelParams& p, const Vec3& x) {
    const double r = x.norm();
    if (r == 0.0) throw InvalidArgument("single_layer_kernel: x = 0");
    return std::exp(I * p.k() * r) / (4.0 * kPi * r);
}

SpinorMatrix green_kernel(const KernelParams& p, const Vec3& x) {
    const double r = x.norm();
    if (r == 0.0) throw InvalidArgument("green_kernel: coincident points");
    const cplx k = p.k();
    const cplx e = std::exp(I * k * r) / (4.0 * kPi * r);
    return (p.lambda * identity4() + p.m * beta() + (1.0 - I * k * r) * I * alpha_dot(x) / (r * r)) * e;
}

SurfaceMoments surface_moments(const SurfaceGrid& grid) {
    const std::size_t N = grid.size();
    const bool torus = grid.surface.kind() == SurfaceKind::torus;
    const SurfaceGrid far = torus ? build_grid(grid.surface, 128, 128) : build_grid(grid.surface, 72, 144);
    SurfaceMoments mom;
    mom.single_exact.assign(N, 0.0);
    mom.vec_exact.assign(N, Vec3::Zero());
    mom.tensor.assign(N, Eigen::Matrix3d::Zero());
    mom.gradient.resize(N);

    const AxisLayout L = axis_layout(grid);
    if (L.ok) {
        // one column, then rotate
        std::vector<MomentPair> col(L.rings);
        parallel_for(L.rings, [&](std::size_t r) { col[r] = exact_moments(grid, far, L.node(int(r), 0)); });
        for (int r = 0; r < L.rings; ++r)
            for (int c = 0; c < L.cols; ++c) {
                const int n = L.node(r, c);
                const Eigen::Matrix3d Q = rotation_z(2.0 * kPi * c / L.cols);
                mom.single_exact[n] = col[r].single;
                mom.vec_exact[n] = Q * col[r].vec;
                mom.tensor[n] = Q * col[r].tensor * Q.transpose();
            }
    } else {
        std::vector<MomentPair> all(N);
        parallel_for(N, [&](std::size_t i) { all[i] = exact_moments(grid, far, i); });
        for (std::size_t i = 0; i < N; ++i) {
            mom.single_exact[i] = all[i].single;
            mom.vec_exact[i] = all[i].vec;
            mom.tensor[i] = all[i].tensor;
        }
    }
    mom.single = mom.single_exact;
    mom.vec = mom.vec_exact;
    parallel_for(N, [&](std::size_t i) {
        const Vec3 x = grid.nodes[i].geom.point;
        MomentPair disc;
        for (std::size_t j = 0; j < N; ++j)
            if (j != i) disc.add(grid.nodes[j].weight / (4.0 * kPi), x - grid.nodes[j].geom.point);
        mom.single[i] -= disc.single;
        mom.vec[i] -= disc.vec;
        mom.tensor[i] -= disc.tensor;
        mom.gradient[i] = gradient_stencil(grid, i);
    });
    return mom;
}

namespace {

SpinorMatrix diagonal_block(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p, std::size_t i) {
    const SpinorMatrix mass = p.lambda * identity4() + p.m * beta();
    const cplx self = grid.nodes[i].weight * I * p.k() / (4.0 * kPi) + mom.single[i];
    return self * mass + I * alpha_dot(mom.vec[i]);
}

void check_coincident(const Vec3& d) {
    if (d.norm() < 1e-14) throw NumericalFailure("assemble_c_lambda: coincident quadrature nodes");
}

// Row i of the Nystrom matrix, one 4x4 block per source node.
std::vector<SpinorMatrix> matrix_row(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p,
                                     std::size_t i) {
    const std::size_t N = grid.size();
    std::vector<SpinorMatrix> row(N);
    const Vec3 x = grid.nodes[i].geom.point;
    for (std::size_t j = 0; j < N; ++j) {
        if (j == i) {
            row[j] = diagonal_block(grid, mom, p, i);
            continue;
        }
        const Vec3 d = x - grid.nodes[j].geom.point;
        check_coincident(d);
        row[j] = grid.nodes[j].weight * green_kernel(p, d);
    }
    for (const auto& [j, g] : mom.gradient[i]) row[j] += I * alpha_dot(mom.tensor[i] * g);
    return row;
}

}  // namespace

BSMatrix assemble_c_lambda(const SurfaceGrid& grid, const KernelParams& p) {
    return assemble_c_lambda(grid, surface_moments(grid), p);
}

BSMatrix assemble_c_lambda(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p) {
    const std::size_t N = grid.size();
    if (mom.single.size() != N) throw InvalidArgument("assemble_c_lambda: moments do not match the grid");
    BSMatrix out;
    out.params = p;
    out.nodes = static_cast<int>(N);
    out.C.resize(4 * N, 4 * N);
    parallel_for(N, [&](std::size_t i) {
        const std::vector<SpinorMatrix> row = matrix_row(grid, mom, p, i);
        for (std::size_t j = 0; j < N; ++j) out.C.block<4, 4>(4 * i, 4 * j) = row[j];
    });
    return out;
}

Eigen::MatrixXcd assemble_single_layer(const SurfaceGrid& grid, const SurfaceMoments& mom, const KernelParams& p) {
    const std::size_t N = grid.size();
    Eigen::MatrixXcd S(N, N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (i == j) {
                S(i, i) = grid.nodes[i].weight * I * p.k() / (4.0 * kPi) + mom.single[i];
            } else {
                S(i, j) = grid.nodes[j].weight *
                          single_layer_kernel(p, grid.nodes[i].geom.point - grid.nodes[j].geom.point);
            }
        }
    return S;
}

Eigen::VectorXcd stack_density(const std::vector<Spinor>& density) {
    Eigen::VectorXcd v(4 * density.size());
    for (std::size_t i = 0; i < density.size(); ++i) v.segment<4>(4 * i) = density[i];
    return v;
}

double mesh_width(const SurfaceGrid& grid) {
    double w = 0.0;
    for (const auto& n : grid.nodes) w = std::max(w, n.weight);
    return std::sqrt(w);
}

PotentialValue phi_lambda_apply(const SurfaceGrid& grid, const KernelParams& p, const std::vector<Spinor>& density,
                                const Vec3& x) {
    if (density.size() != grid.size()) throw InvalidArgument("phi_lambda_apply: density size mismatch");
    PotentialValue out;
    out.value.setZero();
    double dmin = INFINITY;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const Vec3 d = x - grid.nodes[j].geom.point;
        dmin = std::min(dmin, d.norm());
        if (d.norm() == 0.0) {
            out.near_surface = true;
            continue;
        }
        out.value += grid.nodes[j].weight * green_kernel(p, d) * density[j];
    }
    if (dmin < 2.0 * mesh_width(grid)) out.near_surface = true;
    return out;
}

double sigma_min_dense(const SurfaceGrid& grid, const SurfaceMoments& mom, double m, double tau, double lambda) {
    const BSMatrix C = assemble_c_lambda(grid, mom, KernelParams{cplx(lambda, 0.0), m});
    const int N = C.nodes;
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(4 * N, 4 * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) A.block<4, 4>(4 * i, 4 * j) += tau * beta_block(C.C.block<4, 4>(4 * i, 4 * j));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues().minCoeff();
}

bool supports_block_path(const SurfaceGrid& grid) { return axis_layout(grid).ok; }

namespace {

// all blocks, or only block `only` (others left at +inf); only = -2 solves the lower half
// and mirrors it, blocks p and n-1-p having equal spectra
std::vector<double> block_sigmas(const SurfaceGrid& grid, const SurfaceMoments& mom, double m, double tau,
                                 double lambda, int only) {
    const AxisLayout L = axis_layout(grid);
    if (!L.ok) throw InvalidArgument("sigma_min_blocks: grid is not an azimuthally uniform surface of revolution");
    const KernelParams p{cplx(lambda, 0.0), m};
    const int R = L.rings, n = L.cols, B = 4 * R;

    // T_d[i, i'] = C[(i, d), (i', 0)] in the co-rotating frame = C[(i, 0), (i', -d)] S(phi_d)^{-1}
    std::vector<Eigen::MatrixXcd> T(n, Eigen::MatrixXcd(B, B));
    parallel_for(R, [&](std::size_t i) {
        const std::vector<SpinorMatrix> row = matrix_row(grid, mom, p, L.node(int(i), 0));
        for (int d = 0; d < n; ++d) {
            const double ph = 2.0 * kPi * d / n;
            const cplx up = std::polar(1.0, 0.5 * ph), dn = std::polar(1.0, -0.5 * ph);
            const cplx rot[4] = {up, dn, up, dn};
            for (int i2 = 0; i2 < R; ++i2) {
                SpinorMatrix blk = row[L.node(i2, (n - d) % n)];
                for (int c = 0; c < 4; ++c) blk.col(c) *= rot[c];
                T[d].block<4, 4>(4 * i, 4 * i2) = blk;
            }
        }
    });
    std::vector<double> out(n, INFINITY);
    parallel_for(n, [&](std::size_t pp) {
        if (only >= 0 && static_cast<int>(pp) != only) return;
        if (only == -2 && 2 * pp >= static_cast<std::size_t>(n)) return;
        const double w = 2.0 * kPi * (pp + 0.5) / n;
        Eigen::MatrixXcd Chat = Eigen::MatrixXcd::Zero(B, B);
        for (int d = 0; d < n; ++d) Chat += std::polar(1.0, -w * d) * T[d];
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(B, B);
        for (int i = 0; i < R; ++i)
            for (int i2 = 0; i2 < R; ++i2) A.block<4, 4>(4 * i, 4 * i2) += tau * beta() * Chat.block<4, 4>(4 * i, 4 * i2);
        // smallest eigenvalue of A^H A: resolves sigma down to ~1e-7 relative, ample for the scan
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
        out[pp] = std::sqrt(std::max(0.0, es.eigenvalues()(0)));
    });
    if (only == -2)
        for (int pp = 0; 2 * pp < n; ++pp) out[n - 1 - pp] = out[pp];
    return out;
}

}  // namespace

std::vector<double> sigma_min_blocks(const SurfaceGrid& grid, const SurfaceMoments& mom, double m, double tau,
                                     double lambda) {
    return block_sigmas(grid, mom, m, tau, lambda, -1);
}

namespace {

// golden-section minimisation of f on [a, b]
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

BSScan bs_search(const SurfaceGrid& grid, double m, double tau, double lo, double hi, int steps, double threshold) {
    if (tau == 0.0) throw InvalidArgument("bs_search: tau must be nonzero");
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
    if (!(lo < hi) || !(std::abs(lo) < std::abs(m)) || !(std::abs(hi) < std::abs(m)))
        throw InvalidArgument("bs_search: interval must lie inside (-|m|, |m|)");
    if (steps < 3) throw InvalidArgument("bs_search: need at least 3 scan points");
    const SurfaceMoments mom = surface_moments(grid);
    BSScan scan;
    scan.threshold = threshold;
    scan.block_path = supports_block_path(grid);
    scan.lambda.resize(steps);
    scan.sigma_min.resize(steps);
    scan.block_sigma.resize(steps);
    for (int s = 0; s < steps; ++s) scan.lambda[s] = lo + (hi - lo) * s / (steps - 1.0);

    auto series_at = [&](double l) -> std::vector<double> {
        if (scan.block_path) return block_sigmas(grid, mom, m, tau, l, -2);
        return {sigma_min_dense(grid, mom, m, tau, l)};
    };
    for (int s = 0; s < steps; ++s) {
        scan.block_sigma[s] = series_at(scan.lambda[s]);
        scan.sigma_min[s] = *std::min_element(scan.block_sigma[s].begin(), scan.block_sigma[s].end());
    }
    const std::size_t nseries = scan.block_sigma[0].size();
    // per-series local minima; the pair p, n-1-p is mirror symmetric so half suffices on the block path
    const std::size_t used = scan.block_path ? (nseries + 1) / 2 : nseries;
    std::vector<std::pair<double, double>> found;
    for (std::size_t q = 0; q < used; ++q) {
        auto f = [&](double l) {
            return scan.block_path ? block_sigmas(grid, mom, m, tau, l, static_cast<int>(q))[q]
                                   : sigma_min_dense(grid, mom, m, tau, l);
        };
        for (int s = 1; s + 1 < steps; ++s) {
            const double a = scan.block_sigma[s - 1][q], b = scan.block_sigma[s][q], c = scan.block_sigma[s + 1][q];
            if (!(b < a && b <= c)) continue;
            if (b > 4.0 * threshold) continue;
            const auto [lm, sm] = golden_min(f, scan.lambda[s - 1], scan.lambda[s + 1], 1e-6 * std::abs(m));
            if (sm < threshold) found.emplace_back(lm, sm);
        }
    }
    std::sort(found.begin(), found.end());
    for (const auto& [l, s] : found) {
        if (!scan.candidates.empty() && std::abs(l - scan.candidates.back()) < 1e-3 * std::abs(m)) {
            if (s < scan.candidate_sigma.back()) {
                scan.candidates.back() = l;
                scan.candidate_sigma.back() = s;
            }
            continue;
        }
        scan.candidates.push_back(l);
        scan.candidate_sigma.push_back(s);
    }
    return scan;
}

}  // namespace shellspectra
