#include "shellspectra/effective_operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "shellspectra/errors.hpp"
#include "shellspectra/parallel.hpp"
#include "shellspectra/spherical_harmonics.hpp"

namespace shellspectra {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr cplx I{0.0, 1.0};

// A^T diag(w) B
MatrixXd weighted_product(const MatrixXd& A, const VectorXd& w, const MatrixXd& B) {
    return (A.array().colwise() * w.array()).matrix().transpose() * B;
}

// out(p*nc + c, q*nc + d) += X(p, q) * coeff(c, d)
template <typename Coeff>
void add_kron(MatrixXcd& out, const MatrixXd& X, const Coeff& coeff, int nc) {
    const int n = static_cast<int>(X.rows());
    for (int c = 0; c < nc; ++c)
        for (int d = 0; d < nc; ++d) {
            const cplx k = coeff(c, d);
            if (k == cplx(0.0)) continue;
            for (int q = 0; q < n; ++q)
                for (int p = 0; p < n; ++p) out(p * nc + c, q * nc + d) += k * X(p, q);
        }
}

// out(p*nc + c, q*nc + d) += sum_n A(n,p) B(n,q) F[n](c,d) for real A, B.
template <int NC>
void add_gram(MatrixXcd& out, const MatrixXd& A, const MatrixXd& B,
              const std::vector<Eigen::Matrix<cplx, NC, NC>>& F) {
    const int nodes = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    VectorXd wr(nodes), wi(nodes);
    for (int c = 0; c < NC; ++c)
        for (int d = 0; d < NC; ++d) {
            double mr = 0.0, mi = 0.0;
            for (int k = 0; k < nodes; ++k) {
                wr(k) = F[k](c, d).real();
                wi(k) = F[k](c, d).imag();
                mr = std::max(mr, std::abs(wr(k)));
                mi = std::max(mi, std::abs(wi(k)));
            }
            if (mr > 0.0) {
                const MatrixXd X = weighted_product(A, wr, B);
                for (int q = 0; q < n; ++q)
                    for (int p = 0; p < n; ++p) out(p * NC + c, q * NC + d) += X(p, q);
            }
            if (mi > 0.0) {
                const MatrixXd X = weighted_product(A, wi, B);
                for (int q = 0; q < n; ++q)
                    for (int p = 0; p < n; ++p) out(p * NC + c, q * NC + d) += I * X(p, q);
            }
        }
}

// Complex basis: out(p*nc + c, q*nc + d) += sum_n conj(A(n,p)) B(n,q) F[n](c,d).
void add_gram_complex(MatrixXcd& out, const MatrixXcd& A, const MatrixXcd& B, const std::vector<PauliMatrix>& F) {
    const int nodes = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    Eigen::VectorXcd f(nodes);
    for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
            double mx = 0.0;
            for (int k = 0; k < nodes; ++k) {
                f(k) = F[k](c, d);
                mx = std::max(mx, std::abs(f(k)));
            }
            if (mx == 0.0) continue;
            const MatrixXcd X = A.adjoint() * (B.array().colwise() * f.array()).matrix();
            for (int q = 0; q < n; ++q)
                for (int p = 0; p < n; ++p) out(p * 2 + c, q * 2 + d) += X(p, q);
        }
}

void check_grid(const SurfaceGrid& grid, int order) {
    if (order < 4) throw InvalidArgument("Galerkin order must be at least 4");
    const bool torus = grid.surface.kind() == SurfaceKind::torus;
    const bool ok = torus ? (grid.n1 >= 2 * order && grid.n2 >= 2 * order)
                          : (grid.n2 >= 2 * order && grid.n1 >= order / 2 + 1);
    if (!ok) {
        std::ostringstream os;
        os << "grid " << grid.n1 << "x" << grid.n2 << " is too coarse for Galerkin order " << order;
        throw InvalidArgument(os.str());
    }
}

VectorXd node_weights(const SurfaceGrid& grid) {
    VectorXd w(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) w(k) = grid.nodes[k].weight;
    return w;
}

std::vector<double> fourier_1d(int P, double x, std::vector<double>* dx) {
    std::vector<double> v(2 * P + 1);
    if (dx) dx->assign(2 * P + 1, 0.0);
    v[0] = 1.0;
    for (int p = 1; p <= P; ++p) {
        v[2 * p - 1] = std::cos(p * x);
        v[2 * p] = std::sin(p * x);
        if (dx) {
            (*dx)[2 * p - 1] = -p * std::sin(p * x);
            (*dx)[2 * p] = p * std::cos(p * x);
        }
    }
    return v;
}

}  // namespace

ScalarBasis scalar_basis(const SurfaceGrid& grid, int order) {
    ScalarBasis b;
    b.order = order;
    const int nodes = static_cast<int>(grid.size());
    if (grid.surface.kind() == SurfaceKind::ellipsoid) {
        const int L = order / 2;
        const int n = real_sh_count(L);
        b.name = "real spherical harmonics, degree <= " + std::to_string(L);
        b.val.resize(nodes, n);
        b.d1.resize(nodes, n);
        b.d2.resize(nodes, n);
        std::vector<double> v(n), dt(n), dp(n);
        for (int k = 0; k < nodes; ++k) {
            real_spherical_harmonics(L, grid.nodes[k].s1, grid.nodes[k].s2, v.data(), dt.data(), dp.data());
            for (int p = 0; p < n; ++p) {
                b.val(k, p) = v[p];
                b.d1(k, p) = dt[p];
                b.d2(k, p) = dp[p];
            }
        }
    } else {
        const int P = order / 4;
        const int m1 = 2 * P + 1;
        const int n = m1 * m1;
        b.name = "real Fourier products, |p|,|q| <= " + std::to_string(P);
        b.val.resize(nodes, n);
        b.d1.resize(nodes, n);
        b.d2.resize(nodes, n);
        // normalization 1/(2 pi) for the constant mode is irrelevant: the mass matrix carries it
        std::vector<double> du, dv;
        for (int k = 0; k < nodes; ++k) {
            const std::vector<double> fu = fourier_1d(P, grid.nodes[k].s1, &du);
            const std::vector<double> fv = fourier_1d(P, grid.nodes[k].s2, &dv);
            for (int a = 0; a < m1; ++a)
                for (int c = 0; c < m1; ++c) {
                    const int p = a * m1 + c;
                    b.val(k, p) = fu[a] * fv[c];
                    b.d1(k, p) = du[a] * fv[c];
                    b.d2(k, p) = fu[a] * dv[c];
                }
        }
    }
    return b;
}

SurfaceGrid effective_grid(const ParamSurface& surface, int order) {
    if (surface.kind() == SurfaceKind::torus) return build_grid(surface, 2 * order + 2, 2 * order + 2);
    return build_grid(surface, order + 2, 2 * order + 2);
}

double upsilon_connection(double tau) { return 4.0 / (tau * tau + 4.0); }

double upsilon_potential(const GeomSample& s, double tau) {
    const double t2 = tau * tau;
    const double a = (t2 - 4.0) / (t2 + 4.0);
    const double b = (t2 * t2 + 16.0) / ((t2 + 4.0) * (t2 + 4.0));
    return -a * a * s.M * s.M + b * s.K;
}

namespace {

GalerkinSystem assemble_scalar_connection(const SurfaceGrid& grid, double theta, int order,
                                          const std::function<double(const GeomSample&)>& potential) {
    check_grid(grid, order);
    const ScalarBasis b = scalar_basis(grid, order);
    const int nodes = static_cast<int>(grid.size());
    const VectorXd w = node_weights(grid);

    VectorXd w11(nodes), w12(nodes), w22(nodes), wpot(nodes);
    std::array<VectorXd, 3> u1, u2;
    for (auto& v : u1) v.resize(nodes);
    for (auto& v : u2) v.resize(nodes);
    for (int k = 0; k < nodes; ++k) {
        const GeomSample& s = grid.nodes[k].geom;
        const auto [c1, c2] = yang_mills_vectors(s);
        const Eigen::Matrix2d& gi = s.g_inv;
        w11(k) = w(k) * gi(0, 0);
        w12(k) = w(k) * gi(0, 1);
        w22(k) = w(k) * gi(1, 1);
        // sum_jk g^{jk} c_j . c_k
        const double W = gi(0, 0) * c1.dot(c1) + 2.0 * gi(0, 1) * c1.dot(c2) + gi(1, 1) * c2.dot(c2);
        wpot(k) = w(k) * (theta * theta * W + (potential ? potential(s) : 0.0));
        for (int a = 0; a < 3; ++a) {
            u1[a](k) = w(k) * (gi(0, 0) * c1(a) + gi(0, 1) * c2(a));
            u2[a](k) = w(k) * (gi(1, 0) * c1(a) + gi(1, 1) * c2(a));
        }
    }

    const int n = b.size();
    MatrixXd T = weighted_product(b.d1, w11, b.d1) + weighted_product(b.d2, w22, b.d2);
    const MatrixXd T12 = weighted_product(b.d1, w12, b.d2);
    T += T12 + T12.transpose();
    T += weighted_product(b.val, wpot, b.val);
    const MatrixXd Mass = weighted_product(b.val, w, b.val);

    GalerkinSystem sys;
    sys.basis = b.name;
    sys.order = order;
    sys.scalar_size = n;
    sys.components = 2;
    sys.theta = theta;
    sys.stiffness = MatrixXcd::Zero(2 * n, 2 * n);
    sys.mass = MatrixXcd::Zero(2 * n, 2 * n);
    add_kron(sys.stiffness, T, identity2(), 2);
    add_kron(sys.mass, Mass, identity2(), 2);
    if (theta != 0.0) {
        for (int a = 0; a < 3; ++a) {
            const MatrixXd X = weighted_product(b.d1, u1[a], b.val) + weighted_product(b.d2, u2[a], b.val);
            const MatrixXd Xa = theta * (X - X.transpose());
            const PauliMatrix s = pauli(a + 1);
            add_kron(sys.stiffness, Xa, PauliMatrix(I * s), 2);
        }
    }
    return sys;
}

}  // namespace

GalerkinSystem assemble_bochner(const SurfaceGrid& grid, double theta, int order) {
    GalerkinSystem sys = assemble_scalar_connection(grid, theta, order, {});
    sys.kind = OperatorKind::bochner;
    return sys;
}

GalerkinSystem assemble_upsilon(const SurfaceGrid& grid, double tau, int order) {
    if (!(tau < 0.0)) throw InvalidArgument("assemble_upsilon: tau must be negative");
    if (std::abs(tau + 2.0) < 1e-14) throw DecoupledShell(tau);
    GalerkinSystem sys = assemble_scalar_connection(grid, upsilon_connection(tau), order,
                                                    [tau](const GeomSample& s) { return upsilon_potential(s, tau); });
    sys.kind = OperatorKind::upsilon;
    sys.tau = tau;
    return sys;
}

GalerkinSystem assemble_connection_laplacian(const SurfaceGrid& grid, const ConnectionData& data, int order) {
    check_grid(grid, order);
    const int nodes = static_cast<int>(grid.size());
    if (data.val.rows() != nodes || data.a1.size() != static_cast<std::size_t>(nodes) ||
        data.a2.size() != static_cast<std::size_t>(nodes))
        throw InvalidArgument("assemble_connection_laplacian: data does not match the grid");
    const int n = static_cast<int>(data.val.cols());
    std::vector<PauliMatrix> f11(nodes), f12(nodes), f21(nodes), f22(nodes), x1(nodes), x2(nodes), y1(nodes),
        y2(nodes), pp(nodes), mm(nodes);
    for (int k = 0; k < nodes; ++k) {
        const GeomSample& s = grid.nodes[k].geom;
        const double w = grid.nodes[k].weight;
        const Eigen::Matrix2d& gi = s.g_inv;
        const PauliMatrix& A1 = data.a1[k];
        const PauliMatrix& A2 = data.a2[k];
        const PauliMatrix id = identity2();
        f11[k] = w * gi(0, 0) * id;
        f12[k] = w * gi(0, 1) * id;
        f21[k] = w * gi(1, 0) * id;
        f22[k] = w * gi(1, 1) * id;
        // conj(d_j phi) phi i A_k g^{jk}
        x1[k] = I * w * (gi(0, 0) * A1 + gi(0, 1) * A2);
        x2[k] = I * w * (gi(1, 0) * A1 + gi(1, 1) * A2);
        // conj(phi) d_k phi (-i) A_j g^{jk}
        y1[k] = -I * w * (gi(0, 0) * A1 + gi(1, 0) * A2);
        y2[k] = -I * w * (gi(0, 1) * A1 + gi(1, 1) * A2);
        pp[k] = w * (gi(0, 0) * A1 * A1 + gi(0, 1) * (A1 * A2 + A2 * A1) + gi(1, 1) * A2 * A2);
        const double v = data.potential.empty() ? 0.0 : data.potential[k];
        pp[k] += w * v * id;
        mm[k] = w * id;
    }
    GalerkinSystem sys;
    sys.kind = OperatorKind::bochner;
    sys.basis = "user supplied";
    sys.order = order;
    sys.scalar_size = n;
    sys.components = 2;
    sys.stiffness = MatrixXcd::Zero(2 * n, 2 * n);
    sys.mass = MatrixXcd::Zero(2 * n, 2 * n);
    add_gram_complex(sys.stiffness, data.d1, data.d1, f11);
    add_gram_complex(sys.stiffness, data.d1, data.d2, f12);
    add_gram_complex(sys.stiffness, data.d2, data.d1, f21);
    add_gram_complex(sys.stiffness, data.d2, data.d2, f22);
    add_gram_complex(sys.stiffness, data.d1, data.val, x1);
    add_gram_complex(sys.stiffness, data.d2, data.val, x2);
    add_gram_complex(sys.stiffness, data.val, data.d1, y1);
    add_gram_complex(sys.stiffness, data.val, data.d2, y2);
    add_gram_complex(sys.stiffness, data.val, data.val, pp);
    add_gram_complex(sys.mass, data.val, data.val, mm);
    return sys;
}

SpinorMatrix intermediate_w_potential(const GeomSample& s) {
    const auto [c1, c2] = yang_mills_vectors(s);
    const SpinorMatrix A1 = gamma5() * alpha_dot(c1), A2 = gamma5() * alpha_dot(c2);
    const Eigen::Matrix2d& gi = s.g_inv;
    return gi(0, 0) * A1 * A1 + gi(0, 1) * (A1 * A2 + A2 * A1) + gi(1, 1) * A2 * A2;
}

GalerkinSystem assemble_intermediate(const SurfaceGrid& grid, double tau, int order) {
    if (tau == 0.0) throw InvalidArgument("assemble_intermediate: tau must be nonzero");
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
    check_grid(grid, order);
    const ScalarBasis b = scalar_basis(grid, order);
    const int nodes = static_cast<int>(grid.size());
    const double bcoef = 4.0 * tau / (4.0 - tau * tau);

    using M4 = SpinorMatrix;
    std::vector<M4> f11(nodes), f12(nodes), f21(nodes), f22(nodes), x1(nodes), x2(nodes), y1(nodes), y2(nodes),
        pp(nodes), mm(nodes);
    for (int k = 0; k < nodes; ++k) {
        const GeomSample& s = grid.nodes[k].geom;
        const double w = grid.nodes[k].weight;
        const Eigen::Matrix2d& gi = s.g_inv;
        const M4 R = r_tau(Sign::minus, tau, s.nu);
        const M4 N = identity4() + R * R;
        // d_j R^- = -(4 tau/(4 - tau^2)) d_j B, d_j B = -i beta alpha.d_j nu
        const M4 dR1 = -bcoef * (-I * beta() * alpha_dot(s.dnu1));
        const M4 dR2 = -bcoef * (-I * beta() * alpha_dot(s.dnu2));
        f11[k] = w * gi(0, 0) * N;
        f12[k] = w * gi(0, 1) * N;
        f21[k] = w * gi(1, 0) * N;
        f22[k] = w * gi(1, 1) * N;
        // d_j phi_p phi_q (R d_k R) g^{jk}
        x1[k] = w * R * (gi(0, 0) * dR1 + gi(0, 1) * dR2);
        x2[k] = w * R * (gi(1, 0) * dR1 + gi(1, 1) * dR2);
        // phi_p d_k phi_q (d_j R R) g^{jk}
        y1[k] = w * (gi(0, 0) * dR1 + gi(1, 0) * dR2) * R;
        y2[k] = w * (gi(0, 1) * dR1 + gi(1, 1) * dR2) * R;
        pp[k] = w * (gi(0, 0) * dR1 * dR1 + gi(0, 1) * (dR1 * dR2 + dR2 * dR1) + gi(1, 1) * dR2 * dR2 +
                     (s.K - s.M * s.M) * N);
        mm[k] = w * N;
    }
    const int n = b.size();
    GalerkinSystem sys;
    sys.kind = OperatorKind::intermediate;
    sys.basis = b.name;
    sys.order = order;
    sys.scalar_size = n;
    sys.components = 4;
    sys.tau = tau;
    sys.stiffness = MatrixXcd::Zero(4 * n, 4 * n);
    sys.mass = MatrixXcd::Zero(4 * n, 4 * n);
    add_gram<4>(sys.stiffness, b.d1, b.d1, f11);
    add_gram<4>(sys.stiffness, b.d1, b.d2, f12);
    add_gram<4>(sys.stiffness, b.d2, b.d1, f21);
    add_gram<4>(sys.stiffness, b.d2, b.d2, f22);
    add_gram<4>(sys.stiffness, b.d1, b.val, x1);
    add_gram<4>(sys.stiffness, b.d2, b.val, x2);
    add_gram<4>(sys.stiffness, b.val, b.d1, y1);
    add_gram<4>(sys.stiffness, b.val, b.d2, y2);
    add_gram<4>(sys.stiffness, b.val, b.val, pp);
    add_gram<4>(sys.mass, b.val, b.val, mm);
    return sys;
}

double form_value(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& c) { return c.dot(m * c).real(); }

std::vector<EigenGroup> group_eigenvalues(const std::vector<double>& values, double tol) {
    std::vector<EigenGroup> groups;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        const double ref = values[i];
        while (j < values.size() && std::abs(values[j] - ref) <= tol * std::max(1.0, std::abs(ref))) ++j;
        EigenGroup g;
        g.first_index = static_cast<int>(i);
        g.multiplicity = static_cast<int>(j - i);
        double sum = 0.0;
        for (std::size_t k = i; k < j; ++k) sum += values[k];
        g.value = sum / g.multiplicity;
        groups.push_back(g);
        i = j;
    }
    return groups;
}

HermitianSpectrum solve_pencil(const Eigen::MatrixXcd& stiffness, const Eigen::MatrixXcd& mass, int count) {
    const Eigen::Index n = stiffness.rows();
    if (stiffness.cols() != n || mass.rows() != n || mass.cols() != n)
        throw InvalidArgument("solve_pencil: size mismatch");
    if (count > n) throw InvalidArgument("solve_pencil: count exceeds the basis size");
    const double sa = stiffness.norm(), sm = mass.norm();
    if ((stiffness - stiffness.adjoint()).norm() > 1e-12 * std::max(sa, 1e-300))
        throw NumericalFailure("solve_pencil: stiffness matrix is not Hermitian");
    if ((mass - mass.adjoint()).norm() > 1e-12 * std::max(sm, 1e-300))
        throw NumericalFailure("solve_pencil: mass matrix is not Hermitian");
    const MatrixXcd A = 0.5 * (stiffness + stiffness.adjoint());
    const MatrixXcd B = 0.5 * (mass + mass.adjoint());

    Eigen::SelfAdjointEigenSolver<MatrixXcd> mes(B, Eigen::EigenvaluesOnly);
    if (mes.info() != Eigen::Success) throw NumericalFailure("solve_pencil: mass eigensolver failed");
    const double lo = mes.eigenvalues()(0), hi = mes.eigenvalues()(n - 1);
    if (!(lo > 0.0) || hi / lo > kMassConditionLimit) {
        std::ostringstream os;
        os << "mass matrix condition number " << (lo > 0.0 ? hi / lo : INFINITY) << " exceeds " << kMassConditionLimit;
        throw IllConditioned(os.str());
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXcd> es(A, B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("solve_pencil: generalized eigensolver did not converge");

    HermitianSpectrum out;
    const int take = count <= 0 ? static_cast<int>(n) : count;
    out.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + take);
    out.grouping_tolerance = kGroupingTolerance;
    out.basis_size = static_cast<int>(n);
    out.groups = group_eigenvalues(out.eigenvalues, out.grouping_tolerance);
    return out;
}

HermitianSpectrum solve_pencil(const GalerkinSystem& sys, int count) {
    HermitianSpectrum s = solve_pencil(sys.stiffness, sys.mass, count);
    s.order = sys.order;
    return s;
}

double connection_curvature_check(const SurfaceGrid& grid, double theta) {
    const ParamSurface& surf = grid.surface;
    auto omega = [&](double s1, double s2) { return yang_mills_form(sample(surf, 0, s1, s2)); };
    const double h = 2e-3;
    auto d1 = [&](double s1, double s2, double hh) {
        return PauliMatrix((omega(s1 + hh, s2).second - omega(s1 - hh, s2).second) / (2.0 * hh));
    };
    auto d2 = [&](double s1, double s2, double hh) {
        return PauliMatrix((omega(s1, s2 + hh).first - omega(s1, s2 - hh).first) / (2.0 * hh));
    };
    std::vector<double> dev(grid.size(), 0.0);
    parallel_for(grid.size(), [&](std::size_t k) {
        const GridNode& nd = grid.nodes[k];
        const auto [w1, w2] = yang_mills_form(nd.geom);
        const PauliMatrix d1w2 = (4.0 * d1(nd.s1, nd.s2, h / 2) - d1(nd.s1, nd.s2, h)) / 3.0;
        const PauliMatrix d2w1 = (4.0 * d2(nd.s1, nd.s2, h / 2) - d2(nd.s1, nd.s2, h)) / 3.0;
        const PauliMatrix F = theta * (d1w2 - d2w1) + I * theta * theta * (w1 * w2 - w2 * w1);
        const PauliMatrix target =
            2.0 * theta * (1.0 - theta) * nd.geom.K * nd.geom.sqrt_det_g * sigma_dot(nd.geom.nu.vec());
        dev[k] = (F - target).norm();
    });
    return *std::max_element(dev.begin(), dev.end());
}

}  // namespace shellspectra
