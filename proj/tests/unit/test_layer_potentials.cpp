#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "shellspectra/errors.hpp"
#include "shellspectra/layer_potentials.hpp"
#include "shellspectra/spinor_algebra.hpp"
#include "shellspectra/surface_geometry.hpp"
#include "support/generators.hpp"

using namespace shellspectra;

namespace {

constexpr cplx I{0.0, 1.0};

// C applied to a constant spinor on the unit sphere, by reduction to r = |x - y| in [0, 2]:
//   int e^{ikr}/(4 pi r) dS = (e^{2ik} - 1)/(2ik)
//   odd part = i alpha.x * (1/4) int_0^2 (1 - ikr) e^{ikr} dr
SpinorMatrix constant_density_oracle(const KernelParams& p, const Vec3& x) {
    const cplx k = p.k();
    const cplx e2 = std::exp(2.0 * I * k);
    const cplx s = (e2 - 1.0) / (2.0 * I * k);
    const cplx v = 0.25 * (2.0 * (e2 - 1.0) / (I * k) - 2.0 * e2);
    return s * (p.lambda * identity4() + p.m * beta()) + v * I * alpha_dot(x);
}

Spinor density_at(const Vec3& y, const Spinor& base) {
    return base * (1.0 + 0.5 * y.x() - 0.3 * y.y() * y.z()) + Spinor(0.2 * y.z(), 0.0, -0.1 * y.x(), 0.3);
}

std::vector<Spinor> sample_density(const SurfaceGrid& g, const Spinor& base) {
    std::vector<Spinor> d;
    for (const auto& n : g.nodes) d.push_back(density_at(n.geom.point, base));
    return d;
}

}  // namespace

TEST_CASE("kernel k branch") {
    const KernelParams p{cplx(3.0, 0.0), 5.0};
    CHECK(std::abs(p.k() - cplx(0.0, 4.0)) < 1e-15);
    const KernelParams q{cplx(7.0, 0.1), 5.0};
    CHECK(q.k().imag() > 0.0);
    CHECK(std::abs(q.k() * q.k() - (q.lambda * q.lambda - 25.0)) < 1e-12);
    CHECK_THROWS_AS(green_kernel(p, Vec3::Zero()), InvalidArgument);
}

TEST_CASE("Green kernel adjoint: G_lambda(x)^* = G_conj(lambda)(-x)") {
    testgen::Gen g(81);
    for (int n = 0; n < 200; ++n) {
        const KernelParams p{cplx(g.uniform(-3.0, 3.0), g.uniform(-1.0, 1.0)), g.uniform(0.5, 4.0)};
        const KernelParams q{std::conj(p.lambda), p.m};
        const Vec3 x = g.vec3();
        CHECK((green_kernel(p, x).adjoint() - green_kernel(q, -x)).norm() < 1e-12 * green_kernel(p, x).norm());
    }
}

TEST_CASE("Green kernel solves the free Dirac equation away from the origin") {
    // (-i alpha.grad + m beta - lambda) G = 0 for x != 0, by central differences
    testgen::Gen g(82);
    for (int n = 0; n < 20; ++n) {
        const KernelParams p{cplx(g.uniform(-2.0, 2.0), 0.0), g.uniform(2.5, 4.0)};
        const Vec3 x = g.unit3() * g.uniform(0.5, 2.0);
        const double h = 1e-3;
        SpinorMatrix r = (p.m * beta() - p.lambda * identity4()) * green_kernel(p, x);
        for (int a = 0; a < 3; ++a) {
            const Vec3 e = Vec3::Unit(a) * h;
            const SpinorMatrix d = (-green_kernel(p, x + 2 * e) + 8.0 * green_kernel(p, x + e) -
                                    8.0 * green_kernel(p, x - e) + green_kernel(p, x - 2 * e)) /
                                   (12.0 * h);
            r += -I * alpha(a + 1) * d;
        }
        CHECK(r.norm() < 1e-8 * green_kernel(p, x).norm());
    }
}

TEST_CASE("exact surface moments on the unit sphere") {
    const SurfaceGrid g = build_grid(build_sphere(1.0), 12, 24);
    const SurfaceMoments mom = surface_moments(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(mom.single_exact[i] - 1.0) < 1e-5);
        CHECK((mom.vec_exact[i] - 0.5 * g.nodes[i].geom.nu.vec()).norm() < 1e-5);
        CHECK(mom.gradient[i].size() >= 6);
    }
}

TEST_CASE("gradient stencil converges at second order on a curved surface") {
    // a linear function restricted to a curved surface is only quadratic to leading order
    const Vec3 a(0.3, -1.1, 0.7);
    std::vector<double> err;
    for (int n1 : {10, 20}) {
        const SurfaceGrid g = build_grid(build_ellipsoid(1.0, 1.2, 0.8), n1, 2 * n1);
        const SurfaceMoments mom = surface_moments(g);
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            Vec3 grad = Vec3::Zero();
            for (const auto& [j, w] : mom.gradient[i]) grad += w * a.dot(g.nodes[j].geom.point);
            const Vec3 nu = g.nodes[i].geom.nu.vec();
            e = std::max(e, (grad - (a - a.dot(nu) * nu)).norm() / a.norm());
        }
        err.push_back(e);
    }
    MESSAGE("gradient errors " << err[0] << " " << err[1]);
    CHECK(err[0] < 0.1);
    CHECK(err[0] / err[1] > 3.0);
}

TEST_CASE("constant density converges to the closed form at second order or better") {
    const KernelParams p{cplx(2.0, 0.0), 5.0};
    const Spinor chi(1.0, cplx(0.0, 0.5), -0.3, 0.2);
    std::vector<double> err;
    for (int n1 : {6, 12, 24}) {
        const SurfaceGrid g = build_grid(build_sphere(1.0), n1, 2 * n1);
        const BSMatrix C = assemble_c_lambda(g, p);
        const Eigen::VectorXcd phi = stack_density(std::vector<Spinor>(g.size(), chi));
        const Eigen::VectorXcd out = C.C * phi;
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            e = std::max(e, (out.segment<4>(4 * i) - constant_density_oracle(p, g.nodes[i].geom.point) * chi).norm());
        err.push_back(e);
    }
    MESSAGE("constant density errors " << err[0] << " " << err[1] << " " << err[2]);
    CHECK(err[2] < 5e-3);
    CHECK(std::log2(err[0] / err[1]) >= 2.0);
    CHECK(std::log2(err[1] / err[2]) >= 2.0);
}

TEST_CASE("anticommutator with beta is twice (lambda beta + m) times the single layer") {
    const SurfaceGrid g = build_grid(build_torus(2.0, 1.0), 10, 8);
    const SurfaceMoments mom = surface_moments(g);
    const KernelParams p{cplx(1.3, 0.0), 3.0};
    const BSMatrix C = assemble_c_lambda(g, mom, p);
    const Eigen::MatrixXcd S = assemble_single_layer(g, mom, p);
    const std::size_t N = g.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            const SpinorMatrix blk = C.C.block<4, 4>(4 * i, 4 * j);
            const SpinorMatrix lhs = beta() * blk + blk * beta();
            const SpinorMatrix rhs = 2.0 * (p.lambda * beta() + p.m * identity4()) * S(i, j);
            worst = std::max(worst, (lhs - rhs).norm() / std::max(1.0, rhs.norm()));
        }
    CHECK(worst < 1e-13);
}

TEST_CASE("jump relations of the potential") {
    // outer limit C phi + (i/2) alpha.nu phi, inner limit C phi - (i/2) alpha.nu phi;
    // both limits are approached at O(eps), so compare the Richardson extrapolation
    const KernelParams p{cplx(1.0, 0.0), 3.0};
    const Spinor base(1.0, 0.5, cplx(0.0, 0.3), -0.2);
    const SurfaceGrid fine = build_grid(build_sphere(1.0), 192, 384);
    const std::vector<Spinor> dens = sample_density(fine, base);
    const SurfaceGrid coarse = build_grid(build_sphere(1.0), 16, 32);
    const BSMatrix C = assemble_c_lambda(coarse, p);
    const Eigen::VectorXcd Cphi = C.C * stack_density(sample_density(coarse, base));

    for (std::size_t i : {std::size_t(37), std::size_t(200), std::size_t(311)}) {
        const Vec3 x = coarse.nodes[i].geom.point, nu = coarse.nodes[i].geom.nu.vec();
        const Spinor phi = density_at(x, base);
        const Spinor jump = I * alpha_dot(nu) * phi;
        Spinor J[3], M[3];
        for (int k = 0; k < 3; ++k) {
            const double eps = 0.1 / (1 << k);
            const PotentialValue out = phi_lambda_apply(fine, p, dens, x + eps * nu);
            const PotentialValue in = phi_lambda_apply(fine, p, dens, x - eps * nu);
            // the smallest offset is inside the flagged band; the value is still usable here
            if (k < 2) {
                CHECK_FALSE(out.near_surface);
                CHECK_FALSE(in.near_surface);
            }
            J[k] = out.value - in.value;
            M[k] = 0.5 * (out.value + in.value);
        }
        const double plain0 = (J[0] - jump).norm() / phi.norm(), plain1 = (J[1] - jump).norm() / phi.norm();
        double je[2], ae[2];
        for (int k = 0; k < 2; ++k) {
            je[k] = (2.0 * J[k + 1] - J[k] - jump).norm() / phi.norm();
            ae[k] = (2.0 * M[k + 1] - M[k] - Cphi.segment<4>(4 * i)).norm() / phi.norm();
        }
        MESSAGE("node " << i << ": jump errors " << plain0 << " " << plain1 << ", extrapolated " << je[0] << " "
                        << je[1] << ", mean vs C " << ae[0] << " " << ae[1]);
        CHECK(plain1 < 0.6 * plain0);
        CHECK(je[1] < 0.4 * je[0]);
        CHECK(je[1] < 0.015);
        CHECK(ae[1] < 0.01);
    }
}

TEST_CASE("potential solves the Dirac equation off the surface and decays") {
    const KernelParams p{cplx(1.5, 0.0), 3.0};
    const SurfaceGrid g = build_grid(build_ellipsoid(1.0, 1.3, 0.8), 12, 24);
    const std::vector<Spinor> dens = sample_density(g, Spinor(1.0, 0.0, 0.5, cplx(0.0, 1.0)));
    auto phi = [&](const Vec3& x) { return phi_lambda_apply(g, p, dens, x).value; };
    for (const Vec3& x : {Vec3(0.1, 0.2, -0.1), Vec3(2.0, 0.5, 1.0)}) {
        const double h = 1e-3;
        Spinor r = (p.m * beta() - p.lambda * identity4()) * phi(x);
        for (int a = 0; a < 3; ++a) {
            const Vec3 e = Vec3::Unit(a) * h;
            r += -I * alpha(a + 1) * (-phi(x + 2 * e) + 8.0 * phi(x + e) - 8.0 * phi(x - e) + phi(x - 2 * e)) / (12.0 * h);
        }
        CHECK(r.norm() < 1e-7 * std::max(1.0, phi(x).norm()));
    }
    const double kappa = std::sqrt(9.0 - 2.25);
    const double a = phi(Vec3(6.0, 0.0, 0.0)).norm(), b = phi(Vec3(12.0, 0.0, 0.0)).norm();
    CHECK(std::log(a / b) == doctest::Approx(kappa * 6.0 + std::log(2.0)).epsilon(0.02));
    const std::vector<Spinor> zero(g.size(), Spinor::Zero());
    CHECK(phi_lambda_apply(g, p, zero, Vec3(0.0, 0.0, 3.0)).value.norm() == 0.0);
    CHECK(phi_lambda_apply(g, p, dens, g.nodes[5].geom.point).near_surface);
    CHECK_THROWS_AS(phi_lambda_apply(g, p, std::vector<Spinor>(3), Vec3(0, 0, 3)), InvalidArgument);
}

TEST_CASE("block path equals the dense smallest singular value") {
    for (const std::string s : {"sphere", "torus:2,1", "ellipsoid:1,1,1.4"}) {
        CAPTURE(s);
        const SurfaceGrid g = build_grid(parse_surface(s), 6, 10);
        REQUIRE(supports_block_path(g));
        const SurfaceMoments mom = surface_moments(g);
        for (double lam : {-2.0, 0.7}) {
            const std::vector<double> b = sigma_min_blocks(g, mom, 4.0, -1.0, lam);
            CHECK(*std::min_element(b.begin(), b.end()) ==
                  doctest::Approx(sigma_min_dense(g, mom, 4.0, -1.0, lam)).epsilon(1e-7));
        }
    }
    CHECK_FALSE(supports_block_path(build_grid(build_ellipsoid(1.0, 1.2, 0.8), 6, 10)));
}

TEST_CASE("bs_search argument checks") {
    const SurfaceGrid g = build_grid(build_sphere(1.0), 4, 8);
    CHECK_THROWS_AS(bs_search(g, 5.0, 0.0, -1.0, 1.0, 10), InvalidArgument);
    CHECK_THROWS_AS(bs_search(g, 5.0, 2.0, -1.0, 1.0, 10), DecoupledShell);
    CHECK_THROWS_AS(bs_search(g, 5.0, -1.0, -6.0, 1.0, 10), InvalidArgument);
    CHECK_THROWS_AS(bs_search(g, 5.0, -1.0, 1.0, -1.0, 10), InvalidArgument);
    CHECK_THROWS_AS(bs_search(g, 5.0, -1.0, -1.0, 1.0, 2), InvalidArgument);
}

TEST_CASE("bs_search converges to the lowest sphere level") {
    // shooting gives 3.654826 for (m, tau, R) = (6, -1, 1), kappa = -1
    std::vector<double> err;
    for (int n1 : {12, 20}) {
        const BSScan s = bs_search(build_grid(build_sphere(1.0), n1, 2 * n1), 6.0, -1.0, 3.4, 3.9, 26);
        CHECK(s.block_path);
        REQUIRE_FALSE(s.candidates.empty());
        err.push_back(std::abs(s.candidates[0] - 3.654826));
    }
    MESSAGE("lowest level errors " << err[0] << " " << err[1]);
    CHECK(err[1] < 0.01 * 3.654826);
    CHECK(err[0] / err[1] > 1.5);
}
