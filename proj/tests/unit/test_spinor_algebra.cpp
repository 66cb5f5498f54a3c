#include <doctest.h>

#include <cmath>

#include "shellspectra/errors.hpp"
#include "shellspectra/spinor_algebra.hpp"
#include "support/generators.hpp"

using namespace shellspectra;

namespace {

constexpr cplx I{0.0, 1.0};

double dist(const SpinorMatrix& a, const SpinorMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Dirac matrices have the expected block structure") {
    const SpinorMatrix a3 = alpha(3);
    CHECK(a3(0, 2) == cplx(1));
    CHECK(a3(1, 3) == cplx(-1));
    CHECK(a3(2, 0) == cplx(1));
    CHECK(a3(3, 1) == cplx(-1));
    CHECK(a3.topLeftCorner<2, 2>().norm() == 0.0);
    CHECK(dist(alpha_dot(Vec3::UnitZ()), a3) == 0.0);
    CHECK(alpha_dot(Vec3::Zero()).norm() == 0.0);

    const SpinorMatrix b = beta();
    CHECK(b(0, 0) == cplx(1));
    CHECK(b(3, 3) == cplx(-1));
}

TEST_CASE("Pauli algebra") {
    for (int j = 1; j <= 3; ++j) {
        const PauliMatrix s = pauli(j);
        CHECK((s - s.adjoint()).norm() == 0.0);
        CHECK((s * s - identity2()).norm() == 0.0);
    }
    CHECK((pauli(1) * pauli(2) - I * pauli(3)).norm() == 0.0);
    CHECK((pauli(2) * pauli(3) - I * pauli(1)).norm() == 0.0);
    CHECK((pauli(3) * pauli(1) - I * pauli(2)).norm() == 0.0);
}

TEST_CASE("anticommutation of alpha_0..alpha_3 and gamma5") {
    for (int j = 0; j <= 3; ++j)
        for (int k = 0; k <= 3; ++k) {
            const SpinorMatrix ac = alpha(j) * alpha(k) + alpha(k) * alpha(j);
            const SpinorMatrix expect = (j == k ? 2.0 : 0.0) * identity4();
            CHECK(dist(ac, expect) < 1e-14);
        }
    for (int j = 1; j <= 3; ++j) CHECK(dist(gamma5() * alpha(j), alpha(j) * gamma5()) < 1e-14);
    CHECK(dist(gamma5() * beta(), -beta() * gamma5()) < 1e-14);
}

TEST_CASE("product formula for alpha.x alpha.y") {
    testgen::Gen g(11);
    const SpinorMatrix e12 = alpha_dot(Vec3::UnitX()) * alpha_dot(Vec3::UnitY()) - identity4() * 0.0;
    CHECK(dist(e12, I * gamma5() * alpha_dot(Vec3::UnitZ())) < 1e-15);
    for (int i = 0; i < 100; ++i) {
        const Vec3 x = g.vec3(), y = g.vec3();
        const SpinorMatrix lhs = alpha_dot(x) * alpha_dot(y);
        const SpinorMatrix rhs = x.dot(y) * identity4() + I * gamma5() * alpha_dot(x.cross(y));
        CHECK(dist(lhs, rhs) < 1e-13);
        CHECK(dist(alpha_dot(x) * alpha_dot(x), x.squaredNorm() * identity4()) < 1e-13);
        CHECK(dist(alpha_dot(x + 2.0 * y), alpha_dot(x) + 2.0 * alpha_dot(y)) < 1e-14);
    }
}

TEST_CASE("UnitVector3 normalization") {
    CHECK_THROWS_AS(UnitVector3(Vec3(1.0, 1.0, 0.0)), InvalidArgument);
    CHECK_NOTHROW(UnitVector3(Vec3(1.0 + 5e-13, 0.0, 0.0)));
    const UnitVector3 u(Vec3(1.0 + 5e-13, 0.0, 0.0));
    CHECK(std::abs(u.vec().norm() - 1.0) < 1e-15);
    CHECK_THROWS_AS(UnitVector3::normalized(Vec3::Zero()), InvalidArgument);
    CHECK(std::abs(UnitVector3::normalized(Vec3(3, 4, 0)).x() - 0.6) < 1e-15);
}

TEST_CASE("shell matrix B") {
    const UnitVector3 e3(0, 0, 1);
    SpinorMatrix expect = SpinorMatrix::Zero();
    expect.topRightCorner<2, 2>() = -I * pauli(3);
    expect.bottomLeftCorner<2, 2>() = I * pauli(3);
    CHECK(dist(shell_matrix_B(e3), expect) < 1e-15);

    testgen::Gen g(12);
    for (int i = 0; i < 100; ++i) {
        const UnitVector3 nu(g.unit3());
        const SpinorMatrix b = shell_matrix_B(nu);
        CHECK(dist(b, b.adjoint()) < 1e-15);
        CHECK(dist(b * b, identity4()) < 1e-14);
        CHECK(dist(shell_matrix_B(-nu), -b) < 1e-15);
    }
}

TEST_CASE("projectors P and transmission matrices R") {
    const UnitVector3 e3(0, 0, 1);
    CHECK(dist(r_tau(Sign::plus, 1.0, e3), (5.0 / 3.0) * identity4() + (4.0 / 3.0) * shell_matrix_B(e3)) < 1e-15);
    CHECK(dist(r_tau(Sign::plus, 0.0, e3), identity4()) < 1e-15);
    CHECK_THROWS_AS(r_tau(Sign::plus, 2.0, e3), DecoupledShell);
    CHECK_THROWS_AS(r_tau(Sign::minus, -2.0, e3), DecoupledShell);

    testgen::Gen g(13);
    for (int i = 0; i < 200; ++i) {
        const UnitVector3 nu(g.unit3());
        const double tau = g.tau();
        const SpinorMatrix pp = p_tau(Sign::plus, tau, nu), pm = p_tau(Sign::minus, tau, nu);
        const SpinorMatrix rp = r_tau(Sign::plus, tau, nu), rm = r_tau(Sign::minus, tau, nu);
        const SpinorMatrix b = shell_matrix_B(nu);
        const double scale = 1.0 + rp.norm();
        CHECK(dist(pp + pm, tau * identity4()) < 1e-14);
        CHECK(dist(pp - pm, 2.0 * b) < 1e-14);
        const double d = tau * tau / 4.0 - 1.0;
        CHECK(dist(pp * ((tau / 2.0) * identity4() - b) / d, identity4()) < 1e-12);
        CHECK(dist(pm * ((tau / 2.0) * identity4() + b) / d, identity4()) < 1e-12);
        CHECK(dist(rp, -pm.inverse() * pp) < 1e-12 * scale);
        CHECK(dist(rm, -pp.inverse() * pm) < 1e-12 * scale);
        CHECK(dist(rp * b, b * rp) < 1e-13 * scale);
        CHECK(dist(rp * gamma5(), gamma5() * rm) < 1e-13 * scale);
        const double k = 2.0 * (tau * tau + 4.0) / (4.0 - tau * tau);
        CHECK(dist(rp * rp + identity4(), k * rp) < 1e-12 * scale * scale);
        const SpinorMatrix q = rp - identity4();
        CHECK(dist(q * q, (4.0 * tau * tau / (4.0 - tau * tau)) * rp) < 1e-12 * scale * scale);
        CHECK(dist(rp * rm, identity4()) < 1e-12 * scale * scale);
    }
}

TEST_CASE("transmission condition equivalence") {
    testgen::Gen g(14);
    for (int i = 0; i < 100; ++i) {
        const UnitVector3 nu(g.unit3());
        const double tau = g.tau();
        const Spinor um = g.spinor();
        const Spinor up = r_tau(Sign::plus, tau, nu) * um;
        const Spinor res = p_tau(Sign::minus, tau, nu) * up + p_tau(Sign::plus, tau, nu) * um;
        CHECK(res.norm() < 1e-12 * (1.0 + up.norm()));
        // and the other direction: u- from u+
        const Spinor vp = g.spinor();
        const Spinor vm = r_tau(Sign::minus, tau, nu) * vp;
        CHECK((p_tau(Sign::minus, tau, nu) * vp + p_tau(Sign::plus, tau, nu) * vm).norm() < 1e-12 * (1.0 + vm.norm()));
    }
}

TEST_CASE("theta0 rotates beta into B") {
    const UnitVector3 e3(0, 0, 1);
    const SpinorMatrix t3 = theta0(e3);
    CHECK(dist(t3 * beta() * t3.adjoint(), shell_matrix_B(e3)) < 1e-15);
    testgen::Gen g(15);
    for (int i = 0; i < 100; ++i) {
        const UnitVector3 nu(g.unit3());
        const SpinorMatrix t = theta0(nu);
        CHECK(dist(t * t.adjoint(), identity4()) < 1e-14);
        CHECK(dist(t * beta() * t.adjoint(), shell_matrix_B(nu)) < 1e-14);
        CHECK(dist(t.adjoint(), (identity4() - I * alpha_dot(nu.vec())) / std::sqrt(2.0)) < 1e-15);
    }
}

TEST_CASE("charge conjugation and time reversal") {
    const auto ops = symmetry_operators();
    Spinor e1 = Spinor::Zero();
    e1(0) = 1.0;
    CHECK((ops.charge_conjugation(ops.charge_conjugation(e1)) - e1).norm() < 1e-15);
    CHECK(std::abs(e1.dot(ops.time_reversal(e1))) < 1e-15);
    testgen::Gen g(16);
    for (int i = 0; i < 100; ++i) {
        const Spinor v = g.spinor();
        CHECK((charge_conjugation(charge_conjugation(v)) - v).norm() < 1e-13);
        CHECK((time_reversal(time_reversal(v)) + v).norm() < 1e-13);
        CHECK(std::abs(v.dot(time_reversal(v))) < 1e-13 * v.squaredNorm());
    }
}
