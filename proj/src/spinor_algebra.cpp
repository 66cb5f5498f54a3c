#include "shellspectra/spinor_algebra.hpp"

#include <cmath>
#include <string>

#include "shellspectra/errors.hpp"

namespace shellspectra {

namespace {

constexpr cplx I{0.0, 1.0};

SpinorMatrix block(const PauliMatrix& a, const PauliMatrix& b, const PauliMatrix& c, const PauliMatrix& d) {
    SpinorMatrix m;
    m.topLeftCorner<2, 2>() = a;
    m.topRightCorner<2, 2>() = b;
    m.bottomLeftCorner<2, 2>() = c;
    m.bottomRightCorner<2, 2>() = d;
    return m;
}

}  // namespace

UnitVector3::UnitVector3(const Vec3& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTolerance)
        throw InvalidArgument("UnitVector3: |v| = " + std::to_string(n) + " is not 1");
    v_ = v / n;
}

UnitVector3 UnitVector3::normalized(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw InvalidArgument("UnitVector3::normalized: zero or non-finite vector");
    return UnitVector3(v / n, Trusted{});
}

UnitVector3 UnitVector3::operator-() const { return UnitVector3(-v_, Trusted{}); }

PauliMatrix identity2() { return PauliMatrix::Identity(); }
SpinorMatrix identity4() { return SpinorMatrix::Identity(); }

PauliMatrix pauli(int j) {
    PauliMatrix s;
    switch (j) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -I, I, 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw InvalidArgument("pauli: index must be 1, 2 or 3");
    }
    return s;
}

SpinorMatrix beta() {
    const PauliMatrix z = PauliMatrix::Zero();
    return block(identity2(), z, z, -identity2());
}

SpinorMatrix alpha(int j) {
    if (j == 0) return beta();
    const PauliMatrix z = PauliMatrix::Zero();
    const PauliMatrix s = pauli(j);
    return block(z, s, s, z);
}

SpinorMatrix gamma5() {
    const PauliMatrix z = PauliMatrix::Zero();
    return block(z, identity2(), identity2(), z);
}

PauliMatrix sigma_dot(const Vec3& x) {
    PauliMatrix s;
    s << x.z(), cplx(x.x(), -x.y()), cplx(x.x(), x.y()), -x.z();
    return s;
}

SpinorMatrix alpha_dot(const Vec3& x) {
    const PauliMatrix z = PauliMatrix::Zero();
    const PauliMatrix s = sigma_dot(x);
    return block(z, s, s, z);
}

SpinorMatrix shell_matrix_B(const UnitVector3& nu) {
    return -I * beta() * alpha_dot(nu.vec());
}

SpinorMatrix p_tau(Sign s, double tau, const UnitVector3& nu) {
    const SpinorMatrix b = shell_matrix_B(nu);
    return (tau / 2.0) * identity4() + (s == Sign::plus ? b : SpinorMatrix(-b));
}

SpinorMatrix r_tau(Sign s, double tau, const UnitVector3& nu) {
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
    const double d = 4.0 - tau * tau;
    const double c0 = (4.0 + tau * tau) / d;
    const double c1 = (s == Sign::plus ? 4.0 : -4.0) * tau / d;
    return c0 * identity4() + c1 * shell_matrix_B(nu);
}

SpinorMatrix theta0(const UnitVector3& nu) {
    return (identity4() + I * alpha_dot(nu.vec())) / std::sqrt(2.0);
}

Spinor charge_conjugation(const Spinor& u) {
    return I * beta() * alpha(2) * u.conjugate();
}

Spinor time_reversal(const Spinor& u) {
    return -I * gamma5() * alpha(2) * u.conjugate();
}

SymmetryOperators symmetry_operators() { return {&charge_conjugation, &time_reversal}; }

}  // namespace shellspectra
