#pragma once

#include <complex>

#include <Eigen/Dense>

namespace shellspectra {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using SpinorMatrix = Eigen::Matrix<cplx, 4, 4>;
using PauliMatrix = Eigen::Matrix<cplx, 2, 2>;
using Spinor = Eigen::Matrix<cplx, 4, 1>;
using Spinor2 = Eigen::Matrix<cplx, 2, 1>;

inline constexpr double kUnitTolerance = 1e-12;

// A 3-vector of unit length. Inputs within kUnitTolerance of the unit sphere
// are renormalized; anything further off is rejected.
class UnitVector3 {
public:
    explicit UnitVector3(const Vec3& v);
    UnitVector3(double x, double y, double z) : UnitVector3(Vec3(x, y, z)) {}

    // Normalizes any nonzero vector.
    static UnitVector3 normalized(const Vec3& v);

    const Vec3& vec() const { return v_; }
    double x() const { return v_.x(); }
    double y() const { return v_.y(); }
    double z() const { return v_.z(); }
    UnitVector3 operator-() const;

private:
    struct Trusted {};
    UnitVector3(const Vec3& v, Trusted) : v_(v) {}
    Vec3 v_;
};

enum class Sign { plus, minus };

PauliMatrix identity2();
SpinorMatrix identity4();
// j in {1,2,3}
PauliMatrix pauli(int j);
// alpha(0) is beta, alpha(1..3) the Dirac alphas.
SpinorMatrix alpha(int j);
SpinorMatrix beta();
SpinorMatrix gamma5();

SpinorMatrix alpha_dot(const Vec3& x);
PauliMatrix sigma_dot(const Vec3& x);

// B(nu) = -i beta alpha.nu
SpinorMatrix shell_matrix_B(const UnitVector3& nu);

// P = tau/2 +- B
SpinorMatrix p_tau(Sign s, double tau, const UnitVector3& nu);
// R+- = ((4+tau^2) I +- 4 tau B)/(4 - tau^2); throws DecoupledShell at |tau| = 2.
SpinorMatrix r_tau(Sign s, double tau, const UnitVector3& nu);

// (I + i alpha.nu)/sqrt(2); unitary, theta0 beta theta0^* = B(nu).
SpinorMatrix theta0(const UnitVector3& nu);

// Antilinear symmetries: C u = i beta alpha_2 conj(u), T u = -i gamma5 alpha_2 conj(u).
Spinor charge_conjugation(const Spinor& u);
Spinor time_reversal(const Spinor& u);

struct SymmetryOperators {
    Spinor (*charge_conjugation)(const Spinor&);
    Spinor (*time_reversal)(const Spinor&);
};
SymmetryOperators symmetry_operators();

}  // namespace shellspectra
