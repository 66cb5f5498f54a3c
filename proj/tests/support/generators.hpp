#pragma once

// Small deterministic generators for property tests.

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace testgen {

class Gen {
public:
    explicit Gen(unsigned long long seed = 20240607ULL) : eng_(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    Eigen::Vector3d vec3(double scale = 1.0) { return scale * Eigen::Vector3d(normal(), normal(), normal()); }

    Eigen::Vector3d unit3() {
        Eigen::Vector3d v;
        do {
            v = vec3();
        } while (v.norm() < 1e-3);
        return v.normalized();
    }

    std::complex<double> cnormal() { return {normal(), normal()}; }

    Eigen::Matrix<std::complex<double>, 4, 1> spinor() {
        Eigen::Matrix<std::complex<double>, 4, 1> u;
        for (int i = 0; i < 4; ++i) u(i) = cnormal();
        return u;
    }

    // tau away from 0 and +-2
    double tau() {
        for (;;) {
            const double t = uniform(-6.0, 6.0);
            if (std::abs(t) > 0.05 && std::abs(std::abs(t) - 2.0) > 0.05) return t;
        }
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace testgen
