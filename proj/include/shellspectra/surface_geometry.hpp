#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "shellspectra/quadrature.hpp"
#include "shellspectra/spinor_algebra.hpp"

namespace shellspectra {

enum class SurfaceKind { ellipsoid, torus };

struct Chart {
    double s1_min, s1_max, s2_min, s2_max;
    bool periodic1, periodic2;
};

// Position and its first and second parameter derivatives.
struct ChartJet {
    Vec3 r, r1, r2, r11, r12, r22;
};

// Closed analytic surface. Spheres and ellipsoids carry two polar charts
// (axes z and x); the torus a single doubly periodic chart. In every chart
// (t1, t2, nu) is right-handed with nu pointing out of the enclosed solid.
class ParamSurface {
public:
    SurfaceKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& parameters() const { return params_; }
    std::string descriptor() const;

    int chart_count() const { return static_cast<int>(charts_.size()); }
    const Chart& chart(int c) const;
    ChartJet jet(int chart, double s1, double s2) const;
    // Parameters of a point on the surface in the given chart.
    std::array<double, 2> locate(int chart, const Vec3& p) const;
    // Surface of revolution about the z axis.
    bool axisymmetric() const;
    int euler_characteristic() const { return kind_ == SurfaceKind::torus ? 0 : 2; }

    friend ParamSurface build_ellipsoid(double a, double b, double c);
    friend ParamSurface build_sphere(double R);
    friend ParamSurface build_torus(double R_major, double r_minor);

private:
    SurfaceKind kind_ = SurfaceKind::ellipsoid;
    std::string name_;
    std::vector<double> params_;
    std::vector<Chart> charts_;
};

ParamSurface build_sphere(double R);
ParamSurface build_ellipsoid(double a, double b, double c);
ParamSurface build_torus(double R_major, double r_minor);

// "sphere", "sphere:2", "ellipsoid:1,1,1.5", "torus:2,1". Unknown names throw InvalidArgument.
ParamSurface parse_surface(const std::string& descriptor);

struct GeomSample {
    Vec3 point;
    UnitVector3 nu{0.0, 0.0, 1.0};
    Vec3 t1, t2;
    Eigen::Matrix2d g, g_inv;
    double sqrt_det_g = 0.0;
    Vec3 dnu1, dnu2;
    // Weingarten map in the tangent frame: d_j nu = sum_l S(l, j) t_l
    Eigen::Matrix2d S;
    double M = 0.0;
    double K = 0.0;
};

GeomSample sample(const ParamSurface& surface, int chart, double s1, double s2);

// 1 - 2tM + t^2 K
double tubular_jacobian(const GeomSample& s, double t);

// Real coefficient vectors c_j = nu x d_j nu of omega_j = sigma.c_j.
std::pair<Vec3, Vec3> yang_mills_vectors(const GeomSample& s);
std::pair<PauliMatrix, PauliMatrix> yang_mills_form(const GeomSample& s);

struct GridNode {
    int chart = 0;
    int i1 = 0, i2 = 0;
    double s1 = 0.0, s2 = 0.0;
    double weight = 0.0;  // area element times rule weights
    GeomSample geom;
};

// Tensor grid on the primary chart: Gauss-Legendre in non-periodic
// directions (in cos(theta) for the polar chart), trapezoidal in periodic
// ones. Nodes are stored row-major in (i1, i2).
struct SurfaceGrid {
    ParamSurface surface;
    int n1 = 0, n2 = 0;
    Rule1D rule1, rule2;
    std::vector<GridNode> nodes;

    std::size_t size() const { return nodes.size(); }
    int index(int i1, int i2) const { return i1 * n2 + i2; }
};

SurfaceGrid build_grid(const ParamSurface& surface, int n1, int n2);

double surface_area(const SurfaceGrid& grid);
cplx quadrature(const SurfaceGrid& grid, const std::function<cplx(const GeomSample&)>& f);

}  // namespace shellspectra
