#include "shellspectra/surface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "shellspectra/errors.hpp"

namespace shellspectra {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap(double a) {
    double r = std::fmod(a, two_pi);
    if (r < 0.0) r += two_pi;
    return r;
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (item.find_first_not_of(" \t", pos) != std::string::npos) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw InvalidArgument("surface descriptor: cannot parse number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

std::string ParamSurface::descriptor() const {
    std::ostringstream os;
    os.precision(17);
    os << name_ << ':';
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
    return os.str();
}

const Chart& ParamSurface::chart(int c) const {
    if (c < 0 || c >= chart_count()) throw InvalidArgument("ParamSurface: chart index out of range");
    return charts_[c];
}

bool ParamSurface::axisymmetric() const {
    if (kind_ == SurfaceKind::torus) return true;
    return params_.size() == 3 ? std::abs(params_[0] - params_[1]) <= 1e-14 * params_[0] : true;
}

ChartJet ParamSurface::jet(int c, double s1, double s2) const {
    const Chart& ch = chart(c);
    const double slack = 1e-12;
    if (!ch.periodic1 && (s1 < ch.s1_min - slack || s1 > ch.s1_max + slack))
        throw InvalidArgument("sample: first parameter outside the chart");
    if (!ch.periodic2 && (s2 < ch.s2_min - slack || s2 > ch.s2_max + slack))
        throw InvalidArgument("sample: second parameter outside the chart");

    ChartJet j;
    if (kind_ == SurfaceKind::ellipsoid) {
        const double a = params_[0], b = params_.size() > 1 ? params_[1] : a, cc = params_.size() > 2 ? params_[2] : a;
        const double st = std::sin(s1), ct = std::cos(s1), sp = std::sin(s2), cp = std::cos(s2);
        // unit-sphere jet in the chart's own axis ordering, then scaled
        Vec3 r(st * cp, st * sp, ct), r1(ct * cp, ct * sp, -st), r2(-st * sp, st * cp, 0.0);
        Vec3 r12(-ct * sp, ct * cp, 0.0), r22(-st * cp, -st * sp, 0.0);
        if (c == 1) {
            // polar axis along x: (cos t, sin t cos p, sin t sin p)
            r = Vec3(ct, st * cp, st * sp);
            r1 = Vec3(-st, ct * cp, ct * sp);
            r2 = Vec3(0.0, -st * sp, st * cp);
            r12 = Vec3(0.0, -ct * sp, ct * cp);
            r22 = Vec3(0.0, -st * cp, -st * sp);
        }
        const Vec3 d(a, b, cc);
        j.r = r.cwiseProduct(d);
        j.r1 = r1.cwiseProduct(d);
        j.r2 = r2.cwiseProduct(d);
        j.r11 = -j.r;
        j.r12 = r12.cwiseProduct(d);
        j.r22 = r22.cwiseProduct(d);
    } else {
        const double R = params_[0], r = params_[1];
        const double su = std::sin(s1), cu = std::cos(s1), sv = std::sin(s2), cv = std::cos(s2);
        const double rho = R + r * cv;
        j.r = Vec3(rho * cu, rho * su, r * sv);
        j.r1 = Vec3(-rho * su, rho * cu, 0.0);
        j.r2 = Vec3(-r * sv * cu, -r * sv * su, r * cv);
        j.r11 = Vec3(-rho * cu, -rho * su, 0.0);
        j.r12 = Vec3(r * sv * su, -r * sv * cu, 0.0);
        j.r22 = Vec3(-r * cv * cu, -r * cv * su, -r * sv);
    }
    return j;
}

std::array<double, 2> ParamSurface::locate(int c, const Vec3& p) const {
    chart(c);
    if (kind_ == SurfaceKind::ellipsoid) {
        const double a = params_[0], b = params_[1], cc = params_[2];
        const Vec3 q(p.x() / a, p.y() / b, p.z() / cc);
        if (c == 0) return {std::acos(std::clamp(q.z() / q.norm(), -1.0, 1.0)), wrap(std::atan2(q.y(), q.x()))};
        return {std::acos(std::clamp(q.x() / q.norm(), -1.0, 1.0)), wrap(std::atan2(q.z(), q.y()))};
    }
    const double R = params_[0];
    const double rho = std::hypot(p.x(), p.y());
    return {wrap(std::atan2(p.y(), p.x())), wrap(std::atan2(p.z(), rho - R))};
}

ParamSurface build_ellipsoid(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0) || !std::isfinite(a * b * c))
        throw InvalidArgument("build_ellipsoid: semi-axes must be positive");
    ParamSurface s;
    s.kind_ = SurfaceKind::ellipsoid;
    s.name_ = "ellipsoid";
    s.params_ = {a, b, c};
    const Chart polar{0.0, std::numbers::pi, 0.0, two_pi, false, true};
    s.charts_ = {polar, polar};
    return s;
}

ParamSurface build_sphere(double R) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("build_sphere: radius must be positive");
    ParamSurface s = build_ellipsoid(R, R, R);
    s.name_ = "sphere";
    return s;
}

ParamSurface build_torus(double R_major, double r_minor) {
    if (!(r_minor > 0.0) || !(R_major > r_minor) || !std::isfinite(R_major))
        throw InvalidArgument("build_torus: need 0 < r_minor < R_major");
    ParamSurface s;
    s.kind_ = SurfaceKind::torus;
    s.name_ = "torus";
    s.params_ = {R_major, r_minor};
    s.charts_ = {Chart{0.0, two_pi, 0.0, two_pi, true, true}};
    return s;
}

ParamSurface parse_surface(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    const std::string name = descriptor.substr(0, colon);
    const std::vector<double> p =
        colon == std::string::npos ? std::vector<double>{} : parse_numbers(descriptor.substr(colon + 1));
    if (name == "sphere") {
        if (p.size() > 1) throw InvalidArgument("sphere takes one radius");
        return build_sphere(p.empty() ? 1.0 : p[0]);
    }
    if (name == "ellipsoid") {
        if (p.size() != 3) throw InvalidArgument("ellipsoid takes three semi-axes");
        return build_ellipsoid(p[0], p[1], p[2]);
    }
    if (name == "torus") {
        if (p.size() != 2 && !p.empty()) throw InvalidArgument("torus takes R_major,r_minor");
        return p.empty() ? build_torus(2.0, 1.0) : build_torus(p[0], p[1]);
    }
    throw InvalidArgument("unknown surface '" + name + "' (expected sphere, ellipsoid or torus)");
}

GeomSample sample(const ParamSurface& surface, int chart, double s1, double s2) {
    const ChartJet j = surface.jet(chart, s1, s2);
    GeomSample s;
    s.point = j.r;
    s.t1 = j.r1;
    s.t2 = j.r2;
    const Vec3 n = j.r1.cross(j.r2);
    const double area = n.norm();
    const double scale = j.r1.squaredNorm() + j.r2.squaredNorm();
    if (!(area > 1e-12 * scale)) throw InvalidArgument("sample: degenerate chart point (use the other chart)");
    s.nu = UnitVector3::normalized(n);
    s.g << j.r1.dot(j.r1), j.r1.dot(j.r2), j.r2.dot(j.r1), j.r2.dot(j.r2);
    s.g_inv = s.g.inverse();
    s.sqrt_det_g = area;
    const Vec3& nu = s.nu.vec();
    Eigen::Matrix2d h;
    h << -nu.dot(j.r11), -nu.dot(j.r12), -nu.dot(j.r12), -nu.dot(j.r22);
    s.S = s.g_inv * h;
    s.dnu1 = s.S(0, 0) * j.r1 + s.S(1, 0) * j.r2;
    s.dnu2 = s.S(0, 1) * j.r1 + s.S(1, 1) * j.r2;
    s.M = 0.5 * s.S.trace();
    s.K = s.S.determinant();
    return s;
}

double tubular_jacobian(const GeomSample& s, double t) { return 1.0 - 2.0 * t * s.M + t * t * s.K; }

std::pair<Vec3, Vec3> yang_mills_vectors(const GeomSample& s) {
    const Vec3& nu = s.nu.vec();
    return {nu.cross(s.dnu1), nu.cross(s.dnu2)};
}

std::pair<PauliMatrix, PauliMatrix> yang_mills_form(const GeomSample& s) {
    const auto [c1, c2] = yang_mills_vectors(s);
    return {sigma_dot(c1), sigma_dot(c2)};
}

SurfaceGrid build_grid(const ParamSurface& surface, int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw InvalidArgument("build_grid: need at least 2 nodes per direction");
    SurfaceGrid grid;
    grid.surface = surface;
    grid.n1 = n1;
    grid.n2 = n2;
    const Chart& ch = surface.chart(0);
    if (surface.kind() == SurfaceKind::ellipsoid) {
        // Gauss-Legendre in cos(theta): exact for products of spherical harmonics
        const Rule1D x = gauss_legendre(n1, -1.0, 1.0);
        grid.rule1.x.resize(n1);
        grid.rule1.w.resize(n1);
        for (int i = 0; i < n1; ++i) {
            const double xi = x.x[n1 - 1 - i];
            grid.rule1.x[i] = std::acos(xi);
            grid.rule1.w[i] = x.w[n1 - 1 - i] / std::sqrt(1.0 - xi * xi);
        }
    } else {
        grid.rule1 = ch.periodic1 ? periodic_trapezoid(n1, ch.s1_min, ch.s1_max)
                                  : gauss_legendre(n1, ch.s1_min, ch.s1_max);
    }
    grid.rule2 = ch.periodic2 ? periodic_trapezoid(n2, ch.s2_min, ch.s2_max) : gauss_legendre(n2, ch.s2_min, ch.s2_max);
    grid.nodes.reserve(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i)
        for (int k = 0; k < n2; ++k) {
            GridNode nd;
            nd.chart = 0;
            nd.i1 = i;
            nd.i2 = k;
            nd.s1 = grid.rule1.x[i];
            nd.s2 = grid.rule2.x[k];
            nd.geom = sample(surface, 0, nd.s1, nd.s2);
            nd.weight = grid.rule1.w[i] * grid.rule2.w[k] * nd.geom.sqrt_det_g;
            grid.nodes.push_back(nd);
        }
    return grid;
}

double surface_area(const SurfaceGrid& grid) {
    double a = 0.0;
    for (const auto& n : grid.nodes) a += n.weight;
    return a;
}

cplx quadrature(const SurfaceGrid& grid, const std::function<cplx(const GeomSample&)>& f) {
    cplx acc = 0.0;
    for (const auto& n : grid.nodes) acc += n.weight * f(n.geom);
    return acc;
}

}  // namespace shellspectra
