#include "shellspectra/sphere_modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "shellspectra/bessel.hpp"
#include "shellspectra/errors.hpp"
#include "shellspectra/oned_models.hpp"
#include "shellspectra/parallel.hpp"
#include "shellspectra/quadrature.hpp"
#include "shellspectra/spherical_harmonics.hpp"

namespace shellspectra {

void ShellConfig::validate() const {
    if (!(std::isfinite(m) && m != 0.0)) throw InvalidArgument("ShellConfig: m must be finite and nonzero");
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument("ShellConfig: R must be positive");
    if (!std::isfinite(tau) || tau == 0.0) throw InvalidArgument("ShellConfig: tau must be finite and nonzero");
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
    if (kappa_max && *kappa_max < 1) throw InvalidArgument("ShellConfig: kappa_max must be >= 1");
    if (lambda_grid && *lambda_grid < 8) throw InvalidArgument("ShellConfig: lambda grid must have >= 8 points");
}

int ShellConfig::channel_bound() const {
    if (kappa_max) return *kappa_max;
    return static_cast<int>(std::ceil(2.0 * mu_of_tau(tau) * std::abs(m) * R)) + 8;
}

int ShellConfig::scan_points() const {
    if (lambda_grid) return *lambda_grid;
    return 4 * static_cast<int>(std::ceil(std::abs(m) * R)) + 64;
}

RadialChannel radial_channel(int kappa) {
    if (kappa == 0) throw InvalidArgument("radial_channel: kappa must be nonzero");
    RadialChannel ch;
    ch.kappa = kappa;
    ch.l_upper = kappa > 0 ? kappa : -kappa - 1;
    ch.l_lower = kappa > 0 ? kappa - 1 : -kappa;
    return ch;
}

std::string to_string(ModeSolver s) { return s == ModeSolver::shooting ? "shooting" : "birman-schwinger"; }

Eigen::Matrix2d radial_b() {
    Eigen::Matrix2d b;
    b << 0.0, -1.0, -1.0, 0.0;
    return b;
}

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> radial_jump_matrices(double tau) {
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
    const Eigen::Matrix2d h = 0.5 * tau * Eigen::Matrix2d::Identity();
    return {h - radial_b(), h + radial_b()};
}

namespace {

double gap_momentum(double m, double lambda) {
    const double am = std::abs(m);
    if (!(std::abs(lambda) < am)) throw InvalidArgument("spectral parameter must lie inside the gap (-|m|, |m|)");
    return std::sqrt((am - lambda) * (am + lambda));
}

}  // namespace

MatchingData matching_data(const ShellConfig& cfg, int kappa, double lambda) {
    const RadialChannel ch = radial_channel(kappa);
    MatchingData d;
    d.q = gap_momentum(cfg.m, lambda);
    const double s = d.q / (cfg.m + lambda);
    const double x = d.q * cfg.R;
    d.a = s * bessel_i_order_ratio(ch.l_lower, ch.l_upper, x);
    d.c = s * bessel_k_order_ratio(ch.l_lower, ch.l_upper, x);
    return d;
}

double channel_determinant(const ShellConfig& cfg, int kappa, double lambda) {
    const MatchingData d = matching_data(cfg, kappa, lambda);
    const double t = cfg.tau;
    return -t - (1.0 + 0.25 * t * t) * (d.a + d.c) - t * d.a * d.c;
}

double channel_determinant_scale(const ShellConfig& cfg, int kappa, double lambda) {
    const MatchingData d = matching_data(cfg, kappa, lambda);
    const double t = std::abs(cfg.tau);
    return t + (1.0 + 0.25 * t * t) * (std::abs(d.a) + std::abs(d.c)) + t * std::abs(d.a * d.c);
}

std::vector<ModeResult> channel_modes(const ShellConfig& cfg, int kappa) {
    cfg.validate();
    const double am = std::abs(cfg.m);
    const int n = cfg.scan_points();
    const double edge = am * (1.0 - 1e-9);
    std::vector<double> grid;
    grid.reserve(n + 2);
    grid.push_back(-edge);
    for (int i = 1; i <= n; ++i) grid.push_back(am * (-1.0 + 2.0 * i / (n + 1.0)));
    grid.push_back(edge);

    auto det = [&](double l) { return channel_determinant(cfg, kappa, l); };
    std::vector<double> roots;
    double prev = det(grid[0]);
    if (prev == 0.0) roots.push_back(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = det(grid[i]);
        if (cur == 0.0) {
            roots.push_back(grid[i]);
        } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
            double lo = grid[i - 1], hi = grid[i], flo = prev;
            while (hi - lo > 1e-14 * am) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = det(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    std::vector<ModeResult> out;
    for (double l : roots) {
        ModeResult r;
        r.lambda = l;
        r.kappa = kappa;
        r.multiplicity = 2 * std::abs(kappa);
        r.residual = std::abs(det(l)) / channel_determinant_scale(cfg, kappa, l);
        r.solver = ModeSolver::shooting;
        out.push_back(r);
    }
    return out;
}

int ShellSpectrum::total_multiplicity() const {
    int n = 0;
    for (const auto& m : modes) n += m.multiplicity;
    return n;
}

ShellSpectrum full_spectrum(const ShellConfig& cfg) {
    cfg.validate();
    ShellSpectrum out;
    out.config = cfg;
    const int bound = cfg.channel_bound();

    auto scan = [&](int k_from, int k_to, std::vector<std::vector<ModeResult>>& per_k) {
        const int count = k_to - k_from + 1;
        std::vector<std::vector<ModeResult>> slots(2 * count);
        parallel_for(slots.size(), [&](std::size_t i) {
            const int K = k_from + static_cast<int>(i / 2);
            slots[i] = channel_modes(cfg, (i % 2) ? K : -K);
        });
        for (int k = 0; k < count; ++k) {
            std::vector<ModeResult> both = slots[2 * k];
            both.insert(both.end(), slots[2 * k + 1].begin(), slots[2 * k + 1].end());
            per_k.push_back(std::move(both));
        }
    };

    std::vector<std::vector<ModeResult>> per_k;
    scan(1, bound, per_k);
    if (!cfg.kappa_max) {
        // keep going until two consecutive empty channels past the bound
        const int hard_limit = 4 * bound + 64;
        auto empty_tail = [&] {
            const std::size_t n = per_k.size();
            return n >= 2 && per_k[n - 1].empty() && per_k[n - 2].empty();
        };
        while (!empty_tail() && static_cast<int>(per_k.size()) < hard_limit) {
            const int K = static_cast<int>(per_k.size()) + 1;
            scan(K, K, per_k);
        }
        out.truncation_warning = !empty_tail();
    } else {
        out.truncation_warning = !per_k.back().empty();
    }
    out.channels_scanned = static_cast<int>(per_k.size());
    for (auto& v : per_k) out.modes.insert(out.modes.end(), v.begin(), v.end());
    std::sort(out.modes.begin(), out.modes.end(), [](const ModeResult& a, const ModeResult& b) {
        return a.lambda != b.lambda ? a.lambda < b.lambda : a.kappa < b.kappa;
    });
    return out;
}

std::vector<double> positive_eigenvalues(const ShellSpectrum& s) {
    std::vector<double> v;
    for (const auto& m : s.modes)
        if (m.lambda > 0.0) v.insert(v.end(), m.multiplicity, m.lambda);
    std::sort(v.begin(), v.end());
    return v;
}

// ---------------------------------------------------------------------------
// Radial ODE

namespace {

using State = std::array<double, 2>;

double double_factorial_ratio(int l_num, int l_den) {
    // (2 l_num + 1)!! / (2 l_den + 1)!! for |l_num - l_den| <= 1
    if (l_num == l_den) return 1.0;
    if (l_num == l_den + 1) return 2.0 * l_num + 1.0;
    return 1.0 / (2.0 * l_den + 1.0);
}

// x^{-l} (2l+1)!! i_l(x) by its power series
double i_series_normalized(int l, double x) {
    double t = 1.0, s = 1.0;
    for (int k = 1; k < 500; ++k) {
        t *= 0.5 * x * x / (k * (2.0 * l + 2.0 * k + 1.0));
        s += t;
        if (t < 1e-17 * s) break;
    }
    return s;
}

// e^{x} k_l(x) from the terminating expansion
double k_exact_scaled(int l, double x) {
    double c = 1.0, p = 1.0, s = 1.0;
    for (int k = 1; k <= l; ++k) {
        c *= double(l + k) * double(l - k + 1) / double(k);
        p /= 2.0 * x;
        s += c * p;
    }
    return std::numbers::pi / (2.0 * x) * s;
}

}  // namespace

RadialSolution integrate_radial_ode(const ShellConfig& cfg, int kappa, double lambda, RadialDirection dir,
                                    double rtol) {
    namespace ode = boost::numeric::odeint;
    cfg.validate();
    const RadialChannel ch = radial_channel(kappa);
    const double q = gap_momentum(cfg.m, lambda);
    const double s = q / (cfg.m + lambda);
    const double m = cfg.m, R = cfg.R;
    const bool outward = dir == RadialDirection::outward_from_origin;
    const double shift = outward ? -q : q;

    auto rhs = [&](const State& y, State& dy, double r) {
        dy[0] = -kappa / r * y[0] + (m + lambda) * y[1] + shift * y[0];
        dy[1] = kappa / r * y[1] + (m - lambda) * y[0] + shift * y[1];
    };

    RadialSolution out;
    out.direction = dir;
    out.q = q;
    double r0;
    State y;
    if (outward) {
        // bound the growth r^{l+1} between start and R
        r0 = R * std::max(1e-3, std::pow(10.0, -250.0 / (ch.l_upper + 1.0)));
        r0 = std::min(r0, 1e-3 / q);
        const double x = q * r0;
        // divide both components by x^{l_upper} / (2 l_upper + 1)!!
        const double lower_factor =
            std::pow(x, ch.l_lower - ch.l_upper) / double_factorial_ratio(ch.l_lower, ch.l_upper);
        y[0] = r0 * i_series_normalized(ch.l_upper, x) * std::exp(-x);
        y[1] = s * r0 * lower_factor * i_series_normalized(ch.l_lower, x) * std::exp(-x);
    } else {
        r0 = R + 40.0 / q;
        const double x = q * r0;
        y[0] = r0 * k_exact_scaled(ch.l_upper, x);
        y[1] = -s * r0 * k_exact_scaled(ch.l_lower, x);
    }
    const int samples = 64;
    std::vector<double> times(samples + 1);
    for (int i = 0; i <= samples; ++i) times[i] = r0 + (R - r0) * i / samples;
    times.back() = R;
    std::vector<double> rr, gg, ff;
    auto observe = [&](const State& st, double r) {
        rr.push_back(r);
        gg.push_back(st[0]);
        ff.push_back(st[1]);
    };
    const double dt0 = (R - r0) / 1000.0;
    try {
        ode::integrate_times(ode::make_controlled(1e-300, rtol, ode::runge_kutta_dopri5<State>()), rhs, y,
                             times.begin(), times.end(), dt0, observe);
    } catch (const std::exception& e) {
        throw NumericalFailure(std::string("integrate_radial_ode: ") + e.what());
    }
    if (!outward) {
        std::reverse(rr.begin(), rr.end());
        std::reverse(gg.begin(), gg.end());
        std::reverse(ff.begin(), ff.end());
    }
    out.r = std::move(rr);
    out.G = std::move(gg);
    out.F = std::move(ff);
    return out;
}

// ---------------------------------------------------------------------------
// Quadratic form

namespace {

struct ModeField {
    int kappa;
    RadialChannel ch;
    double q, R;
    double A, C;  // G(R) on each side
    double a, c;  // F/G at R: inner a, outer -c
    double iG, iF, kG, kF;  // log of the Bessel values at qR

    // g = G/r and f = F/r on the requested side, at radius r
    std::pair<double, double> radial(double r, bool inner) const {
        const double x = q * r;
        if (inner) {
            const double g = A * std::exp(bessel_i_scaled(ch.l_upper, x).log_abs() - iG) / R;
            const double f = A * a * std::exp(bessel_i_scaled(ch.l_lower, x).log_abs() - iF) / R;
            return {g, f};
        }
        const double g = C * std::exp(bessel_k_scaled(ch.l_upper, x).log_abs() - kG) / R;
        const double f = -C * c * std::exp(bessel_k_scaled(ch.l_lower, x).log_abs() - kF) / R;
        return {g, f};
    }

    Spinor value(const Vec3& p, bool inner) const {
        const double r = p.norm();
        const double th = std::acos(std::clamp(p.z() / r, -1.0, 1.0));
        const double ph = std::atan2(p.y(), p.x());
        const auto [g, f] = radial(r, inner);
        const Spinor2 up = spinor_harmonic(kappa, 0.5, th, ph);
        const Spinor2 lo = spinor_harmonic(-kappa, 0.5, th, ph);
        Spinor u;
        u << g * up(0), g * up(1), cplx(0, f) * lo(0), cplx(0, f) * lo(1);
        return u;
    }
};

ModeField build_field(const ShellConfig& cfg, const ModeResult& mode) {
    ModeField fld;
    fld.kappa = mode.kappa;
    fld.ch = radial_channel(mode.kappa);
    const MatchingData d = matching_data(cfg, mode.kappa, mode.lambda);
    fld.q = d.q;
    fld.R = cfg.R;
    fld.a = d.a;
    fld.c = d.c;
    const auto [Pm, Pp] = radial_jump_matrices(cfg.tau);
    Eigen::Matrix2d Mx;
    Mx.col(0) = Pm * Eigen::Vector2d(1.0, d.a);
    Mx.col(1) = Pp * Eigen::Vector2d(1.0, -d.c);
    // null vector of the (numerically) singular matching matrix
    const int row = Mx.row(0).norm() >= Mx.row(1).norm() ? 0 : 1;
    fld.A = Mx(row, 1);
    fld.C = -Mx(row, 0);
    const double nrm = std::hypot(fld.A, fld.C);
    fld.A /= nrm;
    fld.C /= nrm;
    const double x = d.q * cfg.R;
    fld.iG = bessel_i_scaled(fld.ch.l_upper, x).log_abs();
    fld.iF = bessel_i_scaled(fld.ch.l_lower, x).log_abs();
    fld.kG = bessel_k_scaled(fld.ch.l_upper, x).log_abs();
    fld.kF = bessel_k_scaled(fld.ch.l_lower, x).log_abs();
    return fld;
}

struct FormTerms {
    double norm2 = 0.0, grad2 = 0.0, jump = 0.0, curv = 0.0;
};

FormTerms form_terms(const ShellConfig& cfg, const ModeField& fld, int nr_in, int panels_out, int nr_panel,
                     int n_theta, int n_phi) {
    const double R = cfg.R;
    const Rule1D ct = gauss_legendre(n_theta, -1.0, 1.0);
    const Rule1D ph = periodic_trapezoid(n_phi, 0.0, 2.0 * std::numbers::pi, 0.37);
    std::vector<Vec3> dirs;
    std::vector<double> dw;
    for (int i = 0; i < n_theta; ++i)
        for (int k = 0; k < n_phi; ++k) {
            const double st = std::sqrt(1.0 - ct.x[i] * ct.x[i]);
            dirs.emplace_back(st * std::cos(ph.x[k]), st * std::sin(ph.x[k]), ct.x[i]);
            dw.push_back(ct.w[i] * ph.w[k]);
        }
    struct RadNode {
        double r, w;
        bool inner;
    };
    std::vector<RadNode> rad;
    const Rule1D ri = gauss_legendre(nr_in, 0.0, R);
    for (std::size_t i = 0; i < ri.x.size(); ++i) rad.push_back({ri.x[i], ri.w[i] * ri.x[i] * ri.x[i], true});
    const double L = 40.0 / fld.q;
    for (int p = 0; p < panels_out; ++p) {
        const Rule1D ro = gauss_legendre(nr_panel, R + L * p / panels_out, R + L * (p + 1) / panels_out);
        for (std::size_t i = 0; i < ro.x.size(); ++i) rad.push_back({ro.x[i], ro.w[i] * ro.x[i] * ro.x[i], false});
    }
    const double h = 1e-2 * std::min(1.0 / fld.q, R);

    std::vector<FormTerms> part(rad.size());
    parallel_for(rad.size(), [&](std::size_t ir) {
        const RadNode& nd = rad[ir];
        FormTerms t;
        for (std::size_t a = 0; a < dirs.size(); ++a) {
            const Vec3 p = nd.r * dirs[a];
            const double w = nd.w * dw[a];
            t.norm2 += w * fld.value(p, nd.inner).squaredNorm();
            for (int d = 0; d < 3; ++d) {
                Vec3 e = Vec3::Zero();
                e(d) = h;
                const Spinor g = (8.0 * (fld.value(p + e, nd.inner) - fld.value(p - e, nd.inner)) -
                                  (fld.value(p + 2 * e, nd.inner) - fld.value(p - 2 * e, nd.inner))) /
                                 (12.0 * h);
                t.grad2 += w * g.squaredNorm();
            }
        }
        part[ir] = t;
    });
    FormTerms tot;
    for (const auto& t : part) {
        tot.norm2 += t.norm2;
        tot.grad2 += t.grad2;
    }
    for (std::size_t a = 0; a < dirs.size(); ++a) {
        const Vec3 p = R * dirs[a];
        const Spinor up = fld.value(p, true), um = fld.value(p, false);
        const double w = R * R * dw[a];
        tot.jump += w * (up - um).squaredNorm();
        tot.curv += w * (1.0 / R) * (up.squaredNorm() - um.squaredNorm());
    }
    return tot;
}

}  // namespace

FormCheck quadratic_form_check(const ShellConfig& cfg, const ModeResult& mode) {
    cfg.validate();
    if (!(std::abs(mode.lambda) < std::abs(cfg.m))) throw InvalidArgument("quadratic_form_check: lambda outside the gap");
    const ModeField fld = build_field(cfg, mode);
    const int ang = std::abs(mode.kappa);
    auto evaluate = [&](int level) {
        const FormTerms t = form_terms(cfg, fld, 24 + 16 * level, 4 + 2 * level, 20 + 10 * level, 10 + 2 * ang + 2 * level,
                                       8 + 2 * ang + 2 * level);
        FormCheck c;
        c.norm2 = t.norm2;
        c.gradient2 = t.grad2;
        c.jump_term = 2.0 * cfg.m / cfg.tau * t.jump;
        c.curvature_term = t.curv;
        c.lhs = mode.lambda * mode.lambda * t.norm2;
        c.rhs = t.grad2 + cfg.m * cfg.m * t.norm2 + c.jump_term + c.curvature_term;
        c.deviation = std::abs(c.lhs - c.rhs) / std::abs(c.lhs);
        return c;
    };
    const FormCheck coarse = evaluate(0);
    FormCheck fine = evaluate(1);
    fine.refinement_gap = std::abs(fine.rhs - coarse.rhs) / std::abs(fine.rhs);
    return fine;
}

}  // namespace shellspectra
