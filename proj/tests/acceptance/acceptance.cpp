// Acceptance runner: one line per criterion, "PASS" or "FAIL" plus the measured numbers.
// Usage: acceptance [c01 ... c11 | all]. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "shellspectra/asymptotics.hpp"
#include "shellspectra/effective_operator.hpp"
#include "shellspectra/layer_potentials.hpp"
#include "shellspectra/oned_models.hpp"
#include "shellspectra/sphere_modes.hpp"
#include "shellspectra/spinor_algebra.hpp"
#include "shellspectra/surface_geometry.hpp"
#include "support/generators.hpp"

using namespace shellspectra;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double dist(const SpinorMatrix& a, const SpinorMatrix& b) { return (a - b).norm(); }

ShellConfig shell(double m, double tau) {
    ShellConfig c;
    c.m = m;
    c.tau = tau;
    return c;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b, std::size_t n) {
    double d = 0.0;
    for (std::size_t i = 0; i < n && i < a.size() && i < b.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

Outcome matrix_identities() {
    testgen::Gen g(1001);
    const cplx I(0.0, 1.0);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const UnitVector3 nu(g.unit3());
        const double tau = g.tau();
        const Vec3 x = g.vec3(), y = g.vec3();
        for (int j = 0; j <= 3; ++j)
            for (int k = 0; k <= 3; ++k)
                worst = std::max(worst, dist(alpha(j) * alpha(k) + alpha(k) * alpha(j),
                                             (j == k ? 2.0 : 0.0) * identity4()));
        for (int j = 1; j <= 3; ++j) worst = std::max(worst, dist(gamma5() * alpha(j), alpha(j) * gamma5()));
        worst = std::max(worst, dist(gamma5() * beta(), -beta() * gamma5()));
        const double sxy = x.norm() * y.norm();
        worst = std::max(worst, dist(alpha_dot(x) * alpha_dot(y),
                                     x.dot(y) * identity4() + I * gamma5() * alpha_dot(x.cross(y))) / sxy);
        const SpinorMatrix B = shell_matrix_B(nu), t0 = theta0(nu);
        worst = std::max(worst, dist(t0 * t0.adjoint(), identity4()));
        worst = std::max(worst, dist(t0 * beta() * t0.adjoint(), B));
        const SpinorMatrix rp = r_tau(Sign::plus, tau, nu), rm = r_tau(Sign::minus, tau, nu);
        const SpinorMatrix pp = p_tau(Sign::plus, tau, nu), pm = p_tau(Sign::minus, tau, nu);
        const double s = rp.norm();
        worst = std::max(worst, dist(rp * B, B * rp) / s);
        worst = std::max(worst, dist(rm * B, B * rm) / s);
        worst = std::max(worst, dist(rp * gamma5(), gamma5() * rm) / s);
        worst = std::max(worst, dist(rm * gamma5(), gamma5() * rp) / s);
        worst = std::max(worst, dist(rp * rm, identity4()) / (s * s));
        worst = std::max(worst, dist(pm * rp, -pp) / (s * pm.norm()));
        worst = std::max(worst, dist(pp * rm, -pm) / (s * pp.norm()));
        const double k = 2.0 * (tau * tau + 4.0) / (4.0 - tau * tau);
        worst = std::max(worst, dist(rp * rp + identity4(), k * rp) / (s * s));
    }
    return {worst <= 1e-13, "1000 random inputs, max relative deviation " + fmt("%.2e", worst)};
}

Outcome oned_asymptotics() {
    const double tau = -1.0, mu = mu_of_tau(tau);
    double worst = 0.0;
    for (double md : {5.0, 10.0, 20.0, 40.0}) {
        OneDProblem p;
        p.tau = tau;
        p.delta = 1.0;
        p.m = md;
        const double bound = std::exp(-2.0 * mu * md);
        worst = std::max(worst, std::abs(relative_energy_defect(solve_dirichlet_ground(p))) / bound);
        p.robin_c = 0.1;
        worst = std::max(worst, std::abs(relative_energy_defect(solve_robin_ground(p))) / bound);
    }
    return {worst <= 3.0, "max |E1 + mu^2 m^2|/(mu^2 m^2 e^{-2 mu m delta}) = " + fmt("%.4f", worst) + " (limit 3)"};
}

Outcome sphere_exactness() {
    const int order = 32;
    const HermitianSpectrum s = solve_pencil(assemble_bochner(effective_grid(build_sphere(1.0), order), 0.0, order), 72);
    double err = 0.0;
    bool mult_ok = s.groups.size() >= 6;
    int idx = 0;
    for (int l = 0; l <= 5; ++l) {
        const int mult = 2 * (2 * l + 1);
        for (int k = 0; k < mult; ++k, ++idx) err = std::max(err, std::abs(s.eigenvalues[idx] - l * (l + 1.0)));
        if (mult_ok && s.groups[l].multiplicity != mult) mult_ok = false;
    }
    return {err <= 1e-6 && mult_ok,
            "l <= 5 at order 32: max error " + fmt("%.2e", err) + (mult_ok ? ", multiplicities 2(2l+1)" : ", multiplicity mismatch")};
}

Outcome effective_symmetries() {
    const ParamSurface e = build_ellipsoid(1.0, 1.0, 1.3);
    const int order = 24;
    const SurfaceGrid g = effective_grid(e, order);
    const auto l3 = solve_pencil(assemble_bochner(g, 0.3, order), 40);
    const auto l7 = solve_pencil(assemble_bochner(g, 0.7, order), 40);
    const double d_theta = max_diff(l3.eigenvalues, l7.eigenvalues, 40);
    const auto u1 = solve_pencil(assemble_upsilon(g, -1.0, order), 40);
    const auto u4 = solve_pencil(assemble_upsilon(g, -4.0, order), 40);
    const double d_tau = max_diff(u1.eigenvalues, u4.eigenvalues, 40);
    bool even = true;
    for (const auto& gr : u1.groups)
        if (gr.first_index + gr.multiplicity < 40 && gr.multiplicity % 2) even = false;
    // the two discretizations agree only as the basis converges: 3e-4 at order 12, 3e-8 at 20
    const int lo = 20;
    const SurfaceGrid gl = effective_grid(e, lo);
    const auto uu = solve_pencil(assemble_upsilon(gl, -1.0, lo), 20);
    const auto ll = solve_pencil(assemble_intermediate(gl, -1.0, lo), 40);
    const double d_int = max_diff(doubled(uu.eigenvalues), ll.eigenvalues, 40);
    std::ostringstream os;
    os << "ellipsoid(1,1,1.3): |Lambda(0.3)-Lambda(0.7)| " << fmt("%.2e", d_theta) << ", |Y(-1)-Y(-4)| "
       << fmt("%.2e", d_tau) << ", even multiplicities " << (even ? "yes" : "no") << ", |L - (Y+Y)| "
       << fmt("%.2e", d_int);
    return {d_theta <= 1e-7 && d_tau <= 1e-7 && even && d_int <= 1e-6, os.str()};
}

Outcome field_strength() {
    const SurfaceGrid sph = build_grid(build_sphere(1.0), 10, 16);
    const SurfaceGrid tor = build_grid(build_torus(2.0, 1.0), 12, 12);
    double worst = 0.0;
    for (double th : {0.3, 0.5, 0.8})
        worst = std::max({worst, connection_curvature_check(sph, th), connection_curvature_check(tor, th)});
    return {worst <= 1e-6, "sphere and torus, theta in {0.3, 0.5, 0.8}: max deviation " + fmt("%.2e", worst)};
}

Outcome shell_symmetries() {
    const ShellSpectrum a = full_spectrum(shell(10.0, -1.0));
    double sym = 0.0;
    bool even = true;
    for (std::size_t i = 0; i < a.modes.size(); ++i) {
        sym = std::max(sym, std::abs(a.modes[i].lambda + a.modes[a.modes.size() - 1 - i].lambda));
        if (a.modes[i].multiplicity % 2) even = false;
    }
    const ShellSpectrum b = full_spectrum(shell(10.0, -4.0));
    const ShellSpectrum c = full_spectrum(shell(10.0, 1.0));
    const ShellSpectrum d = full_spectrum(shell(-10.0, 1.0));
    double d4 = b.modes.size() == a.modes.size() ? 0.0 : INFINITY, dn = d.modes.size() == a.modes.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < a.modes.size() && std::isfinite(d4) && std::isfinite(dn); ++i) {
        d4 = std::max(d4, std::abs(a.modes[i].lambda - b.modes[i].lambda));
        dn = std::max(dn, std::abs(a.modes[i].lambda - d.modes[i].lambda));
    }
    std::ostringstream os;
    os << a.modes.size() << " levels; asymmetry " << fmt("%.1e", sym) << ", even " << (even ? "yes" : "no")
       << ", |tau=-1 vs -4| " << fmt("%.1e", d4) << ", tau=+1 levels " << c.modes.size() << ", |(10,-1) vs (-10,1)| "
       << fmt("%.1e", dn);
    const bool ok = !a.modes.empty() && sym <= 1e-9 * 10 && even && d4 <= 1e-9 * 10 && c.modes.empty() && dn <= 1e-9 * 10;
    return {ok, os.str()};
}

Outcome quadratic_form() {
    const ShellConfig c = shell(10.0, -1.0);
    const ShellSpectrum s = full_spectrum(c);
    std::vector<ModeResult> pos;
    for (const auto& md : s.modes)
        if (md.lambda > 0.0) pos.push_back(md);
    if (pos.size() < 3) return {false, "fewer than three positive levels"};
    double dev = 0.0, gap = 0.0;
    for (int i = 0; i < 3; ++i) {
        const FormCheck f = quadratic_form_check(c, pos[i]);
        dev = std::max(dev, f.deviation);
        gap = std::max(gap, f.refinement_gap);
    }
    return {dev <= 1e-6 && gap <= 1e-6,
            "three lowest positive levels: max relative deviation " + fmt("%.2e", dev) + ", refinement change " +
                fmt("%.2e", gap)};
}

Outcome cross_solver() {
    const double m = 6.0, tau = -1.0, tol = 1e-2 * m;
    const ShellSpectrum s = full_spectrum(shell(m, tau));
    const SurfaceGrid g = build_grid(build_sphere(1.0), 20, 40);
    const BSScan scan = bs_search(g, m, tau, -0.999 * m, 0.999 * m, 200);
    double worst_shoot = 0.0, worst_cand = 0.0;
    for (const auto& md : s.modes) {
        double best = INFINITY;
        for (double c : scan.candidates) best = std::min(best, std::abs(c - md.lambda));
        worst_shoot = std::max(worst_shoot, best);
    }
    for (double c : scan.candidates) {
        double best = INFINITY;
        for (const auto& md : s.modes) best = std::min(best, std::abs(c - md.lambda));
        worst_cand = std::max(worst_cand, best);
    }
    std::ostringstream os;
    os << "N = " << g.size() << ": " << s.modes.size() << " shooting levels, " << scan.candidates.size()
       << " candidates; worst shooting->candidate " << fmt("%.4f", worst_shoot) << ", candidate->shooting "
       << fmt("%.4f", worst_cand) << " (limit " << fmt("%.2f", tol) << ")";
    return {!s.modes.empty() && worst_shoot <= tol && worst_cand <= tol, os.str()};
}

Outcome two_term() {
    const AsymptoticReport r = sphere_asymptotics(-1.0, 1.0, {10.0, 20.0, 40.0, 80.0}, 10, 16);
    double smax = 0.0;
    for (const auto& row : r.scaled) smax = std::max(smax, std::abs(row[0]));
    const bool bounded = std::abs(r.scaled.back()[0]) <= 2.0 * std::abs(r.scaled.front()[0]);
    std::ostringstream os;
    os << "|r1| m^2/log m: ";
    for (const auto& row : r.scaled) os << fmt("%.2e ", std::abs(row[0]));
    os << "(max " << fmt("%.2e", smax) << "); slope " << fmt("%.3f", r.fit.slope);
    return {bounded && r.fit.slope <= -1.7, os.str()};
}

Outcome weyl() {
    const double area = 4.0 * std::numbers::pi;
    std::vector<double> ratio;
    for (double m : {30.0, 60.0}) {
        const ShellSpectrum s = full_spectrum(shell(m, -1.0));
        ratio.push_back(s.total_multiplicity() / weyl_prediction(m, -1.0, area));
    }
    const bool ok = ratio[0] >= 0.85 && ratio[0] <= 1.15 && ratio[1] >= 0.92 && ratio[1] <= 1.08 &&
                    std::abs(ratio[1] - 1.0) <= std::abs(ratio[0] - 1.0);
    return {ok, "N/(2.56 m^2) = " + fmt("%.6f", ratio[0]) + " at m = 30, " + fmt("%.6f", ratio[1]) + " at m = 60"};
}

Outcome envelope() {
    const AsymptoticReport r = sphere_asymptotics(-1.0, 1.0, {20.0, 40.0, 80.0}, 10, 16);
    double bmin = INFINITY, bmax = 0.0;
    int violations = 0;
    bool finite = true;
    std::ostringstream os;
    os << "fitted b = c per m:";
    for (const auto& e : r.envelope) {
        violations += e.violations;
        finite = finite && std::isfinite(e.b);
        bmin = std::min(bmin, e.b);
        bmax = std::max(bmax, e.b);
        os << ' ' << fmt("%.3e", e.b);
    }
    // the joint constant must also hold at every m
    int joint = 0;
    for (const auto& e : r.envelope)
        for (std::size_t j = 0; j < e.deviation.size(); ++j) {
            const double scale = e.delta * (r.effective[j / 2] + r.c0) + e.eps;
            if (std::abs(e.deviation[j]) > bmax * scale * (1.0 + 1e-12)) ++joint;
        }
    const double spread = bmax / bmin;
    os << "; violations " << violations << " per m, " << joint << " joint; spread " << fmt("%.2f", spread)
       << " (limit 2)";
    return {finite && violations == 0 && joint == 0 && spread <= 2.0, os.str()};
}

struct Criterion {
    const char* id;
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"c01", "matrix identity suite", matrix_identities},
        {"c02", "1D ground energies", oned_asymptotics},
        {"c03", "effective operator on the sphere", sphere_exactness},
        {"c04", "effective-level symmetries", effective_symmetries},
        {"c05", "field strength", field_strength},
        {"c06", "shell spectrum symmetries", shell_symmetries},
        {"c07", "quadratic form identity", quadratic_form},
        {"c08", "shooting vs boundary integral", cross_solver},
        {"c09", "two-term expansion", two_term},
        {"c10", "Weyl law", weyl},
        {"c11", "envelope", envelope},
    };
    std::vector<std::string> want;
    for (int i = 1; i < argc; ++i) want.emplace_back(argv[i]);
    if (want.size() == 1 && want[0] == "all") want.clear();
    if (want.empty())
        for (const auto& c : all) want.emplace_back(c.id);

    int failures = 0;
    for (const auto& id : want) {
        const auto it = std::find_if(all.begin(), all.end(), [&](const Criterion& c) { return id == c.id; });
        if (it == all.end()) {
            std::printf("%s: unknown criterion\n", id.c_str());
            ++failures;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %s [%s]: %s  %s  (%.2f s)\n", it->id, it->name, o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
