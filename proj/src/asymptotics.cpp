#include "shellspectra/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "shellspectra/errors.hpp"
#include "shellspectra/oned_models.hpp"
#include "shellspectra/sphere_modes.hpp"

namespace shellspectra {

namespace {

void check_tau(double tau, const char* who) {
    if (tau == 0.0) throw InvalidArgument(std::string(who) + ": tau must be nonzero");
    if (std::abs(std::abs(tau) - 2.0) < 1e-14) throw DecoupledShell(tau);
}

// (tau^2-4)/(tau^2+4)
double gap_ratio(double tau) { return (tau * tau - 4.0) / (tau * tau + 4.0); }

}  // namespace

double two_term_prediction(double m, double tau, double e_eff) {
    check_tau(tau, "two_term_prediction");
    if (!(m > 0.0)) throw InvalidArgument("two_term_prediction: m must be positive");
    const double q = std::abs(gap_ratio(tau));
    return q * m + e_eff / (2.0 * q * m);
}

double weyl_prediction(double m, double tau, double area) {
    check_tau(tau, "weyl_prediction");
    if (!(area > 0.0)) throw InvalidArgument("weyl_prediction: area must be positive");
    const double s = tau * tau + 4.0;
    return 16.0 / std::numbers::pi * tau * tau / (s * s) * area * m * m;
}

double default_delta(double m, double tau) {
    check_tau(tau, "default_delta");
    if (!(m > 1.0)) throw InvalidArgument("default_delta: m must exceed 1");
    return 4.0 * std::log(m) / (mu_of_tau(tau) * m);
}

double curvature_offset(const SurfaceGrid& grid) {
    double c0 = 0.0;
    for (const auto& n : grid.nodes) c0 = std::max(c0, std::abs(n.geom.K - n.geom.M * n.geom.M));
    return c0;
}

EnvelopeFit envelope_check(const std::vector<double>& a2, const std::vector<double>& eff, double m, double tau,
                           double delta, double c0, int jmax) {
    check_tau(tau, "envelope_check");
    if (!(delta > 0.0)) throw InvalidArgument("envelope_check: delta must be positive");
    EnvelopeFit f;
    f.m = m;
    f.delta = delta;
    const double mu = mu_of_tau(tau);
    f.eps = delta + m * m * std::exp(-2.0 * mu * std::abs(m) * delta);
    const double q = gap_ratio(tau);
    f.checked = static_cast<int>(std::min<std::size_t>({a2.size(), eff.size(), std::size_t(std::max(jmax, 0))}));
    double s = 0.0;
    std::vector<double> scale(f.checked);
    for (int j = 0; j < f.checked; ++j) {
        const double d = a2[j] - q * q * m * m - eff[j];
        f.deviation.push_back(d);
        scale[j] = delta * (eff[j] + c0) + f.eps;
        if (scale[j] > 0.0) s = std::max(s, std::abs(d) / scale[j]);
    }
    f.b = f.c = s;
    for (int j = 0; j < f.checked; ++j)
        if (std::abs(f.deviation[j]) > s * scale[j] * (1.0 + 1e-12) + 1e-300) ++f.violations;
    return f;
}

OrderFit residual_order_fit(const std::vector<double>& m, const std::vector<double>& residual, double floor) {
    if (m.size() != residual.size()) throw InvalidArgument("residual_order_fit: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!(m[i] > 1.0)) throw InvalidArgument("residual_order_fit: m must exceed 1");
        if (!(std::abs(residual[i]) > floor)) continue;
        x.push_back(std::log(m[i]));
        y.push_back(std::log(std::abs(residual[i]) / std::log(m[i])));
    }
    OrderFit out;
    out.used = static_cast<int>(x.size());
    if (x.size() < 4) throw InvalidArgument("residual_order_fit: need at least 4 residuals above the floor");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    // three doublings: the shortest sweep the order test is meant to run on
    if (*hi - *lo < std::log(8.0) - 1e-12) throw InvalidArgument("residual_order_fit: sweep must span a factor of 8");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.order_two = out.slope <= -2.0 + 0.3;
    return out;
}

namespace {

// indices k such that values k-1 and k belong to different clusters
std::vector<int> boundaries(const std::vector<double>& v, int upto, double tol) {
    std::vector<int> b;
    for (int k = 1; k <= upto && k < static_cast<int>(v.size()); ++k)
        if (std::abs(v[k] - v[k - 1]) > tol * std::max(1.0, std::abs(v[k]))) b.push_back(k);
    return b;
}

}  // namespace

void check_alignment(const std::vector<double>& shell, const std::vector<double>& effective, int jmax, double tol) {
    if (static_cast<int>(shell.size()) < jmax || static_cast<int>(effective.size()) < jmax)
        throw NumericalFailure("alignment: fewer than jmax eigenvalues available");
    const std::vector<int> bs = boundaries(shell, jmax - 1, tol);
    for (int k : boundaries(effective, jmax - 1, tol))
        if (!std::binary_search(bs.begin(), bs.end(), k))
            throw NumericalFailure("alignment: effective cluster boundary at index " + std::to_string(k) +
                                   " splits a shell cluster");
}

std::vector<double> doubled(const std::vector<double>& v) {
    std::vector<double> out;
    out.reserve(2 * v.size());
    for (double x : v) {
        out.push_back(x);
        out.push_back(x);
    }
    return out;
}

AsymptoticReport sphere_asymptotics(double tau, double R, const std::vector<double>& m_values, int jmax, int order) {
    check_tau(tau, "sphere_asymptotics");
    if (jmax < 1) throw InvalidArgument("sphere_asymptotics: jmax must be positive");
    AsymptoticReport rep;
    rep.tau = tau;
    rep.R = R;
    rep.jmax = jmax;
    rep.order = order;
    rep.m = m_values;

    const ParamSurface S = build_sphere(R);
    const SurfaceGrid g = effective_grid(S, order);
    const HermitianSpectrum eff = solve_pencil(assemble_upsilon(g, tau, order), 2 * jmax + 8);
    if (static_cast<int>(eff.eigenvalues.size()) < jmax) throw NumericalFailure("sphere_asymptotics: basis too small");
    rep.effective.assign(eff.eigenvalues.begin(), eff.eigenvalues.begin() + jmax);
    rep.c0 = curvature_offset(g);
    const double area = 4.0 * std::numbers::pi * R * R;
    const std::vector<double> eff2 = doubled(eff.eigenvalues);

    std::vector<double> r1;
    for (double m : m_values) {
        ShellConfig cfg;
        cfg.m = m;
        cfg.tau = tau;
        cfg.R = R;
        const ShellSpectrum spec = full_spectrum(cfg);
        const std::vector<double> mu = positive_eigenvalues(spec);
        check_alignment(mu, eff.eigenvalues, jmax);
        std::vector<double> muj(mu.begin(), mu.begin() + jmax), pred, res, sc;
        for (int j = 0; j < jmax; ++j) {
            pred.push_back(two_term_prediction(std::abs(m), tau, rep.effective[j]));
            res.push_back(muj[j] - pred.back());
            sc.push_back(res.back() * m * m / std::log(std::abs(m)));
        }
        r1.push_back(res[0]);
        rep.mu.push_back(muj);
        rep.predicted.push_back(pred);
        rep.residual.push_back(res);
        rep.scaled.push_back(sc);
        rep.weyl_count.push_back(spec.total_multiplicity());
        rep.weyl_predicted.push_back(weyl_prediction(m, tau, area));
        rep.weyl_ratio.push_back(rep.weyl_count.back() / rep.weyl_predicted.back());

        std::vector<double> a2;
        for (double x : mu) a2.push_back(x * x);
        rep.envelope.push_back(
            envelope_check(doubled(a2), eff2, std::abs(m), tau, default_delta(std::abs(m), tau), rep.c0, jmax));
    }
    if (m_values.size() >= 4) {
        std::vector<double> am;
        for (double m : m_values) am.push_back(std::abs(m));
        rep.fit = residual_order_fit(am, r1);
    }
    return rep;
}

std::string report_json(const AsymptoticReport& r) {
    nlohmann::ordered_json j;
    j["tau"] = r.tau;
    j["R"] = r.R;
    j["jmax"] = r.jmax;
    j["galerkin_order"] = r.order;
    j["m"] = r.m;
    j["effective"] = r.effective;
    j["mu"] = r.mu;
    j["predicted"] = r.predicted;
    j["residual"] = r.residual;
    j["scaled_residual"] = r.scaled;
    j["weyl"] = {{"count", r.weyl_count}, {"predicted", r.weyl_predicted}, {"ratio", r.weyl_ratio}};
    nlohmann::ordered_json env = nlohmann::ordered_json::array();
    for (const auto& e : r.envelope)
        env.push_back({{"m", e.m},
                       {"delta", e.delta},
                       {"eps", e.eps},
                       {"b", e.b},
                       {"c", e.c},
                       {"checked", e.checked},
                       {"violations", e.violations}});
    j["envelope"] = env;
    j["c0"] = r.c0;
    j["residual_fit"] = {{"slope", r.fit.slope}, {"used", r.fit.used}, {"order_two", r.fit.order_two}};
    return j.dump(2);
}

}  // namespace shellspectra
