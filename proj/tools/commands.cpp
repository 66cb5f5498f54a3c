#include "commands.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "shellspectra/asymptotics.hpp"
#include "shellspectra/effective_operator.hpp"
#include "shellspectra/errors.hpp"
#include "shellspectra/layer_potentials.hpp"
#include "shellspectra/oned_models.hpp"
#include "shellspectra/sphere_modes.hpp"

namespace shellspectra::cli {

namespace {

using json = nlohmann::ordered_json;

// CSV with the resolved config as comment lines above the header.
class Table {
public:
    Table(const RunConfig& cfg, std::vector<std::string> header) : width_(header.size()) {
        out_ << "# " << kFormatVersion << '\n';
        for (const auto& [k, v] : cfg.echo()) out_ << "# " << k << '=' << v << '\n';
        row(header);
    }
    void row(const std::vector<std::string>& cells) {
        if (cells.size() != width_) throw std::logic_error("csv row width");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::size_t width_;
    std::ostringstream out_;
};

std::string num(double x) { return format_number(x); }

json base_summary(const RunConfig& cfg) {
    json j;
    j["format_version"] = kFormatVersion;
    json c;
    for (const auto& [k, v] : cfg.echo()) c[k] = v;
    j["config"] = c;
    return j;
}

ParamSurface surface_of(const RunConfig& cfg) {
    if (cfg.surface == "sphere") return build_sphere(cfg.R);
    return parse_surface(cfg.surface);
}

double sphere_radius(const RunConfig& cfg) {
    const ParamSurface s = surface_of(cfg);
    if (s.name() != "sphere") throw ConfigError(cfg.command + " needs surface=sphere, got '" + cfg.surface + "'");
    return s.parameters().at(0);
}

double single(const std::vector<double>& v, const char* key, const std::string& cmd) {
    if (v.size() != 1) throw ConfigError(cmd + " takes a single value for " + key);
    return v[0];
}

ShellConfig shell_config(const RunConfig& cfg, double m, double tau) {
    ShellConfig s;
    s.m = m;
    s.tau = tau;
    s.R = sphere_radius(cfg);
    s.kappa_max = cfg.kappa_max;
    s.lambda_grid = cfg.lambda_grid;
    return s;
}

CommandOutput modes_1d(const RunConfig& cfg) {
    CommandOutput out;
    Table t(cfg, {"m", "tau", "delta", "boundary", "k", "E1", "scaled_residual"});
    json rows = json::array();
    for (double tau : cfg.tau)
        for (double m : cfg.m) {
            OneDProblem p;
            p.m = m;
            p.tau = tau;
            p.delta = cfg.delta;
            p.robin_c = cfg.c;
            p.validate();
            try {
                const GroundMode g = cfg.c ? solve_robin_ground(p) : solve_dirichlet_ground(p);
                const double r = relative_energy_defect(g);
                t.row({num(m), num(tau), num(cfg.delta), cfg.c ? "robin" : "dirichlet", num(g.k), num(g.E1), num(r)});
                rows.push_back({{"m", m}, {"tau", tau}, {"k", g.k}, {"E1", g.E1}, {"scaled_residual", r}});
            } catch (const NoBoundState& e) {
                if (cfg.strict) throw;
                out.warnings.push_back(std::string("no bound state: ") + e.what());
            }
        }
    out.csv = t.str();
    out.summary = base_summary(cfg);
    out.summary["rows"] = rows;
    out.summary["warnings"] = out.warnings;
    return out;
}

CommandOutput sphere_spectrum(const RunConfig& cfg) {
    CommandOutput out;
    Table t(cfg, {"m", "tau", "lambda", "kappa", "multiplicity", "residual", "solver"});
    out.summary = base_summary(cfg);
    json runs = json::array();
    for (double tau : cfg.tau)
        for (double m : cfg.m) {
            const ShellSpectrum s = full_spectrum(shell_config(cfg, m, tau));
            for (const auto& md : s.modes)
                t.row({num(m), num(tau), num(md.lambda), std::to_string(md.kappa), std::to_string(md.multiplicity),
                       num(md.residual), to_string(md.solver)});
            if (s.truncation_warning)
                out.warnings.push_back("channel scan truncated at |kappa| = " + std::to_string(s.channels_scanned));
            runs.push_back({{"m", m},
                            {"tau", tau},
                            {"modes", s.modes.size()},
                            {"total_multiplicity", s.total_multiplicity()},
                            {"channels_scanned", s.channels_scanned},
                            {"truncation_warning", s.truncation_warning}});
        }
    out.csv = t.str();
    out.summary["runs"] = runs;
    out.summary["warnings"] = out.warnings;
    return out;
}

CommandOutput effective_spectrum(const RunConfig& cfg) {
    CommandOutput out;
    Table t(cfg, {"tau", "index", "eigenvalue", "group", "multiplicity"});
    out.summary = base_summary(cfg);
    const ParamSurface S = surface_of(cfg);
    const SurfaceGrid g = effective_grid(S, cfg.order);
    json runs = json::array();
    auto emit = [&](double tau, const HermitianSpectrum& sp) {
        for (std::size_t gi = 0; gi < sp.groups.size(); ++gi) {
            const EigenGroup& G = sp.groups[gi];
            for (int k = 0; k < G.multiplicity; ++k) {
                const int idx = G.first_index + k;
                t.row({num(tau), std::to_string(idx), num(sp.eigenvalues[idx]), std::to_string(gi),
                       std::to_string(G.multiplicity)});
            }
        }
        json groups = json::array();
        for (const auto& G : sp.groups) groups.push_back({{"value", G.value}, {"multiplicity", G.multiplicity}});
        runs.push_back({{"tau", tau}, {"basis_size", sp.basis_size}, {"groups", groups}});
    };
    if (cfg.op == "bochner") {
        emit(0.0, solve_pencil(assemble_bochner(g, cfg.theta, cfg.order), cfg.count));
    } else {
        for (double tau : cfg.tau) {
            const GalerkinSystem sys =
                cfg.op == "upsilon" ? assemble_upsilon(g, tau, cfg.order) : assemble_intermediate(g, tau, cfg.order);
            emit(tau, solve_pencil(sys, cfg.count));
        }
    }
    out.csv = t.str();
    out.summary["runs"] = runs;
    return out;
}

CommandOutput bs_scan(const RunConfig& cfg) {
    CommandOutput out;
    const double m = single(cfg.m, "m", cfg.command), tau = single(cfg.tau, "tau", cfg.command);
    const auto [n1, n2] = nystrom_grid(cfg.surface, cfg.nodes);
    const SurfaceGrid g = build_grid(surface_of(cfg), n1, n2);
    const double lo = cfg.lo.value_or(-0.999 * std::abs(m)), hi = cfg.hi.value_or(0.999 * std::abs(m));
    const BSScan s = bs_search(g, m, tau, lo, hi, cfg.steps, cfg.threshold);
    Table t(cfg, {"lambda", "sigma_min"});
    for (std::size_t i = 0; i < s.lambda.size(); ++i) t.row({num(s.lambda[i]), num(s.sigma_min[i])});
    out.csv = t.str();
    out.summary = base_summary(cfg);
    out.summary["grid"] = {n1, n2};
    out.summary["nodes"] = g.size();
    out.summary["block_path"] = s.block_path;
    out.summary["threshold"] = s.threshold;
    out.summary["candidates"] = s.candidates;
    out.summary["candidate_sigma"] = s.candidate_sigma;
    return out;
}

CommandOutput asymptotics_check(const RunConfig& cfg) {
    CommandOutput out;
    const double tau = single(cfg.tau, "tau", cfg.command);
    const AsymptoticReport r = sphere_asymptotics(tau, sphere_radius(cfg), cfg.m, cfg.jmax, cfg.order);
    Table t(cfg, {"m", "j", "mu", "predicted", "residual", "scaled_residual"});
    for (std::size_t i = 0; i < r.m.size(); ++i)
        for (int j = 0; j < r.jmax; ++j)
            t.row({num(r.m[i]), std::to_string(j + 1), num(r.mu[i][j]), num(r.predicted[i][j]), num(r.residual[i][j]),
                   num(r.scaled[i][j])});
    out.csv = t.str();
    out.summary = base_summary(cfg);
    out.summary["report"] = json::parse(report_json(r));
    return out;
}

CommandOutput weyl_count(const RunConfig& cfg) {
    CommandOutput out;
    Table t(cfg, {"m", "tau", "count", "predicted", "ratio"});
    const double R = sphere_radius(cfg);
    json rows = json::array();
    for (double tau : cfg.tau)
        for (double m : cfg.m) {
            const ShellSpectrum s = full_spectrum(shell_config(cfg, m, tau));
            const double pred = weyl_prediction(m, tau, 4.0 * std::numbers::pi * R * R);
            const int n = s.total_multiplicity();
            t.row({num(m), num(tau), std::to_string(n), num(pred), num(n / pred)});
            rows.push_back({{"m", m}, {"tau", tau}, {"count", n}, {"predicted", pred}, {"ratio", n / pred}});
        }
    out.csv = t.str();
    out.summary = base_summary(cfg);
    out.summary["rows"] = rows;
    return out;
}

}  // namespace

std::pair<int, int> nystrom_grid(const std::string& surface, int nodes) {
    const bool torus = surface.rfind("torus", 0) == 0;
    // sphere-like: rings x 2 rings; torus: 2 x poloidal in the azimuth
    const double a = torus ? std::sqrt(2.0 * nodes) : std::sqrt(0.5 * nodes);
    const int n1 = std::max(2, static_cast<int>(std::lround(a)));
    const int n2 = std::max(2, static_cast<int>(std::lround(double(nodes) / n1)));
    return {n1, n2};
}

CommandOutput run_command(const RunConfig& cfg) {
    if (cfg.command == "modes-1d") return modes_1d(cfg);
    if (cfg.command == "sphere-spectrum") return sphere_spectrum(cfg);
    if (cfg.command == "effective-spectrum") return effective_spectrum(cfg);
    if (cfg.command == "bs-scan") return bs_scan(cfg);
    if (cfg.command == "asymptotics-check") return asymptotics_check(cfg);
    if (cfg.command == "weyl-count") return weyl_count(cfg);
    throw ConfigError("unknown command '" + cfg.command + "'");
}

}  // namespace shellspectra::cli
