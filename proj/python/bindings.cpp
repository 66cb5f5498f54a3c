#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/complex.h>

#include "shellspectra/asymptotics.hpp"
#include "shellspectra/effective_operator.hpp"
#include "shellspectra/errors.hpp"
#include "shellspectra/layer_potentials.hpp"
#include "shellspectra/oned_models.hpp"
#include "shellspectra/sphere_modes.hpp"
#include "shellspectra/spinor_algebra.hpp"
#include "shellspectra/surface_geometry.hpp"

namespace py = pybind11;
using namespace shellspectra;

namespace {

HermitianSpectrum effective(const std::string& surface, const std::string& op, double param, int order, int count) {
    const SurfaceGrid g = effective_grid(parse_surface(surface), order);
    if (op == "upsilon") return solve_pencil(assemble_upsilon(g, param, order), count);
    if (op == "bochner") return solve_pencil(assemble_bochner(g, param, order), count);
    if (op == "intermediate") return solve_pencil(assemble_intermediate(g, param, order), count);
    throw InvalidArgument("operator must be upsilon, bochner or intermediate");
}

}  // namespace

PYBIND11_MODULE(_shellspectra, mod) {
    mod.doc() = "Gap eigenvalues of Dirac operators with a scalar shell interaction";

    auto base = py::register_exception<Error>(mod, "Error");
    py::register_exception<InvalidArgument>(mod, "InvalidArgument", base.ptr());
    py::register_exception<DecoupledShell>(mod, "DecoupledShell", base.ptr());
    py::register_exception<NoBoundState>(mod, "NoBoundState", base.ptr());
    py::register_exception<RootBracketFailure>(mod, "RootBracketFailure", base.ptr());
    py::register_exception<IllConditioned>(mod, "IllConditioned", base.ptr());
    py::register_exception<NumericalFailure>(mod, "NumericalFailure", base.ptr());

    mod.def("mu_of_tau", &mu_of_tau, py::arg("tau"));

    py::class_<GroundMode>(mod, "GroundMode")
        .def_readonly("k", &GroundMode::k)
        .def_readonly("E1", &GroundMode::E1)
        .def_readonly("delta", &GroundMode::delta)
        .def_readonly("multiplicity", &GroundMode::multiplicity)
        .def("profile", &GroundMode::profile);
    mod.def(
        "ground_mode",
        [](double m, double tau, double delta, std::optional<double> c) {
            OneDProblem p{m, tau, delta, c};
            p.validate();
            return c ? solve_robin_ground(p) : solve_dirichlet_ground(p);
        },
        py::arg("m"), py::arg("tau"), py::arg("delta"), py::arg("c") = py::none());
    mod.def("relative_energy_defect", &relative_energy_defect);

    mod.def("surface_area", [](const std::string& s, int n1, int n2) { return surface_area(build_grid(parse_surface(s), n1, n2)); },
            py::arg("surface"), py::arg("n1") = 64, py::arg("n2") = 128);

    py::class_<EigenGroup>(mod, "EigenGroup")
        .def_readonly("value", &EigenGroup::value)
        .def_readonly("multiplicity", &EigenGroup::multiplicity)
        .def_readonly("first_index", &EigenGroup::first_index);
    py::class_<HermitianSpectrum>(mod, "HermitianSpectrum")
        .def_readonly("eigenvalues", &HermitianSpectrum::eigenvalues)
        .def_readonly("groups", &HermitianSpectrum::groups)
        .def_readonly("basis_size", &HermitianSpectrum::basis_size);
    mod.def("effective_spectrum", &effective, py::arg("surface"), py::arg("operator") = "upsilon",
            py::arg("param") = -1.0, py::arg("order") = 16, py::arg("count") = 20,
            "operator: upsilon (param = tau), bochner (param = theta) or intermediate (param = tau)");
    mod.def("connection_curvature_check",
            [](const std::string& s, double theta, int n1, int n2) {
                return connection_curvature_check(build_grid(parse_surface(s), n1, n2), theta);
            },
            py::arg("surface"), py::arg("theta"), py::arg("n1") = 8, py::arg("n2") = 8);

    py::class_<ModeResult>(mod, "ModeResult")
        .def_readonly("lambda_", &ModeResult::lambda)
        .def_readonly("kappa", &ModeResult::kappa)
        .def_readonly("multiplicity", &ModeResult::multiplicity)
        .def_readonly("residual", &ModeResult::residual);
    py::class_<ShellSpectrum>(mod, "ShellSpectrum")
        .def_readonly("modes", &ShellSpectrum::modes)
        .def_readonly("channels_scanned", &ShellSpectrum::channels_scanned)
        .def_readonly("truncation_warning", &ShellSpectrum::truncation_warning)
        .def("total_multiplicity", &ShellSpectrum::total_multiplicity);
    mod.def(
        "sphere_spectrum",
        [](double m, double tau, double R, std::optional<int> kappa_max) {
            ShellConfig c;
            c.m = m;
            c.tau = tau;
            c.R = R;
            c.kappa_max = kappa_max;
            return full_spectrum(c);
        },
        py::arg("m"), py::arg("tau"), py::arg("R") = 1.0, py::arg("kappa_max") = py::none());
    mod.def("positive_eigenvalues", &positive_eigenvalues);

    py::class_<BSScan>(mod, "BSScan")
        .def_readonly("lambda_", &BSScan::lambda)
        .def_readonly("sigma_min", &BSScan::sigma_min)
        .def_readonly("candidates", &BSScan::candidates)
        .def_readonly("candidate_sigma", &BSScan::candidate_sigma)
        .def_readonly("block_path", &BSScan::block_path);
    mod.def(
        "bs_scan",
        [](const std::string& s, int n1, int n2, double m, double tau, double lo, double hi, int steps,
           double threshold) { return bs_search(build_grid(parse_surface(s), n1, n2), m, tau, lo, hi, steps, threshold); },
        py::arg("surface"), py::arg("n1"), py::arg("n2"), py::arg("m"), py::arg("tau"), py::arg("lo"), py::arg("hi"),
        py::arg("steps") = 200, py::arg("threshold") = 0.05);

    mod.def("two_term_prediction", &two_term_prediction, py::arg("m"), py::arg("tau"), py::arg("e_eff"));
    mod.def("weyl_prediction", &weyl_prediction, py::arg("m"), py::arg("tau"), py::arg("area"));
    mod.def("default_delta", &default_delta, py::arg("m"), py::arg("tau"));
    mod.def(
        "residual_order_fit",
        [](const std::vector<double>& m, const std::vector<double>& r) {
            const OrderFit f = residual_order_fit(m, r);
            return py::make_tuple(f.slope, f.order_two);
        },
        py::arg("m"), py::arg("residual"));
    mod.def(
        "asymptotics_report",
        [](double tau, double R, const std::vector<double>& m, int jmax, int order) {
            return report_json(sphere_asymptotics(tau, R, m, jmax, order));
        },
        py::arg("tau"), py::arg("R"), py::arg("m"), py::arg("jmax") = 10, py::arg("order") = 16,
        "AsymptoticReport as a JSON string");
}
