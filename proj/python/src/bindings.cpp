#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "rovib/cli_io.hpp"
#include "rovib/errors.hpp"
#include "rovib/linear_dynamics.hpp"
#include "rovib/model_params.hpp"
#include "rovib/oracles.hpp"
#include "rovib/spectra.hpp"
#include "rovib/steady_state.hpp"
#include "rovib/sweeps.hpp"

namespace py = pybind11;
using namespace rovib;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    const auto r = a.unchecked<1>();
    std::vector<double> v(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i) v[static_cast<std::size_t>(i)] = r(i);
    return v;
}

py::array_t<double> column(const EntanglementCurve& c, double SpectrumPoint::*field) {
    py::array_t<double> out(static_cast<py::ssize_t>(c.size()));
    auto r = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < c.size(); ++i) r(static_cast<py::ssize_t>(i)) = c[i].*field;
    return out;
}

py::dict curve_to_dict(const EntanglementCurve& c) {
    py::dict out;
    out["omega"] = column(c, &SpectrumPoint::omega);
    out["E"] = column(c, &SpectrumPoint::E);
    out["V_Ru"] = column(c, &SpectrumPoint::V_Ru);
    out["V_Rv"] = column(c, &SpectrumPoint::V_Rv);
    out["D"] = column(c, &SpectrumPoint::D);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Opto-rotational / opto-vibrational mirror entanglement model";

    static py::exception<Error> error(m, "RovibError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("code") = py::str(to_string(e.code()));
            exc.attr("exit_code") = exit_code_for(e.kind());
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    py::enum_<DetuningMode>(m, "DetuningMode")
        .value("FEEDBACK", DetuningMode::Feedback)
        .value("FIXED", DetuningMode::Fixed);
    py::enum_<ImbalanceMechanism>(m, "ImbalanceMechanism")
        .value("OMEGA_PHI", ImbalanceMechanism::OmegaPhi)
        .value("RADIUS", ImbalanceMechanism::Radius);

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init<>())
        .def_static("defaults", &PhysicalParams::defaults)
        .def("validate", &PhysicalParams::validate)
        .def_readwrite("mass", &PhysicalParams::mass)
        .def_readwrite("mirror_radius", &PhysicalParams::mirror_radius)
        .def_readwrite("omega_z", &PhysicalParams::omega_z)
        .def_readwrite("omega_phi", &PhysicalParams::omega_phi)
        .def_readwrite("Q_z", &PhysicalParams::Q_z)
        .def_readwrite("Q_phi", &PhysicalParams::Q_phi)
        .def_readwrite("oam_charge", &PhysicalParams::oam_charge)
        .def_readwrite("cavity_length", &PhysicalParams::cavity_length)
        .def_readwrite("finesse", &PhysicalParams::finesse)
        .def_readwrite("wavelength", &PhysicalParams::wavelength)
        .def_readwrite("input_power", &PhysicalParams::input_power)
        .def_readwrite("detuning_mode", &PhysicalParams::detuning_mode)
        .def_readwrite("detuning_value", &PhysicalParams::detuning_value)
        .def_readwrite("temperature", &PhysicalParams::temperature)
        .def("copy", [](const PhysicalParams& p) { return p; });

    py::class_<DerivedParams>(m, "DerivedParams")
        .def_readonly("omega_c", &DerivedParams::omega_c)
        .def_readonly("mode_index", &DerivedParams::mode_index)
        .def_readonly("resonance_error", &DerivedParams::resonance_error)
        .def_readonly("wave_number", &DerivedParams::wave_number)
        .def_readonly("moment_of_inertia", &DerivedParams::moment_of_inertia)
        .def_readonly("g_z", &DerivedParams::g_z)
        .def_readonly("g_phi", &DerivedParams::g_phi)
        .def_readonly("gamma", &DerivedParams::gamma)
        .def_readonly("gamma_z", &DerivedParams::gamma_z)
        .def_readonly("gamma_phi", &DerivedParams::gamma_phi)
        .def_readonly("a_in", &DerivedParams::a_in)
        .def_readonly("omega_z", &DerivedParams::omega_z)
        .def_readonly("omega_phi", &DerivedParams::omega_phi)
        .def("warnings", &DerivedParams::warnings);

    m.def("derive_params", &derive_params, py::arg("params"));
    m.def("coupling_ratio", &coupling_ratio, py::arg("derived"), py::arg("params"));

    py::class_<SteadyState>(m, "SteadyState")
        .def_readonly("a_s", &SteadyState::a_s)
        .def_readonly("photon_number", &SteadyState::photon_number)
        .def_readonly("z_s", &SteadyState::z_s)
        .def_readonly("phi_s", &SteadyState::phi_s)
        .def_readonly("effective_detuning", &SteadyState::effective_detuning)
        .def_readonly("bare_detuning", &SteadyState::bare_detuning)
        .def_readonly("G", &SteadyState::G);
    py::class_<BistabilityBranch>(m, "BistabilityBranch")
        .def_readonly("photon_number", &BistabilityBranch::photon_number)
        .def_readonly("branch_index", &BistabilityBranch::branch_index)
        .def_readonly("stable", &BistabilityBranch::stable);

    m.def("steady_state_feedback", &steady_state_feedback, py::arg("derived"), py::arg("Delta"));
    m.def("steady_state_fixed_detuning", &steady_state_fixed_detuning, py::arg("derived"), py::arg("delta"));
    m.def("working_point", &working_point, py::arg("params"), py::arg("derived"));

    py::class_<LinearModel>(m, "LinearModel")
        .def_readonly("A", &LinearModel::A)
        .def_readonly("B", &LinearModel::B)
        .def_property_readonly("eigenvalues",
                               [](const LinearModel& lm) {
                                   return std::vector<cplx>(lm.eigenvalues.begin(), lm.eigenvalues.end());
                               })
        .def_readonly("stable", &LinearModel::stable)
        .def("max_real_eigenvalue", &LinearModel::max_real_eigenvalue);

    m.def("build_linear_model", &build_linear_model, py::arg("derived"), py::arg("steady"));
    m.def(
        "transfer", [](const LinearModel& lm, double omega) { return transfer(lm, omega).T; }, py::arg("model"),
        py::arg("omega"));

    py::class_<SpectrumPoint>(m, "SpectrumPoint")
        .def_readonly("omega", &SpectrumPoint::omega)
        .def_readonly("V_Ru", &SpectrumPoint::V_Ru)
        .def_readonly("V_Rv", &SpectrumPoint::V_Rv)
        .def_readonly("D", &SpectrumPoint::D)
        .def_readonly("E", &SpectrumPoint::E);

    m.def("entanglement_measure", &entanglement_measure, py::arg("model"), py::arg("derived"), py::arg("omega"),
          py::arg("temperature"));
    m.def(
        "entanglement_curve",
        [](const LinearModel& lm, const DerivedParams& d, const py::array_t<double, py::array::c_style | py::array::forcecast>& omegas,
           double temperature, int threads) {
            const auto w = to_vector(omegas);
            EntanglementCurve c;
            {
                py::gil_scoped_release release;
                c = entanglement_curve(lm, d, w, temperature, threads);
            }
            return curve_to_dict(c);
        },
        py::arg("model"), py::arg("derived"), py::arg("omegas"), py::arg("temperature"), py::arg("threads") = 1,
        "Dict of numpy arrays omega, E, V_Ru, V_Rv, D.");
    m.def("spectrum_grid", &spectrum_grid, py::arg("derived"), py::arg("lo"), py::arg("hi"),
          py::arg("coarse_points") = 400, py::arg("fine_per_linewidth") = 40);

    py::class_<Peak>(m, "Peak")
        .def_readonly("omega", &Peak::omega)
        .def_readonly("E", &Peak::E)
        .def_readonly("E_grid", &Peak::E_grid)
        .def_readonly("grid_step", &Peak::grid_step);
    m.def(
        "find_peak",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& omega,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& E, std::vector<double> resonances,
           double linewidth) {
            const auto w = to_vector(omega), e = to_vector(E);
            if (w.size() != e.size()) throw Error(ErrorCode::InvalidArgument, "omega and E differ in length");
            std::vector<SpectrumPoint> pts(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) pts[i] = SpectrumPoint{w[i], 0, 0, 0, e[i]};
            return find_peak(pts, resonances, linewidth);
        },
        py::arg("omega"), py::arg("E"), py::arg("resonances") = std::vector<double>{}, py::arg("linewidth") = 0.0);

    py::class_<TuneResult>(m, "TuneResult")
        .def_readonly("lambda_new", &TuneResult::lambda_new)
        .def_readonly("L_new", &TuneResult::L_new)
        .def_readonly("mode_index", &TuneResult::mode_index)
        .def_readonly("residual_imbalance", &TuneResult::residual_imbalance)
        .def_readonly("delta_lambda", &TuneResult::delta_lambda)
        .def_readonly("delta_L", &TuneResult::delta_L)
        .def_readonly("unconstrained_delta_lambda", &TuneResult::unconstrained_delta_lambda);
    m.def("tune_couplings", &tune_couplings, py::arg("params"), py::arg("lambda_window") = 5e-9);
    m.def("apply_tuning", &apply_tuning, py::arg("params"), py::arg("result"));
    m.def("apply_imbalance", &apply_imbalance, py::arg("params"), py::arg("imbalance_percent"),
          py::arg("mechanism") = ImbalanceMechanism::OmegaPhi);

    m.def("selfcheck", [] {
        py::list out;
        for (const auto& r : oracles::run_selfcheck()) {
            out.append(py::dict(py::arg("name") = r.name, py::arg("computed") = r.computed,
                                py::arg("reference") = r.reference, py::arg("error") = r.error,
                                py::arg("tolerance") = r.tolerance, py::arg("passed") = r.passed));
        }
        return out;
    });
}
