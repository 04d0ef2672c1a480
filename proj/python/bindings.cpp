#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fieldlink/capacity.hpp"
#include "fieldlink/channel_algebra.hpp"
#include "fieldlink/channel_params.hpp"
#include "fieldlink/config.hpp"
#include "fieldlink/vacuum.hpp"

namespace py = pybind11;
using namespace fieldlink;

PYBIND11_MODULE(_core, m) {
    m.doc() = "two-detector relativistic channel library";

    py::register_exception<ScenarioError>(m, "ScenarioError");
    py::register_exception<PhysicsError>(m, "PhysicsError");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::enum_<SwitchingKind>(m, "SwitchingKind")
        .value("SmoothBump", SwitchingKind::SmoothBump)
        .value("Gaussian", SwitchingKind::Gaussian)
        .value("SmoothedTophat", SwitchingKind::SmoothedTophat);

    py::enum_<SeparationClass>(m, "SeparationClass")
        .value("Spacelike", SeparationClass::Spacelike)
        .value("TimelikeReachable", SeparationClass::TimelikeReachable)
        .value("Mixed", SeparationClass::Mixed);

    py::class_<QuadraturePolicy>(m, "QuadraturePolicy")
        .def(py::init<>())
        .def_readwrite("rel_tol", &QuadraturePolicy::rel_tol)
        .def_readwrite("abs_floor", &QuadraturePolicy::abs_floor)
        .def_readwrite("max_subdivisions", &QuadraturePolicy::max_subdivisions)
        .def_readwrite("osc_points_per_period", &QuadraturePolicy::osc_points_per_period)
        .def_readwrite("eps_start", &QuadraturePolicy::eps_start)
        .def_readwrite("eps_rungs", &QuadraturePolicy::eps_rungs);

    py::class_<ScenarioSpec>(m, "ScenarioSpec")
        .def(py::init<>())
        .def_property(
            "mass", [](const ScenarioSpec& s) { return s.field.mass; },
            [](ScenarioSpec& s, double v) { s.field.mass = v; })
        .def_property(
            "separation", [](const ScenarioSpec& s) { return s.separation(); },
            [](ScenarioSpec& s, double L) {
                s.detector1.position = {0.0, 0.0, 0.0};
                s.detector2.position = {0.0, 0.0, L};
            })
        .def_property(
            "couplings",
            [](const ScenarioSpec& s) {
                return py::make_tuple(s.detector1.coupling, s.detector2.coupling);
            },
            [](ScenarioSpec& s, std::pair<double, double> a) {
                s.detector1.coupling = a.first;
                s.detector2.coupling = a.second;
            })
        .def_property(
            "energy_gap", [](const ScenarioSpec& s) { return s.energy_gap; },
            [](ScenarioSpec& s, double v) { s.energy_gap = v; })
        .def_property(
            "switching_kind", [](const ScenarioSpec& s) { return s.switching.kind; },
            [](ScenarioSpec& s, SwitchingKind k) { s.switching.kind = k; })
        .def_property(
            "window",
            [](const ScenarioSpec& s) {
                return py::make_tuple(s.switching.t_start, s.switching.t_end);
            },
            [](ScenarioSpec& s, std::pair<double, double> w) {
                s.switching.t_start = w.first;
                s.switching.t_end = w.second;
            })
        .def_property(
            "switching_width", [](const ScenarioSpec& s) { return s.switching.width; },
            [](ScenarioSpec& s, double v) { s.switching.width = v; })
        .def_readwrite("quadrature", &ScenarioSpec::quadrature)
        .def("validate", &ScenarioSpec::validate)
        .def("separation_class", [](const ScenarioSpec& s) { return classify_separation(s); });

    py::class_<ConvergenceInfo>(m, "ConvergenceInfo")
        .def_readonly("error_estimate", &ConvergenceInfo::error_estimate)
        .def_readonly("ladder_residual", &ConvergenceInfo::ladder_residual)
        .def_readonly("weak_coupling_warning", &ConvergenceInfo::weak_coupling_warning);

    py::class_<ChannelParams>(m, "ChannelParams")
        .def(py::init<>())
        .def_readwrite("excitation_noise", &ChannelParams::excitation_noise)
        .def_readwrite("gain_excited", &ChannelParams::gain_excited)
        .def_readwrite("gain_ground", &ChannelParams::gain_ground)
        .def_readwrite("coherence_direct", &ChannelParams::coherence_direct)
        .def_readwrite("coherence_counter", &ChannelParams::coherence_counter)
        .def_readonly("convergence", &ChannelParams::convergence)
        .def("validate", &ChannelParams::validate);

    py::class_<CapacityResult>(m, "CapacityResult")
        .def_readonly("capacity_bits", &CapacityResult::capacity_bits)
        .def_readonly("capacity_nats", &CapacityResult::capacity_nats)
        .def_readonly("optimal_prior", &CapacityResult::optimal_prior)
        .def_readonly("rate_bits_per_time", &CapacityResult::rate_bits_per_time)
        .def_readonly("degenerate", &CapacityResult::degenerate);

    py::class_<CoherentInfoResult>(m, "CoherentInfoResult")
        .def_readonly("value", &CoherentInfoResult::value)
        .def_readonly("value_clamped", &CoherentInfoResult::value_clamped);

    py::class_<VacuumIntegrals>(m, "VacuumIntegrals")
        .def_readonly("r", &VacuumIntegrals::r)
        .def_readonly("s", &VacuumIntegrals::s)
        .def_readonly("t", &VacuumIntegrals::t);

    m.def("parse_scenario_file", &parse_scenario_file);
    m.def("parse_scenario_text", &parse_scenario_text);

    m.def("compute_Pe", &compute_Pe);
    m.def("compute_Pe_momentum_space", &compute_Pe_momentum_space);
    m.def("compute_C", &compute_C);
    m.def("compute_D", &compute_D);
    m.def("compute_A", &compute_A);
    m.def("compute_B", &compute_B);
    m.def("compute_params", &compute_params);
    m.def("fermi_probability", &fermi_probability);
    m.def("glauber_leakage", &glauber_leakage);

    m.def("apply_channel", &apply_channel);
    m.def("kraus_set", &kraus_set);
    m.def("choi_matrix", &choi_matrix);
    m.def("choi_rank", &choi_rank, py::arg("p"), py::arg("tol") = 1e-10);
    m.def("complementary_apply", &complementary_apply);
    m.def("density_from_bloch", &density_from_bloch);

    m.def("binary_entropy", &binary_entropy);
    m.def("classical_capacity", &classical_capacity, py::arg("p"),
          py::arg("window_length") = 0.0);
    m.def("closed_form_prior", &closed_form_prior);
    m.def("coherent_information_single_use", &coherent_information_single_use, py::arg("p"),
          py::arg("seed") = 20260826u, py::arg("restarts") = 32);

    m.def("vacuum_integrals", &vacuum_integrals, py::arg("dE"), py::arg("L"), py::arg("dX"),
          py::arg("m"), py::arg("policy") = QuadraturePolicy{});
    m.def("ground_state_reduced", &ground_state_reduced);
    m.def("negativity", &negativity);
    m.def("entanglement_threshold", &entanglement_threshold);
    m.def("casimir_energy", &casimir_energy, py::arg("dE"), py::arg("L"), py::arg("alpha"),
          py::arg("policy") = QuadraturePolicy{});
    m.def("casimir_force", &casimir_force, py::arg("dE"), py::arg("L"), py::arg("alpha"),
          py::arg("policy") = QuadraturePolicy{});
    m.def("speed_bound", &speed_bound);
}
