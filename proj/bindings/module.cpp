#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "choreo/poly.hpp"
#include "choreo/scenario.hpp"
#include "choreo/topology.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
    m.doc() = "divisor choreography engine: tracks curve-cut divisors around "
              "closed families of cutting curves";

    m.def(
        "run_scenario",
        [](const std::string& config_json) {
            const choreo::ScenarioResult res =
                choreo::run_scenario(nlohmann::json::parse(config_json));
            return py::make_tuple(res.report.dump(), res.exit_code);
        },
        py::arg("config_json"),
        "Run one scenario config (JSON string); returns (report_json, exit_code).");

    m.def(
        "preset_config",
        [](const std::string& name, unsigned seed) {
            return choreo::preset_config(name, seed).dump();
        },
        py::arg("name"), py::arg("seed") = 0u,
        "Canonical config for a named preset, as a JSON string.");

    m.def("preset_names", [] { return choreo::preset_names(); });

    m.def(
        "trace_topology",
        [](const std::string& curve_json) {
            const choreo::HomPoly3 f =
                choreo::HomPoly3::from_json(nlohmann::json::parse(curve_json));
            return choreo::topology_to_json(choreo::trace_real_locus(f)).dump();
        },
        py::arg("curve_json"),
        "Trace the real locus of a homogeneous curve; returns the component "
        "summary as a JSON string.");

    m.def("verify_all", [] {
        const choreo::VerifyAllResult v = choreo::verify_all();
        return py::make_tuple(v.failures, v.lines);
    });

    m.attr("__version__") = "0.1.0";
}
