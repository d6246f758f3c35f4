#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symblend/app.hpp"
#include "symblend/scenarios.hpp"
#include "symblend/sequence.hpp"

namespace py = pybind11;
using namespace symblend;

PYBIND11_MODULE(_symblend, m) {
  m.doc() = "Symbolic blender toolkit";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  // JSON crosses the boundary as text; the Python side wraps it in dicts.
  m.def("run_command", [](const std::string& command, const std::string& config) {
    Json rep;
    {
      py::gil_scoped_release release;
      rep = run_command(command, parse_json_text(config, "config"));
    }
    return report_text(rep);
  }, py::arg("command"), py::arg("config"));

  m.def("cycle_scenario", [](double cs_shift, double cu_shift) { return cycle_scenario_1d(cs_shift, cu_shift).to_json().dump(); },
        py::arg("cs_shift") = 0.035, py::arg("cu_shift") = 0.035);
  m.def("mixing_scenario", [] { return mixing_scenario_1d().to_json().dump(); });

  py::class_<BiSequence>(m, "BiSequence")
      .def(py::init<Word, Word, Word, Word>(), py::arg("past_transient"), py::arg("past_period"), py::arg("future_transient"),
           py::arg("future_period"))
      .def_static("parse", &BiSequence::parse)
      .def_static("constant", &BiSequence::constant)
      .def("shift", &BiSequence::shift)
      .def("with_word", &BiSequence::with_word)
      .def("__getitem__", [](const BiSequence& s, long i) { return s[i]; })
      .def("__eq__", [](const BiSequence& a, const BiSequence& b) { return a == b; })
      .def("__str__", &BiSequence::str)
      .def("__repr__", [](const BiSequence& s) { return "BiSequence('" + s.str() + "')"; });

  m.def("metric", &metric, py::arg("a"), py::arg("b"), py::arg("nu") = 0.5);
}
