#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "setcard/error.hpp"
#include "setcard/oracle.hpp"
#include "setcard/parser.hpp"
#include "setcard/printer.hpp"
#include "setcard/report.hpp"
#include "setcard/solver.hpp"

namespace py = pybind11;
using namespace setcard;

namespace {

SolveOptions options(long timeout_ms, bool fix, int max_solutions, bool infer) {
  SolveOptions o;
  o.timeout_ms = timeout_ms;
  o.fix_size = fix;
  o.max_solutions = max_solutions;
  o.infer_size = infer;
  return o;
}

std::string solve_json(const std::string& text, long timeout_ms, bool fix, int max_solutions, bool infer) {
  Formula f = parse_formula(text);
  SolveResult r;
  {
    py::gil_scoped_release release;
    r = sat_card(f, options(timeout_ms, fix, max_solutions, infer));
  }
  return to_json(make_report(r));
}

std::string bench_json(const std::string& dir, long timeout_ms, bool infer) {
  BenchOptions o;
  o.timeout_ms = timeout_ms;
  o.infer_size = infer;
  py::gil_scoped_release release;
  return to_json(run_bench(dir, o));
}

std::optional<std::map<std::string, std::string>> oracle(const std::string& text,
                                                         std::vector<std::string> ur_universe, long int_lo,
                                                         long int_hi, int max_width) {
  Scope s;
  s.ur_universe = std::move(ur_universe);
  s.int_lo = int_lo;
  s.int_hi = int_hi;
  s.max_width = max_width;
  OracleResult r = oracle_sat(parse_formula(text), s);
  if (!r.sat) return std::nullopt;
  std::map<std::string, std::string> out;
  for (const auto& [name, v] : r.witness) out[name] = to_string(v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_setcard, m) {
  m.doc() = "Satisfiability of hereditarily finite hybrid set formulas with cardinality";

  py::exception<Error> base(m, "SetcardError", PyExc_RuntimeError);
  py::exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::exception<SortError>(m, "SortError", PyExc_ValueError);
  py::exception<ScopeTooLarge>(m, "ScopeTooLarge", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    auto type = [](const char* name) { return py::module_::import("setcard._setcard").attr(name); };
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      py::object err = type("ParseError")(e.what());
      err.attr("line") = e.line();
      err.attr("column") = e.column();
      PyErr_SetObject(type("ParseError").ptr(), err.ptr());
    } catch (const SortError& e) {
      py::set_error(type("SortError"), e.what());
    } catch (const ScopeTooLarge& e) {
      py::set_error(type("ScopeTooLarge"), e.what());
    } catch (const Error& e) {
      py::set_error(type("SetcardError"), e.what());
    }
  });

  m.def("solve_json", &solve_json, py::arg("text"), py::arg("timeout_ms"), py::arg("fix_size"),
        py::arg("max_solutions"), py::arg("infer_size"));
  m.def("bench_json", &bench_json, py::arg("dir"), py::arg("timeout_ms"), py::arg("infer_size"));
  m.def(
      "canonical", [](const std::string& text) { return to_string(parse_formula(text)); }, py::arg("text"),
      "The parsed formula printed back in canonical form.");
  m.def("expected_verdict", &expected_verdict, py::arg("text"));
  m.def("oracle_sat", &oracle, py::arg("text"), py::arg("ur_universe"), py::arg("int_lo"), py::arg("int_hi"),
        py::arg("max_width"));
}
