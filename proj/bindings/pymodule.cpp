#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minicore/exitify.hpp"
#include "minicore/freevars.hpp"
#include "minicore/frontend.hpp"
#include "minicore/lint.hpp"
#include "minicore/subst.hpp"
#include "minicore/testgen.hpp"

namespace py = pybind11;
using namespace minicore;

namespace {

struct PyProgram {
  CoreProgram program;
};

std::vector<std::tuple<std::string, std::string, std::string>> lintTuples(
    const LintReport& report) {
  std::vector<std::tuple<std::string, std::string, std::string>> out;
  out.reserve(report.violations.size());
  for (const auto& v : report.violations)
    out.emplace_back(v.path, v.rule, v.detail);
  return out;
}

}  // namespace

PYBIND11_MODULE(minicore, m) {
  m.doc() = "model of GHC Core variable invariants: lint, subst, exitify";

  py::register_exception<ParseError>(m, "ProgramParseError", PyExc_ValueError);
  py::register_exception<MalformedJoinRhs>(m, "MalformedJoinRhsError",
                                           PyExc_RuntimeError);

  py::class_<PyProgram>(m, "Program")
      .def("__str__", [](const PyProgram& p) { return printProgram(p.program); })
      .def("__eq__",
           [](const PyProgram& a, const PyProgram& b) {
             return programEqual(a.program, b.program);
           })
      .def("__len__", [](const PyProgram& p) { return p.program.size(); });

  m.def("parse_program",
        [](const std::string& text) { return PyProgram{parseProgram(text)}; },
        py::arg("text"), "parse surface syntax into a program");

  m.def("format_program",
        [](const PyProgram& p) { return printProgram(p.program); },
        py::arg("program"), "canonical text form");

  m.def("well_scoped",
        [](const PyProgram& p) { return wellScopedProgram(p.program); },
        py::arg("program"));

  m.def("join_points_valid",
        [](const PyProgram& p) { return isJoinPointsValidProgram(p.program); },
        py::arg("program"));

  m.def("lint",
        [](const PyProgram& p, bool join_points) {
          return lintTuples(lintProgram(p.program, join_points));
        },
        py::arg("program"), py::arg("join_points") = false,
        "violations as (path, rule, detail) tuples; empty means clean");

  m.def("exitify",
        [](const PyProgram& p, bool legacy_bug) {
          return PyProgram{exitifyProgram(legacy_bug ? ExitifyMode::LegacyBug
                                                     : ExitifyMode::Fixed,
                                          p.program)};
        },
        py::arg("program"), py::arg("legacy_bug") = false,
        "float exit paths of recursive join groups into fresh join points");

  m.def("free_vars",
        [](const PyProgram& p) {
          std::vector<std::vector<std::string>> out;
          for (const auto& [v, rhs] : flattenBinds(p.program)) {
            std::vector<std::string> tokens;
            VarSet fvs = exprFreeVars(rhs);
            for (const auto& [u, fv] : fvs.entries())
              tokens.push_back(printVarToken(fv));
            out.push_back(std::move(tokens));
          }
          return out;
        },
        py::arg("program"),
        "free local variable tokens of each top rhs, sorted by unique");

  m.def("sizes",
        [](const PyProgram& p) {
          std::vector<std::pair<std::string, std::uint64_t>> out;
          for (const auto& [v, rhs] : flattenBinds(p.program))
            out.emplace_back(printVarToken(v), exprSize(rhs));
          return out;
        },
        py::arg("program"), "(binder token, size) of each top rhs");

  m.def("gen_program",
        [](std::uint64_t seed, std::uint32_t size, double shadow,
           double join_density) {
          return PyProgram{genProgram(seed, size, shadow, join_density)};
        },
        py::arg("seed"), py::arg("size"), py::arg("shadow") = 0.25,
        py::arg("join_density") = 0.5,
        "random program satisfying both invariants, deterministic in the seed");

  m.def("subst_program",
        [](const PyProgram& p, const std::string& spec_text,
           const std::string& doc) {
          SubstSpec spec = parseSubstSpec(spec_text);
          Subst subst{mkInScopeSet(mkVarSet(spec.inscope)), {}};
          for (const auto& [v, e] : spec.mappings)
            subst.id_env = extendVarEnv(std::move(subst.id_env), v, e);

          std::vector<std::string> warning_tokens;
          CoreProgram out;
          for (const Bind& b : p.program) {
            auto applied = [&](const ExprPtr& rhs) {
              auto [result, warnings] = substExpr(doc, subst, rhs);
              for (const auto& w : warnings)
                warning_tokens.push_back(printVarToken(w.offending_var));
              return result;
            };
            out.push_back(std::visit(
                overloaded{[&](const NonRec& nr) -> Bind {
                             return NonRec{nr.binder, applied(nr.rhs)};
                           },
                           [&](const Rec& r) -> Bind {
                             Rec rewritten;
                             for (const auto& [v, rhs] : r.pairs)
                               rewritten.pairs.emplace_back(v, applied(rhs));
                             return rewritten;
                           }},
                b));
          }
          return py::make_tuple(PyProgram{std::move(out)}, warning_tokens);
        },
        py::arg("program"), py::arg("spec_text"), py::arg("doc") = "python",
        "apply a substitution spec to each top rhs; returns (program, warnings)");
}
