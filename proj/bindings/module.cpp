#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "aaq/qelim.hpp"
#include "aaq/semantics.hpp"
#include "aaq/syntax.hpp"

namespace py = pybind11;

namespace {

aaq::BigInt to_bigint(const py::int_& v) {
  // Route through the decimal string so arbitrary-size Python ints survive.
  return aaq::BigInt(py::repr(v).cast<std::string>());
}

aaq::Env to_env(const py::dict& binds) {
  aaq::Env env;
  for (auto item : binds)
    env[item.first.cast<std::string>()] =
        to_bigint(py::reinterpret_borrow<py::int_>(item.second));
  return env;
}

aaq::FormulaPtr parse(const std::string& text, std::size_t node_limit) {
  return aaq::parse_formula(
      text, node_limit ? node_limit : aaq::kDefaultParseNodeLimit);
}

aaq::ElimOptions elim_opts(std::uint64_t node_limit) {
  aaq::ElimOptions opts;
  if (node_limit) opts.node_limit = node_limit;
  return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decision procedure and quantifier elimination for the "
            "almost-all quantifier Q over the naturals. Formulas are passed "
            "and returned as strings in the surface syntax.";

  auto error = py::register_exception<aaq::Error>(m, "Error");
  py::register_exception<aaq::ParseError>(m, "ParseError", error);
  py::register_exception<aaq::LimitError>(m, "LimitError", error);
  py::register_exception<aaq::ShapeError>(m, "ShapeError", error);
  py::register_exception<aaq::EvalError>(m, "EvalError", error);

  py::class_<aaq::Verdict>(m, "Verdict")
      .def_readonly("value", &aaq::Verdict::value)
      .def_readonly("stable", &aaq::Verdict::stable)
      .def_property_readonly(
          "method",
          [](const aaq::Verdict& v) {
            return std::string(aaq::method_name(v.method));
          })
      .def("__bool__", [](const aaq::Verdict& v) { return v.value; })
      .def("__repr__", [](const aaq::Verdict& v) {
        return std::string("Verdict(value=") + (v.value ? "True" : "False") +
               ", method='" + aaq::method_name(v.method) + "', stable=" +
               (v.stable ? "True" : "False") + ")";
      });

  py::class_<aaq::CorpusInstance>(m, "CorpusInstance")
      .def_readonly("index", &aaq::CorpusInstance::index)
      .def_readonly("seed", &aaq::CorpusInstance::seed)
      .def_readonly("sentence", &aaq::CorpusInstance::sentence)
      .def_readonly("decide_value", &aaq::CorpusInstance::decide_value)
      .def_readonly("oracle_value", &aaq::CorpusInstance::oracle_value)
      .def_readonly("oracle_stable", &aaq::CorpusInstance::oracle_stable)
      .def_property_readonly(
          "oracle_method", [](const aaq::CorpusInstance& i) {
            return std::string(aaq::method_name(i.oracle_method));
          });

  py::class_<aaq::CorpusReport>(m, "CorpusReport")
      .def_readonly("seed", &aaq::CorpusReport::seed)
      .def_readonly("count", &aaq::CorpusReport::instance_count)
      .def_readonly("agreements", &aaq::CorpusReport::agreement_count)
      .def_readonly("disagreements", &aaq::CorpusReport::disagreements)
      .def_readonly("unstable", &aaq::CorpusReport::unstable)
      .def_readonly("elapsed_ms", &aaq::CorpusReport::elapsed_ms)
      .def("__repr__", [](const aaq::CorpusReport& r) {
        return "CorpusReport(count=" + std::to_string(r.instance_count) +
               ", agreements=" + std::to_string(r.agreement_count) +
               ", disagreements=" + std::to_string(r.disagreements.size()) +
               ", unstable=" + std::to_string(r.unstable.size()) + ")";
      });

  m.def(
      "parse",
      [](const std::string& text, std::size_t node_limit,
         const std::string& format) {
        auto f = parse(text, node_limit);
        return aaq::print_formula(*f, format == "sexpr"
                                          ? aaq::PrintFormat::Sexpr
                                          : aaq::PrintFormat::Text);
      },
      py::arg("text"), py::arg("node_limit") = 0, py::arg("format") = "text",
      "Parse a formula and return its canonical printed form.");

  m.def(
      "desugar",
      [](const std::string& text) {
        return aaq::print_formula(*aaq::desugar(*parse(text, 0)));
      },
      py::arg("text"),
      "Rewrite to the core fragment: atoms over < and =, connectives "
      "!, && and ||.");

  m.def(
      "free_vars",
      [](const std::string& text) {
        return aaq::free_vars(*parse(text, 0));
      },
      py::arg("text"), "Free variables of a formula.");

  m.def(
      "decide",
      [](const std::string& text, std::uint64_t node_limit) {
        return aaq::decide(*parse(text, node_limit), elim_opts(node_limit));
      },
      py::arg("text"), py::arg("node_limit") = 0,
      "Decide a closed sentence by quantifier elimination.");

  m.def(
      "qe",
      [](const std::string& text, std::uint64_t node_limit) {
        auto qf = aaq::qf_equivalent(*parse(text, node_limit),
                                     elim_opts(node_limit));
        return aaq::print_formula(*aaq::qf_to_formula(*qf));
      },
      py::arg("text"), py::arg("node_limit") = 0,
      "Quantifier-free formula equivalent over the naturals.");

  m.def(
      "eval_qf",
      [](const std::string& text, const py::dict& binds) {
        auto f = parse(text, 0);
        auto qf = aaq::eliminate_all(*f);
        return aaq::eval_qf(*qf, to_env(binds));
      },
      py::arg("text"), py::arg("binds") = py::dict(),
      "Evaluate a quantifier-free formula at integer bindings. Quantified "
      "input is eliminated first, so this also evaluates sentences.");

  m.def(
      "oracle_inner",
      [](const std::string& text) {
        return aaq::oracle_decide_inner(*parse(text, 0));
      },
      py::arg("text"),
      "Sound root-bound oracle for single-quantifier sentences.");

  m.def(
      "oracle_window",
      [](const std::string& text, std::uint64_t base, std::uint64_t window,
         unsigned levels) {
        aaq::WindowOptions opts;
        opts.base = base;
        opts.window = window;
        opts.levels = levels;
        return aaq::oracle_decide_window(*parse(text, 0), opts);
      },
      py::arg("text"), py::arg("base") = 32, py::arg("window") = 8,
      py::arg("levels") = 6,
      "Heuristic windowed-stabilization oracle for nested sentences.");

  m.def(
      "cross_check",
      [](std::uint64_t seed, std::uint64_t count, unsigned degree,
         unsigned atoms, unsigned min_depth, unsigned max_depth) {
        aaq::CorpusOptions opts;
        opts.seed = seed;
        opts.count = count;
        opts.degree = degree;
        opts.atoms = atoms;
        opts.min_depth = min_depth;
        opts.max_depth = max_depth;
        return aaq::cross_check(opts);
      },
      py::arg("seed") = 42, py::arg("count") = 100, py::arg("degree") = 3,
      py::arg("atoms") = 4, py::arg("min_depth") = 1,
      py::arg("max_depth") = 2,
      "Cross-check the eliminator against the oracles on a deterministic "
      "random corpus.");

  m.def(
      "zt_tail",
      [](const std::string& text, std::uint64_t max_degree,
         std::int64_t coeff_bound) {
        aaq::ZtSampleBounds bounds;
        bounds.max_degree = max_degree;
        bounds.coeff_bound = coeff_bound;
        return aaq::zt_tail_consistency(*parse(text, 0), bounds);
      },
      py::arg("text"), py::arg("max_degree") = 2, py::arg("coeff_bound") = 5,
      "Check the verdict of a single-quantifier sentence against evaluation "
      "over integer polynomials in an infinite element t.");
}
