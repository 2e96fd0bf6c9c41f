#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/semantics/checks.hpp"
#include "scopekit/suites.hpp"

namespace py = pybind11;
using namespace scopekit;

namespace {

cbv::FragmentConfig fragment(const std::string& spec, int nat_bound) {
  cbv::FragmentConfig proto;
  proto.nat_bound = nat_bound;
  return cbv::parse_fragment(spec, proto);
}

sem::ModelConfig model(const std::string& monad, int base_size) {
  sem::ModelConfig m;
  m.monad.name = monad;
  m.default_base_size = base_size;
  return m;
}

py::dict run(const std::string& text, const std::string& frag, const std::string& monad, int nat_bound,
             int base_size) {
  cbv::FragmentConfig c = fragment(frag, nat_bound);
  OperatorTable table = cbv::build_operator_table(c);
  cbv::Program p = cbv::parse_program(text);
  Term t = cbv::typecheck_program(p, c, table);
  sem::Model m(model(monad, base_size), c);
  sem::Table tab = sem::materialize(sem::denote(t, m), m);
  sem::CarrierRef pts = m.context_carrier(t.context());
  py::list rows;
  for (std::size_t i = 0; i < tab.values.size(); ++i)
    rows.append(py::make_tuple(sem::show_point(t.context(), pts->unrank(i), m, p.names),
                               m.show_sort(t.sort(), tab.values[i])));
  py::dict out;
  out["term"] = cbv::pretty(t, p.names);
  out["sort"] = to_string(t.sort());
  out["table"] = rows;
  return out;
}

std::string substitute_text(const std::string& term, const std::string& subst, const std::string& frag) {
  cbv::FragmentConfig c = fragment(frag, 4);
  OperatorTable table = cbv::build_operator_table(c);
  cbv::Program p = cbv::parse_program(term);
  Term t = cbv::typecheck_program(p, c, table);
  cbv::SubstSpec spec = cbv::parse_substitution(subst, p.names);
  Context target = cbv::make_context(spec.types);
  std::vector<Term> entries;
  for (std::size_t y = 0; y < spec.values.size(); ++y)
    entries.push_back(cbv::typecheck(spec.values[y], target, cbv::value_sort(p.types.at(y)), c, table));
  return cbv::pretty(substitute(t, make_subst_env(t.context(), target, entries)), spec.names);
}

py::list check(const std::string& suite, std::uint64_t seed, const std::vector<std::string>& fragments,
               const std::vector<std::string>& monads) {
  SuiteOptions opt;
  opt.seed = seed;
  opt.monads = monads;
  for (auto& f : fragments) opt.fragments.push_back(fragment(f, opt.nat_bound));
  Report r;
  {
    py::gil_scoped_release release;
    r = run_suite(suite, opt);
  }
  py::list out;
  for (auto& rec : r.records()) {
    py::dict d;
    d["suite"] = rec.suite;
    d["axiom"] = rec.axiom;
    d["passed"] = rec.pass;
    d["cases"] = rec.cases;
    d["witness"] = rec.witness;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_scopekit, m) {
  m.doc() = "heterogeneous syntax with binding, substitution and CBV semantics";

  static py::exception<Error> error(m, "ScopekitError");
  static py::exception<Error> unsupported(m, "UnsupportedCapability", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      std::string msg = std::string(kind_name(e.kind())) + ": " + e.bare_message();
      if (e.kind() == ErrorKind::UnsupportedCapability) PyErr_SetString(unsupported.ptr(), msg.c_str());
      else PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  m.def("fragments", [] {
    std::vector<std::string> names;
    for (auto& c : cbv::all_fragments()) names.push_back(c.name());
    return names;
  });
  m.def("suites", [] { return suite_names(); });
  m.def("monads", [] { return sem::monad_names(); });
  m.def("run", &run, py::arg("program"), py::arg("fragment") = "all", py::arg("monad") = "option",
        py::arg("nat_bound") = 4, py::arg("base_size") = 2);
  m.def("substitute", &substitute_text, py::arg("term"), py::arg("substitution"), py::arg("fragment") = "all");
  m.def("check", &check, py::arg("suite"), py::arg("seed") = 1, py::arg("fragments") = std::vector<std::string>{},
        py::arg("monads") = std::vector<std::string>{});
}
