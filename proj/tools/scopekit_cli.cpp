#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/semantics/checks.hpp"
#include "scopekit/suites.hpp"

using namespace scopekit;

namespace {

enum Exit { kOk = 0, kInputError = 1, kUnsupported = 2, kCheckFailed = 3 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  std::string fragment = "all";
  std::string model_path;
  std::string monad;
  int nat_bound = 4;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--fragment", c.fragment, "fragment: base, all, or extensions joined by ',' or '+'");
  app->add_option("--model", c.model_path, "model config (JSON)");
  app->add_option("--monad", c.monad, "monad name, overriding the model config");
  app->add_option("--nat-bound", c.nat_bound, "size of the Nat carrier")->check(CLI::PositiveNumber);
}

cbv::FragmentConfig fragment_of(const Common& c) {
  cbv::FragmentConfig proto;
  proto.nat_bound = c.nat_bound;
  return cbv::parse_fragment(c.fragment, proto);
}

std::optional<sem::ModelConfig> model_of(const Common& c) {
  std::optional<sem::ModelConfig> m;
  if (!c.model_path.empty()) m = sem::model_from_json(slurp(c.model_path));
  if (!c.monad.empty()) {
    if (!m) m = sem::ModelConfig{};
    m->monad.name = c.monad;
  }
  return m;
}

int run_program(const Common& c, const std::string& file) {
  cbv::FragmentConfig frag = fragment_of(c);
  OperatorTable table = cbv::build_operator_table(frag);
  cbv::Program prog = cbv::parse_program(slurp(file));
  Term t = cbv::typecheck_program(prog, frag, table);
  sem::Model model(model_of(c).value_or(sem::ModelConfig{}), frag);
  sem::require_capabilities(t, model);
  sem::Table tab = sem::materialize(sem::denote(t, model), model);
  std::cout << cbv::context_text(prog.names, prog.types) << " |- " << cbv::pretty(t, prog.names) << " : "
            << to_string(t.sort()) << "\n";
  std::cout << sem::show_table(tab, model, prog.names);
  return kOk;
}

int run_subst(const Common& c, const std::string& term_file, const std::string& subst_file) {
  cbv::FragmentConfig frag = fragment_of(c);
  OperatorTable table = cbv::build_operator_table(frag);
  cbv::Program prog = cbv::parse_program(slurp(term_file));
  Term t = cbv::typecheck_program(prog, frag, table);
  cbv::SubstSpec spec = cbv::parse_substitution(slurp(subst_file), prog.names);
  Context target = cbv::make_context(spec.types);
  cbv::check_context(target, frag);
  std::vector<Term> entries;
  for (std::size_t y = 0; y < spec.values.size(); ++y)
    entries.push_back(cbv::typecheck(spec.values[y], target, cbv::value_sort(prog.types.at(y)), frag, table));
  SubstEnv sigma = make_subst_env(t.context(), target, entries);
  Term result = substitute(t, sigma);
  std::cout << cbv::context_text(spec.names, spec.types) << " |- " << cbv::pretty(result, spec.names) << "\n";
  auto m = model_of(c);
  if (!m) return kOk;
  sem::Model model(*m, frag);
  sem::require_capabilities(t, model);
  for (auto& e : entries) sem::require_capabilities(e, model);
  auto w = sem::lemma_witness(t, sigma, model);
  std::cout << (w ? "FAIL " + *w : std::string("PASS")) << "\n";
  return w ? kCheckFailed : kOk;
}

void list_fragments() {
  for (auto& c : cbv::all_fragments()) {
    std::cout << c.name() << "\n";
    auto needs = cbv::needs_of(c);
    std::cout << "  needs:";
    if (needs.empty()) std::cout << " none";
    for (auto& n : needs) std::cout << " " << n.need << " := " << n.fulfillment << ";";
    std::cout << "\n  model: " << cbv::base_model_requirement();
    for (auto& row : cbv::menu())
      if (c.has(row.ext) && !row.model.empty()) std::cout << "; " << row.model;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scopekit: heterogeneous syntax with binding, substitution and CBV semantics"};
  app.require_subcommand(1);

  Common common;
  std::string program_file, term_file, subst_file;
  auto* run = app.add_subcommand("run", "print the denotation table of a program");
  add_common(run, common);
  run->add_option("program", program_file, "program file")->required();

  auto* subst = app.add_subcommand("subst", "substitute and check the substitution lemma");
  add_common(subst, common);
  subst->add_option("term", term_file, "term file")->required();
  subst->add_option("substitution", subst_file, "substitution file")->required();

  std::string suite;
  SuiteOptions so;
  std::string report_path;
  bool all_fragments = false;
  std::vector<std::string> fragments;
  auto* check = app.add_subcommand("check", "run a law suite");
  check->add_option("suite", suite, "suite name or all")->required();
  check->add_option("--fragment", fragments, "fragments to check (repeatable)");
  check->add_flag("--all-fragments", all_fragments, "check every one of the 128 fragments");
  check->add_option("--model", common.model_path, "model config (JSON)");
  check->add_option("--monad", so.monads, "monads to check (repeatable)");
  check->add_option("--seed", so.seed, "random seed");
  check->add_option("--depth", so.depth, "term depth")->check(CLI::PositiveNumber);
  check->add_option("--ctx-bound", so.ctx_bound, "context length bound")->check(CLI::PositiveNumber);
  check->add_option("--nat-bound", so.nat_bound, "size of the Nat carrier")->check(CLI::PositiveNumber);
  check->add_option("--report", report_path, "write the JSON report here");

  auto* frags = app.add_subcommand("fragments", "list the 128 fragments with their needs and model requirements");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_program(common, program_file);
    if (*subst) return run_subst(common, term_file, subst_file);
    if (*frags) {
      list_fragments();
      return kOk;
    }
    if (*check) {
      if (!common.model_path.empty()) so.model = sem::model_from_json(slurp(common.model_path));
      cbv::FragmentConfig proto;
      proto.nat_bound = so.nat_bound;
      if (all_fragments) so.fragments = cbv::all_fragments(proto);
      for (auto& f : fragments) so.fragments.push_back(cbv::parse_fragment(f, proto));
      Report rep = run_suite(suite, so);
      std::cout << rep.to_text();
      if (report_path.empty())
        if (const char* dir = std::getenv("SCOPEKIT_REPORT_DIR"))
          report_path = (std::filesystem::path(dir) / (suite + ".json")).string();
      if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + report_path);
        out << rep.to_json();
      }
      return rep.all_pass() ? kOk : kCheckFailed;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::UnsupportedCapability ? kUnsupported : kInputError;
  }
  return kOk;
}
