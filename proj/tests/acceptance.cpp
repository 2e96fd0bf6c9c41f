#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracle.hpp"
#include "scopekit/cbv/types.hpp"
#include "scopekit/suites.hpp"

using namespace scopekit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& what, const Outcome& o) {
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
  if (!o.detail.empty()) std::cout << " (" << o.detail << ")";
  std::cout << std::endl;
}

std::string first_failure(const Report& r) {
  for (auto& rec : r.records())
    if (!rec.pass) return rec.suite + " / " + rec.axiom + ": " + rec.witness;
  return {};
}

const CheckRecord* find(const Report& r, const std::string& axiom) {
  for (auto& rec : r.records())
    if (rec.axiom == axiom) return &rec;
  return nullptr;
}

bool starts_with(const std::string& s, const std::string& p) { return s.compare(0, p.size(), p) == 0; }

// every record of the report passes and `extra` holds
Outcome judge(const Report& r, const std::function<std::string()>& extra = {}) {
  Outcome o;
  if (!r.all_pass()) return {false, first_failure(r)};
  if (extra) {
    std::string problem = extra();
    if (!problem.empty()) return {false, problem};
  }
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<oracle::Node> oracle_env(const SubstEnv& s) {
  std::vector<oracle::Node> out;
  for (auto& e : s.entries) out.push_back(oracle::from_term(e));
  return out;
}

}  // namespace

int main() {
  SuiteOptions opt;
  cbv::FragmentConfig proto;
  proto.base_types = {"b", "c"};
  proto.nat_bound = opt.nat_bound;

  // 1 and 2 share the corpus
  {
    auto t0 = std::chrono::steady_clock::now();
    Report laws;
    long long terms = 0, oracle_checks = 0;
    int fragments = 0, max_depth = 0;
    std::size_t max_ctx = 0;
    std::string oracle_miss;
    for (auto& c : cbv::all_fragments(proto)) {
      auto corpus = term_law_corpus(c, opt.seed, opt.terms, opt.depth, opt.ctx_bound);
      ++fragments;
      terms += static_cast<long long>(corpus.size());
      laws.merge(check_term_laws(corpus));
      for (auto& k : corpus) {
        max_depth = std::max(max_depth, static_cast<int>(k.term.depth()));
        max_ctx = std::max(max_ctx, k.term.context().size());
        // the first environment on the term, the second on its image
        const Term mid = substitute(k.term, k.s1);
        using Step = std::pair<const Term*, const SubstEnv*>;
        for (auto [t, env] : {Step{&k.term, &k.s1}, Step{&mid, &k.s2}}) {
          ++oracle_checks;
          if (oracle::from_term(substitute(*t, *env)) != oracle::substitute(oracle::from_term(*t), oracle_env(*env)) &&
              oracle_miss.empty())
            oracle_miss = to_text(*t) + " [" + c.name() + "]";
        }
      }
    }
    double secs = seconds_since(t0);
    laws = laws.condensed();
    std::ostringstream d;
    d << fragments << " fragments, " << terms << " terms, depth <= " << max_depth << ", contexts <= " << max_ctx
      << ", " << static_cast<int>(secs) << " s";
    Outcome o = judge(laws, [&]() -> std::string {
      if (fragments != 128 || terms < 200LL * 128) return "corpus too small";
      if (max_depth > 4 || max_ctx > 3) return "corpus exceeds its bounds";
      if (secs > 300) return "took longer than 5 minutes";
      return {};
    });
    if (o.pass) o.detail = d.str();
    report(1, "term laws on every fragment", o);

    Outcome o2;
    o2.pass = oracle_miss.empty() && oracle_checks >= 2LL * 200 * 128;
    o2.detail = o2.pass ? std::to_string(oracle_checks) + " substitutions agree with the shifting oracle"
                        : "disagreement on " + oracle_miss;
    report(2, "fold substitution equals the shifting oracle", o2);
  }

  {
    Report r = run_suite("subst-lemma", opt);
    int exhaustive = 0, randomized = 0;
    long long random_cases_min = -1;
    for (auto& rec : r.records()) {
      if (starts_with(rec.axiom, "substitution lemma, exhaustive")) ++exhaustive;
      else if (starts_with(rec.axiom, "substitution lemma [")) {
        ++randomized;
        random_cases_min = random_cases_min < 0 ? rec.cases : std::min(random_cases_min, rec.cases);
      }
    }
    Outcome o = judge(r, [&]() -> std::string {
      if (exhaustive != 4 * 2 * 3) return std::to_string(exhaustive) + " exhaustive configurations";
      if (randomized != 124) return std::to_string(randomized) + " randomized configurations";
      if (random_cases_min < 100) return "a randomized configuration has " + std::to_string(random_cases_min) + " cases";
      return {};
    });
    if (o.pass)
      o.detail = std::to_string(exhaustive) + " exhaustive runs, " + std::to_string(randomized) +
                 " randomized configurations with >= " + std::to_string(random_cases_min) + " cases";
    report(3, "substitution lemma", o);
  }

  {
    Report r = run_suite("monad-laws", opt);
    int exhaustive = 0, mutations = 0;
    for (auto& rec : r.records()) {
      if (rec.axiom.find("exhaustive up to size 2") != std::string::npos) ++exhaustive;
      if (starts_with(rec.axiom, "mutation detected")) ++mutations;
    }
    Outcome o = judge(r, [&]() -> std::string {
      if (exhaustive != 6 || mutations != 6) return "expected six monads";
      return {};
    });
    if (o.pass) o.detail = "6 monads exhaustive at sizes <= 2, sampled at size 3, broken bind caught for each";
    report(4, "monad laws", o);
  }

  {
    Report r = run_suite("compatibility", opt);
    int mutations = 0, elementwise = 0;
    for (auto& rec : r.records()) {
      if (starts_with(rec.axiom, "mutation detected")) ++mutations;
      else if (rec.suite == "compatibility") ++elementwise;
    }
    Outcome o = judge(r, [&]() -> std::string {
      if (mutations < 128 + 8) return "only " + std::to_string(mutations) + " mutations";
      return {};
    });
    if (o.pass)
      o.detail = std::to_string(elementwise) + " elementwise records, " + std::to_string(mutations) +
                 " mutations each failing with a witness";
    report(5, "compatibility", o);
  }

  {
    Report r = run_suite("presheaf-laws", opt);
    const CheckRecord* empty = find(r, "left unitor not invertible");
    Outcome o = judge(r, [&]() -> std::string { return empty ? "" : "no witness for the left unitor"; });
    if (o.pass) o.detail = std::to_string(opt.structures) + " structures; " + empty->witness;
    report(6, "presheaf laws", o);
  }

  {
    Report r = run_suite("coend", opt);
    const CheckRecord* sym = find(r, "random generator pairs symmetric under the closure");
    Outcome o = judge(r, [&]() -> std::string {
      for (auto* a : {"merging variables", "weakening by an unused variable", "permuting variables"})
        if (!find(r, a)) return std::string("missing identification: ") + a;
      if (!sym || sym->cases < 100) return "fewer than 100 generator pairs";
      return {};
    });
    if (o.pass) o.detail = "3 identifications, " + std::to_string(sym->cases) + " generator pairs";
    report(7, "coend quotient", o);
  }

  {
    Report r = run_suite("fixpoints", opt);
    const CheckRecord* loops = find(r, "loop denotation equals bounded unrolling");
    Outcome o = judge(r, [&]() -> std::string {
      if (!loops || loops->cases < 50) return "fewer than 50 loop programs";
      for (auto* a : {"self-loop diverges", "factorial matches the reference", "even/odd matches the reference",
                      "Kleene result is a fixed point", "Kleene result is the least fixed point"})
        if (!find(r, a)) return std::string("missing check: ") + a;
      return {};
    });
    if (o.pass) o.detail = std::to_string(loops->cases) + " loop programs; factorial and even/odd at bound 25";
    report(8, "Elgot iteration and fixed points", o);
  }

  {
    Report r = run_suite("meta-laws", opt);
    const CheckRecord* size = find(r, "holed corpus size");
    Outcome o = judge(r, [&]() -> std::string {
      if (!size || size->cases < 200) return "holed corpus smaller than 200";
      return {};
    });
    if (o.pass) o.detail = std::to_string(size->cases) + " holed terms";
    report(9, "metavariable laws", o);
  }

  return failures == 0 ? 0 : 1;
}
