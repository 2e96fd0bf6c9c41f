#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scopekit/cbv/types.hpp"
#include "scopekit/report.hpp"
#include "scopekit/semantics/model.hpp"
#include "scopekit/term.hpp"

namespace scopekit {

struct SuiteOptions {
  std::uint64_t seed = 1;
  int depth = 4;
  int ctx_bound = 3;
  int nat_bound = 4;
  int terms = 200;        // per fragment, term-laws
  int holed_terms = 256;  // meta-laws corpus
  int structures = 20;    // presheaf suites
  int coend_pairs = 200;
  int lemma_cases = 100;  // per fragment, randomized lemma
  int loop_programs = 60;
  std::vector<std::string> monads;                // empty: the suite's default
  std::vector<cbv::FragmentConfig> fragments;     // empty: the suite's default
  std::optional<sem::ModelConfig> model;          // base sizes and monad parameters
};

// term-laws, meta-laws, presheaf-laws, skew, pointed, coend, monad-laws,
// compatibility, subst-lemma, fixpoints
const std::vector<std::string>& suite_names();
// "all" runs every suite.  Throws InvalidInput for an unknown name.
Report run_suite(const std::string& name, const SuiteOptions& opt);

// ---- term-level laws

struct LawCase {
  cbv::FragmentConfig frag;
  Term term;
  SubstEnv s1;  // term's context over a second context
  SubstEnv s2;  // second over a third
};
// the fragment's proto settings are kept; terms use every base type listed
std::vector<LawCase> term_law_corpus(const cbv::FragmentConfig& c, std::uint64_t seed, int count, int depth,
                                     int ctx_bound);
// x[s] = s_x, M[id] = M, (M[s1])[s2] = M[s1[s2]]
Report check_term_laws(const std::vector<LawCase>& corpus);

struct HoledCase {
  cbv::FragmentConfig frag;
  Term term;        // mentions holes of `holes`
  HoleSet holes;
  MetaSubst s1;     // bodies mention holes of `holes2`
  HoleSet holes2;
  MetaSubst s2;     // hole-free bodies
  SubstEnv sigma;   // from term's context
  MetaSubst fill;   // the subterms the holes replaced
  Term original;
};
std::vector<HoledCase> holed_corpus(const std::vector<cbv::FragmentConfig>& frags, std::uint64_t seed, int count);
// meta unit laws, associativity through compose_meta, commutation with substitution
Report check_meta_laws(const std::vector<HoledCase>& corpus);

// ---- quotient of the substitution tensor on CBV syntax

// The three identifications of the tensor's motivating example and random
// generator pairs against an independent closure.
Report check_coend_identifications(std::uint64_t seed, int pairs);

}  // namespace scopekit
