#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "scopekit/cbv/generate.hpp"
#include "scopekit/report.hpp"
#include "scopekit/semantics/model.hpp"

namespace scopekit::sem {

// [[M[sigma]]] against [[M]] . <[[sigma_y]]>, tabulated over sigma's target.
// Returns the first differing point.
std::optional<std::string> lemma_witness(const Term& m, const SubstEnv& sigma, const Model& model,
                                         const DenoteOptions& opt = {}, std::uint64_t point_limit = 1u << 16);

struct LemmaOptions {
  std::uint64_t seed = 1;
  int cases = 100;
  int depth = 4;       // term depth, leaves count 1
  int ctx_bound = 2;   // source contexts; targets add at most one entry
  std::uint64_t point_limit = 4096;  // resample pairs whose target has more points
  DenoteOptions denote;
};

// Random pairs from the fragment's generator.
Report check_substitution_lemma(const cbv::FragmentConfig& c, const Model& model, const LemmaOptions& opt = {});

struct ExhaustiveOptions {
  int depth = 3;
  int ctx_bound = 2;
  int pool_depth = 1;
  int env_depth = 3;   // substituted values range over every value term up to this depth
  std::uint64_t point_limit = 1u << 14;
};

// Every term up to the depth over every context up to the bound, against
// every environment built from value terms, for every target context up to
// the bound.
Report check_substitution_lemma_exhaustive(const cbv::FragmentConfig& c, const Model& model,
                                           const ExhaustiveOptions& opt = {});

struct CompatOptions {
  std::uint64_t seed = 1;
  int ctx_bound = 2;
  int pool_depth = 1;
  std::uint64_t combos = 200;      // per operator and context pair; exhaustive when fewer exist
  std::uint64_t carrier_limit = 64;
  DenoteOptions denote;
};

// For every operator instance within bounds, all (or sampled) sub-denotations
// d and semantic substitutions sigma: [[op(d)]] . sigma = [[op(route(d, sigma))]].
Report check_compatibility(const cbv::FragmentConfig& c, const Model& model, const CompatOptions& opt = {});

// Action axioms of the semantic substitution structure on random tables, the
// well-definedness of substitution under renamings, and point = unit.
Report check_semantic_structure(const cbv::FragmentConfig& c, const Model& model, std::uint64_t seed = 1,
                                int samples = 200);

// The substitution lemma on pairs whose source context repeats a type and
// whose term uses `kind`, with that clause corrupted.  A correct checker
// reports a failure with a witness.
Report mutation_via_lemma(const cbv::FragmentConfig& c, const Model& model, cbv::OpKind kind, std::uint64_t seed = 1,
                          int attempts = 1500);

// the clause each extension's mutation corrupts
cbv::OpKind mutation_target(cbv::Extension e);

// Loops against bounded unrolling on generated programs, divergence of
// self-loops, recursive programs against reference evaluators at Nat bound 25,
// and Kleene results as (least) fixed points.
Report check_fixpoints(std::uint64_t seed = 1, int programs = 60);

}  // namespace scopekit::sem
