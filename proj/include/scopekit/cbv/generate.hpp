#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>

#include "scopekit/cbv/types.hpp"
#include "scopekit/signature.hpp"
#include "scopekit/term.hpp"

namespace scopekit::cbv {

struct GenOptions {
  int max_depth = 4;     // Term::depth, leaves count 1
  int max_ctx = 3;
  int pool_depth = 1;    // types drawn for intermediate results
  std::function<bool(const TypeRef&)> type_ok;  // extra filter on every drawn type
  long fuel = 4000;      // node attempts per sample
};

struct Sample {
  Context ctx;
  Sort sort;
  Term term;
};

// Random well-typed terms of a fragment.  Generation is inhabitation-aware in
// the cheap sense: a branch that cannot be completed is abandoned and another
// production is tried, within a fuel budget.
class TermGenerator {
 public:
  TermGenerator(FragmentConfig c, const OperatorTable& table, GenOptions opt = {});

  const std::vector<TypeRef>& pool() const { return pool_; }
  const FragmentConfig& config() const { return c_; }

  std::optional<Term> value(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng);
  std::optional<Term> comp(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng);

  Context random_context(std::mt19937_64& rng, std::size_t len);
  // a term of random sort over a random context (computations preferred)
  Sample sample(std::mt19937_64& rng);
  // an environment from `source` over `target`; falls back to variables when target covers source
  std::optional<SubstEnv> random_env(const Context& source, const Context& target, int depth, std::mt19937_64& rng);
  // a context containing every type of `source`, shuffled, plus up to `extra` more entries
  Context covering_context(const Context& source, std::size_t extra, std::mt19937_64& rng);

 private:
  std::optional<Term> value_node(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng);
  std::optional<Term> comp_node(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng);
  std::optional<Term> build(const std::string& label, const Context& ctx, std::vector<Term> kids);
  bool allowed(const std::string& label);
  TypeRef pick(std::mt19937_64& rng);

  FragmentConfig c_;
  const OperatorTable& table_;
  GenOptions opt_;
  std::vector<TypeRef> pool_;
  long fuel_ = 0;
};

// Operator instances whose type annotations come from `pool`: lets of one or
// two bindings, letrec of one function with at most one parameter.
std::vector<OperatorRef> operator_instances(const FragmentConfig& c, const OperatorTable& table,
                                            const std::vector<TypeRef>& pool);

// Every term up to a depth over the given instances, memoised per (context, sort, depth).
class TermEnumerator {
 public:
  TermEnumerator(std::vector<OperatorRef> instances, std::size_t limit = 200000);
  // throws BoundExceeded past the limit
  const std::vector<Term>& terms(const Context& ctx, const Sort& sort, int depth);

 private:
  std::map<Sort, std::vector<OperatorRef>> by_result_;
  std::size_t limit_;
  std::map<std::string, std::vector<Term>> memo_;
};

}  // namespace scopekit::cbv
