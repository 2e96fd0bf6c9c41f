#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/types.hpp"
#include "scopekit/semantics/monad.hpp"
#include "scopekit/term.hpp"

namespace scopekit::sem {

struct ModelConfig {
  MonadSpec monad;
  std::map<std::string, int> base_sizes;  // |[[b]]| per base type
  int default_base_size = 2;
};
ModelConfig model_from_json(const std::string& text);
std::string model_to_json(const ModelConfig& c);

// A strong-monad model on finite sets for one fragment.
class Model {
 public:
  Model(ModelConfig cfg, cbv::FragmentConfig frag);

  const ModelConfig& config() const { return cfg_; }
  const cbv::FragmentConfig& fragment() const { return frag_; }
  const Monad& monad() const { return *monad_; }
  const MonadRef& monad_ref() const { return monad_; }
  bool kleisli_exponentials() const { return true; }

  // [[t]] and T[[t]]
  CarrierRef carrier(const cbv::TypeRef& t) const;
  CarrierRef comp_carrier(const cbv::TypeRef& t) const;
  CarrierRef sort_carrier(const Sort& s) const;
  // the product of a context's entries, as tuples
  CarrierRef context_carrier(const Context& g) const;

  std::string show(const cbv::TypeRef& t, const SemVal& v) const;
  std::string show_comp(const cbv::TypeRef& t, const SemVal& m) const;
  std::string show_sort(const Sort& s, const SemVal& v) const;

 private:
  ModelConfig cfg_;
  cbv::FragmentConfig frag_;
  MonadRef monad_;
  mutable std::mutex mu_;
  mutable std::map<std::string, CarrierRef> cache_;
};

CarrierRef interpret_type(const cbv::TypeRef& t, const Model& m);

using SemEnv = std::vector<SemVal>;

// A morphism [[ctx]] -> [[s]] (first-class s) or [[ctx]] -> T[[s]] (second-class),
// kept as a closure and materialised by `materialize`.
struct Denotation {
  Sort sort;
  Context ctx;
  std::function<SemVal(const SemEnv&)> fn;
  SemVal operator()(const SemEnv& g) const { return fn(g); }
};

struct DenoteOptions {
  // deliberately corrupt one clause: it reads the first two context entries
  // swapped whenever they have the same type
  std::optional<cbv::OpKind> corrupt;
  // for-loops by bounded unrolling (|state| + 1 steps) instead of cycle detection
  bool unroll_loops = false;
  // called with the fixed point and its functional after every letrec
  std::function<void(const SemVal& fix, const std::function<SemVal(const SemVal&)>& phi)> on_fixpoint;
};

Denotation var_denotation(const Context& g, std::size_t pos);
// d over sigma.source, result over sigma.target
Denotation precompose(const Denotation& d, const Env<Denotation>& sigma);
const PointedHooks<Denotation>& denotation_hooks();

// The algebra: one clause per operator, given the denotations of the arguments
// (each over g extended by the argument's binder).
Denotation algebra_clause(const Model& m, const Operator& op, const Context& g, std::vector<Denotation> kids,
                          const DenoteOptions& opt = {});

// throws UnsupportedCapability when t needs iteration or fixed points the monad lacks
void require_capabilities(const Term& t, const Model& m);
// [[t]] for t over g, by the generic fold
Denotation denote(const Term& t, const Model& m, const DenoteOptions& opt = {});

struct Table {
  Sort sort;
  Context ctx;
  std::vector<SemVal> values;  // indexed by rank in context_carrier(ctx)
};
Table materialize(const Denotation& d, const Model& m, std::uint64_t limit = 1u << 18);
bool operator==(const Table& a, const Table& b);
// the first differing point, described
std::optional<std::string> table_difference(const Table& a, const Table& b, const Model& m);
std::string show_point(const Context& g, const SemVal& point, const Model& m,
                       const std::vector<std::string>& names = {});
std::string show_table(const Table& t, const Model& m, const std::vector<std::string>& names = {});

// |[[t]]|, saturating at kHuge
std::uint64_t carrier_size(const Model& m, const cbv::TypeRef& t);

}  // namespace scopekit::sem
