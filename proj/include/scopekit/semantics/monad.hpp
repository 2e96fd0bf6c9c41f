#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scopekit/report.hpp"
#include "scopekit/semantics/values.hpp"

namespace scopekit::sem {

using Kleisli = std::function<SemVal(const SemVal&)>;

// A strong monad on finite sets.  Encodings of T x:
//   identity   v
//   option     in0 () for absence, in1 v
//   exception  in0 e raises e, in1 v returns
//   writer     (w, v) with w in the chosen cyclic monoid
//   state      table over S of (v, s')
//   powerset   a set
class Monad {
 public:
  virtual ~Monad() = default;
  virtual std::string name() const = 0;
  virtual SemVal unit(const SemVal& v) const = 0;
  virtual SemVal bind(const SemVal& m, const Kleisli& k) const = 0;
  virtual CarrierRef lift(const CarrierRef& x) const = 0;
  virtual bool elgot() const { return false; }
  virtual bool fixpoints() const { return false; }
  // the divergence value of a partial monad
  virtual std::optional<SemVal> absent() const { return std::nullopt; }
};
using MonadRef = std::shared_ptr<const Monad>;

struct MonadSpec {
  std::string name = "option";
  int exceptions = 2;   // |E|
  int monoid = 3;       // writer over Z_n
  int states = 2;       // |S|
};

MonadRef make_monad(const MonadSpec& spec);
const std::vector<std::string>& monad_names();

// Parameterised bind: bind f : a x T x -> T y for f : a x x -> T y.
using ParamBind = std::function<SemVal(const std::function<SemVal(const SemVal&, const SemVal&)>& f,
                                       const SemVal& a, const SemVal& m)>;
ParamBind standard_bind(const MonadRef& m);

struct MonadLawOptions {
  int exhaustive_max = 2;  // probe sets of every size up to this
  int sampled_size = 3;
  int samples = 300;
  std::uint64_t seed = 1;
  std::uint64_t slice_limit = 4000000;  // combinations per law and size before falling back to sampling
};

// The four diagrams of a strong monad with respect to the Cartesian structure:
// monoidal unit, naturality in the parameter, monadic unit (both sides) and
// associativity.  `bind` defaults to the monad's own.
Report check_monad_laws(const MonadRef& m, const MonadLawOptions& opt = {}, ParamBind bind = {});

// bind that forgets its parameter and always reads f at a0
ParamBind broken_bind(const MonadRef& m, SemVal a0);

// Iteration of step : X -> T(<Cont:X, Done:Y>) from x0 (partial monads only).
// A revisited state is divergence.
SemVal elgot_iterate(const Monad& m, const Kleisli& step, const SemVal& x0);
// the same result by plain unrolling, `unrollings` steps with no cycle detection
SemVal elgot_unroll(const Monad& m, const Kleisli& step, const SemVal& x0, std::uint64_t unrollings);

inline constexpr long kContTag = 0;
inline constexpr long kDoneTag = 1;

// Least fixed point of phi by iteration from bottom.  Throws NonConvergence
// when bound iterations do not reach a fixed point.
SemVal kleene_fixpoint(const std::function<SemVal(const SemVal&)>& phi, const SemVal& bottom, std::uint64_t bound);

// pointwise order on option-valued tables (nested tuples of tables allowed)
bool option_leq(const SemVal& a, const SemVal& b);

}  // namespace scopekit::sem
