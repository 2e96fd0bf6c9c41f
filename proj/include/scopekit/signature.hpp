#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scopekit/sorts.hpp"

namespace scopekit {

struct Argument {
  Context binder;
  Sort sort;
};

struct Operator {
  std::string label;
  Sort result;
  std::vector<Argument> args;
};

using OperatorRef = std::shared_ptr<const Operator>;

std::string describe(const Operator& op);

// An infinite family of operators, instantiated from its label on demand.
// instantiate returns nullptr when the label is not (or not validly) in the family.
struct OperatorFamily {
  std::string prefix;
  std::function<OperatorRef(std::string_view label)> instantiate;
};

class OperatorTable {
 public:
  OperatorTable() = default;
  explicit OperatorTable(SortingSystem system) : system_(std::move(system)) {}

  const SortingSystem& system() const { return system_; }

  void add(Operator op);
  void add_family(OperatorFamily fam);

  // throws UnknownOperator
  OperatorRef lookup(std::string_view label) const;
  OperatorRef find(std::string_view label) const;

  const std::vector<OperatorRef>& concrete() const { return concrete_; }
  const std::vector<OperatorFamily>& families() const { return families_; }

  // label-disjoint union
  static OperatorTable coproduct(const OperatorTable& a, const OperatorTable& b);

 private:
  void validate(const Operator& op) const;

  SortingSystem system_;
  std::vector<OperatorRef> concrete_;
  std::map<std::string, OperatorRef, std::less<>> by_label_;
  std::vector<OperatorFamily> families_;
  mutable std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
  mutable std::shared_ptr<std::map<std::string, OperatorRef, std::less<>>> cache_ =
      std::make_shared<std::map<std::string, OperatorRef, std::less<>>>();
};

// Combinator expressions over the recursion variable X.
struct SignatureExpr {
  enum class Kind { Hole, At, OnlyAt, Restrict, Product, Coproduct, Shift };
  Kind kind = Kind::Hole;
  std::vector<Sort> sorts;         // At (one), OnlyAt (one or more), Restrict
  Context delta;                   // Shift
  std::vector<std::string> labels; // Coproduct summand labels
  std::vector<SignatureExpr> parts;

  static SignatureExpr hole();
  static SignatureExpr at(Sort s, SignatureExpr inner = hole());
  static SignatureExpr only_at(std::vector<Sort> ss, SignatureExpr inner);
  static SignatureExpr restrict_to(std::vector<Sort> ss, SignatureExpr inner);
  static SignatureExpr product(std::vector<SignatureExpr> factors);
  static SignatureExpr coproduct(std::vector<std::pair<std::string, SignatureExpr>> summands);
  static SignatureExpr shift(Context delta, SignatureExpr inner = hole());
};

std::string to_string(const SignatureExpr& e);

// throws NotFlattenable naming the offending subterm
OperatorTable flatten(const SignatureExpr& e, const SortingSystem& sys);

// Env A source target: one A per position of source, each living over target.
template <class A>
struct Env {
  Context source;
  Context target;
  std::vector<A> entries;
};

// The pointed-carrier interface the generic strength needs.
template <class A>
struct PointedHooks {
  std::function<A(const A&, const Renaming&)> rename;
  std::function<A(const Context&, std::size_t)> var;
};

// Routes e : Env A G' G into argument i of op: weakened along
// pi1 : G ++ delta -> G, extended with the images of delta's variables.
template <class A>
Env<A> strength_route(const Operator& op, std::size_t i, const Env<A>& e, const PointedHooks<A>& hooks) {
  const Context& delta = op.args.at(i).binder;
  if (delta.empty()) return e;
  auto cat = concat_contexts(e.target, delta);
  Env<A> out{e.source.extended(delta), cat.context, {}};
  out.entries.reserve(e.entries.size() + delta.size());
  for (const A& a : e.entries) out.entries.push_back(hooks.rename(a, cat.pi1));
  for (std::size_t y = 0; y < delta.size(); ++y) out.entries.push_back(hooks.var(cat.context, e.target.size() + y));
  return out;
}

}  // namespace scopekit
