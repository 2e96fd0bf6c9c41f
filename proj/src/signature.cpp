#include "scopekit/signature.hpp"

#include <set>

namespace scopekit {

std::string describe(const Operator& op) {
  std::string out = op.label + " : ";
  for (std::size_t i = 0; i < op.args.size(); ++i) {
    if (i) out += ", ";
    if (!op.args[i].binder.empty()) out += to_string(op.args[i].binder) + ".";
    out += to_string(op.args[i].sort);
  }
  return out + " -> " + to_string(op.result);
}

void OperatorTable::validate(const Operator& op) const {
  if (op.label.empty()) throw Error(ErrorKind::InvalidInput, "operator with empty label");
  if (!system_.contains(op.result))
    throw Error(ErrorKind::IllSorted, "operator " + op.label + " has unknown result sort " + to_string(op.result));
  for (auto& a : op.args) {
    a.binder.validate(system_);
    if (!system_.contains(a.sort))
      throw Error(ErrorKind::IllSorted, "operator " + op.label + " has unknown argument sort " + to_string(a.sort));
  }
}

void OperatorTable::add(Operator op) {
  validate(op);
  if (find(op.label))
    throw Error(ErrorKind::InvalidInput, "duplicate operator label '" + op.label + "'");
  auto ref = std::make_shared<const Operator>(std::move(op));
  by_label_.emplace(ref->label, ref);
  concrete_.push_back(ref);
}

void OperatorTable::add_family(OperatorFamily fam) {
  for (auto& f : families_)
    if (f.prefix == fam.prefix)
      throw Error(ErrorKind::InvalidInput, "duplicate operator family '" + fam.prefix + "'");
  families_.push_back(std::move(fam));
}

OperatorRef OperatorTable::find(std::string_view label) const {
  if (auto it = by_label_.find(label); it != by_label_.end()) return it->second;
  {
    std::lock_guard<std::mutex> lock(*cache_mutex_);
    if (auto it = cache_->find(label); it != cache_->end()) return it->second;
  }
  for (auto& f : families_) {
    if (label.substr(0, f.prefix.size()) != f.prefix) continue;
    // the prefix must be followed by '[' or end the label
    if (label.size() > f.prefix.size() && label[f.prefix.size()] != '[') continue;
    if (auto op = f.instantiate(label)) {
      validate(*op);
      std::lock_guard<std::mutex> lock(*cache_mutex_);
      cache_->emplace(std::string(label), op);
      return op;
    }
  }
  return nullptr;
}

OperatorRef OperatorTable::lookup(std::string_view label) const {
  if (auto op = find(label)) return op;
  throw Error(ErrorKind::UnknownOperator, "no operator '" + std::string(label) + "'");
}

OperatorTable OperatorTable::coproduct(const OperatorTable& a, const OperatorTable& b) {
  OperatorTable out(a.system_);
  for (auto& op : a.concrete_) out.add(*op);
  for (auto& op : b.concrete_) out.add(*op);
  for (auto& f : a.families_) out.add_family(f);
  for (auto& f : b.families_) out.add_family(f);
  return out;
}

SignatureExpr SignatureExpr::hole() { return SignatureExpr{}; }

SignatureExpr SignatureExpr::at(Sort s, SignatureExpr inner) {
  SignatureExpr e;
  e.kind = Kind::At;
  e.sorts = {std::move(s)};
  e.parts = {std::move(inner)};
  return e;
}

SignatureExpr SignatureExpr::only_at(std::vector<Sort> ss, SignatureExpr inner) {
  SignatureExpr e;
  e.kind = Kind::OnlyAt;
  e.sorts = std::move(ss);
  e.parts = {std::move(inner)};
  return e;
}

SignatureExpr SignatureExpr::restrict_to(std::vector<Sort> ss, SignatureExpr inner) {
  SignatureExpr e;
  e.kind = Kind::Restrict;
  e.sorts = std::move(ss);
  e.parts = {std::move(inner)};
  return e;
}

SignatureExpr SignatureExpr::product(std::vector<SignatureExpr> factors) {
  SignatureExpr e;
  e.kind = Kind::Product;
  e.parts = std::move(factors);
  return e;
}

SignatureExpr SignatureExpr::coproduct(std::vector<std::pair<std::string, SignatureExpr>> summands) {
  SignatureExpr e;
  e.kind = Kind::Coproduct;
  for (auto& [l, s] : summands) {
    e.labels.push_back(l);
    e.parts.push_back(std::move(s));
  }
  return e;
}

SignatureExpr SignatureExpr::shift(Context delta, SignatureExpr inner) {
  SignatureExpr e;
  e.kind = Kind::Shift;
  e.delta = std::move(delta);
  e.parts = {std::move(inner)};
  return e;
}

static std::string sort_list(const std::vector<Sort>& ss) {
  std::string out;
  for (std::size_t i = 0; i < ss.size(); ++i) out += (i ? "," : "") + to_string(ss[i]);
  return out;
}

std::string to_string(const SignatureExpr& e) {
  using K = SignatureExpr::Kind;
  switch (e.kind) {
    case K::Hole: return "X";
    case K::At: return "(" + to_string(e.parts[0]) + ")@" + to_string(e.sorts[0]);
    case K::OnlyAt: return "OnlyAt{" + sort_list(e.sorts) + "}(" + to_string(e.parts[0]) + ")";
    case K::Restrict: return "Restrict{" + sort_list(e.sorts) + "}(" + to_string(e.parts[0]) + ")";
    case K::Shift: return to_string(e.delta) + "^" + to_string(e.parts[0]);
    case K::Product: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.parts.size(); ++i) out += (i ? " * " : "") + to_string(e.parts[i]);
      return out + ")";
    }
    case K::Coproduct: {
      std::string out = "(";
      for (std::size_t i = 0; i < e.parts.size(); ++i)
        out += (i ? " + " : "") + e.labels[i] + ": " + to_string(e.parts[i]);
      return out + ")";
    }
  }
  return "?";
}

namespace {

[[noreturn]] void not_flat(const SignatureExpr& e, const std::string& why) {
  throw Error(ErrorKind::NotFlattenable, why + ": " + to_string(e));
}

Argument flatten_atom(const SignatureExpr& e) {
  using K = SignatureExpr::Kind;
  if (e.kind != K::At) not_flat(e, "expected a projection X@s or (delta^X)@s");
  const SignatureExpr& inner = e.parts[0];
  if (inner.kind == K::Hole) return Argument{Context{}, e.sorts[0]};
  if (inner.kind == K::Shift && inner.parts[0].kind == K::Hole) return Argument{inner.delta, e.sorts[0]};
  not_flat(inner, "projection applied to a non-shift");
}

void flatten_factors(const SignatureExpr& e, std::vector<Argument>& out) {
  if (e.kind == SignatureExpr::Kind::Product) {
    for (auto& f : e.parts) flatten_factors(f, out);
    return;
  }
  out.push_back(flatten_atom(e));
}

void flatten_summand(const std::string& label, const SignatureExpr& e, std::vector<Operator>& out) {
  using K = SignatureExpr::Kind;
  if (e.kind == K::Coproduct) {
    for (std::size_t i = 0; i < e.parts.size(); ++i) flatten_summand(e.labels[i], e.parts[i], out);
    return;
  }
  if (e.kind != K::OnlyAt) not_flat(e, "summand is not wrapped in OnlyAt");
  if (e.sorts.empty()) not_flat(e, "OnlyAt with no sorts");
  std::vector<Argument> args;
  flatten_factors(e.parts[0], args);
  for (auto& s : e.sorts) {
    std::string l = e.sorts.size() == 1 ? label : label + "[" + to_string(s) + "]";
    out.push_back(Operator{l, s, args});
  }
}

}  // namespace

OperatorTable flatten(const SignatureExpr& e, const SortingSystem& sys) {
  if (e.kind != SignatureExpr::Kind::Coproduct) not_flat(e, "top level must be a labelled coproduct");
  std::vector<Operator> ops;
  flatten_summand("", e, ops);
  OperatorTable table(sys);
  for (auto& op : ops) table.add(std::move(op));
  return table;
}

}  // namespace scopekit
