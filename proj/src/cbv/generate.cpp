#include "scopekit/cbv/generate.hpp"

#include <algorithm>

#include "scopekit/cbv/operators.hpp"

namespace scopekit::cbv {

namespace {

template <class T>
const T& choose(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

Context extend(const Context& ctx, const std::vector<TypeRef>& more) {
  return ctx.extended(make_context(more));
}

std::vector<std::size_t> vars_of(const Context& ctx, const TypeRef& t) { return vars_of_sort(ctx, t->str()); }

}  // namespace

TermGenerator::TermGenerator(FragmentConfig c, const OperatorTable& table, GenOptions opt)
    : c_(std::move(c)), table_(table), opt_(std::move(opt)) {
  for (auto& t : enumerate_types(c_, opt_.pool_depth))
    if (t->depth() <= c_.type_depth && (!opt_.type_ok || opt_.type_ok(t))) pool_.push_back(t);
  if (pool_.empty()) throw Error(ErrorKind::InvalidInput, "no types available for generation");
}

TypeRef TermGenerator::pick(std::mt19937_64& rng) { return choose(pool_, rng); }

bool TermGenerator::allowed(const std::string& label) {
  OpInfo info;
  try {
    info = decode_label(label);
  } catch (const Error&) {
    return false;
  }
  if (operator_problem(info, c_)) return false;
  Operator op = make_operator(info);
  auto ok = [&](const std::string& s) {
    auto t = parse_type(s);
    return t->depth() <= c_.type_depth && (!opt_.type_ok || opt_.type_ok(t));
  };
  if (!ok(op.result.id)) return false;
  for (auto& a : op.args) {
    if (!ok(a.sort.id)) return false;
    for (auto& s : a.binder.entries())
      if (!ok(s)) return false;
  }
  return true;
}

std::optional<Term> TermGenerator::build(const std::string& label, const Context& ctx, std::vector<Term> kids) {
  return Term::op(table_.lookup(label), ctx, std::move(kids));
}

std::optional<Term> TermGenerator::value(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng) {
  fuel_ = opt_.fuel;
  return value_node(t, ctx, depth, rng);
}

std::optional<Term> TermGenerator::comp(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng) {
  fuel_ = opt_.fuel;
  return comp_node(t, ctx, depth, rng);
}

std::optional<Term> TermGenerator::value_node(const TypeRef& t, const Context& ctx, int depth,
                                              std::mt19937_64& rng) {
  if (depth < 1 || --fuel_ < 0) return std::nullopt;
  enum P { Var, Lit, Lam, VRec, VInj };
  std::vector<P> ps;
  auto vs = vars_of(ctx, t);
  if (!vs.empty()) ps.insert(ps.end(), {Var, Var});
  switch (t->kind()) {
    case Type::Kind::Nat:
      ps.push_back(Lit);
      break;
    case Type::Kind::Fun:
      if (depth >= 2) ps.push_back(Lam);
      break;
    case Type::Kind::Record:
      if (depth >= 2 || t->row().empty()) ps.push_back(VRec);
      break;
    case Type::Kind::Variant:
      if (depth >= 2) ps.push_back(VInj);
      break;
    default:
      break;
  }
  std::shuffle(ps.begin(), ps.end(), rng);
  for (P p : ps) {
    switch (p) {
      case Var:
        return Term::var(ctx, choose(vs, rng));
      case Lit: {
        std::string l = label_lit(std::uniform_int_distribution<long>(0, c_.nat_bound - 1)(rng));
        if (allowed(l)) return build(l, ctx, {});
        break;
      }
      case Lam: {
        std::string l = label_lam(t->dom(), t->cod());
        if (!allowed(l)) break;
        if (auto body = comp_node(t->cod(), extend(ctx, {t->dom()}), depth - 1, rng)) return build(l, ctx, {*body});
        break;
      }
      case VRec: {
        std::string l = label_vrec(t);
        if (!allowed(l)) break;
        std::vector<Term> kids;
        for (auto& f : t->row()) {
          auto k = value_node(f.type, ctx, depth - 1, rng);
          if (!k) break;
          kids.push_back(*k);
        }
        if (kids.size() == t->row().size()) return build(l, ctx, kids);
        break;
      }
      case VInj: {
        auto& f = choose(t->row(), rng);
        std::string l = label_vinj(t, f.label);
        if (!allowed(l)) break;
        if (auto k = value_node(f.type, ctx, depth - 1, rng)) return build(l, ctx, {*k});
        break;
      }
    }
  }
  return std::nullopt;
}

std::optional<Term> TermGenerator::comp_node(const TypeRef& t, const Context& ctx, int depth, std::mt19937_64& rng) {
  if (depth < 2 || --fuel_ < 0) return std::nullopt;
  enum P { Val, Let, App, Rec, RecMatch, Inj, Case, Unroll, Roll, Fold, For, LetRec, Call };
  std::vector<P> ps{Val, Val};
  using E = Extension;
  if (c_.has(E::Sequential)) ps.push_back(Let);
  if (c_.has(E::Functions)) ps.push_back(App);
  if (t->kind() == Type::Kind::Record) ps.push_back(Rec);
  if (c_.has(E::Records)) ps.push_back(RecMatch);
  if (t->kind() == Type::Kind::Variant) ps.push_back(Inj);
  if (c_.has(E::Variants) || c_.has(E::Naturals)) ps.push_back(Case);
  if (c_.has(E::Naturals)) {
    if (t == maybe_type(Type::nat())) ps.push_back(Unroll);
    if (t->kind() == Type::Kind::Nat) ps.push_back(Roll);
    ps.push_back(Fold);
  }
  if (c_.has(E::While)) ps.push_back(For);
  if (c_.has(E::Recursion)) ps.insert(ps.end(), {LetRec, Call});
  std::shuffle(ps.begin(), ps.end(), rng);
  const int d = depth - 1;
  for (P p : ps) {
    if (fuel_ < 0) return std::nullopt;
    switch (p) {
      case Val: {
        std::string l = label_val(t);
        if (!allowed(l)) break;
        if (auto v = value_node(t, ctx, d, rng)) return build(l, ctx, {*v});
        break;
      }
      case Let: {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        std::vector<TypeRef> ts;
        for (std::size_t i = 0; i < n; ++i) ts.push_back(pick(rng));
        std::string l = label_let(ts, t);
        if (!allowed(l)) break;
        std::vector<Term> kids;
        std::vector<TypeRef> bound;
        bool ok = true;
        for (auto& ti : ts) {
          auto m = comp_node(ti, extend(ctx, bound), d, rng);
          if (!m) {
            ok = false;
            break;
          }
          kids.push_back(*m);
          bound.push_back(ti);
        }
        if (!ok) break;
        if (auto body = comp_node(t, extend(ctx, bound), d, rng)) {
          kids.push_back(*body);
          return build(l, ctx, kids);
        }
        break;
      }
      case App: {
        TypeRef a = pick(rng);
        std::string l = label_app(a, t);
        if (!allowed(l)) break;
        auto f = comp_node(Type::fun(a, t), ctx, d, rng);
        if (!f) break;
        if (auto x = comp_node(a, ctx, d, rng)) return build(l, ctx, {*f, *x});
        break;
      }
      case Rec: {
        std::string l = label_rec(t);
        if (!allowed(l)) break;
        std::vector<Term> kids;
        for (auto& f : t->row()) {
          auto k = comp_node(f.type, ctx, d, rng);
          if (!k) break;
          kids.push_back(*k);
        }
        if (kids.size() == t->row().size()) return build(l, ctx, kids);
        break;
      }
      case RecMatch: {
        std::vector<TypeRef> recs;
        for (auto& x : pool_)
          if (x->kind() == Type::Kind::Record) recs.push_back(x);
        if (recs.empty()) break;
        TypeRef r = choose(recs, rng);
        std::string l = label_recmatch(r, t);
        if (!allowed(l)) break;
        auto m = comp_node(r, ctx, d, rng);
        if (!m) break;
        std::vector<TypeRef> fields;
        for (auto& f : r->row()) fields.push_back(f.type);
        if (auto body = comp_node(t, extend(ctx, fields), d, rng)) return build(l, ctx, {*m, *body});
        break;
      }
      case Inj: {
        auto& f = choose(t->row(), rng);
        std::string l = label_inj(t, f.label);
        if (!allowed(l)) break;
        if (auto k = comp_node(f.type, ctx, d, rng)) return build(l, ctx, {*k});
        break;
      }
      case Case: {
        std::vector<TypeRef> vars;
        for (auto& x : pool_)
          if (x->kind() == Type::Kind::Variant && allowed(label_case(x, t))) vars.push_back(x);
        if (vars.empty()) break;
        TypeRef v = choose(vars, rng);
        auto m = comp_node(v, ctx, d, rng);
        if (!m) break;
        std::vector<Term> kids{*m};
        for (auto& f : v->row()) {
          auto k = comp_node(t, extend(ctx, {f.type}), d, rng);
          if (!k) break;
          kids.push_back(*k);
        }
        if (kids.size() == v->row().size() + 1) return build(label_case(v, t), ctx, kids);
        break;
      }
      case Unroll: {
        if (auto k = comp_node(Type::nat(), ctx, d, rng)) return build("unroll", ctx, {*k});
        break;
      }
      case Roll: {
        if (!allowed("roll")) break;
        if (auto k = comp_node(maybe_type(Type::nat()), ctx, d, rng)) return build("roll", ctx, {*k});
        break;
      }
      case Fold: {
        std::string l = label_fold(t);
        if (!allowed(l)) break;
        auto m = comp_node(Type::nat(), ctx, d, rng);
        if (!m) break;
        if (auto body = comp_node(t, extend(ctx, {maybe_type(t)}), d, rng)) return build(l, ctx, {*m, *body});
        break;
      }
      case For: {
        TypeRef a = pick(rng);
        std::string l = label_for(a, t);
        if (!allowed(l)) break;
        auto m = comp_node(a, ctx, d, rng);
        if (!m) break;
        if (auto body = comp_node(loop_type(a, t), extend(ctx, {a}), d, rng)) return build(l, ctx, {*m, *body});
        break;
      }
      case LetRec: {
        std::size_t n = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        std::vector<TypeRef> fs;
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<TypeRef> params;
          std::size_t k = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
          for (std::size_t q = 0; q < k; ++q) params.push_back(pick(rng));
          fs.push_back(recreq_type(params, pick(rng)));
        }
        std::string l = label_letrec(fs, t);
        if (!allowed(l)) break;
        Context with_fs = extend(ctx, fs);
        std::vector<Term> kids;
        for (auto& f : fs) {
          auto body = comp_node(f->cod(), extend(with_fs, recfun_params(*f)), d, rng);
          if (!body) break;
          kids.push_back(*body);
        }
        if (kids.size() != fs.size()) break;
        if (auto body = comp_node(t, with_fs, d, rng)) {
          kids.push_back(*body);
          return build(l, ctx, kids);
        }
        break;
      }
      case Call: {
        std::vector<TypeRef> cands;
        for (auto& s : ctx.entries()) {
          TypeRef f = parse_type(s);
          if (f->kind() == Type::Kind::Fun && f->cod() == t && is_positional_record(*f->dom())) cands.push_back(f);
        }
        if (cands.empty()) break;
        TypeRef f = choose(cands, rng);
        std::string l = label_call(f);
        if (!allowed(l)) break;
        auto head = comp_node(f, ctx, d, rng);
        if (!head) break;
        std::vector<Term> kids{*head};
        for (auto& pt : recfun_params(*f)) {
          auto k = comp_node(pt, ctx, d, rng);
          if (!k) break;
          kids.push_back(*k);
        }
        if (kids.size() == recfun_params(*f).size() + 1) return build(l, ctx, kids);
        break;
      }
    }
  }
  return std::nullopt;
}

Context TermGenerator::random_context(std::mt19937_64& rng, std::size_t len) {
  std::vector<TypeRef> ts;
  for (std::size_t i = 0; i < len; ++i) ts.push_back(pick(rng));
  return make_context(ts);
}

Sample TermGenerator::sample(std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(opt_.max_ctx))(rng);
    Context ctx = random_context(rng, len);
    TypeRef t = pick(rng);
    int depth = std::uniform_int_distribution<int>(2, std::max(2, opt_.max_depth))(rng);
    if (std::uniform_int_distribution<int>(0, 4)(rng) == 0) {
      if (auto v = value(t, ctx, depth, rng)) return {ctx, value_sort(t), *v};
    } else if (auto m = comp(t, ctx, depth, rng)) {
      return {ctx, comp_sort(t), *m};
    }
  }
  // val x always exists over a non-empty context
  TypeRef t = pool_.front();
  Context ctx = make_context({t});
  return {ctx, comp_sort(t), Term::op(table_.lookup(label_val(t)), ctx, {Term::var(ctx, 0)})};
}

std::optional<SubstEnv> TermGenerator::random_env(const Context& source, const Context& target, int depth,
                                                  std::mt19937_64& rng) {
  std::vector<Term> entries;
  for (std::size_t y = 0; y < source.size(); ++y) {
    TypeRef t = parse_type(source[y]);
    int d = std::uniform_int_distribution<int>(1, std::max(1, depth))(rng);
    auto v = value(t, target, d, rng);
    if (!v) {
      auto vs = vars_of(target, t);
      if (vs.empty()) return std::nullopt;
      v = Term::var(target, choose(vs, rng));
    }
    entries.push_back(*v);
  }
  return make_subst_env(source, target, entries);
}

Context TermGenerator::covering_context(const Context& source, std::size_t extra, std::mt19937_64& rng) {
  std::vector<TypeRef> ts = context_types(source);
  std::size_t k = std::uniform_int_distribution<std::size_t>(0, extra)(rng);
  for (std::size_t i = 0; i < k; ++i) ts.push_back(pick(rng));
  std::shuffle(ts.begin(), ts.end(), rng);
  return make_context(ts);
}

}  // namespace scopekit::cbv

namespace scopekit::cbv {

std::vector<OperatorRef> operator_instances(const FragmentConfig& c, const OperatorTable& table,
                                            const std::vector<TypeRef>& pool) {
  std::vector<std::string> labels;
  std::vector<TypeRef> records, variants;
  for (auto& t : pool) {
    if (t->kind() == Type::Kind::Record) records.push_back(t);
    if (t->kind() == Type::Kind::Variant) variants.push_back(t);
  }
  for (auto& t : pool) {
    labels.push_back(label_val(t));
    labels.push_back(label_fold(t));
    for (auto& s : pool) {
      labels.push_back(label_let({t}, s));
      for (auto& u : pool) labels.push_back(label_let({t, u}, s));
      labels.push_back(label_lam(t, s));
      labels.push_back(label_app(t, s));
      labels.push_back(label_for(t, s));
      TypeRef f0 = recreq_type({}, s), f1 = recreq_type({t}, s);
      for (auto& f : {f0, f1}) {
        labels.push_back(label_call(f));
        for (auto& r : pool) labels.push_back(label_letrec({f}, r));
      }
    }
  }
  for (auto& r : records) {
    labels.push_back(label_vrec(r));
    labels.push_back(label_rec(r));
    for (auto& s : pool) labels.push_back(label_recmatch(r, s));
  }
  for (auto& v : variants) {
    for (auto& f : v->row()) {
      labels.push_back(label_vinj(v, f.label));
      labels.push_back(label_inj(v, f.label));
    }
    for (auto& s : pool) labels.push_back(label_case(v, s));
  }
  for (long n = 0; n < c.nat_bound; ++n) labels.push_back(label_lit(n));
  labels.push_back("unroll");
  labels.push_back("roll");

  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::vector<OperatorRef> out;
  for (auto& l : labels) {
    OpInfo info = decode_label(l);
    if (operator_problem(info, c)) continue;
    try {
      if (auto op = table.find(l)) out.push_back(op);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DepthExceeded) throw;
    }
  }
  return out;
}

TermEnumerator::TermEnumerator(std::vector<OperatorRef> instances, std::size_t limit) : limit_(limit) {
  for (auto& op : instances) by_result_[op->result].push_back(op);
}

const std::vector<Term>& TermEnumerator::terms(const Context& ctx, const Sort& sort, int depth) {
  std::string key = to_string(ctx) + "|" + to_string(sort) + "|" + std::to_string(depth);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::vector<Term> out;
  if (depth >= 1) {
    if (sort.is_first())
      for (auto p : vars_of_sort(ctx, sort.id)) out.push_back(Term::var(ctx, p));
    auto it = by_result_.find(sort);
    if (it != by_result_.end()) {
      for (auto& op : it->second) {
        std::vector<std::vector<Term>> choices;
        bool empty = false;
        for (auto& a : op->args) {
          choices.push_back(terms(ctx.extended(a.binder), a.sort, depth - 1));
          if (choices.back().empty()) empty = true;
        }
        if (empty) continue;
        std::vector<std::size_t> idx(choices.size(), 0);
        while (true) {
          std::vector<Term> kids;
          for (std::size_t i = 0; i < choices.size(); ++i) kids.push_back(choices[i][idx[i]]);
          out.push_back(Term::op(op, ctx, std::move(kids)));
          if (out.size() > limit_)
            throw Error(ErrorKind::BoundExceeded, "more than " + std::to_string(limit_) + " terms at " +
                                                      to_string(sort) + " over " + to_string(ctx));
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      }
    }
  }
  return memo_.emplace(key, std::move(out)).first->second;
}

}  // namespace scopekit::cbv
