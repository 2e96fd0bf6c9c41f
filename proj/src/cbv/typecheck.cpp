#include "scopekit/cbv/typecheck.hpp"

#include <algorithm>

#include "scopekit/cbv/operators.hpp"

namespace scopekit::cbv {

namespace {

using K = Surface::Kind;

struct Typed {
  Term term;
  TypeRef type;
};

class Checker {
 public:
  Checker(const FragmentConfig& c, const OperatorTable& table) : c_(c), table_(table) {}

  Typed synth_value(const Surface& n, const std::vector<TypeRef>& sc) {
    Context ctx = make_context(sc);
    switch (n.kind) {
      case K::Var: {
        if (n.index < 0 || static_cast<std::size_t>(n.index) >= sc.size())
          throw Error(ErrorKind::UnknownVariable, "unbound variable '" + n.name + "'", n.loc);
        return {Term::var(ctx, static_cast<std::size_t>(n.index)), sc[static_cast<std::size_t>(n.index)]};
      }
      case K::Lam: {
        TypeRef a = source_type(n.types[0], n.loc);
        auto body = synth_comp(*n.kids[0], extend(sc, {a}));
        return {mk({OpKind::Lam, {a}, body.type, {}, 0}, n.loc, ctx, {body.term}), Type::fun(a, body.type)};
      }
      case K::VRecord: {
        std::vector<Field> row;
        std::vector<std::pair<std::string, Term>> kids;
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          auto f = synth_value(*n.kids[i], sc);
          row.push_back({n.labels[i], f.type});
          kids.push_back({n.labels[i], f.term});
        }
        TypeRef r = row_type(true, std::move(row), n.loc);
        return {mk({OpKind::VRec, {r}, nullptr, {}, 0}, n.loc, ctx, ordered(r, kids)), r};
      }
      case K::VInj: {
        TypeRef v = source_type(n.types[0], n.loc);
        TypeRef payload = ctor_type(v, n.labels[0], n.loc);
        Term kid = check_value(*n.kids[0], sc, payload);
        return {mk({OpKind::VInj, {v}, nullptr, n.labels[0], 0}, n.loc, ctx, {kid}), v};
      }
      case K::Lit:
        return {mk({OpKind::Lit, {}, nullptr, {}, n.lit}, n.loc, ctx, {}), Type::nat()};
      default:
        throw Error(ErrorKind::SortMismatch, "expected a value, found a computation", n.loc);
    }
  }

  Term check_value(const Surface& n, const std::vector<TypeRef>& sc, const TypeRef& t) {
    if (n.kind == K::Lam && t->kind() == Type::Kind::Fun) {
      TypeRef a = source_type(n.types[0], n.loc);
      if (a != t->dom()) mismatch(value_sort(t), value_sort(Type::fun(a, t->cod())), n.loc);
      Term body = check_comp(*n.kids[0], extend(sc, {a}), t->cod());
      return mk({OpKind::Lam, {a}, t->cod(), {}, 0}, n.loc, make_context(sc), {body});
    }
    auto r = synth_value(n, sc);
    if (r.type != t) mismatch(value_sort(t), value_sort(r.type), n.loc);
    return r.term;
  }

  Typed synth_comp(const Surface& n, const std::vector<TypeRef>& sc) { return comp(n, sc, nullptr); }

  Term check_comp(const Surface& n, const std::vector<TypeRef>& sc, const TypeRef& t) {
    return comp(n, sc, t).term;
  }

 private:
  // expected may be null (synthesis)
  Typed comp(const Surface& n, const std::vector<TypeRef>& sc, const TypeRef& expected) {
    if (n.is_value()) throw Error(ErrorKind::SortMismatch, "expected a computation, found a value", n.loc);
    Typed r = comp_inner(n, sc, expected);
    if (expected && r.type != expected) mismatch(comp_sort(expected), comp_sort(r.type), n.loc);
    return r;
  }

  Typed comp_inner(const Surface& n, const std::vector<TypeRef>& sc, const TypeRef& expected) {
    Context ctx = make_context(sc);
    switch (n.kind) {
      case K::Val: {
        Term v = expected ? check_value(*n.kids[0], sc, expected) : synth_value(*n.kids[0], sc).term;
        TypeRef t = expected ? expected : parse_type(v.sort().id);
        return {mk({OpKind::Val, {t}, nullptr, {}, 0}, n.loc, ctx, {v}), t};
      }
      case K::Let: {
        std::vector<TypeRef> ts;
        std::vector<Term> kids;
        std::vector<TypeRef> inner = sc;
        for (std::size_t i = 0; i + 1 < n.kids.size(); ++i) {
          auto m = synth_comp(*n.kids[i], inner);
          ts.push_back(m.type);
          kids.push_back(m.term);
          inner.push_back(m.type);
        }
        auto body = comp(*n.kids.back(), inner, expected);
        kids.push_back(body.term);
        return {mk({OpKind::Let, ts, body.type, {}, 0}, n.loc, ctx, kids), body.type};
      }
      case K::App: {
        auto f = synth_comp(*n.kids[0], sc);
        if (f.type->kind() != Type::Kind::Fun)
          throw Error(ErrorKind::SortMismatch, "applying a non-function of type " + f.type->str(), n.kids[0]->loc);
        Term a = check_comp(*n.kids[1], sc, f.type->dom());
        return {mk({OpKind::App, {f.type->dom()}, f.type->cod(), {}, 0}, n.loc, ctx, {f.term, a}), f.type->cod()};
      }
      case K::Record: {
        std::vector<Field> row;
        std::vector<std::pair<std::string, Term>> kids;
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          TypeRef want;
          if (expected && expected->kind() == Type::Kind::Record)
            if (auto k = expected->field_index(n.labels[i])) want = expected->row()[*k].type;
          auto f = want ? Typed{check_comp(*n.kids[i], sc, want), want} : synth_comp(*n.kids[i], sc);
          row.push_back({n.labels[i], f.type});
          kids.push_back({n.labels[i], f.term});
        }
        TypeRef r = row_type(true, std::move(row), n.loc);
        return {mk({OpKind::Rec, {r}, nullptr, {}, 0}, n.loc, ctx, ordered(r, kids)), r};
      }
      case K::RecMatch: {
        auto m = synth_comp(*n.kids[0], sc);
        if (m.type->kind() != Type::Kind::Record)
          throw Error(ErrorKind::SortMismatch, "record pattern on a computation of type " + m.type->str(),
                      n.kids[0]->loc);
        auto& row = m.type->row();
        bool same = row.size() == n.labels.size();
        for (std::size_t i = 0; same && i < row.size(); ++i) same = row[i].label == n.labels[i];
        if (!same)
          throw Error(ErrorKind::ArityMismatch, "record pattern does not match the fields of " + m.type->str(), n.loc);
        std::vector<TypeRef> fields;
        for (auto& f : row) fields.push_back(f.type);
        auto body = comp(*n.kids[1], extend(sc, fields), expected);
        return {mk({OpKind::RecMatch, {m.type}, body.type, {}, 0}, n.loc, ctx, {m.term, body.term}), body.type};
      }
      case K::Inj: {
        TypeRef v = source_type(n.types[0], n.loc);
        TypeRef payload = ctor_type(v, n.labels[0], n.loc);
        Term kid = check_comp(*n.kids[0], sc, payload);
        return {mk({OpKind::Inj, {v}, nullptr, n.labels[0], 0}, n.loc, ctx, {kid}), v};
      }
      case K::Case: {
        auto m = synth_comp(*n.kids[0], sc);
        if (m.type->kind() != Type::Kind::Variant)
          throw Error(ErrorKind::SortMismatch, "variant pattern match on a computation of type " + m.type->str(),
                      n.kids[0]->loc);
        auto& row = m.type->row();
        std::vector<std::string> want, have = n.labels;
        for (auto& f : row) want.push_back(f.label);
        std::sort(have.begin(), have.end(), [](auto& a, auto& b) { return label_less(a, b); });
        if (want != have)
          throw Error(ErrorKind::ArityMismatch, "clauses must cover the constructors of " + m.type->str() + " exactly",
                      n.loc);
        TypeRef res = expected;
        std::vector<Term> kids(row.size() + 1, m.term);
        for (std::size_t i = 0; i < n.labels.size(); ++i) {
          std::size_t k = *m.type->field_index(n.labels[i]);
          auto body = comp(*n.kids[i + 1], extend(sc, {row[k].type}), res);
          res = body.type;
          kids[k + 1] = body.term;
        }
        if (!res) throw Error(ErrorKind::SortMismatch, "cannot infer the type of an empty case; annotate it", n.loc);
        return {mk({OpKind::Case, {m.type}, res, {}, 0}, n.loc, ctx, kids), res};
      }
      case K::Unroll: {
        need_construct({OpKind::Unroll, {}, nullptr, {}, 0}, n.loc);
        Term kid = check_comp(*n.kids[0], sc, Type::nat());
        return {mk({OpKind::Unroll, {}, nullptr, {}, 0}, n.loc, ctx, {kid}), maybe_type(Type::nat())};
      }
      case K::Roll: {
        need_construct({OpKind::Roll, {}, nullptr, {}, 0}, n.loc);
        Term kid = check_comp(*n.kids[0], sc, maybe_type(Type::nat()));
        return {mk({OpKind::Roll, {}, nullptr, {}, 0}, n.loc, ctx, {kid}), Type::nat()};
      }
      case K::Fold: {
        if (!expected)
          throw Error(ErrorKind::SortMismatch, "cannot infer the result type of fold; annotate it as (fold ... : t)",
                      n.loc);
        need_construct({OpKind::Fold, {expected}, nullptr, {}, 0}, n.loc);
        Term m = check_comp(*n.kids[0], sc, Type::nat());
        Term body = check_comp(*n.kids[1], extend(sc, {maybe_type(expected)}), expected);
        return {mk({OpKind::Fold, {expected}, nullptr, {}, 0}, n.loc, ctx, {m, body}), expected};
      }
      case K::For: {
        need_construct({OpKind::For, {Type::nat()}, Type::nat(), {}, 0}, n.loc);
        auto m = synth_comp(*n.kids[0], sc);
        auto inner = extend(sc, {m.type});
        TypeRef res = expected;
        Term body = expected ? check_comp(*n.kids[1], inner, loop_type(m.type, expected)) : Term::var(ctx, 0);
        if (!expected) {
          auto b = synth_comp(*n.kids[1], inner);
          if (!is_loop_shape(*b.type) || b.type->row()[0].type != m.type)
            throw Error(ErrorKind::SortMismatch,
                        "loop body must compute " + loop_type(m.type, Type::base("t"))->str() + ", found " +
                            b.type->str(),
                        n.kids[1]->loc);
          res = b.type->row()[1].type;
          body = b.term;
        }
        return {mk({OpKind::For, {m.type}, res, {}, 0}, n.loc, ctx, {m.term, body}), res};
      }
      case K::LetRec: {
        std::size_t nf = n.binders.size();
        std::vector<TypeRef> fs;
        std::vector<std::vector<TypeRef>> ps(nf);
        for (std::size_t j = 0; j < nf; ++j) {
          for (auto& p : n.params[j]) ps[j].push_back(source_type(p.second, n.loc));
          TypeRef res = source_type(n.types[j], n.loc);
          fs.push_back(recreq_type(ps[j], res));
        }
        need_construct({OpKind::LetRec, fs, fs[0]->cod(), {}, 0}, n.loc);
        std::vector<TypeRef> with_fs = extend(sc, fs);
        std::vector<Term> kids;
        for (std::size_t j = 0; j < nf; ++j)
          kids.push_back(check_comp(*n.kids[j], extend(with_fs, ps[j]), fs[j]->cod()));
        auto body = comp(*n.kids[nf], with_fs, expected);
        kids.push_back(body.term);
        return {mk({OpKind::LetRec, fs, body.type, {}, 0}, n.loc, ctx, kids), body.type};
      }
      case K::Call: {
        auto f = synth_comp(*n.kids[0], sc);
        if (f.type->kind() != Type::Kind::Fun || !is_positional_record(*f.type->dom()))
          throw Error(ErrorKind::SortMismatch, "recursive call of a computation of type " + f.type->str(),
                      n.kids[0]->loc);
        auto params = recfun_params(*f.type);
        if (params.size() + 1 != n.kids.size())
          throw Error(ErrorKind::ArityMismatch,
                      "call expects " + std::to_string(params.size()) + " arguments, got " +
                          std::to_string(n.kids.size() - 1),
                      n.loc);
        std::vector<Term> kids{f.term};
        for (std::size_t k = 0; k < params.size(); ++k) kids.push_back(check_comp(*n.kids[k + 1], sc, params[k]));
        return {mk({OpKind::Call, {f.type}, nullptr, {}, 0}, n.loc, ctx, kids), f.type->cod()};
      }
      case K::Annot: {
        TypeRef t = source_type(n.types[0], n.loc);
        return {check_comp(*n.kids[0], sc, t), t};
      }
      default:
        break;
    }
    throw Error(ErrorKind::SortMismatch, "expected a computation", n.loc);
  }

  static std::vector<TypeRef> extend(const std::vector<TypeRef>& sc, const std::vector<TypeRef>& more) {
    std::vector<TypeRef> out = sc;
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }

  [[noreturn]] static void mismatch(const Sort& want, const Sort& got, SourceLoc loc) {
    throw Error(ErrorKind::SortMismatch, "expected " + to_string(want) + ", found " + to_string(got), loc);
  }

  TypeRef source_type(const TypeRef& t, SourceLoc loc) const {
    if (auto p = type_problem(*t, c_))
      throw Error(ErrorKind::NeedUnfulfilled, "type " + t->str() + " is not available in fragment " + c_.name() +
                                                  ": " + *p,
                  loc);
    return t;
  }

  TypeRef row_type(bool record, std::vector<Field> row, SourceLoc loc) const {
    try {
      return record ? Type::record(std::move(row)) : Type::variant(std::move(row));
    } catch (const Error& e) {
      throw Error(e.kind(), e.bare_message(), loc);
    }
  }

  TypeRef ctor_type(const TypeRef& v, const std::string& ctor, SourceLoc loc) const {
    if (v->kind() != Type::Kind::Variant)
      throw Error(ErrorKind::SortMismatch, "constructor annotation " + v->str() + " is not a variant type", loc);
    auto k = v->field_index(ctor);
    if (!k) throw Error(ErrorKind::SortMismatch, "variant " + v->str() + " has no constructor " + ctor, loc);
    return v->row()[*k].type;
  }

  static std::vector<Term> ordered(const TypeRef& r, const std::vector<std::pair<std::string, Term>>& kids) {
    std::vector<Term> out;
    for (auto& f : r->row())
      for (auto& [l, t] : kids)
        if (l == f.label) out.push_back(t);
    return out;
  }

  void need_construct(const OpInfo& info, SourceLoc loc) const {
    auto owners = family_owners(info.kind);
    for (auto e : owners)
      if (c_.has(e)) return;
    if (!owners.empty())
      throw Error(ErrorKind::DisabledConstruct,
                  std::string(family_name(info.kind)) + " needs the " + extension_name(owners.front()) + " extension",
                  loc);
  }

  Term mk(const OpInfo& info, SourceLoc loc, const Context& ctx, std::vector<Term> kids) const {
    if (auto p = construct_problem(info, c_)) throw Error(ErrorKind::DisabledConstruct, *p, loc);
    if (auto p = operator_problem(info, c_)) throw Error(ErrorKind::NeedUnfulfilled, *p, loc);
    try {
      return Term::op(table_.lookup(encode_label(info)), ctx, std::move(kids));
    } catch (const Error& e) {
      if (e.loc().known()) throw;
      throw Error(e.kind(), e.bare_message(), loc);
    }
  }

  const FragmentConfig& c_;
  const OperatorTable& table_;
};

}  // namespace

void check_context(const Context& ctx, const FragmentConfig& c) {
  for (auto& t : context_types(ctx))
    if (auto p = type_problem(*t, c))
      throw Error(ErrorKind::NeedUnfulfilled, "context type " + t->str() + " is not available: " + *p);
}

Term typecheck(const SurfaceRef& t, const Context& ctx, const Sort& expected, const FragmentConfig& c,
               const OperatorTable& table) {
  check_context(ctx, c);
  Checker ch(c, table);
  TypeRef want = parse_type(expected.id);
  if (expected.is_first()) return ch.check_value(*t, context_types(ctx), want);
  return ch.check_comp(*t, context_types(ctx), want);
}

Term typecheck_synth(const SurfaceRef& t, const Context& ctx, const FragmentConfig& c, const OperatorTable& table) {
  check_context(ctx, c);
  Checker ch(c, table);
  if (t->is_value()) return ch.synth_value(*t, context_types(ctx)).term;
  return ch.synth_comp(*t, context_types(ctx)).term;
}

Term typecheck_program(const Program& p, const FragmentConfig& c, const OperatorTable& table) {
  return typecheck_synth(p.body, p.context(), c, table);
}

}  // namespace scopekit::cbv
