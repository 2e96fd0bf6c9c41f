#include "scopekit/cbv/operators.hpp"

#include <algorithm>
#include <cctype>

namespace scopekit::cbv {

namespace {

struct FamilySpec {
  OpKind kind;
  const char* name;
};

const FamilySpec kFamilies[] = {
    {OpKind::Val, "val"},         {OpKind::Let, "let"},       {OpKind::Lam, "lam"},
    {OpKind::App, "app"},         {OpKind::VRec, "vrec"},     {OpKind::Rec, "rec"},
    {OpKind::RecMatch, "recmatch"}, {OpKind::VInj, "vinj"},   {OpKind::Inj, "inj"},
    {OpKind::Case, "case"},       {OpKind::Lit, "lit"},       {OpKind::Unroll, "unroll"},
    {OpKind::Roll, "roll"},       {OpKind::Fold, "fold"},     {OpKind::For, "for"},
    {OpKind::LetRec, "letrec"},   {OpKind::Call, "call"},
};

[[noreturn]] void bad_label(std::string_view label, const std::string& why) {
  throw Error(ErrorKind::UnknownOperator, "operator label '" + std::string(label) + "': " + why);
}

// split at top-level separators; '->' does not close a '<'
std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '{' || c == '<') ++depth;
    else if (c == ')' || c == '}') --depth;
    else if (c == '>' && !(i > 0 && s[i - 1] == '-')) --depth;
    else if (c == sep && depth == 0) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.emplace_back(s.substr(start));
  return out;
}

std::string join_types(const std::vector<TypeRef>& ts) {
  std::string s;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) s += ',';
    s += ts[i]->str();
  }
  return s;
}

std::optional<Extension> first_enabled(const std::vector<Extension>& es, const FragmentConfig& c) {
  for (auto e : es)
    if (c.has(e)) return e;
  return std::nullopt;
}

}  // namespace

const char* family_name(OpKind k) {
  for (auto& f : kFamilies)
    if (f.kind == k) return f.name;
  return "?";
}

std::vector<TypeRef> recfun_params(const Type& f) {
  std::vector<TypeRef> out;
  if (f.kind() != Type::Kind::Fun || !is_positional_record(*f.dom())) return out;
  for (auto& fld : f.dom()->row()) out.push_back(fld.type);
  return out;
}

OpInfo decode_label(std::string_view label) {
  std::size_t br = label.find('[');
  std::string_view name = label.substr(0, br);
  const FamilySpec* spec = nullptr;
  for (auto& f : kFamilies)
    if (name == f.name) spec = &f;
  if (!spec) bad_label(label, "unknown family");
  OpInfo info;
  info.kind = spec->kind;
  std::vector<std::vector<std::string>> groups;
  if (br != std::string_view::npos) {
    if (label.back() != ']') bad_label(label, "missing ']'");
    for (auto& g : split_top(label.substr(br + 1, label.size() - br - 2), ';')) groups.push_back(split_top(g, ','));
  }
  auto need = [&](std::size_t n) {
    if (groups.size() != n) bad_label(label, "expected " + std::to_string(n) + " parameter groups");
  };
  auto one = [&](std::size_t g) -> TypeRef {
    if (groups[g].size() != 1) bad_label(label, "expected a single type");
    try {
      return parse_type(groups[g][0]);
    } catch (const Error& e) {
      bad_label(label, e.bare_message());
    }
  };
  auto many = [&](std::size_t g) {
    std::vector<TypeRef> out;
    try {
      for (auto& t : groups[g]) out.push_back(parse_type(t));
    } catch (const Error& e) {
      bad_label(label, e.bare_message());
    }
    return out;
  };
  switch (info.kind) {
    case OpKind::Val:
    case OpKind::Fold:
    case OpKind::VRec:
    case OpKind::Rec:
    case OpKind::Call:
      need(1);
      info.ts = {one(0)};
      break;
    case OpKind::Let:
    case OpKind::LetRec:
      need(2);
      info.ts = many(0);
      info.res = one(1);
      if (info.ts.empty() || (info.ts.size() == 1 && groups[0][0].empty())) bad_label(label, "empty binding list");
      break;
    case OpKind::Lam:
    case OpKind::App:
    case OpKind::RecMatch:
    case OpKind::Case:
    case OpKind::For:
      need(2);
      info.ts = {one(0)};
      info.res = one(1);
      break;
    case OpKind::VInj:
    case OpKind::Inj:
      need(2);
      info.ts = {one(0)};
      if (groups[1].size() != 1 || !is_label(groups[1][0])) bad_label(label, "bad constructor");
      info.ctor = groups[1][0];
      break;
    case OpKind::Lit: {
      need(1);
      const std::string& n = groups[0][0];
      if (groups[0].size() != 1 || n.empty() || n.size() > 9 ||
          !std::all_of(n.begin(), n.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        bad_label(label, "bad literal");
      info.lit = std::stol(n);
      break;
    }
    case OpKind::Unroll:
    case OpKind::Roll:
      need(0);
      break;
  }
  // shape checks
  auto kind_of = [&](const TypeRef& t) { return t->kind(); };
  switch (info.kind) {
    case OpKind::VRec:
    case OpKind::Rec:
    case OpKind::RecMatch:
      if (kind_of(info.ts[0]) != Type::Kind::Record) bad_label(label, "expects a record type");
      break;
    case OpKind::VInj:
    case OpKind::Inj:
      if (kind_of(info.ts[0]) != Type::Kind::Variant) bad_label(label, "expects a variant type");
      if (!info.ts[0]->field_index(info.ctor)) bad_label(label, "no constructor " + info.ctor);
      break;
    case OpKind::Case:
      if (kind_of(info.ts[0]) != Type::Kind::Variant) bad_label(label, "expects a variant type");
      break;
    case OpKind::LetRec:
      for (auto& f : info.ts)
        if (f->kind() != Type::Kind::Fun || !is_positional_record(*f->dom()))
          bad_label(label, "expects recursive function types");
      break;
    case OpKind::Call:
      if (info.ts[0]->kind() != Type::Kind::Fun || !is_positional_record(*info.ts[0]->dom()))
        bad_label(label, "expects a recursive function type");
      break;
    default:
      break;
  }
  return info;
}

std::string encode_label(const OpInfo& i) {
  std::string n = family_name(i.kind);
  switch (i.kind) {
    case OpKind::Val:
    case OpKind::Fold:
    case OpKind::VRec:
    case OpKind::Rec:
    case OpKind::Call:
      return n + "[" + i.ts[0]->str() + "]";
    case OpKind::Let:
    case OpKind::LetRec:
      return n + "[" + join_types(i.ts) + ";" + i.res->str() + "]";
    case OpKind::Lam:
    case OpKind::App:
    case OpKind::RecMatch:
    case OpKind::Case:
    case OpKind::For:
      return n + "[" + i.ts[0]->str() + ";" + i.res->str() + "]";
    case OpKind::VInj:
    case OpKind::Inj:
      return n + "[" + i.ts[0]->str() + ";" + i.ctor + "]";
    case OpKind::Lit:
      return n + "[" + std::to_string(i.lit) + "]";
    case OpKind::Unroll:
    case OpKind::Roll:
      return n;
  }
  return n;
}

Operator make_operator(const OpInfo& i) {
  Operator op;
  op.label = encode_label(i);
  auto C = [](const TypeRef& t) { return comp_sort(t); };
  auto V = [](const TypeRef& t) { return value_sort(t); };
  auto row_types = [](const TypeRef& r) {
    std::vector<TypeRef> out;
    for (auto& f : r->row()) out.push_back(f.type);
    return out;
  };
  TypeRef nat = Type::nat();
  switch (i.kind) {
    case OpKind::Val:
      op.result = C(i.ts[0]);
      op.args = {{Context{}, V(i.ts[0])}};
      break;
    case OpKind::Let: {
      op.result = C(i.res);
      std::vector<TypeRef> bound;
      for (auto& t : i.ts) {
        op.args.push_back({make_context(bound), C(t)});
        bound.push_back(t);
      }
      op.args.push_back({make_context(bound), C(i.res)});
      break;
    }
    case OpKind::Lam:
      op.result = V(Type::fun(i.ts[0], i.res));
      op.args = {{make_context({i.ts[0]}), C(i.res)}};
      break;
    case OpKind::App:
      op.result = C(i.res);
      op.args = {{Context{}, C(Type::fun(i.ts[0], i.res))}, {Context{}, C(i.ts[0])}};
      break;
    case OpKind::VRec:
      op.result = V(i.ts[0]);
      for (auto& t : row_types(i.ts[0])) op.args.push_back({Context{}, V(t)});
      break;
    case OpKind::Rec:
      op.result = C(i.ts[0]);
      for (auto& t : row_types(i.ts[0])) op.args.push_back({Context{}, C(t)});
      break;
    case OpKind::RecMatch:
      op.result = C(i.res);
      op.args = {{Context{}, C(i.ts[0])}, {make_context(row_types(i.ts[0])), C(i.res)}};
      break;
    case OpKind::VInj:
      op.result = V(i.ts[0]);
      op.args = {{Context{}, V(i.ts[0]->row()[*i.ts[0]->field_index(i.ctor)].type)}};
      break;
    case OpKind::Inj:
      op.result = C(i.ts[0]);
      op.args = {{Context{}, C(i.ts[0]->row()[*i.ts[0]->field_index(i.ctor)].type)}};
      break;
    case OpKind::Case:
      op.result = C(i.res);
      op.args = {{Context{}, C(i.ts[0])}};
      for (auto& t : row_types(i.ts[0])) op.args.push_back({make_context({t}), C(i.res)});
      break;
    case OpKind::Lit:
      op.result = V(nat);
      break;
    case OpKind::Unroll:
      op.result = C(maybe_type(nat));
      op.args = {{Context{}, C(nat)}};
      break;
    case OpKind::Roll:
      op.result = C(nat);
      op.args = {{Context{}, C(maybe_type(nat))}};
      break;
    case OpKind::Fold:
      op.result = C(i.ts[0]);
      op.args = {{Context{}, C(nat)}, {make_context({maybe_type(i.ts[0])}), C(i.ts[0])}};
      break;
    case OpKind::For:
      op.result = C(i.res);
      op.args = {{Context{}, C(i.ts[0])}, {make_context({i.ts[0]}), C(loop_type(i.ts[0], i.res))}};
      break;
    case OpKind::LetRec: {
      op.result = C(i.res);
      Context fs = make_context(i.ts);
      for (auto& f : i.ts) op.args.push_back({fs.extended(make_context(recfun_params(*f))), C(f->cod())});
      op.args.push_back({fs, C(i.res)});
      break;
    }
    case OpKind::Call: {
      const TypeRef& f = i.ts[0];
      op.result = C(f->cod());
      op.args.push_back({Context{}, C(f)});
      for (auto& t : recfun_params(*f)) op.args.push_back({Context{}, C(t)});
      break;
    }
  }
  return op;
}

std::vector<Extension> family_owners(OpKind k) {
  using E = Extension;
  switch (k) {
    case OpKind::Val:
      return {};
    case OpKind::Let:
      return {E::Sequential};
    case OpKind::Lam:
    case OpKind::App:
      return {E::Functions};
    case OpKind::VRec:
    case OpKind::Rec:
      return {E::Records, E::Naturals};
    case OpKind::RecMatch:
      return {E::Records};
    case OpKind::VInj:
    case OpKind::Inj:
      return {E::Variants, E::Naturals, E::While};
    case OpKind::Case:
      return {E::Variants, E::Naturals};
    case OpKind::Lit:
    case OpKind::Unroll:
    case OpKind::Roll:
    case OpKind::Fold:
      return {E::Naturals};
    case OpKind::For:
      return {E::While};
    case OpKind::LetRec:
    case OpKind::Call:
      return {E::Recursion};
  }
  return {};
}

std::optional<std::string> construct_problem(const OpInfo& i, const FragmentConfig& c) {
  using E = Extension;
  auto missing = [](const char* what, E e) {
    return std::string(what) + " needs the " + extension_name(e) + " extension";
  };
  const char* fam = family_name(i.kind);
  auto owners = family_owners(i.kind);
  if (!owners.empty() && !first_enabled(owners, c)) return missing(fam, owners.front());
  switch (i.kind) {
    case OpKind::VRec:
    case OpKind::Rec:
      if (!c.has(E::Records) && !i.ts[0]->row().empty()) return missing("non-empty record", E::Records);
      break;
    case OpKind::VInj:
    case OpKind::Inj:
      if (!c.has(E::Variants) && !(c.has(E::Naturals) && is_maybe_shape(*i.ts[0])) &&
          !(c.has(E::While) && is_loop_shape(*i.ts[0])))
        return missing("variant constructor", E::Variants);
      break;
    case OpKind::Case:
      if (!c.has(E::Variants) && !(c.has(E::Naturals) && is_maybe_shape(*i.ts[0])))
        return missing("variant pattern match", E::Variants);
      break;
    default:
      break;
  }
  return std::nullopt;
}

std::optional<std::string> operator_problem(const OpInfo& i, const FragmentConfig& c) {
  if (auto p = construct_problem(i, c)) return p;
  Operator op = make_operator(i);
  auto check = [&](const Sort& s) -> std::optional<std::string> {
    return type_problem(*parse_type(s.id), c);
  };
  if (auto p = check(op.result)) return p;
  for (auto& a : op.args) {
    if (auto p = check(a.sort)) return p;
    for (auto& s : a.binder.entries())
      if (auto p = type_problem(*parse_type(s), c)) return p;
  }
  return std::nullopt;
}

SortingSystem cbv_sorting_system(const FragmentConfig& c) {
  auto pred = [c](const SortId& s) {
    try {
      return type_valid(*parse_type(s), c);
    } catch (const Error&) {
      return false;
    }
  };
  return SortingSystem::open(pred, pred, "CBV types of fragment " + c.name());
}

OperatorTable build_operator_table(const FragmentConfig& c) {
  OperatorTable table(cbv_sorting_system(c));
  for (auto& f : kFamilies) {
    auto owners = family_owners(f.kind);
    if (!owners.empty() && !first_enabled(owners, c)) continue;
    OpKind kind = f.kind;
    table.add_family(OperatorFamily{f.name, [c, kind](std::string_view label) -> OperatorRef {
                                      OpInfo info;
                                      try {
                                        info = decode_label(label);
                                      } catch (const Error&) {
                                        return nullptr;
                                      }
                                      if (info.kind != kind || operator_problem(info, c)) return nullptr;
                                      Operator op = make_operator(info);
                                      auto too_deep = [&](const std::string& s) {
                                        return parse_type(s)->depth() > c.type_depth;
                                      };
                                      bool deep = too_deep(op.result.id);
                                      for (auto& a : op.args) {
                                        deep = deep || too_deep(a.sort.id);
                                        for (auto& s : a.binder.entries()) deep = deep || too_deep(s);
                                      }
                                      if (deep)
                                        throw Error(ErrorKind::DepthExceeded,
                                                    "operator " + std::string(label) +
                                                        " mentions a type deeper than " +
                                                        std::to_string(c.type_depth));
                                      return std::make_shared<const Operator>(std::move(op));
                                    }});
  }
  return table;
}

const std::vector<RuleInfo>& rule_table() {
  static const std::vector<RuleInfo> rules = {
      {OpKind::Val, "value: G |- V : t  gives  G |- val V : C t"},
      {OpKind::Let, "sequencing: staircase premises G,x1..xi |- M(i+1), body G,x1..xn |- N"},
      {OpKind::Lam, "abstraction: G, x:t1 |- M : C t2"},
      {OpKind::App, "application: G |- M1 : C (t1 -> t2), G |- M2 : C t1"},
      {OpKind::VRec, "record constructor (values)"},
      {OpKind::Rec, "record constructor: G |- Mi : C ti"},
      {OpKind::RecMatch, "record pattern match: body binds every field"},
      {OpKind::VInj, "variant constructor (values)"},
      {OpKind::Inj, "variant constructor: G |- M : C ti"},
      {OpKind::Case, "variant pattern match: clause i binds xi : ti"},
      {OpKind::Lit, "number literal"},
      {OpKind::Unroll, "unroll: C Nat to C <0:{}, 1+:Nat>"},
      {OpKind::Roll, "roll: C <0:{}, 1+:Nat> to C Nat"},
      {OpKind::Fold, "bounded iteration: body binds x : <0:{}, 1+:t>"},
      {OpKind::For, "unbounded iteration: body binds i : t, yields C <Cont:t, Done:s>"},
      {OpKind::LetRec, "recursion: bodies bind f1..fn then Gi, N binds f1..fn"},
      {OpKind::Call, "recursive call: application fused with the relevant record constructor"},
  };
  return rules;
}

std::string label_val(const TypeRef& t) { return encode_label({OpKind::Val, {t}, nullptr, {}, 0}); }
std::string label_let(const std::vector<TypeRef>& ts, const TypeRef& s) {
  return encode_label({OpKind::Let, ts, s, {}, 0});
}
std::string label_lam(const TypeRef& a, const TypeRef& b) { return encode_label({OpKind::Lam, {a}, b, {}, 0}); }
std::string label_app(const TypeRef& a, const TypeRef& b) { return encode_label({OpKind::App, {a}, b, {}, 0}); }
std::string label_vrec(const TypeRef& r) { return encode_label({OpKind::VRec, {r}, nullptr, {}, 0}); }
std::string label_rec(const TypeRef& r) { return encode_label({OpKind::Rec, {r}, nullptr, {}, 0}); }
std::string label_recmatch(const TypeRef& r, const TypeRef& s) {
  return encode_label({OpKind::RecMatch, {r}, s, {}, 0});
}
std::string label_vinj(const TypeRef& v, const std::string& ctor) {
  return encode_label({OpKind::VInj, {v}, nullptr, ctor, 0});
}
std::string label_inj(const TypeRef& v, const std::string& ctor) {
  return encode_label({OpKind::Inj, {v}, nullptr, ctor, 0});
}
std::string label_case(const TypeRef& v, const TypeRef& s) { return encode_label({OpKind::Case, {v}, s, {}, 0}); }
std::string label_lit(long n) { return encode_label({OpKind::Lit, {}, nullptr, {}, n}); }
std::string label_fold(const TypeRef& t) { return encode_label({OpKind::Fold, {t}, nullptr, {}, 0}); }
std::string label_for(const TypeRef& t, const TypeRef& s) { return encode_label({OpKind::For, {t}, s, {}, 0}); }
std::string label_letrec(const std::vector<TypeRef>& fs, const TypeRef& s) {
  return encode_label({OpKind::LetRec, fs, s, {}, 0});
}
std::string label_call(const TypeRef& f) { return encode_label({OpKind::Call, {f}, nullptr, {}, 0}); }

}  // namespace scopekit::cbv
