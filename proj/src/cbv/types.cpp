#include "scopekit/cbv/types.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <set>

#include "json.hpp"

namespace scopekit::cbv {

namespace {

const char* const kExtNames[kExtensionCount] = {"sequential", "functions", "records", "variants",
                                               "naturals",   "while",     "recursion"};

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '\'';
}

}  // namespace

const char* extension_name(Extension e) { return kExtNames[static_cast<int>(e)]; }

std::optional<Extension> extension_from_name(std::string_view name) {
  for (int i = 0; i < kExtensionCount; ++i)
    if (name == kExtNames[i]) return static_cast<Extension>(i);
  if (name == "seq") return Extension::Sequential;
  if (name == "fun") return Extension::Functions;
  if (name == "nat") return Extension::Naturals;
  if (name == "rec") return Extension::Recursion;
  return std::nullopt;
}

std::vector<Extension> all_extensions() {
  std::vector<Extension> out;
  for (int i = 0; i < kExtensionCount; ++i) out.push_back(static_cast<Extension>(i));
  return out;
}

FragmentConfig FragmentConfig::with(Extension e) const {
  FragmentConfig c = *this;
  c.mask |= 1u << static_cast<int>(e);
  return c;
}

FragmentConfig FragmentConfig::with_mask(unsigned m) const {
  FragmentConfig c = *this;
  c.mask = m;
  return c;
}

std::string FragmentConfig::name() const {
  if (mask == 0) return "base";
  std::string out;
  for (int i = 0; i < kExtensionCount; ++i)
    if (has(static_cast<Extension>(i))) {
      if (!out.empty()) out += '+';
      out += kExtNames[i];
    }
  return out;
}

std::vector<FragmentConfig> all_fragments(const FragmentConfig& proto) {
  std::vector<FragmentConfig> out;
  for (unsigned m = 0; m < (1u << kExtensionCount); ++m) out.push_back(proto.with_mask(m));
  return out;
}

FragmentConfig parse_fragment(std::string_view spec, const FragmentConfig& proto) {
  FragmentConfig c = proto;
  c.mask = 0;
  if (spec == "base" || spec.empty() || spec == "{}") return c;
  if (spec == "all" || spec == "full") return c.with_mask((1u << kExtensionCount) - 1);
  std::size_t i = 0;
  while (i <= spec.size()) {
    std::size_t j = spec.find_first_of(",+", i);
    if (j == std::string_view::npos) j = spec.size();
    std::string_view word = spec.substr(i, j - i);
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.front()))) word.remove_prefix(1);
    while (!word.empty() && std::isspace(static_cast<unsigned char>(word.back()))) word.remove_suffix(1);
    if (!word.empty() && word != "base") {
      auto e = extension_from_name(word);
      if (!e) throw Error(ErrorKind::InvalidInput, "unknown extension '" + std::string(word) + "'");
      c = c.with(*e);
    }
    i = j + 1;
  }
  return c;
}

FragmentConfig fragment_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("fragment config: ") + e.what());
  }
  FragmentConfig c;
  if (j.contains("base_types")) c.base_types = j["base_types"].get<std::vector<std::string>>();
  if (j.contains("nat_bound")) c.nat_bound = j["nat_bound"].get<int>();
  if (j.contains("type_depth")) c.type_depth = j["type_depth"].get<int>();
  if (j.contains("extensions"))
    for (auto& e : j["extensions"]) {
      auto x = extension_from_name(e.get<std::string>());
      if (!x) throw Error(ErrorKind::InvalidInput, "unknown extension '" + e.get<std::string>() + "'");
      c = c.with(*x);
    }
  if (c.nat_bound <= 0 || c.type_depth < 0) throw Error(ErrorKind::InvalidInput, "bounds must be positive");
  return c;
}

std::string fragment_to_json(const FragmentConfig& c) {
  nlohmann::json exts = nlohmann::json::array();
  for (auto e : all_extensions())
    if (c.has(e)) exts.push_back(extension_name(e));
  return nlohmann::json{{"extensions", exts},
                        {"base_types", c.base_types},
                        {"nat_bound", c.nat_bound},
                        {"type_depth", c.type_depth}}
      .dump();
}

// --- types

bool label_less(std::string_view a, std::string_view b) {
  bool da = all_digits(a), db = all_digits(b);
  if (da && db) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
  if (da != db) return da;
  return a < b;
}

bool is_label(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), label_char); }

TypeRef Type::intern(Type t) {
  static std::mutex mu;
  static std::map<std::string, TypeRef> pool;
  std::lock_guard<std::mutex> lock(mu);
  auto it = pool.find(t.str_);
  if (it != pool.end()) return it->second;
  auto ref = std::make_shared<const Type>(std::move(t));
  pool.emplace(ref->str_, ref);
  return ref;
}

TypeRef Type::base(const std::string& name) {
  if (name.empty() || name == "Nat" || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    throw Error(ErrorKind::SyntaxError, "invalid base type name '" + name + "'");
  Type t;
  t.kind_ = Kind::Base;
  t.name_ = name;
  t.str_ = name;
  return intern(std::move(t));
}

TypeRef Type::nat() {
  Type t;
  t.kind_ = Kind::Nat;
  t.str_ = "Nat";
  return intern(std::move(t));
}

TypeRef Type::fun(const TypeRef& a, const TypeRef& b) {
  Type t;
  t.kind_ = Kind::Fun;
  t.a_ = a;
  t.b_ = b;
  t.str_ = "(" + a->str() + "->" + b->str() + ")";
  t.depth_ = 1 + std::max(a->depth(), b->depth());
  return intern(std::move(t));
}

namespace {

std::vector<Field> canonical_row(std::vector<Field> row) {
  std::sort(row.begin(), row.end(), [](const Field& x, const Field& y) { return label_less(x.label, y.label); });
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (!is_label(row[i].label)) throw Error(ErrorKind::SyntaxError, "invalid label '" + row[i].label + "'");
    if (i > 0 && row[i].label == row[i - 1].label)
      throw Error(ErrorKind::SyntaxError, "duplicate label '" + row[i].label + "'");
  }
  return row;
}

std::string row_text(const std::vector<Field>& row) {
  std::string s;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) s += ',';
    s += row[i].label + ":" + row[i].type->str();
  }
  return s;
}

int row_depth(const std::vector<Field>& row) {
  int d = 0;
  for (auto& f : row) d = std::max(d, f.type->depth());
  return d + 1;
}

}  // namespace

TypeRef Type::record(std::vector<Field> row) {
  Type t;
  t.kind_ = Kind::Record;
  t.row_ = canonical_row(std::move(row));
  t.str_ = "{" + row_text(t.row_) + "}";
  t.depth_ = row_depth(t.row_);
  return intern(std::move(t));
}

TypeRef Type::variant(std::vector<Field> row) {
  Type t;
  t.kind_ = Kind::Variant;
  t.row_ = canonical_row(std::move(row));
  t.str_ = "<" + row_text(t.row_) + ">";
  t.depth_ = row_depth(t.row_);
  return intern(std::move(t));
}

std::optional<std::size_t> Type::field_index(std::string_view label) const {
  for (std::size_t i = 0; i < row_.size(); ++i)
    if (row_[i].label == label) return i;
  return std::nullopt;
}

// --- parsing

namespace {

struct TypeParser {
  std::string_view s;
  std::size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::SyntaxError, "type '" + std::string(s) + "': " + what + " at offset " + std::to_string(i));
  }
  bool eat(std::string_view tok) {
    ws();
    if (s.substr(i, tok.size()) == tok) {
      i += tok.size();
      return true;
    }
    return false;
  }
  std::string label() {
    ws();
    std::size_t j = i;
    while (j < s.size() && label_char(s[j])) ++j;
    if (j == i) fail("expected a label");
    std::string out(s.substr(i, j - i));
    i = j;
    return out;
  }
  std::vector<Field> row(char close) {
    std::vector<Field> out;
    ws();
    if (i < s.size() && s[i] == close) {
      ++i;
      return out;
    }
    for (;;) {
      std::string l = label();
      if (!eat(":")) fail("expected ':'");
      out.push_back(Field{l, type()});
      if (eat(",")) continue;
      if (eat(std::string_view(&close, 1))) return out;
      fail(std::string("expected ',' or '") + close + "'");
    }
  }
  TypeRef atom() {
    ws();
    if (eat("(")) {
      TypeRef t = type();
      if (!eat(")")) fail("expected ')'");
      return t;
    }
    if (eat("{")) return Type::record(row('}'));
    if (eat("<")) return Type::variant(row('>'));
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
    if (j == i || std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected a type");
    std::string name(s.substr(i, j - i));
    i = j;
    if (name == "Nat") return Type::nat();
    return Type::base(name);
  }
  TypeRef type() {
    TypeRef a = atom();
    if (eat("->")) return Type::fun(a, type());
    return a;
  }
};

}  // namespace

TypeRef parse_type(std::string_view text) {
  static std::mutex mu;
  static std::map<std::string, TypeRef, std::less<>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(text);
    if (it != cache.end()) return it->second;
  }
  TypeParser p{text};
  TypeRef t = p.type();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::string(text), t);
  return t;
}

TypeRef type_of_sort(const Sort& s) { return parse_type(s.id); }

// --- needs

TypeRef unit_type() { return Type::record({}); }
TypeRef maybe_type(const TypeRef& t) { return Type::variant({{"0", unit_type()}, {"1+", t}}); }
TypeRef loop_type(const TypeRef& cont, const TypeRef& done) { return Type::variant({{"Cont", cont}, {"Done", done}}); }

TypeRef positional_record(const std::vector<TypeRef>& fields) {
  std::vector<Field> row;
  for (std::size_t i = 0; i < fields.size(); ++i) row.push_back({std::to_string(i), fields[i]});
  return Type::record(std::move(row));
}

TypeRef recreq_type(const std::vector<TypeRef>& params, const TypeRef& result) {
  return Type::fun(positional_record(params), result);
}

bool is_maybe_shape(const Type& t) {
  return t.kind() == Type::Kind::Variant && t.row().size() == 2 && t.row()[0].label == "0" &&
         t.row()[1].label == "1+" && t.row()[0].type == unit_type();
}

bool is_loop_shape(const Type& t) {
  return t.kind() == Type::Kind::Variant && t.row().size() == 2 && t.row()[0].label == "Cont" &&
         t.row()[1].label == "Done";
}

bool is_positional_record(const Type& t) {
  if (t.kind() != Type::Kind::Record) return false;
  for (std::size_t i = 0; i < t.row().size(); ++i)
    if (t.row()[i].label != std::to_string(i)) return false;
  return true;
}

std::optional<std::string> type_problem(const Type& t, const FragmentConfig& c) {
  auto fields_ok = [&](const Type& r) -> std::optional<std::string> {
    for (auto& f : r.row())
      if (auto p = type_problem(*f.type, c)) return p;
    return std::nullopt;
  };
  switch (t.kind()) {
    case Type::Kind::Base:
      if (std::find(c.base_types.begin(), c.base_types.end(), t.name()) == c.base_types.end())
        return "unknown base type '" + t.name() + "'";
      return std::nullopt;
    case Type::Kind::Nat:
      if (!c.has(Extension::Naturals)) return "Nat needs the naturals extension";
      return std::nullopt;
    case Type::Kind::Fun:
      if (auto p = type_problem(*t.cod(), c)) return p;
      if (c.has(Extension::Recursion) && is_positional_record(*t.dom())) return fields_ok(*t.dom());
      if (c.has(Extension::Functions)) return type_problem(*t.dom(), c);
      return "function type " + t.str() + " needs the functions extension";
    case Type::Kind::Record:
      if (c.has(Extension::Records)) return fields_ok(t);
      if (t.row().empty() && c.has(Extension::Naturals)) return std::nullopt;
      return "record type " + t.str() + " needs the records extension";
    case Type::Kind::Variant:
      if (c.has(Extension::Variants)) return fields_ok(t);
      if (is_maybe_shape(t) && c.has(Extension::Naturals)) return fields_ok(t);
      if (is_loop_shape(t) && c.has(Extension::While)) return fields_ok(t);
      return "variant type " + t.str() + " needs the variants extension";
  }
  return "corrupt type";
}

std::vector<NeedInfo> needs_of(const FragmentConfig& c) {
  std::vector<NeedInfo> out;
  if (c.has(Extension::Naturals)) {
    out.push_back({"unit", "{}", Extension::Naturals});
    out.push_back({"Nat*", "Nat", Extension::Naturals});
    out.push_back({"Maybe t", "<0:{},1+:t>", Extension::Naturals});
  }
  if (c.has(Extension::While)) out.push_back({"<Done:t1, Cont:t2>", "<Cont:t2,Done:t1>", Extension::While});
  if (c.has(Extension::Recursion))
    out.push_back({"RecReq(G, t)", "({0:G0,...,n-1:Gn-1}->t)", Extension::Recursion});
  return out;
}

const std::vector<MenuRow>& menu() {
  static const std::vector<MenuRow> rows = {
      {Extension::Sequential, "sequencing: let", "", ""},
      {Extension::Functions, "abstraction and application: (\\x:t), ( )", "function (->)", "Kleisli exponentials"},
      {Extension::Records, "constructors and pattern match: {C1=-,...}, case - of {C1 x1,...} -> -",
       "record {Ci:-}", ""},
      {Extension::Variants, "constructors and pattern match: t.Ci -, case - of <Ci xi -> ->", "variant <Ci:->",
       "distributive category"},
      {Extension::Naturals,
       "zero and successor constructors, literals, empty record, unroll, roll, fold, the pattern match on 0/1+",
       "Nat, the empty record, and the variants <0:{}, 1+:->",
       "binary coproducts distributed over by the products, and a natural numbers object"},
      {Extension::While, "the constructors Done, Cont, unbounded iteration for", "the variants <Done:-, Cont:->",
       "binary coproducts, distributive products, and the monad has a complete Elgot structure"},
      {Extension::Recursion, "relevant record constructor, function application, recursion letrec",
       "the functions ({xi:-} -> -)", "uniform parameterised monadic fixed-points, Kleisli exponentials"},
  };
  return rows;
}

const char* base_model_requirement() { return "strong monad over a Cartesian category"; }

std::vector<TypeRef> enumerate_types(const FragmentConfig& c, int depth, std::size_t limit) {
  std::vector<TypeRef> out;
  std::set<std::string> seen;
  auto add = [&](const TypeRef& t) {
    if (out.size() >= limit || t->depth() > depth || !type_valid(*t, c)) return;
    if (seen.insert(t->str()).second) out.push_back(t);
  };
  for (auto& b : c.base_types) add(Type::base(b));
  add(Type::nat());
  static const char* pool[] = {"l", "r"};
  for (int d = 1; d <= depth && out.size() < limit; ++d) {
    std::vector<TypeRef> prev = out;
    add(unit_type());
    for (auto& a : prev) {
      add(maybe_type(a));
      add(positional_record({a}));
      add(Type::record({{pool[0], a}}));
      add(Type::variant({{pool[0], a}}));
      for (auto& b : prev) {
        add(Type::fun(a, b));
        add(loop_type(a, b));
        add(Type::record({{pool[0], a}, {pool[1], b}}));
        add(Type::variant({{pool[0], a}, {pool[1], b}}));
        add(recreq_type({a}, b));
      }
    }
  }
  return out;
}

std::vector<TypeRef> context_types(const Context& g) {
  std::vector<TypeRef> out;
  out.reserve(g.size());
  for (auto& s : g.entries()) out.push_back(parse_type(s));
  return out;
}

Context make_context(const std::vector<TypeRef>& ts) {
  std::vector<SortId> v;
  v.reserve(ts.size());
  for (auto& t : ts) v.push_back(t->str());
  return Context(std::move(v));
}

}  // namespace scopekit::cbv
