#include "scopekit/cbv/surface.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "scopekit/cbv/operators.hpp"

namespace scopekit::cbv {

namespace {

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '+' || c == '\'';
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"val", "let", "in", "case", "of", "roll", "unroll",
                                          "fold", "with", "for", "letrec", "Nat"};
  return k;
}

struct Token {
  enum Kind { Word, Sym, End } kind = End;
  std::string text;
  SourceLoc loc;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (s.compare(i, 2, "--") == 0) {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    SourceLoc loc{line, col};
    if (word_char(c)) {
      std::size_t j = i;
      while (j < s.size() && word_char(s[j])) ++j;
      out.push_back({Token::Word, s.substr(i, j - i), loc});
      advance(j - i);
      continue;
    }
    for (const char* two : {"->", "|-", ":="}) {
      if (s.compare(i, 2, two) == 0) {
        out.push_back({Token::Sym, two, loc});
        advance(2);
        goto next;
      }
    }
    if (std::string("\\.:,;=(){}<>|@").find(c) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, c), loc});
      advance(1);
      continue;
    }
    throw Error(ErrorKind::SyntaxError, std::string("unexpected character '") + c + "'", loc);
  next:;
  }
  out.push_back({Token::End, "", SourceLoc{line, col}});
  return out;
}

using Node = std::shared_ptr<Surface>;

class Parser {
 public:
  Parser(const std::string& text, std::vector<std::string> scope) : toks_(lex(text)), scope_(std::move(scope)) {}

  bool at_end() const { return peek().kind == Token::End; }
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    throw Error(ErrorKind::SyntaxError, what + (t.kind == Token::End ? " at end of input" : " near '" + t.text + "'"),
                t.loc);
  }
  bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Token::Sym && peek(k).text == s; }
  bool is_kw(const char* s) const { return peek().kind == Token::Word && peek().text == s; }
  bool eat_sym(const char* s) {
    if (!is_sym(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(const char* s) {
    if (!eat_sym(s)) fail(std::string("expected '") + s + "'");
  }
  void expect_kw(const char* s) {
    if (!is_kw(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected trailing input");
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Token::Word || all_digits(t.text) || keywords().count(t.text) ||
        !(std::isalpha(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_') ||
        t.text.find('+') != std::string::npos)
      fail("expected a variable name");
    ++pos_;
    return t.text;
  }
  std::string label() {
    const Token& t = peek();
    if (t.kind != Token::Word) fail("expected a label");
    ++pos_;
    return t.text;
  }

  // --- types
  std::vector<Field> row(const char* close) {
    std::vector<Field> out;
    if (eat_sym(close)) return out;
    for (;;) {
      std::string l = label();
      expect_sym(":");
      out.push_back({l, type()});
      if (eat_sym(",")) continue;
      expect_sym(close);
      return out;
    }
  }
  TypeRef type_atom() {
    SourceLoc loc = peek().loc;
    try {
      if (eat_sym("(")) {
        TypeRef t = type();
        expect_sym(")");
        return t;
      }
      if (eat_sym("{")) return Type::record(row("}"));
      if (eat_sym("<")) return Type::variant(row(">"));
      const Token& t = peek();
      if (t.kind != Token::Word) fail("expected a type");
      ++pos_;
      if (t.text == "Nat") return Type::nat();
      return Type::base(t.text);
    } catch (const Error& e) {
      if (e.loc().known()) throw;
      throw Error(e.kind(), e.bare_message(), loc);
    }
  }
  TypeRef type() {
    TypeRef a = type_atom();
    if (eat_sym("->")) return Type::fun(a, type());
    return a;
  }

  // --- scope
  Node var_node(const std::string& name, SourceLoc loc) {
    auto n = std::make_shared<Surface>();
    n->kind = Surface::Kind::Var;
    n->loc = loc;
    n->name = name;
    for (std::size_t k = scope_.size(); k-- > 0;)
      if (scope_[k] == name) {
        n->index = static_cast<long>(k);
        break;
      }
    return n;
  }
  struct Push {
    Parser& p;
    std::size_t n;
    Push(Parser& p, const std::vector<std::string>& names) : p(p), n(names.size()) {
      p.scope_.insert(p.scope_.end(), names.begin(), names.end());
    }
    ~Push() { p.scope_.resize(p.scope_.size() - n); }
  };

  static Node make(Surface::Kind k, SourceLoc loc) {
    auto n = std::make_shared<Surface>();
    n->kind = k;
    n->loc = loc;
    return n;
  }

  // --- values
  Node value() {
    if (is_sym("\\")) {
      SourceLoc loc = peek().loc;
      ++pos_;
      auto n = make(Surface::Kind::Lam, loc);
      std::string x = ident();
      expect_sym(":");
      n->types.push_back(type());
      expect_sym(".");
      n->binders = {x};
      Push guard(*this, {x});
      n->kids.push_back(comp());
      return n;
    }
    return value_atom();
  }
  Node value_atom() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (t.kind == Token::Word && all_digits(t.text)) {
      ++pos_;
      auto n = make(Surface::Kind::Lit, loc);
      if (t.text.size() > 9) fail("literal too large");
      n->lit = std::stol(t.text);
      return n;
    }
    if (t.kind == Token::Word) return var_node(ident(), loc);
    if (eat_sym("(")) {
      Node v = value();
      expect_sym(")");
      return v;
    }
    if (eat_sym("{")) {
      auto n = make(Surface::Kind::VRecord, loc);
      if (!eat_sym("}"))
        for (;;) {
          n->labels.push_back(label());
          expect_sym("=");
          n->kids.push_back(value());
          if (eat_sym(",")) continue;
          expect_sym("}");
          break;
        }
      return n;
    }
    if (is_sym("<")) {
      auto n = make(Surface::Kind::VInj, loc);
      n->types.push_back(type_atom());
      expect_sym(".");
      n->labels.push_back(label());
      n->kids.push_back(value_atom());
      return n;
    }
    fail("expected a value");
  }

  // --- computations
  Node comp() {
    SourceLoc loc = peek().loc;
    if (is_kw("let")) {
      ++pos_;
      auto n = make(Surface::Kind::Let, loc);
      std::size_t pushed = 0;
      for (;;) {
        std::string x = ident();
        expect_sym("=");
        n->kids.push_back(comp());
        n->binders.push_back(x);
        scope_.push_back(x);
        ++pushed;
        if (eat_sym(";")) continue;
        break;
      }
      expect_kw("in");
      n->kids.push_back(comp());
      scope_.resize(scope_.size() - pushed);
      return n;
    }
    if (is_kw("case")) {
      ++pos_;
      Node scrut = comp();
      expect_kw("of");
      if (eat_sym("{")) {
        auto n = make(Surface::Kind::RecMatch, loc);
        n->kids.push_back(scrut);
        std::vector<std::pair<std::string, std::string>> pat;
        if (!eat_sym("}"))
          for (;;) {
            std::string l = label();
            pat.push_back({l, ident()});
            if (eat_sym(",")) continue;
            expect_sym("}");
            break;
          }
        // fields are bound in canonical label order
        std::stable_sort(pat.begin(), pat.end(), [](auto& a, auto& b) { return label_less(a.first, b.first); });
        for (auto& [l, x] : pat) {
          n->labels.push_back(l);
          n->binders.push_back(x);
        }
        expect_sym("->");
        Push guard(*this, n->binders);
        n->kids.push_back(comp());
        return n;
      }
      if (eat_sym("<")) {
        auto n = make(Surface::Kind::Case, loc);
        n->kids.push_back(scrut);
        if (!eat_sym(">"))
          for (;;) {
            n->labels.push_back(label());
            std::string x = ident();
            n->binders.push_back(x);
            expect_sym("->");
            {
              Push guard(*this, {x});
              n->kids.push_back(comp());
            }
            if (eat_sym("|")) continue;
            expect_sym(">");
            break;
          }
        return n;
      }
      fail("expected '{' or '<' after 'of'");
    }
    if (is_kw("fold")) {
      ++pos_;
      auto n = make(Surface::Kind::Fold, loc);
      n->kids.push_back(comp());
      expect_kw("with");
      std::string x = ident();
      expect_sym("->");
      n->binders = {x};
      Push guard(*this, {x});
      n->kids.push_back(comp());
      return n;
    }
    if (is_kw("for")) {
      ++pos_;
      auto n = make(Surface::Kind::For, loc);
      std::string i = ident();
      expect_sym("=");
      n->kids.push_back(comp());
      expect_kw("in");
      n->binders = {i};
      Push guard(*this, {i});
      n->kids.push_back(comp());
      return n;
    }
    if (is_kw("letrec")) {
      ++pos_;
      auto n = make(Surface::Kind::LetRec, loc);
      struct Def {
        std::vector<std::string> names;
        std::size_t start, end;
      };
      // first pass collects the function names so every body sees all of them
      std::vector<std::pair<std::vector<std::pair<std::string, TypeRef>>, TypeRef>> heads;
      std::vector<std::size_t> body_starts;
      for (;;) {
        n->binders.push_back(ident());
        expect_sym("(");
        std::vector<std::pair<std::string, TypeRef>> ps;
        if (!eat_sym(")"))
          for (;;) {
            std::string x = ident();
            expect_sym(":");
            ps.push_back({x, type()});
            if (eat_sym(",")) continue;
            expect_sym(")");
            break;
          }
        expect_sym(":");
        TypeRef res = type();
        expect_sym("=");
        n->params.push_back(ps);
        n->types.push_back(res);
        body_starts.push_back(pos_);
        skip_comp_until_def_end();
        if (eat_sym(";")) continue;
        break;
      }
      expect_kw("in");
      std::size_t after = pos_;
      Push fguard(*this, n->binders);
      for (std::size_t j = 0; j < body_starts.size(); ++j) {
        pos_ = body_starts[j];
        std::vector<std::string> pnames;
        for (auto& p : n->params[j]) pnames.push_back(p.first);
        Push pguard(*this, pnames);
        n->kids.push_back(comp());
        if (!(is_sym(";") || is_kw("in"))) fail("expected ';' or 'in'");
      }
      pos_ = after;
      n->kids.push_back(comp());
      return n;
    }
    return prefix();
  }

  // skips one definition body: stops at ';' or 'in' at bracket depth 0
  void skip_comp_until_def_end() {
    int depth = 0;
    int lets = 0;
    for (;;) {
      const Token& t = peek();
      if (t.kind == Token::End) fail("unterminated letrec definition");
      if (t.kind == Token::Sym) {
        const std::string& s = t.text;
        if (s == "(" || s == "{" || s == "<") ++depth;
        else if (s == ")" || s == "}" || s == ">") --depth;
        else if (s == ";" && depth == 0 && lets == 0) return;
      } else if (depth == 0) {
        if (t.text == "let" || t.text == "letrec" || t.text == "for") ++lets;
        else if (t.text == "in") {
          if (lets == 0) return;
          --lets;
        }
      }
      ++pos_;
    }
  }

  Node prefix() {
    SourceLoc loc = peek().loc;
    if (is_kw("roll") || is_kw("unroll")) {
      auto n = make(is_kw("roll") ? Surface::Kind::Roll : Surface::Kind::Unroll, loc);
      ++pos_;
      n->kids.push_back(prefix());
      return n;
    }
    if (is_sym("<")) {
      auto n = make(Surface::Kind::Inj, loc);
      n->types.push_back(type_atom());
      expect_sym(".");
      n->labels.push_back(label());
      n->kids.push_back(prefix());
      return n;
    }
    return app();
  }
  bool starts_atom() const { return is_sym("(") || is_sym("{") || is_kw("val"); }
  Node app() {
    Node a = postfix();
    while (starts_atom()) {
      auto n = make(Surface::Kind::App, a->loc);
      n->kids = {a, postfix()};
      a = n;
    }
    return a;
  }
  Node postfix() {
    Node a = atom();
    while (is_sym("@") && is_sym("(", 1)) {
      auto n = make(Surface::Kind::Call, peek().loc);
      pos_ += 2;
      n->kids.push_back(a);
      if (!eat_sym(")"))
        for (;;) {
          n->kids.push_back(comp());
          if (eat_sym(",")) continue;
          expect_sym(")");
          break;
        }
      a = n;
    }
    return a;
  }
  Node atom() {
    SourceLoc loc = peek().loc;
    if (is_kw("val")) {
      ++pos_;
      auto n = make(Surface::Kind::Val, loc);
      n->kids.push_back(is_sym("\\") ? value() : value_atom());
      return n;
    }
    if (eat_sym("(")) {
      Node m = comp();
      if (eat_sym(":")) {
        auto n = make(Surface::Kind::Annot, loc);
        n->types.push_back(type());
        n->kids.push_back(m);
        m = n;
      }
      expect_sym(")");
      return m;
    }
    if (eat_sym("{")) {
      auto n = make(Surface::Kind::Record, loc);
      if (!eat_sym("}"))
        for (;;) {
          n->labels.push_back(label());
          expect_sym("=");
          n->kids.push_back(comp());
          if (eat_sym(",")) continue;
          expect_sym("}");
          break;
        }
      return n;
    }
    fail("expected a computation");
  }

  // "x : T, y : U"
  void context(std::vector<std::string>& names, std::vector<TypeRef>& types) {
    if (at_end() || is_sym("|-")) return;
    for (;;) {
      names.push_back(ident());
      expect_sym(":");
      types.push_back(type());
      if (!eat_sym(",")) return;
    }
  }

  std::size_t pos_ = 0;

 private:
  std::vector<Token> toks_;
  std::vector<std::string> scope_;
};

std::pair<std::string, std::string> split_turnstile(const std::string& text) {
  auto k = text.find("|-");
  if (k == std::string::npos) return {"", text};
  return {text.substr(0, k), text.substr(k + 2)};
}

// offsets a location in the part after the turnstile back into the file
SourceLoc shift_loc(SourceLoc loc, const std::string& head) {
  if (!loc.known()) return loc;
  int lines = static_cast<int>(std::count(head.begin(), head.end(), '\n'));
  if (lines == 0) return SourceLoc{loc.line, loc.col + static_cast<int>(head.size()) + (loc.line == 1 ? 2 : 0)};
  if (loc.line == 1) {
    auto nl = head.rfind('\n');
    return SourceLoc{loc.line + lines, loc.col + static_cast<int>(head.size() - nl - 1) + 2};
  }
  return SourceLoc{loc.line + lines, loc.col};
}

}  // namespace

SurfaceRef parse_computation(const std::string& text, const std::vector<std::string>& free_names) {
  Parser p(text, free_names);
  auto n = p.comp();
  p.expect_end();
  return n;
}

SurfaceRef parse_value(const std::string& text, const std::vector<std::string>& free_names) {
  Parser p(text, free_names);
  auto n = p.value();
  p.expect_end();
  return n;
}

Program parse_program(const std::string& text) {
  auto [head, body] = split_turnstile(text);
  Program prog;
  Parser hp(head, {});
  hp.context(prog.names, prog.types);
  hp.expect_end();
  try {
    prog.body = parse_computation(body, prog.names);
  } catch (const Error& e) {
    if (head.empty() && text.find("|-") == std::string::npos) throw;
    throw Error(e.kind(), e.bare_message(), shift_loc(e.loc(), head));
  }
  return prog;
}

SubstSpec parse_substitution(const std::string& text, const std::vector<std::string>& domain_names) {
  auto [head, body] = split_turnstile(text);
  SubstSpec out;
  Parser hp(head, {});
  hp.context(out.names, out.types);
  hp.expect_end();
  Parser p(body, out.names);
  std::vector<SurfaceRef> values(domain_names.size());
  if (!p.at_end())
    for (;;) {
      SourceLoc loc = p.peek().loc;
      std::string y = p.ident();
      p.expect_sym(":=");
      auto it = std::find(domain_names.begin(), domain_names.end(), y);
      if (it == domain_names.end())
        throw Error(ErrorKind::UnknownVariable, "substitution for unknown variable '" + y + "'", loc);
      values[static_cast<std::size_t>(it - domain_names.begin())] = p.value();
      if (!p.eat_sym(",")) break;
    }
  p.expect_end();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!values[i]) throw Error(ErrorKind::InvalidInput, "substitution has no entry for '" + domain_names[i] + "'");
  out.values = std::move(values);
  return out;
}

// --- pretty printing

namespace {

struct Printer {
  std::vector<std::string> names;

  std::string fresh(std::size_t pos) {
    std::string base = "x" + std::to_string(pos);
    std::string n = base;
    while (std::find(names.begin(), names.end(), n) != names.end()) n += "'";
    return n;
  }
  std::vector<std::string> bind(const Context& delta) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < delta.size(); ++k) {
      out.push_back(fresh(names.size()));
      names.push_back(out.back());
    }
    return out;
  }
  void unbind(std::size_t n) { names.resize(names.size() - n); }

  static std::string wrap(const std::string& s, int level, int need) { return level >= need ? s : "(" + s + ")"; }

  std::string value(const Term& t, bool atom) {
    if (t.kind() == Term::Kind::Var) return names.at(t.position());
    if (t.kind() != Term::Kind::Op) throw Error(ErrorKind::InvalidInput, "cannot print holes in concrete syntax");
    OpInfo info = decode_label(t.op().label);
    auto& kids = t.children();
    switch (info.kind) {
      case OpKind::Lit:
        return std::to_string(info.lit);
      case OpKind::VRec: {
        std::string s = "{";
        auto& row = info.ts[0]->row();
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) s += ", ";
          s += row[i].label + " = " + value(kids[i], false);
        }
        return s + "}";
      }
      case OpKind::VInj:
        return info.ts[0]->str() + "." + info.ctor + " " + value(kids[0], true);
      case OpKind::Lam: {
        auto bound = bind(t.op().args[0].binder);
        std::string s = "\\" + bound[0] + " : " + info.ts[0]->str() + ". " + comp(kids[0], 0);
        unbind(1);
        return atom ? "(" + s + ")" : s;
      }
      default:
        throw Error(ErrorKind::InvalidInput, "not a value operator: " + t.op().label);
    }
  }

  // levels: 0 binding forms, 1 prefix and application, 2 atoms
  std::string comp(const Term& t, int need) {
    int level = 0;
    std::string s = comp_level(t, level);
    return wrap(s, level, need);
  }

  std::string comp_level(const Term& t, int& level) {
    if (t.kind() != Term::Kind::Op) throw Error(ErrorKind::InvalidInput, "cannot print this computation");
    OpInfo info = decode_label(t.op().label);
    auto& kids = t.children();
    auto& args = t.op().args;
    switch (info.kind) {
      case OpKind::Val:
        level = 2;
        return "val " + value(kids[0], true);
      case OpKind::Let: {
        level = 0;
        std::string s = "let ";
        std::size_t base = names.size();
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) {
          if (i) s += "; ";
          std::string m = comp(kids[i], 1);
          names.push_back(fresh(names.size()));
          s += names.back() + " = " + m;
        }
        s += " in " + comp(kids.back(), 0);
        names.resize(base);
        return s;
      }
      case OpKind::App: {
        level = 1;
        bool left_app = kids[0].kind() == Term::Kind::Op && decode_label(kids[0].op().label).kind == OpKind::App;
        return (left_app ? comp(kids[0], 1) : comp(kids[0], 2)) + " " + comp(kids[1], 2);
      }
      case OpKind::Rec: {
        level = 2;
        std::string s = "{";
        auto& row = info.ts[0]->row();
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) s += ", ";
          s += row[i].label + " = " + comp(kids[i], 0);
        }
        return s + "}";
      }
      case OpKind::RecMatch: {
        level = 0;
        std::string s = "case " + comp(kids[0], 1) + " of {";
        auto bound = bind(args[1].binder);
        auto& row = info.ts[0]->row();
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) s += ", ";
          s += row[i].label + " " + bound[i];
        }
        s += "} -> " + comp(kids[1], 0);
        unbind(bound.size());
        return s;
      }
      case OpKind::Inj:
        level = 1;
        return info.ts[0]->str() + "." + info.ctor + " " + comp(kids[0], 1);
      case OpKind::Case: {
        level = 0;
        std::string s = "case " + comp(kids[0], 1) + " of <";
        auto& row = info.ts[0]->row();
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) s += " | ";
          auto bound = bind(args[i + 1].binder);
          s += row[i].label + " " + bound[0] + " -> " + comp(kids[i + 1], 0);
          unbind(1);
        }
        return s + ">";
      }
      case OpKind::Unroll:
        level = 1;
        return "unroll " + comp(kids[0], 1);
      case OpKind::Roll:
        level = 1;
        return "roll " + comp(kids[0], 1);
      case OpKind::Fold: {
        level = 2;
        std::string s = "(fold " + comp(kids[0], 1) + " with ";
        auto bound = bind(args[1].binder);
        s += bound[0] + " -> " + comp(kids[1], 0) + " : " + info.ts[0]->str() + ")";
        unbind(1);
        return s;
      }
      case OpKind::For: {
        level = 0;
        std::string s = "for ";
        std::string m = comp(kids[0], 1);
        auto bound = bind(args[1].binder);
        s += bound[0] + " = " + m + " in " + comp(kids[1], 0);
        unbind(1);
        return s;
      }
      case OpKind::LetRec: {
        level = 0;
        std::size_t n = info.ts.size();
        auto fs = bind(make_context(info.ts));
        std::string s = "letrec ";
        for (std::size_t j = 0; j < n; ++j) {
          if (j) s += "; ";
          auto ptypes = recfun_params(*info.ts[j]);
          auto ps = bind(make_context(ptypes));
          s += fs[j] + " (";
          for (std::size_t k = 0; k < ps.size(); ++k) {
            if (k) s += ", ";
            s += ps[k] + " : " + ptypes[k]->str();
          }
          s += ") : " + info.ts[j]->cod()->str() + " = " + comp(kids[j], 1);
          unbind(ps.size());
        }
        s += " in " + comp(kids[n], 0);
        unbind(n);
        return s;
      }
      case OpKind::Call: {
        level = 2;
        std::string s = comp(kids[0], 2) + " @(";
        for (std::size_t k = 1; k < kids.size(); ++k) {
          if (k > 1) s += ", ";
          s += comp(kids[k], 0);
        }
        return s + ")";
      }
      default:
        throw Error(ErrorKind::InvalidInput, "not a computation operator: " + t.op().label);
    }
  }
};

}  // namespace

std::string pretty(const Term& t, const std::vector<std::string>& names) {
  if (names.size() != t.context().size())
    throw Error(ErrorKind::ContextMismatch, "pretty: need one name per context position");
  Printer p{names};
  if (t.sort().is_first()) return p.value(t, false);
  return p.comp(t, 0);
}

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("x" + std::to_string(i));
  return out;
}

std::string context_text(const std::vector<std::string>& names, const std::vector<TypeRef>& types) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ", ";
    s += names[i] + " : " + types[i]->str();
  }
  return s;
}

}  // namespace scopekit::cbv
