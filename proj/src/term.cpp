#include "scopekit/term.hpp"

#include <cctype>
#include <sstream>

namespace scopekit {

HoleRef HoleSet::declare(std::string id, Sort sort, Context ctx) {
  if (holes_.count(id)) throw Error(ErrorKind::InvalidInput, "hole '" + id + "' declared twice");
  auto h = std::make_shared<const HoleDecl>(HoleDecl{id, std::move(sort), std::move(ctx)});
  holes_.emplace(std::move(id), h);
  return h;
}

HoleRef HoleSet::find(const std::string& id) const {
  auto it = holes_.find(id);
  return it == holes_.end() ? nullptr : it->second;
}

HoleRef HoleSet::lookup(const std::string& id) const {
  if (auto h = find(id)) return h;
  throw Error(ErrorKind::UnknownHole, "unknown hole '" + id + "'");
}

Term Term::var(const Context& ctx, std::size_t pos) {
  if (pos >= ctx.size())
    throw Error(ErrorKind::IllSorted, "variable #" + std::to_string(pos) + " outside " + to_string(ctx));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->sort = Sort::first(ctx[pos]);
  n->ctx = ctx;
  n->pos = pos;
  return Term(std::move(n));
}

Term Term::op(OperatorRef op, const Context& ctx, std::vector<Term> args) {
  if (!op) throw Error(ErrorKind::UnknownOperator, "null operator");
  if (args.size() != op->args.size())
    throw Error(ErrorKind::IllSorted, op->label + " expects " + std::to_string(op->args.size()) +
                                          " arguments, got " + std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Argument& a = op->args[i];
    if (args[i].sort() != a.sort)
      throw Error(ErrorKind::IllSorted, op->label + " argument " + std::to_string(i) + " has sort " +
                                            to_string(args[i].sort()) + ", expected " + to_string(a.sort));
    const Context& c = args[i].context();
    bool ok = c.size() == ctx.size() + a.binder.size();
    for (std::size_t k = 0; ok && k < c.size(); ++k)
      ok = c[k] == (k < ctx.size() ? ctx[k] : a.binder[k - ctx.size()]);
    if (!ok)
      throw Error(ErrorKind::ContextMismatch, op->label + " argument " + std::to_string(i) + " lives over " +
                                                  to_string(c) + ", expected " + to_string(ctx.extended(a.binder)));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Op;
  n->sort = op->result;
  n->ctx = ctx;
  n->op = std::move(op);
  n->kids = std::move(args);
  return Term(std::move(n));
}

Term Term::meta(HoleRef hole, const Context& ctx, std::vector<Term> env) {
  if (!hole) throw Error(ErrorKind::UnknownHole, "null hole");
  if (env.size() != hole->ctx.size())
    throw Error(ErrorKind::IllSorted, "hole ?" + hole->id + " needs " + std::to_string(hole->ctx.size()) +
                                          " environment entries, got " + std::to_string(env.size()));
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i].sort() != Sort::first(hole->ctx[i]))
      throw Error(ErrorKind::IllSorted, "hole ?" + hole->id + " entry " + std::to_string(i) + " has sort " +
                                            to_string(env[i].sort()));
    if (env[i].context() != ctx)
      throw Error(ErrorKind::ContextMismatch, "hole ?" + hole->id + " entry " + std::to_string(i) +
                                                  " is not over " + to_string(ctx));
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meta;
  n->sort = hole->sort;
  n->ctx = ctx;
  n->hole = std::move(hole);
  n->kids = std::move(env);
  return Term(std::move(n));
}

std::size_t Term::size() const {
  std::size_t s = 1;
  for (auto& k : children()) s += k.size();
  return s;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (auto& k : children()) d = std::max(d, k.depth());
  return d + 1;
}

bool operator==(const Term& a, const Term& b) {
  if (a.n_ == b.n_) return true;
  if (a.kind() != b.kind() || a.sort() != b.sort() || a.context() != b.context()) return false;
  switch (a.kind()) {
    case Term::Kind::Var: return a.position() == b.position();
    case Term::Kind::Op:
      if (a.op().label != b.op().label) return false;
      break;
    case Term::Kind::Meta:
      if (a.hole().id != b.hole().id) return false;
      break;
  }
  return a.children() == b.children();
}

SubstEnv make_subst_env(Context source, Context target, std::vector<Term> entries) {
  if (entries.size() != source.size())
    throw Error(ErrorKind::ContextMismatch, "substitution for " + to_string(source) + " has " +
                                                std::to_string(entries.size()) + " entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].sort() != Sort::first(source[i]))
      throw Error(ErrorKind::IllSorted, "substitution entry " + std::to_string(i) + " has sort " +
                                            to_string(entries[i].sort()) + ", expected " + source[i]);
    if (entries[i].context() != target)
      throw Error(ErrorKind::ContextMismatch, "substitution entry " + std::to_string(i) + " is over " +
                                                  to_string(entries[i].context()) + ", expected " + to_string(target));
  }
  return SubstEnv{std::move(source), std::move(target), std::move(entries)};
}

SubstEnv identity_env(const Context& g) {
  std::vector<Term> es;
  for (std::size_t i = 0; i < g.size(); ++i) es.push_back(Term::var(g, i));
  return SubstEnv{g, g, std::move(es)};
}

SubstEnv renaming_env(const Renaming& rho) {
  std::vector<Term> es;
  for (std::size_t y = 0; y < rho.target().size(); ++y) es.push_back(Term::var(rho.source(), rho(y)));
  return SubstEnv{rho.target(), rho.source(), std::move(es)};
}

SubstEnv compose_envs(const SubstEnv& s1, const SubstEnv& s2) {
  if (s1.target != s2.source)
    throw Error(ErrorKind::ContextMismatch, "cannot compose substitutions over " + to_string(s1.target) +
                                                " and " + to_string(s2.source));
  std::vector<Term> es;
  for (auto& t : s1.entries) es.push_back(substitute(t, s2));
  return SubstEnv{s1.source, s2.target, std::move(es)};
}

Term rename(const Term& t, const Renaming& rho) {
  if (t.context() != rho.target())
    throw Error(ErrorKind::ContextMismatch, "renaming targets " + to_string(rho.target()) + " but term is over " +
                                                to_string(t.context()));
  switch (t.kind()) {
    case Term::Kind::Var: return Term::var(rho.source(), rho(t.position()));
    case Term::Kind::Op: {
      std::vector<Term> kids;
      for (std::size_t i = 0; i < t.children().size(); ++i)
        kids.push_back(rename(t.children()[i], extend_renaming(rho, t.op().args[i].binder)));
      return Term::op(t.op_ref(), rho.source(), std::move(kids));
    }
    case Term::Kind::Meta: {
      std::vector<Term> env;
      for (auto& e : t.children()) env.push_back(rename(e, rho));
      return Term::meta(t.hole_ref(), rho.source(), std::move(env));
    }
  }
  throw Error(ErrorKind::IllSorted, "corrupt term");
}

const PointedHooks<Term>& term_hooks() {
  static const PointedHooks<Term> hooks{
      [](const Term& t, const Renaming& r) { return rename(t, r); },
      [](const Context& g, std::size_t x) { return Term::var(g, x); }};
  return hooks;
}

namespace {

FoldAlgebra<Term, Term> substitution_algebra() {
  FoldAlgebra<Term, Term> alg;
  alg.var = [](const Term& e) { return e; };
  alg.op = [](const OperatorRef& op, const Context& g, std::vector<Term> kids) {
    return Term::op(op, g, std::move(kids));
  };
  alg.hole = [](const HoleRef& h, const Context& g, std::vector<Term> env) {
    return Term::meta(h, g, std::move(env));
  };
  return alg;
}

}  // namespace

Term substitute(const Term& t, const SubstEnv& sigma) {
  if (t.context() != sigma.source)
    throw Error(ErrorKind::ContextMismatch, "substitution for " + to_string(sigma.source) +
                                                " applied to a term over " + to_string(t.context()));
  static const FoldAlgebra<Term, Term> alg = substitution_algebra();
  return fold(t, alg, sigma, term_hooks());
}

MetaSubst meta_unit(const HoleSet& holes) {
  MetaSubst s;
  for (auto& [id, h] : holes.all()) {
    std::vector<Term> env;
    for (std::size_t i = 0; i < h->ctx.size(); ++i) env.push_back(Term::var(h->ctx, i));
    s.bodies.emplace(id, Term::meta(h, h->ctx, std::move(env)));
  }
  return s;
}

void validate_meta_subst(const MetaSubst& s, const HoleSet& domain) {
  for (auto& [id, h] : domain.all()) {
    auto it = s.bodies.find(id);
    if (it == s.bodies.end()) throw Error(ErrorKind::UnknownHole, "metavariable substitution misses ?" + id);
    if (it->second.sort() != h->sort || it->second.context() != h->ctx)
      throw Error(ErrorKind::IllSorted, "body for ?" + id + " is not at " + to_string(h->sort) + " over " +
                                            to_string(h->ctx));
  }
  for (auto& [id, body] : s.bodies)
    if (!domain.find(id)) throw Error(ErrorKind::UnknownHole, "metavariable substitution has extra ?" + id);
}

Term meta_substitute(const Term& t, const MetaSubst& s) {
  switch (t.kind()) {
    case Term::Kind::Var: return t;
    case Term::Kind::Op: {
      std::vector<Term> kids;
      for (auto& k : t.children()) kids.push_back(meta_substitute(k, s));
      return Term::op(t.op_ref(), t.context(), std::move(kids));
    }
    case Term::Kind::Meta: {
      auto it = s.bodies.find(t.hole().id);
      if (it == s.bodies.end()) throw Error(ErrorKind::UnknownHole, "no body for ?" + t.hole().id);
      std::vector<Term> env;
      for (auto& e : t.children()) env.push_back(meta_substitute(e, s));
      return substitute(it->second, make_subst_env(t.hole().ctx, t.context(), std::move(env)));
    }
  }
  throw Error(ErrorKind::IllSorted, "corrupt term");
}

MetaSubst compose_meta(const MetaSubst& s1, const MetaSubst& s2) {
  MetaSubst out;
  for (auto& [id, body] : s1.bodies) out.bodies.emplace(id, meta_substitute(body, s2));
  return out;
}

// ---- canonical text ----

static void write_text(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += "#" + std::to_string(t.position());
      return;
    case Term::Kind::Op:
      out += t.op().label;
      out += "(";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ",";
        write_text(t.children()[i], out);
      }
      out += ")";
      return;
    case Term::Kind::Meta:
      out += "?" + t.hole().id + "{";
      for (std::size_t i = 0; i < t.children().size(); ++i) {
        if (i) out += ",";
        write_text(t.children()[i], out);
      }
      out += "}";
      return;
  }
}

std::string to_text(const Term& t) {
  std::string out;
  write_text(t, out);
  return out;
}

namespace {

class TextParser {
 public:
  TextParser(const std::string& s, const OperatorTable& table, const HoleSet& holes)
      : s_(s), table_(table), holes_(holes) {}

  Term parse_top(const Context& ctx) {
    Term t = term(ctx);
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorKind::SyntaxError, msg + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  void expect(char c) {
    skip();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '+';
  }
  std::string ident() {
    skip();
    std::size_t b = i_;
    while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    if (b == i_) fail("expected an identifier");
    return s_.substr(b, i_ - b);
  }
  std::string label() {
    std::string l = ident();
    if (i_ < s_.size() && s_[i_] == '[') {
      std::size_t b = i_;
      int depth = 0;
      do {
        if (s_[i_] == '[') ++depth;
        if (s_[i_] == ']') --depth;
        ++i_;
      } while (i_ < s_.size() && depth > 0);
      if (depth) fail("unbalanced '[' in label");
      l += s_.substr(b, i_ - b);
    }
    return l;
  }

  std::vector<Term> list(const Context& ctx, char close, const std::vector<Context>& binders) {
    std::vector<Term> out;
    if (peek(close)) {
      ++i_;
      return out;
    }
    for (;;) {
      Context c = out.size() < binders.size() ? ctx.extended(binders[out.size()]) : ctx;
      out.push_back(term(c));
      if (peek(',')) {
        ++i_;
        continue;
      }
      expect(close);
      return out;
    }
  }

  Term term(const Context& ctx) {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of input");
    if (s_[i_] == '#') {
      ++i_;
      skip();
      std::size_t b = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (b == i_) fail("expected a position after '#'");
      std::size_t pos = std::stoul(s_.substr(b, i_ - b));
      if (pos >= ctx.size()) fail("variable #" + std::to_string(pos) + " out of scope");
      return Term::var(ctx, pos);
    }
    if (s_[i_] == '?') {
      ++i_;
      std::string id = ident();
      HoleRef h = holes_.lookup(id);
      expect('{');
      auto env = list(ctx, '}', {});
      return Term::meta(h, ctx, std::move(env));
    }
    std::string l = label();
    OperatorRef op = table_.lookup(l);
    expect('(');
    std::vector<Context> binders;
    for (auto& a : op->args) binders.push_back(a.binder);
    auto kids = list(ctx, ')', binders);
    return Term::op(op, ctx, std::move(kids));
  }

  const std::string& s_;
  const OperatorTable& table_;
  const HoleSet& holes_;
  std::size_t i_ = 0;
};

}  // namespace

Term parse_term_text(const std::string& text, const OperatorTable& table, const HoleSet& holes,
                     const Context& ctx) {
  return TextParser(text, table, holes).parse_top(ctx);
}

}  // namespace scopekit
