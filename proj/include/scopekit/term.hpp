#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scopekit/signature.hpp"
#include "scopekit/sorts.hpp"

namespace scopekit {

struct HoleDecl {
  std::string id;
  Sort sort;
  Context ctx;
};

using HoleRef = std::shared_ptr<const HoleDecl>;

class HoleSet {
 public:
  HoleRef declare(std::string id, Sort sort, Context ctx);
  HoleRef find(const std::string& id) const;
  HoleRef lookup(const std::string& id) const;  // throws UnknownHole
  const std::map<std::string, HoleRef>& all() const { return holes_; }

 private:
  std::map<std::string, HoleRef> holes_;
};

class Term {
 public:
  enum class Kind { Var, Op, Meta };

  static Term var(const Context& ctx, std::size_t pos);
  static Term op(OperatorRef op, const Context& ctx, std::vector<Term> args);
  static Term meta(HoleRef hole, const Context& ctx, std::vector<Term> env);

  Kind kind() const { return n_->kind; }
  const Sort& sort() const { return n_->sort; }
  const Context& context() const { return n_->ctx; }
  std::size_t position() const { return n_->pos; }
  const Operator& op() const { return *n_->op; }
  const OperatorRef& op_ref() const { return n_->op; }
  const HoleDecl& hole() const { return *n_->hole; }
  const HoleRef& hole_ref() const { return n_->hole; }
  const std::vector<Term>& children() const { return n_->kids; }
  bool same_node(const Term& o) const { return n_ == o.n_; }

  std::size_t size() const;
  std::size_t depth() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    Sort sort;
    Context ctx;
    std::size_t pos = 0;
    OperatorRef op;
    HoleRef hole;
    std::vector<Term> kids;
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

using SubstEnv = Env<Term>;

// validated constructor: entries[i] has sort First(source[i]) over target
SubstEnv make_subst_env(Context source, Context target, std::vector<Term> entries);
SubstEnv identity_env(const Context& g);
SubstEnv renaming_env(const Renaming& rho);
// sigma1 : G1 over G2, sigma2 : G2 over G3; componentwise sigma1[sigma2]
SubstEnv compose_envs(const SubstEnv& sigma1, const SubstEnv& sigma2);

const PointedHooks<Term>& term_hooks();

Term rename(const Term& t, const Renaming& rho);
Term substitute(const Term& t, const SubstEnv& sigma);

struct MetaSubst {
  std::map<std::string, Term> bodies;
};

MetaSubst meta_unit(const HoleSet& holes);
Term meta_substitute(const Term& t, const MetaSubst& s);
// s1 then s2
MetaSubst compose_meta(const MetaSubst& s1, const MetaSubst& s2);
void validate_meta_subst(const MetaSubst& s, const HoleSet& domain);

template <class R, class A>
struct FoldAlgebra {
  std::function<R(const A&)> var;
  std::function<R(const OperatorRef&, const Context&, std::vector<R>)> op;
  std::function<R(const HoleRef&, const Context&, std::vector<R>)> hole;
};

// Parameterised-initiality fold.  t lives over e.source, the result over e.target.
template <class R, class A>
R fold(const Term& t, const FoldAlgebra<R, A>& alg, const Env<A>& e, const PointedHooks<A>& hooks) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!alg.var) throw Error(ErrorKind::MissingAlgebraCase, "fold algebra has no variable case");
      return alg.var(e.entries.at(t.position()));
    case Term::Kind::Op: {
      if (!alg.op) throw Error(ErrorKind::MissingAlgebraCase, "fold algebra has no case for " + t.op().label);
      std::vector<R> kids;
      kids.reserve(t.children().size());
      for (std::size_t i = 0; i < t.children().size(); ++i)
        kids.push_back(fold(t.children()[i], alg, strength_route(t.op(), i, e, hooks), hooks));
      return alg.op(t.op_ref(), e.target, std::move(kids));
    }
    case Term::Kind::Meta: {
      if (!alg.hole) throw Error(ErrorKind::MissingAlgebraCase, "fold algebra has no hole case");
      std::vector<R> kids;
      kids.reserve(t.children().size());
      for (auto& c : t.children()) kids.push_back(fold(c, alg, e, hooks));
      return alg.hole(t.hole_ref(), e.target, std::move(kids));
    }
  }
  throw Error(ErrorKind::IllSorted, "corrupt term");
}

// Canonical text: label(c1,c2), #n, ?id{e1,e2}
std::string to_text(const Term& t);
Term parse_term_text(const std::string& text, const OperatorTable& table, const HoleSet& holes,
                     const Context& ctx);

}  // namespace scopekit
