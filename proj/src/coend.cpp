#include <deque>
#include <map>
#include <random>

#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/finpresheaf.hpp"
#include "scopekit/suites.hpp"

namespace scopekit {

namespace {

const char* kSuite = "coend";

// A truncated syntax presheaf: the orbits of some terms under every renaming
// of the universe, labelled by canonical text.
struct Syntax {
  FinStructure fs;
  std::vector<std::vector<std::vector<Term>>> terms;  // [sort][ctx][elem]

  std::size_t elem(const Term& t) const {
    std::size_t s = fs.sort_index(t.sort());
    std::size_t c = fs.universe()->context_index(t.context());
    auto e = fs.find_label(s, c, to_text(t));
    if (!e) throw Error(ErrorKind::InvalidInput, "term " + to_text(t) + " over " + to_string(t.context()) + " is not in the syntax structure");
    return *e;
  }
};

Syntax syntax_structure(const UniverseRef& u, const std::vector<Sort>& sorts, const std::vector<Term>& gens) {
  Syntax out{FinStructure(u, sorts), {}};
  std::size_t nctx = u->contexts().size();
  out.terms.assign(sorts.size(), std::vector<std::vector<Term>>(nctx));
  for (auto& t : gens) {
    std::size_t s = out.fs.sort_index(t.sort());
    std::size_t home = u->context_index(t.context());
    for (std::size_t c = 0; c < nctx; ++c)
      for (std::size_t rid : u->between(c, home)) {
        Term r = rename(t, u->renamings()[rid]);
        if (out.fs.find_label(s, c, to_text(r))) continue;
        out.fs.add_element(s, c, to_text(r));
        out.terms[s][c].push_back(r);
      }
  }
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid)
    for (std::size_t s = 0; s < sorts.size(); ++s) {
      std::size_t a = u->src(rid), b = u->tgt(rid);
      for (std::size_t e = 0; e < out.terms[s][b].size(); ++e) {
        Term r = rename(out.terms[s][b][e], u->renamings()[rid]);
        auto img = out.fs.find_label(s, a, to_text(r));
        if (!img) throw Error(ErrorKind::InvalidInput, "syntax structure is not closed under renaming");
        out.fs.set_action(rid, s, e, *img);
      }
    }
  out.fs.validate();
  return out;
}

std::vector<std::size_t> pulled_env(const std::vector<std::size_t>& env, const Renaming& rho) {
  std::vector<std::size_t> out(rho.target().size());
  for (std::size_t y = 0; y < out.size(); ++y) out[y] = env[rho(y)];
  return out;
}

// connected components of the generating relation, by breadth-first search
std::vector<std::size_t> closure_components(const Tensor& t, const Syntax& p, const Syntax& q, std::size_t c) {
  const auto& u = *p.fs.universe();
  std::size_t n = t.triples(0, c).size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
    std::size_t g1 = u.src(rid), g2 = u.tgt(rid);
    for (std::size_t x = 0; x < p.fs.size(0, g2); ++x)
      for (auto& env : all_envs(q.fs, g1, c)) {
        std::size_t a = t.raw_index(0, c, Triple{g1, p.fs.act(rid, 0, x), env});
        std::size_t b = t.raw_index(0, c, Triple{g2, x, pulled_env(env, u.renamings()[rid])});
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
  }
  std::vector<std::size_t> comp(n, kUnset);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (comp[i] != kUnset) continue;
    std::deque<std::size_t> queue{i};
    comp[i] = next;
    while (!queue.empty()) {
      std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w : adj[v])
        if (comp[w] == kUnset) {
          comp[w] = next;
          queue.push_back(w);
        }
    }
    ++next;
  }
  return comp;
}

}  // namespace

Report check_coend_identifications(std::uint64_t seed, int pairs) {
  Report rep;
  cbv::FragmentConfig frag = cbv::FragmentConfig{}.with(cbv::Extension::Functions);
  OperatorTable table = cbv::build_operator_table(frag);
  cbv::TypeRef b = cbv::Type::base("b");
  cbv::TypeRef f = cbv::Type::fun(b, b);
  auto u = std::make_shared<const ContextUniverse>(std::vector<SortId>{f->str(), b->str()}, 2);

  auto value = [&](const std::string& text, const std::vector<std::pair<std::string, cbv::TypeRef>>& ctx) {
    std::vector<std::string> names;
    std::vector<cbv::TypeRef> types;
    for (auto& [n, t] : ctx) {
      names.push_back(n);
      types.push_back(t);
    }
    return cbv::typecheck(cbv::parse_value(text, names), cbv::make_context(types), cbv::value_sort(f), frag, table);
  };
  auto var = [&](const cbv::TypeRef& t) { return Term::var(cbv::make_context({t}), 0); };

  // P: the terms of the example; Q: what their environments are built from
  Term fg = value("\\x : b. (val f) ((val g) (val x))", {{"f", f}, {"g", f}});
  Term hh = value("\\x : b. (val h) ((val h) (val x))", {{"h", f}});
  Term gf = value("\\x : b. (val g) ((val f) (val x))", {{"f", f}, {"g", f}});
  Term z2 = value("\\x : b. val z", {{"f", f}, {"z", b}});
  Term z1 = value("\\x : b. val z", {{"z", b}});
  Term ky = value("\\x : b. (val k) (val y)", {{"k", f}, {"y", b}});
  Term id = value("\\x : b. val x", {});
  Term id_y = value("\\x : b. val x", {{"y", b}});
  Term id_k = value("\\x : b. val x", {{"k", f}});

  Syntax p = syntax_structure(u, {cbv::value_sort(f)}, {fg, z1});
  Syntax q = syntax_structure(u, {cbv::value_sort(f), cbv::value_sort(b)}, {var(f), var(b), id, ky});
  Tensor t = tensor(p.fs, q.fs);
  rep.add(kSuite, "tensor action well defined", !t.action_defect(), 1, t.action_defect().value_or(""));

  auto ctx_of = [&](const std::vector<cbv::TypeRef>& ts) { return u->context_index(cbv::make_context(ts)); };
  auto show = [&](const Term& term, const std::vector<Term>& env, const std::vector<std::string>& names,
                  const std::vector<std::string>& outer) {
    std::string s = "[" + cbv::pretty(term, names) + ", <";
    for (std::size_t y = 0; y < env.size(); ++y) s += (y ? ", " : "") + names[y] + ": " + cbv::pretty(env[y], outer);
    return s + ">]";
  };
  struct Side {
    Term term;
    std::vector<Term> env;
    std::vector<std::string> names;
  };
  auto identify = [&](const std::string& axiom, const std::vector<cbv::TypeRef>& outer_types,
                      const std::vector<std::string>& outer, const Side& l, const Side& r) {
    std::size_t c = ctx_of(outer_types);
    auto triple = [&](const Side& s) {
      Triple tr{u->context_index(s.term.context()), p.elem(s.term), {}};
      for (auto& e : s.env) tr.env.push_back(q.elem(e));
      return tr;
    };
    std::size_t kl = t.class_of(0, c, triple(l)), kr = t.class_of(0, c, triple(r));
    std::string text = show(l.term, l.env, l.names, outer) + " = " + show(r.term, r.env, r.names, outer) + " over " +
                       cbv::context_text(outer, outer_types);
    rep.add(kSuite, axiom, kl == kr, 1, kl == kr ? text : "distinct classes: " + text);
  };
  identify("merging variables", {f, b}, {"k", "y"}, Side{fg, {ky, ky}, {"f", "g"}}, Side{hh, {ky}, {"h"}});
  identify("weakening by an unused variable", {b}, {"y"}, Side{z2, {id_y, var(b)}, {"f", "z"}},
           Side{z1, {var(b)}, {"z"}});
  identify("permuting variables", {f}, {"k"}, Side{fg, {id_k, var(f)}, {"f", "g"}},
           Side{gf, {var(f), id_k}, {"f", "g"}});

  // every class substitutes to a single term
  {
    bool ok = true;
    long long cases = 0;
    std::string w;
    for (std::size_t c = 0; c < u->contexts().size() && ok; ++c) {
      std::map<std::size_t, std::string> meaning;
      for (std::size_t i = 0; i < t.triples(0, c).size() && ok; ++i) {
        const Triple& tr = t.triples(0, c)[i];
        const Term& term = p.terms[0][tr.ctx][tr.elem];
        std::vector<Term> env;
        for (std::size_t y = 0; y < tr.env.size(); ++y)
          env.push_back(q.terms[q.fs.sort_index(Sort::first(term.context()[y]))][c][tr.env[y]]);
        std::string s = to_text(substitute(term, make_subst_env(term.context(), u->contexts()[c], env)));
        auto [it, fresh] = meaning.emplace(t.class_of_index(0, c, i), s);
        ++cases;
        if (!fresh && it->second != s) {
          ok = false;
          w = "one class substitutes to both " + it->second + " and " + s;
        }
      }
    }
    rep.add(kSuite, "classes respect substitution", ok, cases, w);
  }

  // closure by search agrees with the union-find partition
  std::vector<std::vector<std::size_t>> comps;
  {
    bool ok = true;
    std::string w;
    long long cases = 0;
    for (std::size_t c = 0; c < u->contexts().size(); ++c) {
      comps.push_back(closure_components(t, p, q, c));
      std::map<std::size_t, std::size_t> to_class, from_class;
      for (std::size_t i = 0; i < comps[c].size(); ++i) {
        ++cases;
        auto [a, fa] = to_class.emplace(comps[c][i], t.class_of_index(0, c, i));
        auto [b2, fb] = from_class.emplace(t.class_of_index(0, c, i), comps[c][i]);
        if (ok && (a->second != t.class_of_index(0, c, i) || b2->second != comps[c][i])) {
          ok = false;
          w = "partitions differ over " + to_string(u->contexts()[c]);
        }
      }
    }
    rep.add(kSuite, "closure agrees with union-find", ok, cases, w);
  }

  // random generator pairs
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  CheckRecord rec{kSuite, "random generator pairs symmetric under the closure", true, 0, {}};
  long long draws = 0;
  while (rec.cases < pairs && draws < 100LL * pairs) {
    ++draws;
    std::size_t c = pick(u->contexts().size());
    std::size_t rid = pick(u->renamings().size());
    std::size_t g1 = u->src(rid), g2 = u->tgt(rid);
    if (p.fs.size(0, g2) == 0) continue;
    auto envs = all_envs(q.fs, g1, c);
    if (envs.empty()) continue;
    std::size_t x = pick(p.fs.size(0, g2));
    const auto& env = envs[pick(envs.size())];
    Triple ta{g1, p.fs.act(rid, 0, x), env};
    Triple tb{g2, x, pulled_env(env, u->renamings()[rid])};
    std::size_t a = t.raw_index(0, c, ta), b2 = t.raw_index(0, c, tb);
    if (a == b2) continue;
    ++rec.cases;
    bool ok = t.class_of_index(0, c, a) == t.class_of_index(0, c, b2) &&
              t.class_of_index(0, c, b2) == t.class_of_index(0, c, a) && comps[c][a] == comps[c][b2];
    if (!ok && rec.pass) {
      rec.pass = false;
      rec.witness = p.fs.label(0, g1, ta.elem) + " against " + p.fs.label(0, g2, x) + " over " +
                    to_string(u->contexts()[c]);
    }
  }
  if (rec.cases < pairs && rec.pass) {
    rec.pass = false;
    rec.witness = "only " + std::to_string(rec.cases) + " non-trivial pairs drawn";
  }
  rep.add(rec);
  rep.add(kSuite, "quotient size", true, static_cast<long long>(t.generator_pairs()),
          std::to_string(t.structure().total_size()) + " classes from " + std::to_string(t.generator_pairs()) +
              " generating pairs");
  return rep;
}

}  // namespace scopekit
