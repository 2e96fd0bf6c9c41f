#include "scopekit/finpresheaf.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace scopekit {

std::vector<Context> enumerate_contexts(const std::vector<SortId>& sorts, int max_len) {
  std::vector<Context> out;
  std::vector<std::vector<SortId>> layer{{}};
  for (int len = 0; len <= max_len; ++len) {
    for (auto& c : layer) out.emplace_back(c);
    if (len == max_len) break;
    std::vector<std::vector<SortId>> next;
    for (auto& c : layer)
      for (auto& s : sorts) {
        auto d = c;
        d.push_back(s);
        next.push_back(std::move(d));
      }
    layer = std::move(next);
  }
  return out;
}

std::vector<Renaming> enumerate_renamings(const Context& g1, const Context& g2) {
  std::vector<std::vector<std::size_t>> choices(g2.size());
  for (std::size_t y = 0; y < g2.size(); ++y) choices[y] = vars_of_sort(g1, g2[y]);
  std::vector<Renaming> out;
  std::vector<std::size_t> idx(g2.size(), 0), m(g2.size());
  for (auto& c : choices)
    if (c.empty()) return out;
  for (;;) {
    for (std::size_t y = 0; y < g2.size(); ++y) m[y] = choices[y][idx[y]];
    out.emplace_back(g1, g2, m);
    std::size_t k = g2.size();
    while (k > 0) {
      --k;
      if (++idx[k] < choices[k].size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (g2.empty()) return out;
  }
}

ContextUniverse::ContextUniverse(std::vector<SortId> sorts, int bound) : sorts_(std::move(sorts)), bound_(bound) {
  if (bound < 0) throw Error(ErrorKind::InvalidInput, "negative context bound");
  contexts_ = enumerate_contexts(sorts_, bound_);
  for (std::size_t i = 0; i < contexts_.size(); ++i) ctx_index_[contexts_[i].entries()] = i;
  std::size_t n = contexts_.size();
  between_.assign(n, std::vector<std::vector<std::size_t>>(n));
  identity_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (auto& r : enumerate_renamings(contexts_[a], contexts_[b])) {
        std::size_t id = renamings_.size();
        rid_[{a, b, r.map()}] = id;
        between_[a][b].push_back(id);
        src_.push_back(a);
        tgt_.push_back(b);
        if (a == b && r == identity_renaming(contexts_[a])) identity_[a] = id;
        renamings_.push_back(std::move(r));
      }
}

std::size_t ContextUniverse::context_index(const Context& g) const {
  auto it = ctx_index_.find(g.entries());
  if (it == ctx_index_.end())
    throw Error(ErrorKind::BoundExceeded, "context " + to_string(g) + " is outside the enumeration (bound " +
                                              std::to_string(bound_) + ")");
  return it->second;
}

std::size_t ContextUniverse::find(std::size_t s, std::size_t t, const std::vector<std::size_t>& map) const {
  auto it = rid_.find({s, t, map});
  if (it == rid_.end()) throw Error(ErrorKind::IllSorted, "no such renaming");
  return it->second;
}

// ---------------------------------------------------------------------------

FinStructure::FinStructure(UniverseRef u, std::vector<Sort> sorts) : u_(std::move(u)), sorts_(std::move(sorts)) {
  std::set<Sort> seen;
  for (auto& s : sorts_) {
    if (!seen.insert(s).second) throw Error(ErrorKind::InvalidInput, "duplicate sort " + to_string(s));
    if (s.is_first() && std::find(u_->sorts().begin(), u_->sorts().end(), s.id) == u_->sorts().end())
      throw Error(ErrorKind::IllSorted, "first-class sort " + s.id + " is not in the universe");
  }
  labels_.assign(sorts_.size(), std::vector<std::vector<std::string>>(u_->contexts().size()));
  act_.assign(u_->renamings().size(), std::vector<std::vector<std::size_t>>(sorts_.size()));
}

std::size_t FinStructure::sort_index(const Sort& s) const {
  for (std::size_t i = 0; i < sorts_.size(); ++i)
    if (sorts_[i] == s) return i;
  throw Error(ErrorKind::IllSorted, "structure has no sort " + to_string(s));
}

bool FinStructure::has_sort(const Sort& s) const {
  return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
}

std::size_t FinStructure::total_size() const {
  std::size_t n = 0;
  for (auto& per_sort : labels_)
    for (auto& cell : per_sort) n += cell.size();
  return n;
}

std::optional<std::size_t> FinStructure::find_label(std::size_t s, std::size_t c, const std::string& l) const {
  auto& cell = labels_[s][c];
  for (std::size_t i = 0; i < cell.size(); ++i)
    if (cell[i] == l) return i;
  return std::nullopt;
}

std::size_t FinStructure::add_element(std::size_t s, std::size_t c, std::string label) {
  labels_[s][c].push_back(std::move(label));
  for (std::size_t rid = 0; rid < u_->renamings().size(); ++rid)
    if (u_->tgt(rid) == c) act_[rid][s].push_back(kUnset);
  return labels_[s][c].size() - 1;
}

void FinStructure::set_action(std::size_t rid, std::size_t s, std::size_t e, std::size_t image) {
  if (image >= size(s, u_->src(rid)))
    throw Error(ErrorKind::InvalidInput, "action image out of range");
  act_[rid][s].at(e) = image;
}

std::optional<std::string> FinStructure::check_functor_laws() const {
  const auto& u = *u_;
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid)
    for (std::size_t s = 0; s < sorts_.size(); ++s)
      for (std::size_t e = 0; e < act_[rid][s].size(); ++e)
        if (act_[rid][s][e] == kUnset)
          return "action of " + to_string(u.renamings()[rid]) + " undefined on " + labels_[s][u.tgt(rid)][e];
  for (std::size_t c = 0; c < u.contexts().size(); ++c) {
    std::size_t id = u.identity(c);
    for (std::size_t s = 0; s < sorts_.size(); ++s)
      for (std::size_t e = 0; e < size(s, c); ++e)
        if (act(id, s, e) != e) return "identity renaming moves " + labels_[s][c][e];
  }
  // rho : A -> B, rho2 : B -> C; action of (rho;rho2) = action(rho) after action(rho2)
  std::size_t n = u.contexts().size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t r1 : u.between(a, b))
        for (std::size_t c = 0; c < n; ++c)
          for (std::size_t r2 : u.between(b, c)) {
            auto comp = compose_renamings(u.renamings()[r1], u.renamings()[r2]);
            std::size_t r12 = u.find(a, c, comp.map());
            for (std::size_t s = 0; s < sorts_.size(); ++s)
              for (std::size_t e = 0; e < size(s, c); ++e)
                if (act(r12, s, e) != act(r1, s, act(r2, s, e)))
                  return "composition law fails on " + labels_[s][c][e] + " for " + to_string(u.renamings()[r1]) +
                         " ; " + to_string(u.renamings()[r2]);
          }
  return std::nullopt;
}

void FinStructure::validate() const {
  if (auto w = check_functor_laws()) throw Error(ErrorKind::InvalidInput, *w);
}

// ---------------------------------------------------------------------------

FinMorphism identity_morphism(const FinStructure& x) {
  FinMorphism f;
  std::size_t n = x.universe()->contexts().size();
  f.map.assign(x.sorts().size(), std::vector<std::vector<std::size_t>>(n));
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t c = 0; c < n; ++c) {
      f.map[s][c].resize(x.size(s, c));
      std::iota(f.map[s][c].begin(), f.map[s][c].end(), 0);
    }
  return f;
}

FinMorphism compose(const FinMorphism& g, const FinMorphism& f) {
  FinMorphism h = f;
  for (std::size_t s = 0; s < h.map.size(); ++s)
    for (std::size_t c = 0; c < h.map[s].size(); ++c)
      for (auto& v : h.map[s][c]) v = v == kUnset ? kUnset : g.map[s][c][v];
  return h;
}

bool equal(const FinMorphism& f, const FinMorphism& g) { return f.map == g.map; }

std::optional<std::string> naturality_witness(const FinMorphism& f, const FinStructure& x, const FinStructure& y) {
  const auto& u = *x.universe();
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
    std::size_t a = u.src(rid), b = u.tgt(rid);
    for (std::size_t s = 0; s < x.sorts().size(); ++s)
      for (std::size_t e = 0; e < x.size(s, b); ++e) {
        std::size_t lhs = f(s, a, x.act(rid, s, e));
        std::size_t rhs = y.act(rid, s, f(s, b, e));
        if (lhs != rhs)
          return "naturality fails at " + x.label(s, b, e) + " along " + to_string(u.renamings()[rid]) + ": " +
                 y.label(s, a, lhs) + " vs " + y.label(s, a, rhs);
      }
  }
  return std::nullopt;
}

std::optional<std::string> difference_witness(const FinMorphism& f, const FinMorphism& g, const FinStructure& x) {
  for (std::size_t s = 0; s < f.map.size(); ++s)
    for (std::size_t c = 0; c < f.map[s].size(); ++c)
      for (std::size_t e = 0; e < f.map[s][c].size(); ++e)
        if (f.map[s][c][e] != g.map[s][c][e])
          return "maps differ on " + x.label(s, c, e) + " over " + to_string(x.universe()->contexts()[c]);
  return std::nullopt;
}

bool is_bijection(const FinMorphism& f, const FinStructure& x, const FinStructure& y) {
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t c = 0; c < x.universe()->contexts().size(); ++c) {
      if (x.size(s, c) != y.size(s, c)) return false;
      std::vector<bool> hit(y.size(s, c), false);
      for (std::size_t e = 0; e < x.size(s, c); ++e) {
        std::size_t v = f(s, c, e);
        if (v == kUnset || hit[v]) return false;
        hit[v] = true;
      }
    }
  return true;
}

std::optional<FinMorphism> inverse(const FinMorphism& f, const FinStructure& x, const FinStructure& y) {
  if (!is_bijection(f, x, y)) return std::nullopt;
  FinMorphism g = identity_morphism(y);
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t c = 0; c < x.universe()->contexts().size(); ++c)
      for (std::size_t e = 0; e < x.size(s, c); ++e) g.map[s][c][f(s, c, e)] = e;
  return g;
}

// ---------------------------------------------------------------------------

FinStructure variables(const UniverseRef& u) {
  std::vector<Sort> sorts;
  for (auto& b : u->sorts()) sorts.push_back(Sort::first(b));
  FinStructure nu(u, sorts);
  for (std::size_t s = 0; s < sorts.size(); ++s)
    for (std::size_t c = 0; c < u->contexts().size(); ++c)
      for (std::size_t x : vars_of_sort(u->contexts()[c], sorts[s].id)) nu.add_element(s, c, "#" + std::to_string(x));
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid) {
    const Renaming& r = u->renamings()[rid];
    for (std::size_t s = 0; s < sorts.size(); ++s) {
      auto tv = vars_of_sort(r.target(), sorts[s].id);
      auto sv = vars_of_sort(r.source(), sorts[s].id);
      for (std::size_t e = 0; e < tv.size(); ++e) {
        std::size_t pos = r(tv[e]);
        nu.set_action(rid, s, e, std::find(sv.begin(), sv.end(), pos) - sv.begin());
      }
    }
  }
  return nu;
}

FinStructure terminal(const UniverseRef& u, const std::vector<Sort>& sorts) {
  FinStructure t(u, sorts);
  for (std::size_t s = 0; s < sorts.size(); ++s)
    for (std::size_t c = 0; c < u->contexts().size(); ++c) t.add_element(s, c, "*");
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid)
    for (std::size_t s = 0; s < sorts.size(); ++s) t.set_action(rid, s, 0, 0);
  return t;
}

FinStructure empty_structure(const UniverseRef& u, const std::vector<Sort>& sorts) { return FinStructure(u, sorts); }

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> q_sorts_for(const FinStructure& q, const Context& g) {
  std::vector<std::size_t> out(g.size());
  for (std::size_t y = 0; y < g.size(); ++y) out[y] = q.sort_index(Sort::first(g[y]));
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<std::size_t> key_of(const Triple& t) {
  std::vector<std::size_t> k{t.ctx, t.elem};
  k.insert(k.end(), t.env.begin(), t.env.end());
  return k;
}

}  // namespace

std::vector<std::vector<std::size_t>> all_envs(const FinStructure& q, std::size_t gprime, std::size_t g) {
  const Context& gp = q.universe()->contexts()[gprime];
  auto qs = q_sorts_for(q, gp);
  std::vector<std::vector<std::size_t>> out{{}};
  for (std::size_t y = 0; y < gp.size(); ++y) {
    std::vector<std::vector<std::size_t>> next;
    for (auto& partial : out)
      for (std::size_t v = 0; v < q.size(qs[y], g); ++v) {
        auto e = partial;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    out = std::move(next);
  }
  return out;
}

std::size_t Tensor::raw_index(std::size_t s, std::size_t c, const Triple& t) const {
  auto it = index_[s][c].find(key_of(t));
  if (it == index_[s][c].end()) throw Error(ErrorKind::InvalidInput, "triple is not in the tensor");
  return it->second;
}

std::size_t Tensor::class_of(std::size_t s, std::size_t c, const Triple& t) const {
  return class_[s][c][raw_index(s, c, t)];
}

const Triple& Tensor::representative(std::size_t s, std::size_t c, std::size_t k) const {
  return triples_[s][c][rep_[s][c][k]];
}

std::vector<std::size_t> Tensor::members(std::size_t s, std::size_t c, std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < class_[s][c].size(); ++i)
    if (class_[s][c][i] == k) out.push_back(i);
  return out;
}

Tensor tensor(const FinStructure& p, const FinStructure& q) {
  if (p.universe()->bound() != q.universe()->bound() || p.universe()->sorts() != q.universe()->sorts())
    throw Error(ErrorKind::BoundExceeded, "tensor factors are enumerated over different context universes");
  const auto& u = *p.universe();
  for (auto& b : u.sorts())
    if (!q.has_sort(Sort::first(b)))
      throw Error(ErrorKind::IllSorted, "right tensor factor lacks first-class sort " + b);
  std::size_t nctx = u.contexts().size(), nsorts = p.sorts().size();
  Tensor t;
  t.result_ = FinStructure(p.universe(), p.sorts());
  t.triples_.assign(nsorts, std::vector<std::vector<Triple>>(nctx));
  t.class_.assign(nsorts, std::vector<std::vector<std::size_t>>(nctx));
  t.rep_.assign(nsorts, std::vector<std::vector<std::size_t>>(nctx));
  t.index_.assign(nsorts, std::vector<std::map<std::vector<std::size_t>, std::size_t>>(nctx));

  // env tables per (G', G)
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> envs(nctx, std::vector<std::vector<std::vector<std::size_t>>>(nctx));
  for (std::size_t gp = 0; gp < nctx; ++gp)
    for (std::size_t g = 0; g < nctx; ++g) envs[gp][g] = all_envs(q, gp, g);

  for (std::size_t s = 0; s < nsorts; ++s)
    for (std::size_t g = 0; g < nctx; ++g) {
      auto& tr = t.triples_[s][g];
      for (std::size_t gp = 0; gp < nctx; ++gp)
        for (std::size_t e = 0; e < p.size(s, gp); ++e)
          for (auto& env : envs[gp][g]) {
            t.index_[s][g][key_of(Triple{gp, e, env})] = tr.size();
            tr.push_back(Triple{gp, e, env});
          }
      UnionFind uf(tr.size());
      // (G'1, x[rho], env) ~ (G'2, x, env o rho) for rho : G'1 -> G'2
      for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
        std::size_t g1 = u.src(rid), g2 = u.tgt(rid);
        const Renaming& rho = u.renamings()[rid];
        for (std::size_t x = 0; x < p.size(s, g2); ++x)
          for (auto& env : envs[g1][g]) {
            std::vector<std::size_t> pulled(rho.target().size());
            for (std::size_t y = 0; y < pulled.size(); ++y) pulled[y] = env[rho(y)];
            std::size_t a = t.index_[s][g].at(key_of(Triple{g1, p.act(rid, s, x), env}));
            std::size_t b = t.index_[s][g].at(key_of(Triple{g2, x, pulled}));
            uf.unite(a, b);
            ++t.generators_;
          }
      }
      std::map<std::size_t, std::size_t> root_class;
      t.class_[s][g].resize(tr.size());
      for (std::size_t i = 0; i < tr.size(); ++i) {
        std::size_t r = uf.find(i);
        auto it = root_class.find(r);
        if (it == root_class.end()) {
          it = root_class.emplace(r, t.rep_[s][g].size()).first;
          t.rep_[s][g].push_back(i);
          const Triple& rep = tr[i];
          std::string label = p.label(s, rep.ctx, rep.elem) + "|";
          auto qs = q_sorts_for(q, u.contexts()[rep.ctx]);
          for (std::size_t y = 0; y < rep.env.size(); ++y) label += (y ? "," : "") + q.label(qs[y], g, rep.env[y]);
          label += "@" + to_string(u.contexts()[rep.ctx]);
          t.result_.add_element(s, g, label);
        }
        t.class_[s][g][i] = it->second;
      }
    }

  // action on classes, checked on every member
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
    std::size_t a = u.src(rid), b = u.tgt(rid);
    for (std::size_t s = 0; s < nsorts; ++s) {
      std::vector<std::size_t> image(t.rep_[s][b].size(), kUnset);
      for (std::size_t i = 0; i < t.triples_[s][b].size(); ++i) {
        const Triple& tr = t.triples_[s][b][i];
        auto qs = q_sorts_for(q, u.contexts()[tr.ctx]);
        Triple moved{tr.ctx, tr.elem, tr.env};
        for (std::size_t y = 0; y < moved.env.size(); ++y) moved.env[y] = q.act(rid, qs[y], tr.env[y]);
        std::size_t k = t.class_[s][b][i];
        std::size_t img = t.class_of(s, a, moved);
        if (image[k] == kUnset)
          image[k] = img;
        else if (image[k] != img && !t.action_defect_)
          t.action_defect_ = "renaming action not well defined on class " + t.result_.label(s, b, k);
      }
      for (std::size_t k = 0; k < image.size(); ++k) t.result_.set_action(rid, s, k, image[k]);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t nu_position(const UniverseRef& u, std::size_t c, const SortId& b, std::size_t e) {
  return vars_of_sort(u->contexts()[c], b).at(e);
}

std::size_t nu_element(const UniverseRef& u, std::size_t c, std::size_t pos) {
  const Context& g = u->contexts()[c];
  auto vs = vars_of_sort(g, g[pos]);
  return std::find(vs.begin(), vs.end(), pos) - vs.begin();
}

FinMorphism blank_morphism(const FinStructure& x) {
  FinMorphism f;
  f.map.assign(x.sorts().size(), std::vector<std::vector<std::size_t>>(x.universe()->contexts().size()));
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t c = 0; c < x.universe()->contexts().size(); ++c) f.map[s][c].assign(x.size(s, c), kUnset);
  return f;
}

// run fn on every raw triple; fn returns the image of that triple
template <class F>
Mediator on_classes(const Tensor& t, F fn) {
  Mediator m{blank_morphism(t.structure()), std::nullopt};
  const auto& x = t.structure();
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t c = 0; c < x.universe()->contexts().size(); ++c)
      for (std::size_t i = 0; i < t.triples(s, c).size(); ++i) {
        std::size_t k = t.class_of_index(s, c, i);
        std::size_t v = fn(s, c, t.triples(s, c)[i]);
        auto& slot = m.map.map[s][c][k];
        if (slot == kUnset)
          slot = v;
        else if (slot != v && !m.defect)
          m.defect = "not well defined on class " + x.label(s, c, k);
      }
  return m;
}

}  // namespace

Mediator left_unitor(const Tensor& nu_p, const FinStructure& p) {
  const auto& u = nu_p.structure().universe();
  return on_classes(nu_p, [&](std::size_t s, std::size_t, const Triple& tr) {
    std::size_t y = nu_position(u, tr.ctx, nu_p.structure().sorts()[s].id, tr.elem);
    (void)p;
    return tr.env[y];
  });
}

Mediator right_unitor(const Tensor& p_nu, const FinStructure& p) {
  const auto& u = p_nu.structure().universe();
  return on_classes(p_nu, [&](std::size_t s, std::size_t c, const Triple& tr) {
    const Context& gp = u->contexts()[tr.ctx];
    std::vector<std::size_t> m(gp.size());
    for (std::size_t y = 0; y < gp.size(); ++y) m[y] = nu_position(u, c, gp[y], tr.env[y]);
    std::size_t rid = u->find(c, tr.ctx, m);
    return p.act(rid, s, tr.elem);
  });
}

Mediator right_unitor_inverse(const FinStructure& p, const Tensor& p_nu) {
  Mediator m{blank_morphism(p), std::nullopt};
  const auto& u = p.universe();
  for (std::size_t s = 0; s < p.sorts().size(); ++s)
    for (std::size_t c = 0; c < u->contexts().size(); ++c) {
      std::vector<std::size_t> env(u->contexts()[c].size());
      for (std::size_t y = 0; y < env.size(); ++y) env[y] = nu_element(u, c, y);
      for (std::size_t e = 0; e < p.size(s, c); ++e) m.map.map[s][c][e] = p_nu.class_of(s, c, Triple{c, e, env});
    }
  return m;
}

Mediator associator(const Tensor& pq_l, const Tensor& pq, const Tensor& ql, const Tensor& p_ql) {
  const auto& u = pq_l.structure().universe();
  const FinStructure& qlx = ql.structure();
  Mediator m{blank_morphism(pq_l.structure()), std::nullopt};
  const auto& x = pq_l.structure();
  for (std::size_t s = 0; s < x.sorts().size(); ++s)
    for (std::size_t g = 0; g < u->contexts().size(); ++g)
      for (std::size_t i = 0; i < pq_l.triples(s, g).size(); ++i) {
        const Triple& outer = pq_l.triples(s, g)[i];
        std::size_t k = pq_l.class_of_index(s, g, i);
        std::size_t g2 = outer.ctx;
        for (std::size_t mi : pq.members(s, g2, outer.elem)) {
          const Triple& inner = pq.triples(s, g2)[mi];
          const Context& g1 = u->contexts()[inner.ctx];
          Triple res{inner.ctx, inner.elem, std::vector<std::size_t>(g1.size())};
          for (std::size_t y = 0; y < g1.size(); ++y)
            res.env[y] = ql.class_of(qlx.sort_index(Sort::first(g1[y])), g, Triple{g2, inner.env[y], outer.env});
          std::size_t v = p_ql.class_of(s, g, res);
          auto& slot = m.map.map[s][g][k];
          if (slot == kUnset)
            slot = v;
          else if (slot != v && !m.defect)
            m.defect = "associator not well defined on class " + x.label(s, g, k);
        }
      }
  return m;
}

Mediator tensor_map(const FinMorphism& f, const FinMorphism& g, const Tensor& pq, const Tensor& pq2) {
  const auto& u = pq.structure().universe();
  return on_classes(pq, [&](std::size_t s, std::size_t c, const Triple& tr) {
    const Context& gp = u->contexts()[tr.ctx];
    Triple res{tr.ctx, f(s, tr.ctx, tr.elem), tr.env};
    for (std::size_t y = 0; y < gp.size(); ++y) {
      // g is indexed by the sorts of Q, which list every first-class sort in universe order
      std::size_t qs = std::find(u->sorts().begin(), u->sorts().end(), gp[y]) - u->sorts().begin();
      res.env[y] = g(qs, c, tr.env[y]);
    }
    return pq2.class_of(s, c, res);
  });
}

// ---------------------------------------------------------------------------

std::vector<FinMorphism> natural_maps(const FinStructure& x, const FinStructure& y, std::size_t limit) {
  const auto& u = *x.universe();
  std::size_t nctx = u.contexts().size();
  struct Var {
    std::size_t s, c, e;
  };
  std::vector<Var> vars;
  std::vector<std::vector<std::vector<std::size_t>>> vid(x.sorts().size(), std::vector<std::vector<std::size_t>>(nctx));
  for (std::size_t c = 0; c < nctx; ++c)
    for (std::size_t s = 0; s < x.sorts().size(); ++s)
      for (std::size_t e = 0; e < x.size(s, c); ++e) {
        vid[s][c].push_back(vars.size());
        vars.push_back({s, c, e});
      }
  // constraint: f(a) = act_y(rid, f(b))
  struct Edge {
    std::size_t rid, other;
  };
  std::vector<std::vector<Edge>> out_edges(vars.size()), in_edges(vars.size());
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
    std::size_t a = u.src(rid), b = u.tgt(rid);
    for (std::size_t s = 0; s < x.sorts().size(); ++s)
      for (std::size_t e = 0; e < x.size(s, b); ++e) {
        std::size_t vb = vid[s][b][e], va = vid[s][a][x.act(rid, s, e)];
        out_edges[vb].push_back({rid, va});
        in_edges[va].push_back({rid, vb});
      }
  }
  std::vector<std::size_t> val(vars.size(), kUnset);
  std::vector<std::size_t> trail;
  std::vector<FinMorphism> results;

  auto assign = [&](std::size_t v0, std::size_t value) {
    std::vector<std::pair<std::size_t, std::size_t>> queue{{v0, value}};
    while (!queue.empty()) {
      auto [v, w] = queue.back();
      queue.pop_back();
      if (val[v] != kUnset) {
        if (val[v] != w) return false;
        continue;
      }
      if (w >= y.size(vars[v].s, vars[v].c)) return false;
      val[v] = w;
      trail.push_back(v);
      for (auto& ed : out_edges[v]) queue.push_back({ed.other, y.act(ed.rid, vars[v].s, w)});
      for (auto& ed : in_edges[v])
        if (val[ed.other] != kUnset && y.act(ed.rid, vars[v].s, val[ed.other]) != w) return false;
    }
    return true;
  };

  std::function<void(std::size_t)> solve = [&](std::size_t i) {
    if (results.size() >= limit) return;
    while (i < vars.size() && val[i] != kUnset) ++i;
    if (i == vars.size()) {
      FinMorphism f;
      f.map.assign(x.sorts().size(), std::vector<std::vector<std::size_t>>(nctx));
      for (std::size_t s = 0; s < x.sorts().size(); ++s)
        for (std::size_t c = 0; c < nctx; ++c)
          for (std::size_t e = 0; e < x.size(s, c); ++e) f.map[s][c].push_back(val[vid[s][c][e]]);
      results.push_back(std::move(f));
      return;
    }
    for (std::size_t w = 0; w < y.size(vars[i].s, vars[i].c); ++w) {
      std::size_t mark = trail.size();
      if (assign(i, w)) solve(i + 1);
      while (trail.size() > mark) {
        val[trail.back()] = kUnset;
        trail.pop_back();
      }
      if (results.size() >= limit) return;
    }
  };
  solve(0);
  return results;
}

namespace {

FinStructure restrict_sort(const FinStructure& p, std::size_t s) {
  const auto& u = p.universe();
  FinStructure r(u, {p.sorts()[s]});
  for (std::size_t c = 0; c < u->contexts().size(); ++c)
    for (std::size_t e = 0; e < p.size(s, c); ++e) r.add_element(0, c, p.label(s, c, e));
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid)
    for (std::size_t e = 0; e < p.size(s, u->tgt(rid)); ++e) r.set_action(rid, 0, e, p.act(rid, s, e));
  return r;
}

std::size_t env_rank(const FinStructure& q, std::size_t gprime, std::size_t g, const std::vector<std::size_t>& env) {
  const Context& gp = q.universe()->contexts()[gprime];
  std::size_t r = 0;
  for (std::size_t y = 0; y < gp.size(); ++y) r = r * q.size(q.sort_index(Sort::first(gp[y])), g) + env[y];
  return r;
}

// the presheaf G2 |-> Env Q G G2 at a single sort tag
FinStructure env_structure(const FinStructure& q, std::size_t g, const Sort& tag) {
  const auto& u = q.universe();
  FinStructure x(u, {tag});
  std::vector<std::vector<std::vector<std::size_t>>> envs(u->contexts().size());
  for (std::size_t c = 0; c < u->contexts().size(); ++c) {
    envs[c] = all_envs(q, g, c);
    for (std::size_t i = 0; i < envs[c].size(); ++i) x.add_element(0, c, "env" + std::to_string(i));
  }
  auto qs = q_sorts_for(q, u->contexts()[g]);
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid) {
    std::size_t a = u->src(rid), b = u->tgt(rid);
    for (std::size_t i = 0; i < envs[b].size(); ++i) {
      std::vector<std::size_t> moved = envs[b][i];
      for (std::size_t y = 0; y < moved.size(); ++y) moved[y] = q.act(rid, qs[y], moved[y]);
      x.set_action(rid, 0, i, env_rank(q, g, a, moved));
    }
  }
  return x;
}

std::string table_label(const std::vector<std::vector<std::size_t>>& per_ctx) {
  std::string l = "fn";
  for (auto& row : per_ctx) {
    l += "|";
    for (std::size_t i = 0; i < row.size(); ++i) l += (i ? "," : "") + std::to_string(row[i]);
  }
  return l;
}

}  // namespace

Exponential exponential(const FinStructure& p, const FinStructure& q, std::size_t limit) {
  const auto& u = p.universe();
  std::size_t nctx = u->contexts().size();
  Exponential ex;
  ex.structure = FinStructure(u, p.sorts());
  ex.tables.assign(p.sorts().size(), std::vector<std::vector<std::vector<std::vector<std::size_t>>>>(nctx));
  std::vector<std::vector<std::map<std::vector<std::vector<std::size_t>>, std::size_t>>> lookup(
      p.sorts().size(), std::vector<std::map<std::vector<std::vector<std::size_t>>, std::size_t>>(nctx));
  for (std::size_t s = 0; s < p.sorts().size(); ++s) {
    FinStructure ps = restrict_sort(p, s);
    for (std::size_t g = 0; g < nctx; ++g) {
      FinStructure envs = env_structure(q, g, p.sorts()[s]);
      auto maps = natural_maps(envs, ps, limit);
      if (maps.size() >= limit)
        throw Error(ErrorKind::BoundExceeded, "exponential cell exceeds " + std::to_string(limit) + " elements");
      for (auto& f : maps) {
        auto& tab = f.map[0];
        lookup[s][g][tab] = ex.tables[s][g].size();
        ex.structure.add_element(s, g, table_label(tab));
        ex.tables[s][g].push_back(tab);
      }
    }
  }
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid) {
    std::size_t a = u->src(rid), g = u->tgt(rid);
    const Renaming& rho = u->renamings()[rid];
    for (std::size_t s = 0; s < p.sorts().size(); ++s)
      for (std::size_t k = 0; k < ex.tables[s][g].size(); ++k) {
        std::vector<std::vector<std::size_t>> psi(nctx);
        for (std::size_t g2 = 0; g2 < nctx; ++g2) {
          auto envs_a = all_envs(q, a, g2);
          for (auto& e : envs_a) {
            std::vector<std::size_t> pulled(rho.target().size());
            for (std::size_t y = 0; y < pulled.size(); ++y) pulled[y] = e[rho(y)];
            psi[g2].push_back(ex.tables[s][g][k][g2][env_rank(q, g, g2, pulled)]);
          }
        }
        auto it = lookup[s][a].find(psi);
        if (it == lookup[s][a].end()) throw Error(ErrorKind::InvalidInput, "exponential action leaves the end");
        ex.structure.set_action(rid, s, k, it->second);
      }
  }
  return ex;
}

Mediator exp_eval(const Exponential& e, const Tensor& e_q, const FinStructure& p, const FinStructure& q) {
  (void)p;
  return on_classes(e_q, [&](std::size_t s, std::size_t g, const Triple& tr) {
    return e.tables[s][tr.ctx][tr.elem][g][env_rank(q, tr.ctx, g, tr.env)];
  });
}

Mediator exp_curry(const FinMorphism& f, const Tensor& r_q, const FinStructure& r, const Exponential& e,
                   const FinStructure& q) {
  const auto& u = r.universe();
  std::size_t nctx = u->contexts().size();
  Mediator m{blank_morphism(r), std::nullopt};
  for (std::size_t s = 0; s < r.sorts().size(); ++s)
    for (std::size_t g = 0; g < nctx; ++g)
      for (std::size_t x = 0; x < r.size(s, g); ++x) {
        std::vector<std::vector<std::size_t>> tab(nctx);
        for (std::size_t g2 = 0; g2 < nctx; ++g2)
          for (auto& env : all_envs(q, g, g2)) tab[g2].push_back(f(s, g2, r_q.class_of(s, g2, Triple{g, x, env})));
        auto it = std::find(e.tables[s][g].begin(), e.tables[s][g].end(), tab);
        if (it == e.tables[s][g].end()) {
          if (!m.defect) m.defect = "curried family of " + r.label(s, g, x) + " is not in the end";
          continue;
        }
        m.map.map[s][g][x] = it - e.tables[s][g].begin();
      }
  return m;
}

// ---------------------------------------------------------------------------

FinStructure random_structure(const UniverseRef& u, const std::vector<Sort>& sorts, std::mt19937_64& rng,
                              RandomShape shape) {
  if (u->sorts().size() != 1) throw Error(ErrorKind::InvalidInput, "random structures use one first-class sort");
  const SortId& b = u->sorts()[0];
  FinStructure p(u, sorts);
  std::size_t nctx = u->contexts().size();
  struct Kind {
    int constants;
    bool gen;
    bool collapsed;
  };
  std::vector<Kind> kinds;
  int max_len = u->bound();
  for (std::size_t s = 0; s < sorts.size(); ++s) {
    Kind k{};
    k.gen = shape.force_generator || (shape.allow_generator && rng() % 3 != 0);
    k.collapsed = k.gen && rng() % 3 == 0;
    int used = k.gen ? (k.collapsed ? 1 : max_len) : 0;
    int room = std::max(0, std::min(shape.max_constants, 3 - used));
    k.constants = static_cast<int>(rng() % (room + 1));
    kinds.push_back(k);
    // elements: constants k0..; generator u(x) (or u when collapsed)
    for (std::size_t c = 0; c < nctx; ++c) {
      for (int i = 0; i < k.constants; ++i) p.add_element(s, c, "k" + std::to_string(i));
      if (!k.gen) continue;
      auto vs = vars_of_sort(u->contexts()[c], b);
      if (vs.empty()) continue;
      if (k.collapsed)
        p.add_element(s, c, "u");
      else
        for (std::size_t x : vs) p.add_element(s, c, "u" + std::to_string(x));
    }
  }
  for (std::size_t rid = 0; rid < u->renamings().size(); ++rid) {
    const Renaming& rho = u->renamings()[rid];
    std::size_t a = u->src(rid), t = u->tgt(rid);
    for (std::size_t s = 0; s < sorts.size(); ++s) {
      const Kind& k = kinds[s];
      for (std::size_t e = 0; e < p.size(s, t); ++e) {
        if (static_cast<int>(e) < k.constants) {
          p.set_action(rid, s, e, e);
          continue;
        }
        if (k.collapsed) {
          p.set_action(rid, s, e, k.constants);
          continue;
        }
        auto vt = vars_of_sort(u->contexts()[t], b);
        auto va = vars_of_sort(u->contexts()[a], b);
        std::size_t pos = rho(vt[e - k.constants]);
        p.set_action(rid, s, e, k.constants + (std::find(va.begin(), va.end(), pos) - va.begin()));
      }
    }
  }
  return p;
}

FinMorphism generator_point(const FinStructure& a, const FinStructure& nu) {
  FinMorphism f = blank_morphism(nu);
  for (std::size_t s = 0; s < nu.sorts().size(); ++s) {
    std::size_t as = a.sort_index(nu.sorts()[s]);
    for (std::size_t c = 0; c < nu.universe()->contexts().size(); ++c)
      for (std::size_t e = 0; e < nu.size(s, c); ++e) {
        std::string pos = nu.label(s, c, e).substr(1);
        auto hit = a.find_label(as, c, "u" + pos);
        if (!hit) hit = a.find_label(as, c, "u");
        if (!hit) throw Error(ErrorKind::InvalidInput, "structure has no generator to serve as a point");
        f.map[s][c][e] = *hit;
      }
  }
  return f;
}

// ---------------------------------------------------------------------------

namespace {

Sort parse_sort(const std::string& s) {
  if (s.rfind("C ", 0) == 0) return Sort::second(s.substr(2));
  return Sort::first(s);
}

}  // namespace

FinStructure structure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    throw Error(ErrorKind::SyntaxError, std::string("structure file: ") + ex.what());
  }
  try {
    auto u = std::make_shared<ContextUniverse>(j.at("first_sorts").get<std::vector<SortId>>(), j.at("bound").get<int>());
    std::vector<Sort> sorts;
    for (auto& s : j.at("sorts")) sorts.push_back(parse_sort(s.get<std::string>()));
    FinStructure p(u, sorts);
    for (auto& cell : j.value("cells", nlohmann::json::array())) {
      std::size_t s = p.sort_index(parse_sort(cell.at("sort").get<std::string>()));
      std::size_t c = u->context_index(Context(cell.at("context").get<std::vector<SortId>>()));
      for (auto& l : cell.at("elements")) p.add_element(s, c, l.get<std::string>());
    }
    for (std::size_t c = 0; c < u->contexts().size(); ++c)
      for (std::size_t s = 0; s < sorts.size(); ++s)
        for (std::size_t e = 0; e < p.size(s, c); ++e) p.set_action(u->identity(c), s, e, e);
    for (auto& a : j.value("action", nlohmann::json::array())) {
      std::size_t src = u->context_index(Context(a.at("source").get<std::vector<SortId>>()));
      std::size_t tgt = u->context_index(Context(a.at("target").get<std::vector<SortId>>()));
      std::size_t rid = u->find(src, tgt, a.at("map").get<std::vector<std::size_t>>());
      std::size_t s = p.sort_index(parse_sort(a.at("sort").get<std::string>()));
      for (auto& [from, to] : a.at("images").items()) {
        auto e = p.find_label(s, tgt, from);
        auto v = p.find_label(s, src, to.get<std::string>());
        if (!e || !v) throw Error(ErrorKind::InvalidInput, "action mentions unknown element " + from);
        p.set_action(rid, s, *e, *v);
      }
    }
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::SyntaxError, std::string("structure file: ") + ex.what());
  }
}

std::string structure_to_json(const FinStructure& p) {
  const auto& u = *p.universe();
  nlohmann::json j;
  j["first_sorts"] = u.sorts();
  j["bound"] = u.bound();
  j["sorts"] = nlohmann::json::array();
  for (auto& s : p.sorts()) j["sorts"].push_back(to_string(s));
  j["cells"] = nlohmann::json::array();
  for (std::size_t s = 0; s < p.sorts().size(); ++s)
    for (std::size_t c = 0; c < u.contexts().size(); ++c) {
      if (!p.size(s, c)) continue;
      std::vector<std::string> ls;
      for (std::size_t e = 0; e < p.size(s, c); ++e) ls.push_back(p.label(s, c, e));
      j["cells"].push_back({{"sort", to_string(p.sorts()[s])}, {"context", u.contexts()[c].entries()}, {"elements", ls}});
    }
  j["action"] = nlohmann::json::array();
  for (std::size_t rid = 0; rid < u.renamings().size(); ++rid) {
    std::size_t a = u.src(rid), t = u.tgt(rid);
    if (rid == u.identity(a) && a == t) continue;
    for (std::size_t s = 0; s < p.sorts().size(); ++s) {
      if (!p.size(s, t)) continue;
      nlohmann::json images = nlohmann::json::object();
      for (std::size_t e = 0; e < p.size(s, t); ++e) images[p.label(s, t, e)] = p.label(s, a, p.act(rid, s, e));
      j["action"].push_back({{"source", u.contexts()[a].entries()},
                             {"target", u.contexts()[t].entries()},
                             {"map", u.renamings()[rid].map()},
                             {"sort", to_string(p.sorts()[s])},
                             {"images", images}});
    }
  }
  return j.dump(2);
}

}  // namespace scopekit
