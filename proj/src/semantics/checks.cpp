#include "scopekit/semantics/checks.hpp"

#include <algorithm>
#include <random>

#include "scopekit/cbv/surface.hpp"
#include "scopekit/error.hpp"

namespace scopekit::sem {

using cbv::TypeRef;

namespace {

std::string pair_text(const Term& m, const SubstEnv& sigma) {
  auto src = cbv::default_names(sigma.source.size());
  auto tgt = cbv::default_names(sigma.target.size());
  std::string s = cbv::context_text(src, cbv::context_types(sigma.source)) + " |- " + cbv::pretty(m, src) + "  with  " +
                  cbv::context_text(tgt, cbv::context_types(sigma.target)) + " |- ";
  for (std::size_t y = 0; y < sigma.entries.size(); ++y)
    s += (y ? ", " : "") + src[y] + " := " + cbv::pretty(sigma.entries[y], tgt);
  return s;
}

// Kleene iteration costs about the square of a letrec's domain, so generated
// checks skip programs whose recursive functions have large domains.
constexpr std::uint64_t kLetrecDomainLimit = 64;

bool affordable(const Term& t, const Model& m) {
  if (t.kind() != Term::Kind::Op) return true;
  cbv::OpInfo info = cbv::decode_label(t.op().label);
  if (info.kind == cbv::OpKind::LetRec) {
    std::uint64_t dom = 0;
    for (auto& f : info.ts) dom = sat_add(dom, m.carrier(f->dom())->size());
    if (dom > kLetrecDomainLimit) return false;
  }
  for (auto& k : t.children())
    if (!affordable(k, m)) return false;
  return true;
}

bool affordable(const Term& t, const SubstEnv& sigma, const Model& m) {
  if (!affordable(t, m)) return false;
  for (auto& e : sigma.entries)
    if (!affordable(e, m)) return false;
  return true;
}

// a table as a denotation
Denotation from_table(const Model& m, const Context& ctx, const Sort& sort, SemVal table) {
  CarrierRef pts = m.context_carrier(ctx);
  return Denotation{sort, ctx, [pts, table](const SemEnv& e) { return table[pts->rank(SemVal::tuple(e))]; }};
}

SemVal random_table(std::uint64_t points, const CarrierRef& vals, std::mt19937_64& rng) {
  std::vector<SemVal> t;
  t.reserve(points);
  for (std::uint64_t i = 0; i < points; ++i)
    t.push_back(vals->unrank(std::uniform_int_distribution<std::uint64_t>(0, vals->size() - 1)(rng)));
  return SemVal::table(std::move(t));
}

std::vector<Context> contexts_upto(const std::vector<TypeRef>& pool, int bound) {
  std::vector<Context> out{Context{}};
  std::vector<std::vector<TypeRef>> layer{{}};
  for (int len = 1; len <= bound; ++len) {
    std::vector<std::vector<TypeRef>> next;
    for (auto& base : layer)
      for (auto& t : pool) {
        auto ts = base;
        ts.push_back(t);
        out.push_back(cbv::make_context(ts));
        next.push_back(std::move(ts));
      }
    layer = std::move(next);
  }
  return out;
}

std::vector<TypeRef> type_pool(const cbv::FragmentConfig& c, int depth) {
  std::vector<TypeRef> out;
  for (auto& t : cbv::enumerate_types(c, depth))
    if (t->depth() <= c.type_depth) out.push_back(t);
  return out;
}

std::string tag(const cbv::FragmentConfig& c, const Model& m) {
  std::string sizes;
  for (auto& b : c.base_types) {
    auto it = m.config().base_sizes.find(b);
    sizes += (sizes.empty() ? "" : ",") + b + "=" +
             std::to_string(it == m.config().base_sizes.end() ? m.config().default_base_size : it->second);
  }
  return "[" + c.name() + ", " + m.monad().name() + ", |" + sizes + "|]";
}

// outcome of tabulating one side; evaluation errors are part of the result
struct Side {
  std::optional<Table> table;
  std::string error;
};

Side tabulate(const std::function<Denotation()>& make, const Model& m, std::uint64_t limit) {
  try {
    return Side{materialize(make(), m, limit), {}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Evaluation) throw;
    return Side{std::nullopt, e.what()};
  }
}

std::optional<std::string> compare_sides(const Side& a, const Side& b, const Model& m) {
  if (a.table && b.table) return table_difference(*a.table, *b.table, m);
  if (!a.table && !b.table) return std::nullopt;
  return "one side fails to evaluate: " + (a.table ? b.error : a.error);
}

}  // namespace

std::optional<std::string> lemma_witness(const Term& t, const SubstEnv& sigma, const Model& model,
                                         const DenoteOptions& opt, std::uint64_t point_limit) {
  Side lhs = tabulate([&] { return denote(substitute(t, sigma), model, opt); }, model, point_limit);
  Side rhs = tabulate(
      [&] {
        Env<Denotation> env{sigma.source, sigma.target, {}};
        for (auto& v : sigma.entries) env.entries.push_back(denote(v, model, opt));
        return precompose(denote(t, model, opt), env);
      },
      model, point_limit);
  if (auto d = compare_sides(lhs, rhs, model)) return pair_text(t, sigma) + ": " + *d;
  return std::nullopt;
}

Report check_substitution_lemma(const cbv::FragmentConfig& c, const Model& model, const LemmaOptions& opt) {
  Report rep;
  OperatorTable table = cbv::build_operator_table(c);
  cbv::GenOptions g;
  g.max_depth = opt.depth;
  g.max_ctx = opt.ctx_bound;
  cbv::TermGenerator gen(c, table, g);
  std::mt19937_64 rng(opt.seed);
  CheckRecord rec{"subst-lemma", "substitution lemma " + tag(c, model), true, 0, {}};
  long attempts = 0;
  while (rec.cases < opt.cases && attempts < static_cast<long>(opt.cases) * 50) {
    ++attempts;
    cbv::Sample s = gen.sample(rng);
    Context target = gen.covering_context(s.ctx, 1, rng);
    if (model.context_carrier(target)->size() > opt.point_limit ||
        model.context_carrier(s.ctx)->size() > opt.point_limit)
      continue;
    auto sigma = gen.random_env(s.ctx, target, 3, rng);
    if (!sigma || !affordable(s.term, *sigma, model)) continue;
    std::optional<std::string> w;
    try {
      w = lemma_witness(s.term, *sigma, model, opt.denote, opt.point_limit);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoundExceeded) continue;
      throw;
    }
    ++rec.cases;
    if (w && rec.pass) {
      rec.pass = false;
      rec.witness = *w;
    }
  }
  if (rec.cases < opt.cases && rec.pass) {
    rec.pass = false;
    rec.witness = "only " + std::to_string(rec.cases) + " of " + std::to_string(opt.cases) + " pairs fit the bounds";
  }
  rep.add(rec);
  return rep;
}

Report check_substitution_lemma_exhaustive(const cbv::FragmentConfig& c, const Model& model,
                                           const ExhaustiveOptions& opt) {
  OperatorTable table = cbv::build_operator_table(c);
  auto pool = type_pool(c, opt.pool_depth);
  cbv::TermEnumerator terms(cbv::operator_instances(c, table, pool));
  auto ctxs = contexts_upto(pool, opt.ctx_bound);
  CheckRecord rec{"subst-lemma", "substitution lemma, exhaustive " + tag(c, model), true, 0, {}};
  long long term_count = 0;
  for (auto& src : ctxs) {
    if (model.context_carrier(src)->size() > opt.point_limit) continue;
    CarrierRef src_pts = model.context_carrier(src);
    for (auto& ty : pool)
      for (const Sort& sort : {cbv::value_sort(ty), cbv::comp_sort(ty)}) {
        for (const Term& t : terms.terms(src, sort, opt.depth)) {
          ++term_count;
          Table tm = materialize(denote(t, model), model, opt.point_limit);
          for (auto& tgt : ctxs) {
            CarrierRef tgt_pts = model.context_carrier(tgt);
            if (tgt_pts->size() > opt.point_limit) continue;
            // candidate values per variable of src, with their tables over tgt
            std::vector<std::vector<std::pair<Term, Table>>> cands;
            bool empty = false;
            for (std::size_t y = 0; y < src.size(); ++y) {
              std::vector<std::pair<Term, Table>> cy;
              for (auto& v : terms.terms(tgt, Sort::first(src[y]), opt.env_depth))
                cy.emplace_back(v, materialize(denote(v, model), model, opt.point_limit));
              if (cy.empty()) empty = true;
              cands.push_back(std::move(cy));
            }
            if (empty) continue;
            std::vector<std::size_t> idx(src.size(), 0);
            while (true) {
              std::vector<Term> entries;
              for (std::size_t y = 0; y < src.size(); ++y) entries.push_back(cands[y][idx[y]].first);
              SubstEnv sigma = make_subst_env(src, tgt, entries);
              Table lhs = materialize(denote(substitute(t, sigma), model), model, opt.point_limit);
              // right-hand side straight from the tables
              Table rhs{t.sort(), tgt, {}};
              rhs.values.reserve(tgt_pts->size());
              for (std::uint64_t p = 0; p < tgt_pts->size(); ++p) {
                std::vector<SemVal> at;
                for (std::size_t y = 0; y < src.size(); ++y) at.push_back(cands[y][idx[y]].second.values[p]);
                rhs.values.push_back(tm.values[src_pts->rank(SemVal::tuple(std::move(at)))]);
              }
              ++rec.cases;
              if (rec.pass)
                if (auto d = table_difference(lhs, rhs, model)) {
                  rec.pass = false;
                  rec.witness = pair_text(t, sigma) + ": " + *d;
                }
              std::size_t k = 0;
              while (k < idx.size() && ++idx[k] == cands[k].size()) idx[k++] = 0;
              if (k == idx.size()) break;
            }
          }
        }
      }
  }
  Report rep;
  rep.add(rec);
  rep.add("subst-lemma", "corpus size " + tag(c, model), term_count > 0, term_count,
          std::to_string(term_count) + " terms up to depth " + std::to_string(opt.depth) + " over " +
              std::to_string(ctxs.size()) + " contexts");
  return rep;
}

// ---- compatibility ----

Report check_compatibility(const cbv::FragmentConfig& c, const Model& model, const CompatOptions& opt) {
  OperatorTable table = cbv::build_operator_table(c);
  auto pool = type_pool(c, opt.pool_depth);
  auto ctxs = contexts_upto(pool, opt.ctx_bound);
  std::mt19937_64 rng(opt.seed);
  std::map<std::string, CheckRecord> recs;
  long long skipped = 0;

  for (auto& op : cbv::operator_instances(c, table, pool)) {
    std::string fam = cbv::family_name(cbv::decode_label(op->label).kind);
    auto& rec = recs.try_emplace(fam, CheckRecord{"compatibility", fam + " " + tag(c, model), true, 0, {}}).first->second;
    for (auto& src : ctxs)
      for (auto& tgt : ctxs) {
        // the free choices: one table per argument, one per variable of src
        std::vector<CarrierRef> dims, dim_vals;
        std::vector<std::uint64_t> dim_pts;
        std::vector<Context> arg_ctx;
        bool too_big = false;
        for (auto& a : op->args) {
          arg_ctx.push_back(src.extended(a.binder));
          auto pts = model.context_carrier(arg_ctx.back())->size();
          auto vals = model.sort_carrier(a.sort)->size();
          if (pts > opt.carrier_limit || vals > opt.carrier_limit) too_big = true;
          dims.push_back(power(pts, model.sort_carrier(a.sort)));
          dim_pts.push_back(pts);
          dim_vals.push_back(model.sort_carrier(a.sort));
        }
        auto tgt_pts = model.context_carrier(tgt)->size();
        if (tgt_pts > opt.carrier_limit) too_big = true;
        for (auto& e : src.entries()) {
          auto vals = model.carrier(cbv::parse_type(e))->size();
          if (vals > opt.carrier_limit) too_big = true;
          dims.push_back(power(tgt_pts, model.carrier(cbv::parse_type(e))));
          dim_pts.push_back(tgt_pts);
          dim_vals.push_back(model.carrier(cbv::parse_type(e)));
        }
        if (too_big) {
          ++skipped;
          continue;
        }
        std::uint64_t total = 1;
        for (auto& d : dims) total = sat_mul(total, d->size());
        if (total == 0) continue;
        bool exhaustive = total <= opt.combos;
        std::uint64_t n = exhaustive ? total : opt.combos;
        for (std::uint64_t i = 0; i < n; ++i) {
          std::vector<SemVal> pick(dims.size());
          std::uint64_t r = i;
          for (std::size_t k = dims.size(); k-- > 0;) {
            if (exhaustive) {
              pick[k] = dims[k]->unrank(r % dims[k]->size());
              r /= dims[k]->size();
            } else {
              pick[k] = random_table(dim_pts[k], dim_vals[k], rng);
            }
          }
          std::vector<Denotation> d;
          for (std::size_t a = 0; a < op->args.size(); ++a)
            d.push_back(from_table(model, arg_ctx[a], op->args[a].sort, pick[a]));
          Env<Denotation> sigma{src, tgt, {}};
          for (std::size_t y = 0; y < src.size(); ++y)
            sigma.entries.push_back(from_table(model, tgt, Sort::first(src[y]), pick[op->args.size() + y]));

          Side lhs = tabulate([&] { return precompose(algebra_clause(model, *op, src, d, opt.denote), sigma); }, model,
                              1u << 16);
          Side rhs = tabulate(
              [&] {
                std::vector<Denotation> routed;
                for (std::size_t a = 0; a < op->args.size(); ++a)
                  routed.push_back(precompose(d[a], strength_route(*op, a, sigma, denotation_hooks())));
                return algebra_clause(model, *op, tgt, routed, opt.denote);
              },
              model, 1u << 16);
          ++rec.cases;
          if (rec.pass)
            if (auto w = compare_sides(lhs, rhs, model)) {
              rec.pass = false;
              std::string ds;
              for (std::size_t a = 0; a < d.size(); ++a) ds += (a ? ", " : "") + pick[a].str();
              std::string ss;
              for (std::size_t y = 0; y < src.size(); ++y) ss += (y ? ", " : "") + pick[op->args.size() + y].str();
              rec.witness = op->label + " over " + to_string(src) + ", sigma into " + to_string(tgt) + ", d = <" + ds +
                            ">, sigma = <" + ss + ">: " + *w;
            }
        }
      }
  }
  Report rep;
  for (auto& [k, r] : recs) rep.add(r);
  rep.add("compatibility", "coverage " + tag(c, model), true, static_cast<long long>(recs.size()),
          std::to_string(skipped) + " operator/context combinations beyond the carrier limit were skipped");
  return rep;
}

// ---- the semantic substitution structure ----

Report check_semantic_structure(const cbv::FragmentConfig& c, const Model& model, std::uint64_t seed, int samples) {
  auto pool = type_pool(c, 1);
  std::vector<TypeRef> small;
  for (auto& t : pool)
    if (model.carrier(t)->size() <= 16) small.push_back(t);
  std::mt19937_64 rng(seed);
  auto pick_t = [&] { return small[std::uniform_int_distribution<std::size_t>(0, small.size() - 1)(rng)]; };
  auto random_ctx = [&](std::size_t lo, std::size_t hi) {
    std::vector<TypeRef> ts;
    std::size_t n = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    for (std::size_t i = 0; i < n; ++i) ts.push_back(pick_t());
    return cbv::make_context(ts);
  };
  auto random_den = [&](const Context& ctx, const Sort& s) {
    return from_table(model, ctx, s, random_table(model.context_carrier(ctx)->size(), model.sort_carrier(s), rng));
  };
  auto random_env = [&](const Context& src, const Context& tgt) {
    Env<Denotation> e{src, tgt, {}};
    for (auto& s : src.entries()) e.entries.push_back(random_den(tgt, Sort::first(s)));
    return e;
  };
  auto random_sort = [&] {
    TypeRef t = pick_t();
    return std::uniform_int_distribution<int>(0, 1)(rng) ? cbv::comp_sort(t) : cbv::value_sort(t);
  };
  auto tab = [&](const Denotation& d) { return materialize(d, model); };

  std::string tg = tag(c, model);
  CheckRecord unit_l{"semantic-structure", "variable then substitution " + tg, true, 0, {}};
  CheckRecord unit_r{"semantic-structure", "substitution by projections " + tg, true, 0, {}};
  CheckRecord assoc{"semantic-structure", "substitution associativity " + tg, true, 0, {}};
  CheckRecord ren{"semantic-structure", "renaming well-definedness " + tg, true, 0, {}};
  CheckRecord point{"semantic-structure", "point equals unit " + tg, true, 0, {}};
  auto note = [&](CheckRecord& r, const std::optional<std::string>& w) {
    ++r.cases;
    if (w && r.pass) {
      r.pass = false;
      r.witness = *w;
    }
  };
  if (small.empty()) samples = 0;
  for (int i = 0; i < samples; ++i) {
    Context g1 = random_ctx(1, 2), g2 = random_ctx(0, 2), g3 = random_ctx(0, 2);
    Sort s = random_sort();
    auto sigma = random_env(g1, g2);
    std::size_t y = std::uniform_int_distribution<std::size_t>(0, g1.size() - 1)(rng);
    note(unit_l, table_difference(tab(precompose(var_denotation(g1, y), sigma)), tab(sigma.entries[y]), model));

    Denotation d = random_den(g1, s);
    Env<Denotation> id{g1, g1, {}};
    for (std::size_t k = 0; k < g1.size(); ++k) id.entries.push_back(var_denotation(g1, k));
    note(unit_r, table_difference(tab(precompose(d, id)), tab(d), model));

    auto tau = random_env(g2, g3);
    Env<Denotation> both{g1, g3, {}};
    for (auto& e : sigma.entries) both.entries.push_back(precompose(e, tau));
    note(assoc, table_difference(tab(precompose(precompose(d, sigma), tau)), tab(precompose(d, both)), model));

    // rho : g0 -> g1 with g0 = g1 plus a fresh entry in front
    std::vector<TypeRef> ts0 = cbv::context_types(g1);
    ts0.insert(ts0.begin(), pick_t());
    Context g0 = cbv::make_context(ts0);
    std::vector<std::size_t> map;
    for (std::size_t k = 0; k < g1.size(); ++k) map.push_back(k + 1);
    std::shuffle(map.begin(), map.end(), rng);
    // the shuffle must respect sorts; fall back to the order-preserving map if it does not
    for (std::size_t k = 0; k < g1.size(); ++k)
      if (g0[map[k]] != g1[k]) {
        for (std::size_t q = 0; q < g1.size(); ++q) map[q] = q + 1;
        break;
      }
    Renaming rho(g0, g1, map);
    auto theta = random_env(g0, g2);
    Env<Denotation> reindexed{g1, g2, {}};
    for (std::size_t k = 0; k < g1.size(); ++k) reindexed.entries.push_back(theta.entries[map[k]]);
    note(ren, table_difference(tab(precompose(denotation_hooks().rename(d, rho), theta)), tab(precompose(d, reindexed)),
                               model));

    note(point, table_difference(tab(denotation_hooks().var(g1, y)), tab(var_denotation(g1, y)), model));
  }
  Report rep;
  for (auto* r : {&unit_l, &unit_r, &assoc, &ren, &point}) rep.add(*r);
  return rep;
}

// ---- mutations ----

cbv::OpKind mutation_target(cbv::Extension e) {
  using E = cbv::Extension;
  using K = cbv::OpKind;
  switch (e) {
    case E::Sequential: return K::Let;
    case E::Functions: return K::App;
    case E::Records: return K::RecMatch;
    case E::Variants: return K::Case;
    case E::Naturals: return K::Fold;
    case E::While: return K::For;
    case E::Recursion: return K::LetRec;
  }
  return K::Val;
}

namespace {
bool uses(const Term& t, cbv::OpKind k) {
  if (t.kind() != Term::Kind::Op) return false;
  if (cbv::decode_label(t.op().label).kind == k) return true;
  for (auto& c : t.children())
    if (uses(c, k)) return true;
  return false;
}
}  // namespace

Report mutation_via_lemma(const cbv::FragmentConfig& c, const Model& model, cbv::OpKind kind, std::uint64_t seed,
                          int attempts) {
  OperatorTable table = cbv::build_operator_table(c);
  cbv::GenOptions g;
  g.max_depth = 5;
  g.max_ctx = 3;
  cbv::TermGenerator gen(c, table, g);
  std::mt19937_64 rng(seed);
  DenoteOptions opt;
  opt.corrupt = kind;
  CheckRecord rec{"mutation", std::string("lemma with corrupted ") + cbv::family_name(kind) + " clause " + tag(c, model),
                  true, 0, {}};
  for (int i = 0; i < attempts && rec.pass; ++i) {
    TypeRef t = gen.pool()[std::uniform_int_distribution<std::size_t>(0, gen.pool().size() - 1)(rng)];
    std::vector<TypeRef> ts{t, t};
    if (i % 2) ts.push_back(gen.pool()[std::uniform_int_distribution<std::size_t>(0, gen.pool().size() - 1)(rng)]);
    Context src = cbv::make_context(ts);
    TypeRef res = gen.pool()[std::uniform_int_distribution<std::size_t>(0, gen.pool().size() - 1)(rng)];
    int depth = std::uniform_int_distribution<int>(3, 5)(rng);
    auto m = gen.comp(res, src, depth, rng);
    if (!m || !uses(*m, kind)) continue;
    Context tgt = gen.covering_context(cbv::make_context(std::vector<TypeRef>(ts.begin() + 1, ts.end())), 1, rng);
    if (model.context_carrier(tgt)->size() > 4096) continue;
    // a random environment, and the contraction of the first two variables
    std::vector<SubstEnv> sigmas;
    if (auto r = gen.random_env(src, tgt, 2, rng)) sigmas.push_back(*r);
    std::vector<Term> merged;
    for (std::size_t x = 0; x < src.size(); ++x) merged.push_back(Term::var(src, x == 1 ? 0 : x));
    sigmas.push_back(make_subst_env(src, src, merged));
    for (auto& sigma : sigmas) {
      if (!rec.pass) break;
      if (!affordable(*m, sigma, model)) continue;
      try {
        ++rec.cases;
        if (auto w = lemma_witness(*m, sigma, model, opt, 4096)) {
          rec.pass = false;
          rec.witness = *w;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BoundExceeded) throw;
      }
    }
  }
  Report rep;
  rep.add(rec);
  return rep;
}

}  // namespace scopekit::sem
