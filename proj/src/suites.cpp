#include "scopekit/suites.hpp"

#include <functional>
#include <memory>
#include <random>

#include "scopekit/cbv/generate.hpp"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/finpresheaf.hpp"
#include "scopekit/semantics/checks.hpp"

namespace scopekit {

namespace {

void note(CheckRecord& r, bool ok, const std::function<std::string()>& witness) {
  ++r.cases;
  if (!ok && r.pass) {
    r.pass = false;
    r.witness = witness();
  }
}

// rebuilds t with the node at preorder position k replaced by f(node)
Term replace_at(const Term& t, std::size_t& k, bool& done, const std::function<Term(const Term&)>& f) {
  if (done) return t;
  if (k == 0) {
    done = true;
    return f(t);
  }
  --k;
  if (t.kind() == Term::Kind::Var) return t;
  std::vector<Term> kids;
  for (auto& c : t.children()) kids.push_back(replace_at(c, k, done, f));
  if (t.kind() == Term::Kind::Op) return Term::op(t.op_ref(), t.context(), std::move(kids));
  return Term::meta(t.hole_ref(), t.context(), std::move(kids));
}

const Term* node_at(const Term& t, std::size_t& k) {
  if (k == 0) return &t;
  --k;
  for (auto& c : t.children())
    if (auto* n = node_at(c, k)) return n;
  return nullptr;
}

std::vector<Term> identity_vars(const Context& g) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(Term::var(g, i));
  return out;
}

bool has_meta(const Term& t) {
  if (t.kind() == Term::Kind::Meta) return true;
  for (auto& c : t.children())
    if (has_meta(c)) return true;
  return false;
}

// Replaces a random hole-free subterm by a fresh hole; returns the removed subterm.
std::optional<Term> punch(Term& t, HoleSet& holes, const std::string& id, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, t.size() - 1)(rng);
    std::size_t probe = k;
    const Term* n = node_at(t, probe);
    if (!n || has_meta(*n)) continue;
    Term removed = *n;
    HoleRef h = holes.declare(id, removed.sort(), removed.context());
    bool done = false;
    t = replace_at(t, k, done, [&](const Term& at) { return Term::meta(h, at.context(), identity_vars(at.context())); });
    return removed;
  }
  return std::nullopt;
}

std::optional<Term> random_term(cbv::TermGenerator& gen, const Sort& s, const Context& ctx, std::mt19937_64& rng) {
  cbv::TypeRef t = cbv::type_of_sort(s);
  int depth = std::uniform_int_distribution<int>(1, 3)(rng);
  return s.is_first() ? gen.value(t, ctx, depth, rng) : gen.comp(t, ctx, depth, rng);
}

struct GenSlot {
  std::unique_ptr<OperatorTable> table;
  std::unique_ptr<cbv::TermGenerator> gen;
};

GenSlot make_gen(const cbv::FragmentConfig& c, int depth, int ctx_bound) {
  GenSlot g;
  g.table = std::make_unique<OperatorTable>(cbv::build_operator_table(c));
  cbv::GenOptions o;
  o.max_depth = depth;
  o.max_ctx = ctx_bound;
  g.gen = std::make_unique<cbv::TermGenerator>(c, *g.table, o);
  return g;
}

}  // namespace

// ---- term-level laws

std::vector<LawCase> term_law_corpus(const cbv::FragmentConfig& c, std::uint64_t seed, int count, int depth,
                                     int ctx_bound) {
  GenSlot g = make_gen(c, depth, ctx_bound);
  std::mt19937_64 rng(seed * 1000003u + c.mask);
  std::vector<LawCase> out;
  while (static_cast<int>(out.size()) < count) {
    cbv::Sample s = g.gen->sample(rng);
    Context g2 = g.gen->covering_context(s.ctx, 1, rng);
    Context g3 = g.gen->covering_context(g2, 1, rng);
    auto s1 = g.gen->random_env(s.ctx, g2, 2, rng);
    auto s2 = g.gen->random_env(g2, g3, 2, rng);
    if (!s1 || !s2) continue;
    out.push_back(LawCase{c, s.term, *s1, *s2});
  }
  return out;
}

Report check_term_laws(const std::vector<LawCase>& corpus) {
  CheckRecord var{"term-laws", "variable law x[s] = s_x", true, 0, {}};
  CheckRecord unit{"term-laws", "identity law M[id] = M", true, 0, {}};
  CheckRecord assoc{"term-laws", "composition law (M[s1])[s2] = M[s1[s2]]", true, 0, {}};
  for (auto& k : corpus) {
    const Context& g = k.term.context();
    std::string where = " [" + k.frag.name() + "]";
    for (std::size_t x = 0; x < g.size(); ++x) {
      Term got = substitute(Term::var(g, x), k.s1);
      note(var, got == k.s1.entries[x],
           [&] { return "#" + std::to_string(x) + " gives " + to_text(got) + " not " + to_text(k.s1.entries[x]) + where; });
    }
    Term same = substitute(k.term, identity_env(g));
    note(unit, same == k.term, [&] { return to_text(k.term) + " became " + to_text(same) + where; });
    Term lhs = substitute(substitute(k.term, k.s1), k.s2);
    Term rhs = substitute(k.term, compose_envs(k.s1, k.s2));
    note(assoc, lhs == rhs, [&] { return to_text(k.term) + ": " + to_text(lhs) + " vs " + to_text(rhs) + where; });
  }
  Report r;
  for (auto* rec : {&var, &unit, &assoc}) r.add(*rec);
  return r;
}

// ---- metavariables

std::vector<HoledCase> holed_corpus(const std::vector<cbv::FragmentConfig>& frags, std::uint64_t seed, int count) {
  std::vector<GenSlot> gens;
  for (auto& c : frags) gens.push_back(make_gen(c, 4, 2));
  std::mt19937_64 rng(seed);
  std::vector<HoledCase> out;
  for (long i = 0; static_cast<int>(out.size()) < count && i < 50L * count; ++i) {
    std::size_t fi = static_cast<std::size_t>(i) % frags.size();
    cbv::TermGenerator& gen = *gens[fi].gen;
    cbv::Sample s = gen.sample(rng);
    HoledCase hc{frags[fi], s.term, {}, {}, {}, {}, {}, {}, s.term};
    int nholes = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int h = 0; h < nholes; ++h) {
      std::string id = "h" + std::to_string(h);
      if (auto removed = punch(hc.term, hc.holes, id, rng)) hc.fill.bodies.emplace(id, *removed);
    }
    if (hc.holes.all().empty()) continue;
    int j = 0;
    for (auto& [id, h] : hc.holes.all()) {
      Term body = random_term(gen, h->sort, h->ctx, rng).value_or(hc.fill.bodies.at(id));
      std::string id2 = "k" + std::to_string(j++);
      if (auto removed = punch(body, hc.holes2, id2, rng)) {
        HoleRef h2 = hc.holes2.lookup(id2);
        hc.s2.bodies.emplace(id2, random_term(gen, h2->sort, h2->ctx, rng).value_or(*removed));
      }
      hc.s1.bodies.emplace(id, body);
    }
    Context tgt = gen.covering_context(s.ctx, 1, rng);
    auto sigma = gen.random_env(s.ctx, tgt, 2, rng);
    if (!sigma) continue;
    hc.sigma = *sigma;
    out.push_back(std::move(hc));
  }
  return out;
}

Report check_meta_laws(const std::vector<HoledCase>& corpus) {
  const char* suite = "meta-laws";
  CheckRecord valid{suite, "metavariable substitutions are well formed", true, 0, {}};
  CheckRecord fill{suite, "filling the holes restores the term", true, 0, {}};
  CheckRecord runit{suite, "Kleisli right unit M{eta} = M", true, 0, {}};
  CheckRecord lunit{suite, "Kleisli left unit eta_h{s} = s_h", true, 0, {}};
  CheckRecord assoc{suite, "Kleisli associativity (M{s1}){s2} = M{s1;s2}", true, 0, {}};
  CheckRecord comm{suite, "meta substitution commutes with substitution", true, 0, {}};
  for (auto& k : corpus) {
    std::string where = " [" + k.frag.name() + "]";
    try {
      validate_meta_subst(k.s1, k.holes);
      validate_meta_subst(k.s2, k.holes2);
      validate_meta_subst(k.fill, k.holes);
      note(valid, true, {});
    } catch (const Error& e) {
      note(valid, false, [&] { return std::string(e.what()) + where; });
      continue;
    }
    Term filled = meta_substitute(k.term, k.fill);
    note(fill, filled == k.original, [&] { return to_text(k.term) + " filled to " + to_text(filled) + where; });

    MetaSubst eta = meta_unit(k.holes);
    Term same = meta_substitute(k.term, eta);
    note(runit, same == k.term, [&] { return to_text(k.term) + " became " + to_text(same) + where; });
    for (auto& [id, e] : eta.bodies) {
      Term got = meta_substitute(e, k.s1);
      note(lunit, got == k.s1.bodies.at(id), [&] { return "?" + id + " gives " + to_text(got) + where; });
    }
    Term lhs = meta_substitute(meta_substitute(k.term, k.s1), k.s2);
    Term rhs = meta_substitute(k.term, compose_meta(k.s1, k.s2));
    note(assoc, lhs == rhs, [&] { return to_text(k.term) + ": " + to_text(lhs) + " vs " + to_text(rhs) + where; });

    Term a = substitute(meta_substitute(k.term, k.s1), k.sigma);
    Term b = meta_substitute(substitute(k.term, k.sigma), k.s1);
    note(comm, a == b, [&] { return to_text(k.term) + ": " + to_text(a) + " vs " + to_text(b) + where; });
  }
  Report r;
  for (auto* rec : {&valid, &fill, &runit, &lunit, &assoc, &comm}) r.add(*rec);
  r.add(suite, "holed corpus size", static_cast<long long>(corpus.size()) > 0, static_cast<long long>(corpus.size()),
        std::to_string(corpus.size()) + " holed terms");
  return r;
}

// ---- dispatch

namespace {

using cbv::Extension;
using cbv::FragmentConfig;

FragmentConfig proto_for(const SuiteOptions& opt, std::vector<std::string> bases) {
  FragmentConfig p;
  p.base_types = std::move(bases);
  p.nat_bound = opt.nat_bound;
  return p;
}

bool within_seq_fun(const FragmentConfig& c) {
  unsigned allowed = (1u << static_cast<int>(Extension::Sequential)) | (1u << static_cast<int>(Extension::Functions));
  return (c.mask & ~allowed) == 0;
}

std::vector<FragmentConfig> seq_fun_fragments(const FragmentConfig& proto) {
  std::vector<FragmentConfig> out;
  for (auto& c : cbv::all_fragments(proto))
    if (within_seq_fun(c)) out.push_back(c);
  return out;
}

std::vector<std::string> monads_or(const SuiteOptions& opt, std::vector<std::string> dflt) {
  if (!opt.monads.empty()) return opt.monads;
  if (opt.model) return {opt.model->monad.name};
  return dflt;
}

sem::ModelConfig model_for(const SuiteOptions& opt, const std::string& monad, int base_size) {
  sem::ModelConfig m = opt.model.value_or(sem::ModelConfig{});
  m.monad.name = monad;
  if (!opt.model) m.default_base_size = base_size;
  return m;
}

// the clause a mutation of this fragment corrupts: that of its last extension
cbv::OpKind mutation_kind(const FragmentConfig& c) {
  cbv::OpKind k = cbv::OpKind::Val;
  for (auto e : cbv::all_extensions())
    if (c.has(e)) k = sem::mutation_target(e);
  return k;
}

void record_mutation(Report& out, const std::string& suite, const std::string& what, const Report& mutated) {
  std::string w;
  for (auto& r : mutated.records())
    if (!r.pass) {
      w = r.axiom + ": " + r.witness;
      break;
    }
  out.add(suite, "mutation detected: " + what, !mutated.all_pass(), 1,
          mutated.all_pass() ? "the corrupted clause went unnoticed" : w);
}

Report term_laws(const SuiteOptions& opt) {
  auto frags = opt.fragments.empty() ? cbv::all_fragments(proto_for(opt, {"b", "c"})) : opt.fragments;
  Report r;
  for (auto& c : frags) r.merge(check_term_laws(term_law_corpus(c, opt.seed, opt.terms, opt.depth, opt.ctx_bound)));
  return r.condensed();
}

Report meta_laws(const SuiteOptions& opt) {
  auto frags = opt.fragments.empty() ? cbv::all_fragments(proto_for(opt, {"b", "c"})) : opt.fragments;
  return check_meta_laws(holed_corpus(frags, opt.seed, opt.holed_terms));
}

Report only_suite(const Report& r, const std::string& suite) {
  Report out;
  for (auto& rec : r.records())
    if (rec.suite == suite) out.add(rec);
  return out;
}

Report monad_laws(const SuiteOptions& opt) {
  Report r;
  sem::MonadLawOptions lo;
  lo.seed = opt.seed;
  for (auto& name : monads_or(opt, sem::monad_names())) {
    sem::MonadSpec spec = opt.model ? opt.model->monad : sem::MonadSpec{};
    spec.name = name;
    auto m = sem::make_monad(spec);
    r.merge(sem::check_monad_laws(m, lo));
    record_mutation(r, "monad-laws", "bind ignoring its parameter [" + name + "]",
                    sem::check_monad_laws(m, lo, sem::broken_bind(m, sem::SemVal::atom(0))));
  }
  return r;
}

Report compatibility(const SuiteOptions& opt) {
  Report r;
  FragmentConfig proto = proto_for(opt, {"b"});
  auto frags = opt.fragments.empty() ? seq_fun_fragments(proto) : opt.fragments;
  for (auto& name : monads_or(opt, {"identity", "option"}))
    for (auto& c : frags) {
      sem::Model model(model_for(opt, name, 2), c);
      if (within_seq_fun(c)) {
        sem::CompatOptions co;
        co.seed = opt.seed;
        r.merge(sem::check_compatibility(c, model, co));
        co.denote.corrupt = mutation_kind(c);
        record_mutation(r, "compatibility",
                        std::string(cbv::family_name(*co.denote.corrupt)) + " clause [" + c.name() + ", " + name + "]",
                        sem::check_compatibility(c, model, co));
      }
      r.merge(sem::check_semantic_structure(c, model, opt.seed));
    }
  // every fragment's corrupted clause is caught by the lemma
  auto all = opt.fragments.empty() ? cbv::all_fragments(proto) : opt.fragments;
  for (auto& c : all) {
    sem::Model model(model_for(opt, "option", 2), c);
    cbv::OpKind k = mutation_kind(c);
    record_mutation(r, "compatibility",
                    std::string(cbv::family_name(k)) + " clause via the lemma [" + c.name() + ", option]",
                    sem::mutation_via_lemma(c, model, k, opt.seed));
  }
  return r;
}

Report subst_lemma(const SuiteOptions& opt) {
  Report r;
  FragmentConfig proto = proto_for(opt, {"b"});
  auto frags = opt.fragments.empty() ? cbv::all_fragments(proto) : opt.fragments;
  for (auto& c : frags) {
    if (within_seq_fun(c)) {
      for (auto& name : monads_or(opt, {"identity", "option"}))
        for (int size = opt.model ? 0 : 1; size <= (opt.model ? 0 : 3); ++size) {
          sem::Model model(model_for(opt, name, size), c);
          r.merge(sem::check_substitution_lemma_exhaustive(c, model));
        }
    } else {
      for (auto& name : monads_or(opt, {"option"})) {
        sem::Model model(model_for(opt, name, 2), c);
        sem::LemmaOptions lo;
        lo.seed = opt.seed;
        lo.cases = opt.lemma_cases;
        r.merge(sem::check_substitution_lemma(c, model, lo));
      }
    }
  }
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"term-laws", "meta-laws",  "presheaf-laws", "skew",
                                                 "pointed",   "coend",      "monad-laws",    "compatibility",
                                                 "subst-lemma", "fixpoints"};
  return names;
}

Report run_suite(const std::string& name, const SuiteOptions& opt) {
  if (name == "all") {
    Report r;
    for (auto& n : suite_names())
      if (n != "skew" && n != "pointed") r.merge(run_suite(n, opt));
    return r;
  }
  if (name == "term-laws") return term_laws(opt);
  if (name == "meta-laws") return meta_laws(opt);
  if (name == "presheaf-laws") return presheaf_law_suite(opt.seed, opt.structures);
  if (name == "skew" || name == "pointed") return only_suite(presheaf_law_suite(opt.seed, opt.structures), name);
  if (name == "coend") return check_coend_identifications(opt.seed, opt.coend_pairs);
  if (name == "monad-laws") return monad_laws(opt);
  if (name == "compatibility") return compatibility(opt);
  if (name == "subst-lemma") return subst_lemma(opt);
  if (name == "fixpoints") return sem::check_fixpoints(opt.seed, opt.loop_programs);
  throw Error(ErrorKind::InvalidInput, "unknown suite '" + name + "'");
}

}  // namespace scopekit
