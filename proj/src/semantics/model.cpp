#include "scopekit/semantics/model.hpp"

#include <json.hpp>

#include "scopekit/cbv/surface.hpp"
#include "scopekit/error.hpp"

namespace scopekit::sem {

using cbv::OpKind;
using cbv::Type;
using cbv::TypeRef;

ModelConfig model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("model config: ") + e.what());
  }
  ModelConfig c;
  try {
    c.monad.name = j.value("monad", c.monad.name);
    c.monad.exceptions = j.value("exceptions", c.monad.exceptions);
    c.monad.monoid = j.value("monoid", c.monad.monoid);
    c.monad.states = j.value("states", c.monad.states);
    c.default_base_size = j.value("default_base_size", c.default_base_size);
    if (j.contains("base_sizes"))
      for (auto& [k, v] : j.at("base_sizes").items()) c.base_sizes[k] = v.get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("model config: ") + e.what());
  }
  if (c.default_base_size < 1) throw Error(ErrorKind::InvalidInput, "base sets must be non-empty");
  for (auto& [k, v] : c.base_sizes)
    if (v < 1) throw Error(ErrorKind::InvalidInput, "base set for " + k + " must be non-empty");
  make_monad(c.monad);  // validates the name
  return c;
}

std::string model_to_json(const ModelConfig& c) {
  nlohmann::json j;
  j["monad"] = c.monad.name;
  j["exceptions"] = c.monad.exceptions;
  j["monoid"] = c.monad.monoid;
  j["states"] = c.monad.states;
  j["default_base_size"] = c.default_base_size;
  j["base_sizes"] = nlohmann::json::object();
  for (auto& [k, v] : c.base_sizes) j["base_sizes"][k] = v;
  return j.dump();
}

Model::Model(ModelConfig cfg, cbv::FragmentConfig frag)
    : cfg_(std::move(cfg)), frag_(std::move(frag)), monad_(make_monad(cfg_.monad)) {
  if (frag_.nat_bound < 1) throw Error(ErrorKind::InvalidInput, "nat_bound must be positive");
}

CarrierRef Model::carrier(const TypeRef& t) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(t->str());
    if (it != cache_.end()) return it->second;
  }
  CarrierRef c;
  switch (t->kind()) {
    case Type::Kind::Base: {
      auto it = cfg_.base_sizes.find(t->name());
      c = atoms(static_cast<std::uint64_t>(it == cfg_.base_sizes.end() ? cfg_.default_base_size : it->second));
      break;
    }
    case Type::Kind::Nat:
      c = atoms(static_cast<std::uint64_t>(frag_.nat_bound));
      break;
    case Type::Kind::Fun:
      c = power(carrier(t->dom())->size(), comp_carrier(t->cod()));
      break;
    case Type::Kind::Record:
    case Type::Kind::Variant: {
      std::vector<CarrierRef> parts;
      for (auto& f : t->row()) parts.push_back(carrier(f.type));
      c = t->kind() == Type::Kind::Record ? product(std::move(parts)) : sum(std::move(parts));
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(t->str(), c);
  return c;
}

CarrierRef Model::comp_carrier(const TypeRef& t) const { return monad_->lift(carrier(t)); }

CarrierRef Model::sort_carrier(const Sort& s) const {
  TypeRef t = cbv::type_of_sort(s);
  return s.is_first() ? carrier(t) : comp_carrier(t);
}

CarrierRef Model::context_carrier(const Context& g) const {
  std::vector<CarrierRef> parts;
  for (auto& e : g.entries()) parts.push_back(carrier(cbv::parse_type(e)));
  return product(std::move(parts));
}

CarrierRef interpret_type(const TypeRef& t, const Model& m) { return m.carrier(t); }
std::uint64_t carrier_size(const Model& m, const TypeRef& t) { return m.carrier(t)->size(); }

std::string Model::show(const TypeRef& t, const SemVal& v) const {
  switch (t->kind()) {
    case Type::Kind::Base:
      return t->name() + std::to_string(v.num());
    case Type::Kind::Nat:
      return std::to_string(v.num());
    case Type::Kind::Record: {
      std::string s = "{";
      for (std::size_t i = 0; i < t->row().size(); ++i) {
        if (i) s += ", ";
        s += t->row()[i].label + " = " + show(t->row()[i].type, v[i]);
      }
      return s + "}";
    }
    case Type::Kind::Variant: {
      auto& f = t->row().at(static_cast<std::size_t>(v.num()));
      return f.label + "(" + show(f.type, v.payload()) + ")";
    }
    case Type::Kind::Fun: {
      CarrierRef dom = carrier(t->dom());
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += "; ";
        s += show(t->dom(), dom->unrank(i)) + " -> " + show_comp(t->cod(), v[i]);
      }
      return s + "]";
    }
  }
  return v.str();
}

std::string Model::show_comp(const TypeRef& t, const SemVal& m) const {
  const std::string& n = monad_->name();
  if (n == "identity") return show(t, m);
  if (n == "option") return m.num() == 0 ? "None" : "Some " + show(t, m.payload());
  if (n == "exception") return m.num() == 0 ? "raise " + std::to_string(m.payload().num()) : "return " + show(t, m.payload());
  if (n == "writer") return "(" + std::to_string(m[0].num()) + ", " + show(t, m[1]) + ")";
  if (n == "state") {
    std::string s = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) s += "; ";
      s += "s" + std::to_string(i) + " -> (" + show(t, m[i][0]) + ", s" + std::to_string(m[i][1].num()) + ")";
    }
    return s + "]";
  }
  if (n == "powerset") {
    std::string s = "{";
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + show(t, m[i]);
    return s + "}";
  }
  return m.str();
}

std::string Model::show_sort(const Sort& s, const SemVal& v) const {
  TypeRef t = cbv::type_of_sort(s);
  return s.is_first() ? show(t, v) : show_comp(t, v);
}

// ---- the semantic substitution structure ----

Denotation var_denotation(const Context& g, std::size_t pos) {
  return Denotation{Sort::first(g[pos]), g, [pos](const SemEnv& e) { return e[pos]; }};
}

Denotation precompose(const Denotation& d, const Env<Denotation>& sigma) {
  auto entries = std::make_shared<std::vector<Denotation>>(sigma.entries);
  auto inner = d.fn;
  return Denotation{d.sort, sigma.target, [entries, inner](const SemEnv& e) {
                      SemEnv x;
                      x.reserve(entries->size());
                      for (auto& s : *entries) x.push_back(s(e));
                      return inner(x);
                    }};
}

const PointedHooks<Denotation>& denotation_hooks() {
  static const PointedHooks<Denotation> hooks{
      [](const Denotation& d, const Renaming& rho) {
        auto map = rho.map();
        auto inner = d.fn;
        return Denotation{d.sort, rho.source(), [map, inner](const SemEnv& e) {
                            SemEnv x;
                            x.reserve(map.size());
                            for (auto p : map) x.push_back(e[p]);
                            return inner(x);
                          }};
      },
      [](const Context& g, std::size_t pos) { return var_denotation(g, pos); }};
  return hooks;
}

// ---- the algebra ----

namespace {

using Fn = std::function<SemVal(const SemEnv&)>;

SemEnv extend(const SemEnv& e, const SemVal& v) {
  SemEnv x = e;
  x.push_back(v);
  return x;
}

SemEnv extend(const SemEnv& e, const std::vector<SemVal>& vs) {
  SemEnv x = e;
  x.insert(x.end(), vs.begin(), vs.end());
  return x;
}

std::vector<SemVal> materialise_dom(const CarrierRef& c) { return c->elements(1u << 16); }

struct Clauses {
  const Model& m;
  const Monad& T;
  cbv::OpInfo info;
  std::vector<Fn> k;

  SemVal overflow() const {
    if (auto none = T.absent()) return *none;
    throw Error(ErrorKind::Evaluation, "roll beyond nat_bound " + std::to_string(m.fragment().nat_bound));
  }

  // binds kids[from..] in order, then finishes with the collected values
  SemVal bind_all(const SemEnv& g, std::size_t from, std::size_t to, std::vector<SemVal> acc,
                  const std::function<SemVal(std::vector<SemVal>)>& done) const {
    if (from == to) return done(std::move(acc));
    return T.bind(k[from](g), [&](const SemVal& v) {
      auto next = acc;
      next.push_back(v);
      return bind_all(g, from + 1, to, std::move(next), done);
    });
  }

  Fn build(const DenoteOptions& opt) const {
    auto T_ = &T;
    switch (info.kind) {
      case OpKind::Val: {
        Fn d = k[0];
        return [T_, d](const SemEnv& g) { return T_->unit(d(g)); };
      }
      case OpKind::Let: {
        auto self = *this;
        std::size_t n = info.ts.size();
        return [self, n](const SemEnv& g) {
          // the staircase: each intermediate result extends the context of the next
          std::function<SemVal(std::size_t, const SemEnv&)> step = [&](std::size_t i, const SemEnv& e) -> SemVal {
            if (i == n) return self.k[n](e);
            return self.T.bind(self.k[i](e), [&](const SemVal& v) { return step(i + 1, extend(e, v)); });
          };
          return step(0, g);
        };
      }
      case OpKind::Lam: {
        auto dom = std::make_shared<std::vector<SemVal>>(materialise_dom(m.carrier(info.ts[0])));
        Fn body = k[0];
        return [dom, body](const SemEnv& g) {
          std::vector<SemVal> t;
          t.reserve(dom->size());
          for (auto& x : *dom) t.push_back(body(extend(g, x)));
          return SemVal::table(std::move(t));
        };
      }
      case OpKind::App: {
        CarrierRef dom = m.carrier(info.ts[0]);
        Fn f = k[0], a = k[1];
        return [T_, dom, f, a](const SemEnv& g) {
          return T_->bind(f(g), [&](const SemVal& fv) {
            return T_->bind(a(g), [&](const SemVal& x) { return fv[dom->rank(x)]; });
          });
        };
      }
      case OpKind::VRec: {
        auto kids = k;
        return [kids](const SemEnv& g) {
          std::vector<SemVal> xs;
          for (auto& d : kids) xs.push_back(d(g));
          return SemVal::tuple(std::move(xs));
        };
      }
      case OpKind::Rec: {
        auto self = *this;
        return [self](const SemEnv& g) {
          return self.bind_all(g, 0, self.k.size(), {},
                               [&](std::vector<SemVal> xs) { return self.T.unit(SemVal::tuple(std::move(xs))); });
        };
      }
      case OpKind::RecMatch: {
        Fn scrut = k[0], body = k[1];
        return [T_, scrut, body](const SemEnv& g) {
          return T_->bind(scrut(g), [&](const SemVal& r) { return body(extend(g, r.items())); });
        };
      }
      case OpKind::VInj:
      case OpKind::Inj: {
        long tag = static_cast<long>(*info.ts[0]->field_index(info.ctor));
        Fn d = k[0];
        if (info.kind == OpKind::VInj) return [tag, d](const SemEnv& g) { return SemVal::inj(tag, d(g)); };
        return [T_, tag, d](const SemEnv& g) {
          return T_->bind(d(g), [&](const SemVal& v) { return T_->unit(SemVal::inj(tag, v)); });
        };
      }
      case OpKind::Case: {
        auto kids = k;
        return [T_, kids](const SemEnv& g) {
          return T_->bind(kids[0](g), [&](const SemVal& v) {
            return kids[static_cast<std::size_t>(v.num()) + 1](extend(g, v.payload()));
          });
        };
      }
      case OpKind::Lit: {
        if (info.lit < 0 || info.lit >= m.fragment().nat_bound)
          throw Error(ErrorKind::Evaluation,
                      "literal " + std::to_string(info.lit) + " outside nat_bound " + std::to_string(m.fragment().nat_bound));
        SemVal v = SemVal::atom(info.lit);
        return [v](const SemEnv&) { return v; };
      }
      case OpKind::Unroll: {
        Fn d = k[0];
        return [T_, d](const SemEnv& g) {
          return T_->bind(d(g), [&](const SemVal& n) {
            return T_->unit(n.num() == 0 ? SemVal::inj(0, SemVal::tuple({})) : SemVal::inj(1, SemVal::atom(n.num() - 1)));
          });
        };
      }
      case OpKind::Roll: {
        auto self = *this;
        long bound = m.fragment().nat_bound;
        return [self, bound](const SemEnv& g) {
          return self.T.bind(self.k[0](g), [&](const SemVal& v) {
            if (v.num() == 0) return self.T.unit(SemVal::atom(0));
            long n = v.payload().num() + 1;
            return n < bound ? self.T.unit(SemVal::atom(n)) : self.overflow();
          });
        };
      }
      case OpKind::Fold: {
        Fn scrut = k[0], body = k[1];
        return [T_, scrut, body](const SemEnv& g) {
          return T_->bind(scrut(g), [&](const SemVal& n) {
            SemVal r = body(extend(g, SemVal::inj(0, SemVal::tuple({}))));
            for (long i = 0; i < n.num(); ++i)
              r = T_->bind(r, [&](const SemVal& v) { return body(extend(g, SemVal::inj(1, v))); });
            return r;
          });
        };
      }
      case OpKind::For: {
        Fn init = k[0], body = k[1];
        bool unroll = opt.unroll_loops;
        std::uint64_t steps = sat_add(m.carrier(info.ts[0])->size(), 1);
        return [T_, init, body, unroll, steps](const SemEnv& g) {
          return T_->bind(init(g), [&](const SemVal& x0) {
            Kleisli step = [&](const SemVal& x) { return body(extend(g, x)); };
            return unroll ? elgot_unroll(*T_, step, x0, steps) : elgot_iterate(*T_, step, x0);
          });
        };
      }
      case OpKind::LetRec: {
        std::size_t n = info.ts.size();
        auto doms = std::make_shared<std::vector<std::vector<SemVal>>>();
        std::uint64_t height = 1;
        for (auto& f : info.ts) {
          doms->push_back(materialise_dom(m.carrier(f->dom())));
          height = sat_add(height, doms->back().size());
        }
        auto kids = k;
        SemVal none = *T.absent();
        auto hook = opt.on_fixpoint;
        return [kids, n, doms, height, none, hook](const SemEnv& g) {
          std::vector<SemVal> bottom;
          for (auto& d : *doms) bottom.push_back(SemVal::table(std::vector<SemVal>(d.size(), none)));
          auto phi = [&](const SemVal& fs) {
            SemEnv with_fs = extend(g, fs.items());
            std::vector<SemVal> out;
            for (std::size_t j = 0; j < n; ++j) {
              std::vector<SemVal> t;
              for (auto& p : (*doms)[j]) t.push_back(kids[j](extend(with_fs, p.items())));
              out.push_back(SemVal::table(std::move(t)));
            }
            return SemVal::tuple(std::move(out));
          };
          SemVal fix = kleene_fixpoint(phi, SemVal::tuple(std::move(bottom)), height);
          if (hook) hook(fix, phi);
          return kids[n](extend(g, fix.items()));
        };
      }
      case OpKind::Call: {
        CarrierRef dom = m.carrier(info.ts[0]->dom());
        auto self = *this;
        return [self, dom](const SemEnv& g) {
          return self.T.bind(self.k[0](g), [&](const SemVal& fv) {
            return self.bind_all(g, 1, self.k.size(), {},
                                 [&](std::vector<SemVal> xs) { return fv[dom->rank(SemVal::tuple(std::move(xs)))]; });
          });
        };
      }
    }
    throw Error(ErrorKind::MissingAlgebraCase, "no clause for " + std::string(cbv::family_name(info.kind)));
  }
};

}  // namespace

Denotation algebra_clause(const Model& m, const Operator& op, const Context& g, std::vector<Denotation> kids,
                          const DenoteOptions& opt) {
  cbv::OpInfo info = cbv::decode_label(op.label);
  if (info.kind == OpKind::For && !m.monad().elgot())
    throw Error(ErrorKind::UnsupportedCapability, "while loops need an Elgot monad; " + m.monad().name() + " is not one");
  if (info.kind == OpKind::LetRec && !m.monad().fixpoints())
    throw Error(ErrorKind::UnsupportedCapability,
                "recursion needs monadic fixed points; the " + m.monad().name() + " monad has none");
  std::vector<Fn> fns;
  for (auto& d : kids) fns.push_back(d.fn);
  Clauses c{m, m.monad(), info, std::move(fns)};
  Fn fn = c.build(opt);
  if (opt.corrupt && *opt.corrupt == info.kind && g.size() >= 2 && g[0] == g[1]) {
    fn = [fn](const SemEnv& e) {
      SemEnv x = e;
      std::swap(x[0], x[1]);
      return fn(x);
    };
  }
  return Denotation{op.result, g, std::move(fn)};
}

void require_capabilities(const Term& t, const Model& m) {
  if (t.kind() == Term::Kind::Meta) throw Error(ErrorKind::InvalidInput, "terms with metavariables have no denotation");
  if (t.kind() != Term::Kind::Op) return;
  cbv::OpInfo info = cbv::decode_label(t.op().label);
  if (info.kind == OpKind::For && !m.monad().elgot())
    throw Error(ErrorKind::UnsupportedCapability, "while loops need an Elgot monad; " + m.monad().name() + " is not one");
  if (info.kind == OpKind::LetRec && !m.monad().fixpoints())
    throw Error(ErrorKind::UnsupportedCapability,
                "recursion needs monadic fixed points; the " + m.monad().name() + " monad has none");
  for (auto& k : t.children()) require_capabilities(k, m);
}

Denotation denote(const Term& t, const Model& m, const DenoteOptions& opt) {
  require_capabilities(t, m);
  const Context& g = t.context();
  FoldAlgebra<Denotation, Denotation> alg;
  alg.var = [](const Denotation& d) { return d; };
  alg.op = [&](const OperatorRef& op, const Context& ctx, std::vector<Denotation> kids) {
    return algebra_clause(m, *op, ctx, std::move(kids), opt);
  };
  Env<Denotation> id{g, g, {}};
  for (std::size_t i = 0; i < g.size(); ++i) id.entries.push_back(var_denotation(g, i));
  return fold(t, alg, id, denotation_hooks());
}

// ---- tables ----

Table materialize(const Denotation& d, const Model& m, std::uint64_t limit) {
  CarrierRef c = m.context_carrier(d.ctx);
  Table t{d.sort, d.ctx, {}};
  std::uint64_t n = c->size();
  if (n > limit)
    throw Error(ErrorKind::BoundExceeded, "context " + to_string(d.ctx) + " has too many points to tabulate");
  t.values.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) t.values.push_back(d(c->unrank(i).items()));
  return t;
}

bool operator==(const Table& a, const Table& b) {
  return a.sort == b.sort && a.ctx == b.ctx && a.values == b.values;
}

std::string show_point(const Context& g, const SemVal& point, const Model& m, const std::vector<std::string>& names) {
  auto nm = names.size() == g.size() ? names : cbv::default_names(g.size());
  std::string s = "(";
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) s += ", ";
    s += nm[i] + " = " + m.show(cbv::parse_type(g[i]), point[i]);
  }
  return s + ")";
}

std::optional<std::string> table_difference(const Table& a, const Table& b, const Model& m) {
  if (a.sort != b.sort || a.ctx != b.ctx || a.values.size() != b.values.size())
    return "tables differ in shape: " + to_string(a.sort) + " over " + to_string(a.ctx) + " vs " + to_string(b.sort) +
           " over " + to_string(b.ctx);
  CarrierRef c = m.context_carrier(a.ctx);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (a.values[i] != b.values[i])
      return "at " + show_point(a.ctx, c->unrank(i), m) + ": " + m.show_sort(a.sort, a.values[i]) + " vs " +
             m.show_sort(b.sort, b.values[i]);
  return std::nullopt;
}

std::string show_table(const Table& t, const Model& m, const std::vector<std::string>& names) {
  CarrierRef c = m.context_carrier(t.ctx);
  std::string s;
  for (std::size_t i = 0; i < t.values.size(); ++i)
    s += show_point(t.ctx, c->unrank(i), m, names) + " |-> " + m.show_sort(t.sort, t.values[i]) + "\n";
  return s;
}

}  // namespace scopekit::sem
