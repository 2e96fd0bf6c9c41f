#include "scopekit/semantics/monad.hpp"

#include <map>
#include <set>

#include "scopekit/error.hpp"

namespace scopekit::sem {

namespace {

class Identity final : public Monad {
 public:
  std::string name() const override { return "identity"; }
  SemVal unit(const SemVal& v) const override { return v; }
  SemVal bind(const SemVal& m, const Kleisli& k) const override { return k(m); }
  CarrierRef lift(const CarrierRef& x) const override { return x; }
};

class Option final : public Monad {
 public:
  std::string name() const override { return "option"; }
  SemVal unit(const SemVal& v) const override { return SemVal::inj(1, v); }
  SemVal bind(const SemVal& m, const Kleisli& k) const override { return m.num() == 0 ? m : k(m.payload()); }
  CarrierRef lift(const CarrierRef& x) const override { return sum({product({}), x}); }
  bool elgot() const override { return true; }
  bool fixpoints() const override { return true; }
  std::optional<SemVal> absent() const override { return SemVal::inj(0, SemVal::tuple({})); }
};

class Exception final : public Monad {
 public:
  explicit Exception(int e) : e_(e) {}
  std::string name() const override { return "exception"; }
  SemVal unit(const SemVal& v) const override { return SemVal::inj(1, v); }
  SemVal bind(const SemVal& m, const Kleisli& k) const override { return m.num() == 0 ? m : k(m.payload()); }
  CarrierRef lift(const CarrierRef& x) const override {
    return sum({atoms(static_cast<std::uint64_t>(e_)), x});
  }

 private:
  int e_;
};

class Writer final : public Monad {
 public:
  explicit Writer(int n) : n_(n) {}
  std::string name() const override { return "writer"; }
  SemVal unit(const SemVal& v) const override { return SemVal::tuple({SemVal::atom(0), v}); }
  SemVal bind(const SemVal& m, const Kleisli& k) const override {
    SemVal r = k(m[1]);
    return SemVal::tuple({SemVal::atom((m[0].num() + r[0].num()) % n_), r[1]});
  }
  CarrierRef lift(const CarrierRef& x) const override {
    return product({atoms(static_cast<std::uint64_t>(n_)), x});
  }

 private:
  int n_;
};

class State final : public Monad {
 public:
  explicit State(int s) : s_(s) {}
  std::string name() const override { return "state"; }
  SemVal unit(const SemVal& v) const override {
    std::vector<SemVal> t;
    for (int s = 0; s < s_; ++s) t.push_back(SemVal::tuple({v, SemVal::atom(s)}));
    return SemVal::table(std::move(t));
  }
  SemVal bind(const SemVal& m, const Kleisli& k) const override {
    std::vector<SemVal> t;
    for (int s = 0; s < s_; ++s) {
      const SemVal& p = m[static_cast<std::size_t>(s)];
      t.push_back(k(p[0])[static_cast<std::size_t>(p[1].num())]);
    }
    return SemVal::table(std::move(t));
  }
  CarrierRef lift(const CarrierRef& x) const override {
    auto s = static_cast<std::uint64_t>(s_);
    return power(s, product({x, atoms(s)}));
  }

 private:
  int s_;
};

class Powerset final : public Monad {
 public:
  std::string name() const override { return "powerset"; }
  SemVal unit(const SemVal& v) const override { return SemVal::set({v}); }
  SemVal bind(const SemVal& m, const Kleisli& k) const override {
    std::vector<SemVal> out;
    for (auto& v : m.items()) {
      SemVal r = k(v);
      for (auto& w : r.items()) out.push_back(w);
    }
    return SemVal::set(std::move(out));
  }
  CarrierRef lift(const CarrierRef& x) const override { return powerset(x); }
};

}  // namespace

const std::vector<std::string>& monad_names() {
  static const std::vector<std::string> names{"identity", "option", "exception", "writer", "state", "powerset"};
  return names;
}

MonadRef make_monad(const MonadSpec& spec) {
  if (spec.name == "identity") return std::make_shared<Identity>();
  if (spec.name == "option") return std::make_shared<Option>();
  if (spec.exceptions < 1 || spec.monoid < 1 || spec.states < 1)
    throw Error(ErrorKind::InvalidInput, "monad parameters must be positive");
  if (spec.name == "exception") return std::make_shared<Exception>(spec.exceptions);
  if (spec.name == "writer") return std::make_shared<Writer>(spec.monoid);
  if (spec.name == "state") return std::make_shared<State>(spec.states);
  if (spec.name == "powerset") return std::make_shared<Powerset>();
  throw Error(ErrorKind::InvalidInput, "unknown monad '" + spec.name + "'");
}

ParamBind standard_bind(const MonadRef& m) {
  return [m](const auto& f, const SemVal& a, const SemVal& mx) {
    return m->bind(mx, [&](const SemVal& x) { return f(a, x); });
  };
}

ParamBind broken_bind(const MonadRef& m, SemVal a0) {
  return [m, a0](const auto& f, const SemVal&, const SemVal& mx) {
    return m->bind(mx, [&](const SemVal& x) { return f(a0, x); });
  };
}

// ---- monad laws ----

namespace {

using Fn2 = std::function<SemVal(const SemVal&, const SemVal&)>;

// f : a x x -> T y stored as one slice (a table over x) per element of a
struct Slices {
  std::vector<SemVal> by_a;
  Fn2 fn() const {
    return [this](const SemVal& a, const SemVal& x) { return by_a.at(static_cast<std::size_t>(a.num()))[static_cast<std::size_t>(x.num())]; };
  }
};

class LawRun {
 public:
  LawRun(const MonadRef& m, const MonadLawOptions& opt, ParamBind bind)
      : m_(m), opt_(opt), bind_(bind ? std::move(bind) : standard_bind(m)), rng_(opt.seed) {}

  Report run() {
    int n = opt_.exhaustive_max;
    for (int a = 1; a <= n; ++a)
      for (int x = 0; x <= n; ++x)
        for (int y = 0; y <= n; ++y) {
          monoidal_unit(a, x, y, false);
          left_unit(a, x, y, false);
          if (y == 0) right_unit(a, x, false);
          for (int a2 = 1; a2 <= n; ++a2) naturality(a2, a, x, y, false);
          for (int z = 0; z <= n; ++z) assoc(a, x, y, z, false);
        }
    int s = opt_.sampled_size;
    monoidal_unit(s, s, s, true);
    left_unit(s, s, s, true);
    right_unit(s, s, true);
    naturality(s, s, s, s, true);
    assoc(s, s, s, s, true);
    for (auto& [axiom, rec] : records_) report_.add(rec);
    report_.add("monad-laws", m_->name() + ": exhaustive up to size " + std::to_string(n), exhaustive_, 1,
                exhaustive_ ? std::string() : "enumeration limit reached; some small sizes were only sampled");
    return report_;
  }

 private:
  void record(const std::string& axiom, bool ok, const std::function<std::string()>& witness) {
    auto it = records_.find(axiom);
    if (it == records_.end()) it = records_.emplace(axiom, CheckRecord{"monad-laws", m_->name() + ": " + axiom, true, 0, {}}).first;
    ++it->second.cases;
    if (!ok && it->second.pass) {
      it->second.pass = false;
      it->second.witness = witness();
    }
  }

  CarrierRef T(int n) const { return m_->lift(atoms(static_cast<std::uint64_t>(n))); }
  std::vector<SemVal> all(const CarrierRef& c) const { return c->elements(); }
  SemVal random(const CarrierRef& c) {
    return c->unrank(std::uniform_int_distribution<std::uint64_t>(0, c->size() - 1)(rng_));
  }
  static SemVal at(long i) { return SemVal::atom(i); }

  // Either every combination (sampled = false, sizes permitting) or opt_.samples random ones.
  // `dims` are the carriers of the free choices; body gets one element of each.
  void sweep(const std::vector<CarrierRef>& dims, bool sampled, const std::function<void(const std::vector<SemVal>&)>& body) {
    std::uint64_t total = 1;
    for (auto& d : dims) total = sat_mul(total, d->size());
    if (total == 0) return;
    if (!sampled && total <= opt_.slice_limit) {
      std::vector<SemVal> pick(dims.size());
      for (std::uint64_t i = 0; i < total; ++i) {
        std::uint64_t r = i;
        for (std::size_t k = dims.size(); k-- > 0;) {
          pick[k] = dims[k]->unrank(r % dims[k]->size());
          r /= dims[k]->size();
        }
        body(pick);
      }
      return;
    }
    if (!sampled) exhaustive_ = false;
    std::vector<SemVal> pick(dims.size());
    for (int i = 0; i < opt_.samples; ++i) {
      for (std::size_t k = 0; k < dims.size(); ++k) pick[k] = random(dims[k]);
      body(pick);
    }
  }

  // a function a x x -> T y: every slice defaulted except the one at `alpha`, which is `slice`.
  // Sampled runs randomise all slices.
  Slices make_f(int a, int x, const CarrierRef& ty, long alpha, const SemVal& slice, bool sampled) {
    CarrierRef sl = power(static_cast<std::uint64_t>(x), ty);
    Slices f;
    for (int i = 0; i < a; ++i) f.by_a.push_back(i == alpha ? slice : sampled ? random(sl) : sl->unrank(0));
    return f;
  }

  void monoidal_unit(int a, int x, int y, bool sampled) {
    auto ty = T(y);
    auto sl = power(static_cast<std::uint64_t>(x), ty);
    sweep({atoms(a), sl, T(x)}, sampled, [&](const std::vector<SemVal>& p) {
      Slices f1{{p[1]}};
      Slices fa;
      for (int i = 0; i < a; ++i) fa.by_a.push_back(p[1]);
      SemVal lhs = bind_(f1.fn(), at(0), p[2]);
      SemVal rhs = bind_(fa.fn(), p[0], p[2]);
      record("monoidal unit", lhs == rhs, [&] {
        return "|a|=" + std::to_string(a) + " a=" + p[0].str() + " f=" + p[1].str() + " m=" + p[2].str() +
               ": bind_1 gives " + lhs.str() + ", bind_a(f.(!xid)) gives " + rhs.str();
      });
    });
  }

  void left_unit(int a, int x, int y, bool sampled) {
    if (x == 0) return;
    auto ty = T(y);
    auto sl = power(static_cast<std::uint64_t>(x), ty);
    sweep({atoms(a), sl, atoms(x)}, sampled, [&](const std::vector<SemVal>& p) {
      Slices f = make_f(a, x, ty, p[0].num(), p[1], sampled);
      SemVal lhs = bind_(f.fn(), p[0], m_->unit(p[2]));
      SemVal rhs = f.fn()(p[0], p[2]);
      record("monadic unit (left)", lhs == rhs, [&] {
        return "a=" + p[0].str() + " x=" + p[2].str() + " f_a=" + p[1].str() + ": bind f (a, return x) = " + lhs.str() +
               " but f(a,x) = " + rhs.str();
      });
    });
  }

  void right_unit(int a, int x, bool sampled) {
    sweep({atoms(a), T(x)}, sampled, [&](const std::vector<SemVal>& p) {
      Fn2 ret = [&](const SemVal&, const SemVal& v) { return m_->unit(v); };
      SemVal lhs = bind_(ret, p[0], p[1]);
      record("monadic unit (right)", lhs == p[1], [&] {
        return "a=" + p[0].str() + " m=" + p[1].str() + ": bind (return.pi2) gives " + lhs.str();
      });
    });
  }

  // h : a2 -> a, f : a x x -> T y; the slice of f at h(alpha2) is enumerated
  void naturality(int a2, int a, int x, int y, bool sampled) {
    auto ty = T(y);
    auto sl = power(static_cast<std::uint64_t>(x), ty);
    auto hs = power(static_cast<std::uint64_t>(a2), atoms(a));
    sweep({atoms(a2), hs, sl, T(x)}, sampled, [&](const std::vector<SemVal>& p) {
      const SemVal& h = p[1];
      long target = h[static_cast<std::size_t>(p[0].num())].num();
      Slices f = make_f(a, x, ty, target, p[2], sampled);
      Fn2 fh = [&](const SemVal& u, const SemVal& v) { return f.fn()(h[static_cast<std::size_t>(u.num())], v); };
      SemVal lhs = bind_(fh, p[0], p[3]);
      SemVal rhs = bind_(f.fn(), h[static_cast<std::size_t>(p[0].num())], p[3]);
      record("naturality", lhs == rhs, [&] {
        return "|a'|=" + std::to_string(a2) + " |a|=" + std::to_string(a) + " h=" + h.str() + " a'=" + p[0].str() +
               " m=" + p[3].str() + ": bind(f.(h x id)) = " + lhs.str() + " but bind f.(h x id) = " + rhs.str();
      });
    });
  }

  void assoc(int a, int x, int y, int z, bool sampled) {
    auto ty = T(y), tz = T(z);
    auto fsl = power(static_cast<std::uint64_t>(x), ty);
    auto gsl = power(static_cast<std::uint64_t>(y), tz);
    sweep({atoms(a), fsl, gsl, T(x)}, sampled, [&](const std::vector<SemVal>& p) {
      Slices f = make_f(a, x, ty, p[0].num(), p[1], sampled);
      Slices g = make_f(a, y, tz, p[0].num(), p[2], sampled);
      Fn2 ff = f.fn(), gg = g.fn();
      SemVal lhs = bind_(gg, p[0], bind_(ff, p[0], p[3]));
      Fn2 composite = [&](const SemVal& u, const SemVal& v) { return bind_(gg, u, ff(u, v)); };
      SemVal rhs = bind_(composite, p[0], p[3]);
      record("associativity", lhs == rhs, [&] {
        return "a=" + p[0].str() + " f_a=" + p[1].str() + " g_a=" + p[2].str() + " m=" + p[3].str() + ": " + lhs.str() +
               " vs " + rhs.str();
      });
    });
  }

  MonadRef m_;
  MonadLawOptions opt_;
  ParamBind bind_;
  std::mt19937_64 rng_;
  std::map<std::string, CheckRecord> records_;
  bool exhaustive_ = true;
  Report report_;
};

}  // namespace

Report check_monad_laws(const MonadRef& m, const MonadLawOptions& opt, ParamBind bind) {
  return LawRun(m, opt, std::move(bind)).run();
}

// ---- iteration and fixed points ----

namespace {
void need_partial(const Monad& m, const char* what) {
  if (!m.absent()) throw Error(ErrorKind::UnsupportedCapability, std::string(what) + " is not available for the " + m.name() + " monad");
}
}  // namespace

SemVal elgot_iterate(const Monad& m, const Kleisli& step, const SemVal& x0) {
  need_partial(m, "Elgot iteration");
  const SemVal none = *m.absent();
  std::set<SemVal> seen;
  SemVal x = x0;
  while (seen.insert(x).second) {
    SemVal r = step(x);
    if (r == none) return none;
    const SemVal& v = r.payload();
    if (v.num() == kDoneTag) return m.unit(v.payload());
    x = v.payload();
  }
  return none;
}

SemVal elgot_unroll(const Monad& m, const Kleisli& step, const SemVal& x0, std::uint64_t unrollings) {
  need_partial(m, "Elgot iteration");
  const SemVal none = *m.absent();
  SemVal x = x0;
  for (std::uint64_t i = 0; i < unrollings; ++i) {
    SemVal r = step(x);
    if (r == none) return none;
    const SemVal& v = r.payload();
    if (v.num() == kDoneTag) return m.unit(v.payload());
    x = v.payload();
  }
  return none;
}

SemVal kleene_fixpoint(const std::function<SemVal(const SemVal&)>& phi, const SemVal& bottom, std::uint64_t bound) {
  SemVal cur = bottom;
  for (std::uint64_t i = 0; i <= bound; ++i) {
    SemVal next = phi(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
  throw Error(ErrorKind::NonConvergence, "no fixed point after " + std::to_string(bound) + " iterations");
}

bool option_leq(const SemVal& a, const SemVal& b) {
  if (a.kind() == SemVal::Kind::Tuple || a.kind() == SemVal::Kind::Table) {
    if (b.kind() != a.kind() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!option_leq(a[i], b[i])) return false;
    return true;
  }
  return (a.kind() == SemVal::Kind::Inj && a.num() == 0) || a == b;
}

}  // namespace scopekit::sem
