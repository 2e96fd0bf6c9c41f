#include <random>

#include "scopekit/cbv/generate.hpp"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/semantics/checks.hpp"

namespace scopekit::sem {

namespace {

const char* kSuite = "fixpoints";

bool uses(const Term& t, cbv::OpKind k) {
  if (t.kind() != Term::Kind::Op) return false;
  if (cbv::decode_label(t.op().label).kind == k) return true;
  for (auto& c : t.children())
    if (uses(c, k)) return true;
  return false;
}

Term program(const std::string& text, const cbv::FragmentConfig& c) {
  OperatorTable table = cbv::build_operator_table(c);
  return cbv::typecheck_program(cbv::parse_program(text), c, table);
}

cbv::FragmentConfig full(int nat_bound) {
  cbv::FragmentConfig c = cbv::FragmentConfig{}.with_mask((1u << cbv::kExtensionCount) - 1);
  c.nat_bound = nat_bound;
  return c;
}

const char* kFactorial = R"(n : Nat |-
letrec
  add(a : Nat, b : Nat) : Nat =
    case unroll (val a) of <0 u -> val b | 1+ p -> roll (<0:{}, 1+:Nat>.1+ val add @(val p, val b))>;
  mul(a : Nat, b : Nat) : Nat =
    case unroll (val a) of <0 u -> val 0 | 1+ p -> val add @(val b, val mul @(val p, val b))>;
  fact(k : Nat) : Nat =
    case unroll (val k) of <0 u -> val 1 | 1+ p -> val mul @(val k, val fact @(val p))>
in val fact @(val n))";

const char* kEvenOdd = R"(n : Nat |-
letrec
  even(k : Nat) : <f:{}, t:{}> =
    case unroll (val k) of <0 u -> <f:{}, t:{}>.t val {} | 1+ p -> val odd @(val p)>;
  odd(k : Nat) : <f:{}, t:{}> =
    case unroll (val k) of <0 u -> <f:{}, t:{}>.f val {} | 1+ p -> val even @(val p)>
in val even @(val n))";

std::optional<long> factorial_reference(long n, long bound) {
  long r = 1;
  for (long i = 2; i <= n; ++i) {
    r *= i;
    if (r >= bound) return std::nullopt;
  }
  return r;
}

// the table of a one-variable Nat program, checked point by point
void against_reference(Report& rep, const std::string& axiom, const std::string& text, int bound,
                       const std::function<SemVal(long)>& expected, const DenoteOptions& opt = {}) {
  cbv::FragmentConfig c = full(bound);
  Model model(ModelConfig{}, c);
  Term t = program(text, c);
  Table tab = materialize(denote(t, model, opt), model);
  CarrierRef pts = model.context_carrier(t.context());
  bool ok = true;
  std::string w;
  for (long n = 0; n < bound; ++n) {
    const SemVal& got = tab.values[pts->rank(SemVal::tuple({SemVal::atom(n)}))];
    if (ok && got != expected(n)) {
      ok = false;
      cbv::TypeRef ty = cbv::type_of_sort(t.sort());
      w = "at n = " + std::to_string(n) + ": " + model.show_comp(ty, got) + " but the reference gives " +
          model.show_comp(ty, expected(n));
    }
  }
  rep.add(kSuite, axiom, ok, bound, w);
}

}  // namespace

Report check_fixpoints(std::uint64_t seed, int programs) {
  Report rep;
  SemVal none = SemVal::inj(0, SemVal::tuple({}));
  auto some = [](SemVal v) { return SemVal::inj(1, std::move(v)); };

  // ---- while loops against bounded unrolling
  {
    cbv::FragmentConfig c = cbv::FragmentConfig{}
                                .with(cbv::Extension::Sequential)
                                .with(cbv::Extension::While)
                                .with(cbv::Extension::Naturals);
    OperatorTable table = cbv::build_operator_table(c);
    cbv::GenOptions g;
    g.max_depth = 5;
    g.max_ctx = 2;
    cbv::TermGenerator gen(c, table, g);
    Model model(ModelConfig{}, c);
    std::mt19937_64 rng(seed);
    DenoteOptions unrolled;
    unrolled.unroll_loops = true;
    CheckRecord rec{kSuite, "loop denotation equals bounded unrolling", true, 0, {}};
    long long diverging = 0;
    for (long attempt = 0; rec.cases < programs && attempt < 2000L * programs; ++attempt) {
      cbv::TypeRef ty = gen.pool()[std::uniform_int_distribution<std::size_t>(0, gen.pool().size() - 1)(rng)];
      Context ctx = gen.random_context(rng, std::uniform_int_distribution<std::size_t>(0, 2)(rng));
      auto m = gen.comp(ty, ctx, std::uniform_int_distribution<int>(3, 5)(rng), rng);
      if (!m || !uses(*m, cbv::OpKind::For)) continue;
      Table a = materialize(denote(*m, model), model);
      Table b = materialize(denote(*m, model, unrolled), model);
      ++rec.cases;
      for (auto& v : a.values)
        if (v == none) {
          ++diverging;
          break;
        }
      if (rec.pass)
        if (auto d = table_difference(a, b, model)) {
          rec.pass = false;
          rec.witness = cbv::pretty(*m, cbv::default_names(ctx.size())) + ": " + *d;
        }
    }
    if (rec.cases < programs && rec.pass) {
      rec.pass = false;
      rec.witness = "only " + std::to_string(rec.cases) + " loop programs generated";
    }
    rep.add(rec);
    rep.add(kSuite, "loop programs with a divergent point", true, diverging,
            std::to_string(diverging) + " of " + std::to_string(rec.cases) + " programs diverge somewhere");

    auto all_none = [&](const std::string& axiom, const std::string& text) {
      Term t = program(text, c);
      Table tab = materialize(denote(t, model), model);
      bool ok = true;
      for (auto& v : tab.values) ok = ok && v == none;
      rep.add(kSuite, axiom, ok, static_cast<long long>(tab.values.size()), show_table(tab, model));
    };
    all_none("self-loop diverges", "x : b |- for i = val x in <Cont:b, Done:b>.Cont val i");
    all_none("self-loop diverges", "n : Nat |- for i = val n in <Cont:Nat, Done:b>.Cont val i");
    all_none("two-state cycle diverges",
             "n : Nat |- for i = val n in case unroll (val i) of <0 u -> <Cont:Nat, Done:Nat>.Cont val 1 "
             "| 1+ p -> <Cont:Nat, Done:Nat>.Cont val 0>");
  }

  // ---- recursion against reference evaluators
  const int bound = 25;
  long long fix_checks = 0;
  bool fix_ok = true;
  std::string fix_w;
  DenoteOptions watch;
  watch.on_fixpoint = [&](const SemVal& fix, const std::function<SemVal(const SemVal&)>& phi) {
    ++fix_checks;
    if (fix_ok && phi(fix) != fix) {
      fix_ok = false;
      fix_w = "phi(fix) differs from fix = " + fix.str();
    }
  };
  against_reference(rep, "factorial matches the reference", kFactorial, bound, [&](long n) {
    auto r = factorial_reference(n, bound);
    return r ? some(SemVal::atom(*r)) : none;
  }, watch);
  against_reference(rep, "even/odd matches the reference", kEvenOdd, bound, [&](long n) {
    return some(SemVal::inj(n % 2 == 0 ? 1 : 0, SemVal::tuple({})));
  }, watch);

  // generated recursive programs
  {
    cbv::FragmentConfig c = cbv::FragmentConfig{}
                                .with(cbv::Extension::Sequential)
                                .with(cbv::Extension::Recursion)
                                .with(cbv::Extension::Variants);
    OperatorTable table = cbv::build_operator_table(c);
    cbv::GenOptions g;
    g.max_depth = 5;
    g.max_ctx = 2;
    cbv::TermGenerator gen(c, table, g);
    Model model(ModelConfig{}, c);
    std::mt19937_64 rng(seed + 1);
    int done = 0;
    for (long attempt = 0; done < programs && attempt < 2000L * programs; ++attempt) {
      cbv::TypeRef ty = gen.pool()[std::uniform_int_distribution<std::size_t>(0, gen.pool().size() - 1)(rng)];
      Context ctx = gen.random_context(rng, std::uniform_int_distribution<std::size_t>(0, 2)(rng));
      auto m = gen.comp(ty, ctx, std::uniform_int_distribution<int>(3, 5)(rng), rng);
      if (!m || !uses(*m, cbv::OpKind::LetRec)) continue;
      materialize(denote(*m, model, watch), model);
      ++done;
    }
  }
  rep.add(kSuite, "Kleene result is a fixed point", fix_ok && fix_checks > 0, fix_checks, fix_w);

  // leastness, by enumerating every candidate at a tiny size
  {
    cbv::FragmentConfig c = cbv::FragmentConfig{}.with(cbv::Extension::Recursion).with(cbv::Extension::Variants);
    Model model(ModelConfig{}, c);
    CarrierRef cand = product({power(2, model.comp_carrier(cbv::Type::base("b")))});
    CheckRecord rec{kSuite, "Kleene result is the least fixed point", true, 0, {}};
    for (const char* text :
         {"x : b |- letrec f(y : b) : b = val f @(val y) in val f @(val x)",
          "x : b |- letrec f(y : b) : b = val y in val f @(val x)",
          "x : b |- letrec f(y : b) : b = val f @(val x) in val f @(val x)",
          "x : b |- letrec f(y : b) : b = case val <0:b, 1:b>.0 x of <0 z -> val f @(val z) | 1 z -> val z> in val f @(val x)"}) {
      DenoteOptions least;
      least.on_fixpoint = [&](const SemVal& fix, const std::function<SemVal(const SemVal&)>& phi) {
        for (auto& other : cand->elements()) {
          if (phi(other) != other) continue;
          ++rec.cases;
          if (rec.pass && !option_leq(fix, other)) {
            rec.pass = false;
            rec.witness = std::string(text) + ": " + fix.str() + " is not below the fixed point " + other.str();
          }
        }
      };
      try {
        materialize(denote(program(text, c), model, least), model);
      } catch (const Error& e) {
        if (rec.pass) {
          rec.pass = false;
          rec.witness = std::string(text) + ": " + e.what();
        }
      }
    }
    rep.add(rec);
  }
  return rep;
}

}  // namespace scopekit::sem
