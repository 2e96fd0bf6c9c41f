#include "doctest.h"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/semantics/checks.hpp"

using namespace scopekit;
using namespace scopekit::sem;
using cbv::Extension;
using cbv::FragmentConfig;

namespace {

ModelConfig with_monad(const std::string& name, int base = 2) {
  ModelConfig m;
  m.monad.name = name;
  m.default_base_size = base;
  return m;
}

Term program(const std::string& text, const FragmentConfig& c) {
  OperatorTable table = cbv::build_operator_table(c);
  return cbv::typecheck_program(cbv::parse_program(text), c, table);
}

Table run(const std::string& text, const FragmentConfig& c, const ModelConfig& mc = with_monad("option")) {
  Model m(mc, c);
  return materialize(denote(program(text, c), m), m);
}

const SemVal kNone = SemVal::inj(0, SemVal::tuple({}));
SemVal some(SemVal v) { return SemVal::inj(1, std::move(v)); }

}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("carrier sizes") {
    FragmentConfig c = FragmentConfig{}.with_mask(0x7f);
    c.nat_bound = 3;
    Model m(with_monad("option"), c);
    CHECK(carrier_size(m, cbv::parse_type("{}")) == 1);
    CHECK(carrier_size(m, cbv::parse_type("(b->b)")) == 9);
    CHECK(carrier_size(m, cbv::maybe_type(cbv::Type::nat())) == 4);
  }

  TEST_CASE("variables denote projections") {
    FragmentConfig base;
    Model m(with_monad("identity"), base);
    Term x = cbv::typecheck(cbv::parse_value("x", {"x"}), Context{"b"}, Sort::first("b"), base,
                            cbv::build_operator_table(base));
    Table t = materialize(denote(x, m), m);
    REQUIRE(t.values.size() == 2);
    CHECK(t.values[0] == SemVal::atom(0));
    CHECK(t.values[1] == SemVal::atom(1));
    Table v = run("x : b |- val x", base, with_monad("identity"));
    CHECK(v.values == t.values);
  }

  TEST_CASE("let y = val x in val y equals val x under every monad") {
    FragmentConfig seq = FragmentConfig{}.with(Extension::Sequential);
    for (auto& name : monad_names()) {
      Model m(with_monad(name), seq);
      Table a = materialize(denote(program("x : b |- let y = val x in val y", seq), m), m);
      Table b = materialize(denote(program("x : b |- val x", seq), m), m);
      CHECK_MESSAGE(!table_difference(a, b, m), name);
    }
  }

  TEST_CASE("monad laws and a broken bind") {
    for (auto& name : {"identity", "option", "exception", "writer", "powerset"}) {
      MonadSpec spec;
      spec.name = name;
      auto m = make_monad(spec);
      CHECK_MESSAGE(check_monad_laws(m).all_pass(), name);
      CHECK_FALSE(check_monad_laws(m, {}, broken_bind(m, SemVal::atom(0))).all_pass());
    }
  }

  TEST_CASE("Elgot iteration") {
    MonadSpec spec;
    auto opt = make_monad(spec);
    auto done = [&](long v) { return opt->unit(SemVal::inj(kDoneTag, SemVal::atom(v))); };
    auto cont = [&](const SemVal& x) { return opt->unit(SemVal::inj(kContTag, x)); };
    CHECK(elgot_iterate(*opt, [&](const SemVal&) { return done(0); }, SemVal::atom(2)) == some(SemVal::atom(0)));
    CHECK(elgot_iterate(*opt, cont, SemVal::atom(2)) == kNone);
    Kleisli countdown = [&](const SemVal& x) { return x.num() == 0 ? done(7) : cont(SemVal::atom(x.num() - 1)); };
    CHECK(elgot_iterate(*opt, countdown, SemVal::atom(3)) == elgot_unroll(*opt, countdown, SemVal::atom(3), 4));
    CHECK(elgot_unroll(*opt, countdown, SemVal::atom(3), 3) == kNone);
    MonadSpec id;
    id.name = "identity";
    CHECK_THROWS_AS(elgot_iterate(*make_monad(id), countdown, SemVal::atom(0)), Error);
  }

  TEST_CASE("Kleene iteration") {
    SemVal bottom = SemVal::table({kNone, kNone});
    CHECK(kleene_fixpoint([](const SemVal& f) { return f; }, bottom, 4) == bottom);
    CHECK_THROWS_AS(kleene_fixpoint([](const SemVal& f) { return SemVal::tuple({f}); }, bottom, 4), Error);
    FragmentConfig c = FragmentConfig{}.with(Extension::Recursion);
    Table t = run("x : b |- letrec f(y : b) : b = val f @(val y) in val f @(val x)", c);
    for (auto& v : t.values) CHECK(v == kNone);
  }

  TEST_CASE("recursion against direct evaluation") {
    FragmentConfig c = FragmentConfig{}.with_mask(0x7f);
    c.nat_bound = 4;
    Table t = run(R"(n : Nat |-
letrec
  even(k : Nat) : <f:{}, t:{}> =
    case unroll (val k) of <0 u -> <f:{}, t:{}>.t val {} | 1+ p -> val odd @(val p)>;
  odd(k : Nat) : <f:{}, t:{}> =
    case unroll (val k) of <0 u -> <f:{}, t:{}>.f val {} | 1+ p -> val even @(val p)>
in val even @(val n))", c);
    REQUIRE(t.values.size() == 4);
    for (long n = 0; n < 4; ++n) CHECK(t.values[n] == some(SemVal::inj(n % 2 == 0 ? 1 : 0, SemVal::tuple({}))));
  }

  TEST_CASE("capabilities") {
    FragmentConfig c = FragmentConfig{}.with(Extension::While);
    CHECK_THROWS_AS(run("x : b |- for i = val x in <Cont:b, Done:b>.Cont val i", c, with_monad("identity")), Error);
    Table spin = run("x : b |- for i = val x in <Cont:b, Done:b>.Cont val i", c);
    for (auto& v : spin.values) CHECK(v == kNone);
  }

  TEST_CASE("compatibility on small fragments") {
    for (auto mask : {0u, 2u}) {
      FragmentConfig c = FragmentConfig{}.with_mask(mask);
      for (auto& name : {"identity", "option"}) {
        Model m(with_monad(name), c);
        CHECK(check_compatibility(c, m).all_pass());
      }
    }
    FragmentConfig fun = FragmentConfig{}.with(Extension::Functions);
    Model m(with_monad("option"), fun);
    CompatOptions broken;
    broken.denote.corrupt = cbv::OpKind::App;
    Report r = check_compatibility(fun, m, broken);
    CHECK_FALSE(r.all_pass());
  }

  TEST_CASE("substitution lemma special cases") {
    FragmentConfig c = FragmentConfig{}.with_mask(0x7f);
    Model m(with_monad("option"), c);
    OperatorTable table = cbv::build_operator_table(c);
    Context g{"b", "(b->b)"};
    Term v = cbv::typecheck(cbv::parse_computation("(val f) (val x)", {"x", "f"}), g, Sort::second("b"), c, table);
    CHECK_FALSE(lemma_witness(v, identity_env(g), m));
    Term x = Term::var(g, 0);
    Context h{"b"};
    SubstEnv sigma = make_subst_env(g, h,
                                    {Term::var(h, 0), cbv::typecheck(cbv::parse_value("\\y : b. val z", {"z"}), h,
                                                                     Sort::first("(b->b)"), c, table)});
    CHECK_FALSE(lemma_witness(x, sigma, m));
    CHECK_FALSE(lemma_witness(v, sigma, m));
    LemmaOptions lo;
    lo.depth = 3;
    lo.cases = 40;
    CHECK(check_substitution_lemma(c, m, lo).all_pass());
  }
}
