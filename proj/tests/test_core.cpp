#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "scopekit/cbv/generate.hpp"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"
#include "scopekit/finpresheaf.hpp"
#include "scopekit/term.hpp"

using namespace scopekit;

namespace {

cbv::FragmentConfig functions() { return cbv::FragmentConfig{}.with(cbv::Extension::Functions); }

Term value_in(const std::string& text, const std::vector<std::pair<std::string, std::string>>& ctx,
              const std::string& type, const cbv::FragmentConfig& c = functions()) {
  std::vector<std::string> names;
  std::vector<cbv::TypeRef> types;
  for (auto& [n, t] : ctx) {
    names.push_back(n);
    types.push_back(cbv::parse_type(t));
  }
  OperatorTable table = cbv::build_operator_table(c);
  return cbv::typecheck(cbv::parse_value(text, names), cbv::make_context(types),
                        cbv::value_sort(cbv::parse_type(type)), c, table);
}

std::vector<oracle::Node> oracle_env(const SubstEnv& s) {
  std::vector<oracle::Node> out;
  for (auto& e : s.entries) out.push_back(oracle::from_term(e));
  return out;
}

}  // namespace

TEST_SUITE("core") {
  TEST_CASE("identity renamings") {
    CHECK(identity_renaming(Context{}).map().empty());
    CHECK(identity_renaming(Context{"b"}).map() == std::vector<std::size_t>{0});
  }

  TEST_CASE("composing a permuting renaming with itself") {
    Context g{"b1", "(b1->b2)", "(b1->b2)", "b1"};
    Renaming rho(g, g, {0, 2, 1, 0});
    CHECK(compose_renamings(identity_renaming(g), rho) == rho);
    CHECK(compose_renamings(rho, identity_renaming(g)) == rho);
    CHECK(compose_renamings(rho, rho).map() == std::vector<std::size_t>{0, 1, 2, 0});
  }

  TEST_CASE("composition agrees with function composition") {
    for (auto& g1 : enumerate_contexts({"b", "c"}, 2))
      for (auto& g2 : enumerate_contexts({"b", "c"}, 2))
        for (auto& g3 : enumerate_contexts({"b", "c"}, 2))
          for (auto& r1 : enumerate_renamings(g1, g2))
            for (auto& r2 : enumerate_renamings(g2, g3)) {
              Renaming r = compose_renamings(r1, r2);
              for (std::size_t y = 0; y < g3.size(); ++y) CHECK(r(y) == r1(r2(y)));
            }
  }

  TEST_CASE("concatenation") {
    Concat e = concat_contexts(Context{}, Context{"b", "c"});
    CHECK(e.context == Context{"b", "c"});
    CHECK(e.pi2 == identity_renaming(Context{"b", "c"}));
    Concat bc = concat_contexts(Context{"b"}, Context{"c"});
    CHECK(bc.context == Context{"b", "c"});
    CHECK(bc.pi1.map() == std::vector<std::size_t>{0});
    CHECK(bc.pi2.map() == std::vector<std::size_t>{1});
  }

  TEST_CASE("pairing is the unique map into a concatenation") {
    auto ctxs = enumerate_contexts({"b", "c"}, 2);
    for (auto& g : ctxs)
      for (auto& g1 : enumerate_contexts({"b", "c"}, 1))
        for (auto& g2 : enumerate_contexts({"b", "c"}, 1))
          for (auto& a : enumerate_renamings(g, g1))
            for (auto& b : enumerate_renamings(g, g2)) {
              Concat cat = concat_contexts(g1, g2);
              int matches = 0;
              for (auto& r : enumerate_renamings(g, cat.context))
                if (compose_renamings(r, cat.pi1) == a && compose_renamings(r, cat.pi2) == b) ++matches;
              CHECK(matches == 1);
              CHECK(pair_renamings(a, b) == compose_renamings(pair_renamings(a, b), identity_renaming(cat.context)));
              CHECK(compose_renamings(pair_renamings(a, b), cat.pi1) == a);
            }
  }

  TEST_CASE("variables of a sort") {
    CHECK(vars_of_sort(Context{}, "b").empty());
    CHECK(vars_of_sort(Context{"b", "c", "b"}, "b") == std::vector<std::size_t>{0, 2});
    for (auto& g1 : enumerate_contexts({"b", "c"}, 2))
      for (auto& g2 : enumerate_contexts({"b", "c"}, 2))
        for (auto& r : enumerate_renamings(g1, g2))
          for (std::size_t y : vars_of_sort(g2, "b")) {
            auto vs = vars_of_sort(g1, "b");
            CHECK(std::find(vs.begin(), vs.end(), r(y)) != vs.end());
          }
  }

  TEST_CASE("canonical text of a lambda") {
    CHECK(to_text(value_in("\\x : b. val x", {}, "(b->b)")) == "lam[b;b](val[b](#0))");
    CHECK(to_text(value_in("\\x : b. val x", {{"y", "b"}}, "(b->b)")) == "lam[b;b](val[b](#1))");
  }

  TEST_CASE("renaming by a permutation") {
    std::vector<std::pair<std::string, std::string>> g{
        {"x", "b"}, {"f", "(b->b)"}, {"g", "(b->b)"}, {"y", "b"}};
    Term t = value_in("g", g, "(b->b)");
    Renaming rho(t.context(), t.context(), {0, 2, 1, 0});
    CHECK(rename(t, rho) == value_in("f", g, "(b->b)"));
    CHECK(rename(t, identity_renaming(t.context())) == t);
  }

  TEST_CASE("substituting the same function for two variables") {
    Term t = value_in("\\x : b. (val f) ((val g) (val x))", {{"f", "(b->b)"}, {"g", "(b->b)"}}, "(b->b)");
    Term h = value_in("h", {{"h", "(b->b)"}}, "(b->b)");
    SubstEnv sigma = make_subst_env(t.context(), h.context(), {h, h});
    Term expected = value_in("\\x : b. (val h) ((val h) (val x))", {{"h", "(b->b)"}}, "(b->b)");
    CHECK(substitute(t, sigma) == expected);
    CHECK(oracle::substitute(oracle::from_term(t), oracle_env(sigma)) == oracle::from_term(expected));
  }

  TEST_CASE("random terms against the shifting oracle") {
    cbv::FragmentConfig c = cbv::FragmentConfig{}.with_mask((1u << cbv::kExtensionCount) - 1);
    OperatorTable table = cbv::build_operator_table(c);
    cbv::TermGenerator gen(c, table);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 150; ++i) {
      cbv::Sample s = gen.sample(rng);
      Context tgt = gen.covering_context(s.ctx, 1, rng);
      auto sigma = gen.random_env(s.ctx, tgt, 2, rng);
      if (!sigma) continue;
      CHECK(oracle::from_term(substitute(s.term, *sigma)) ==
            oracle::substitute(oracle::from_term(s.term), oracle_env(*sigma)));
      CHECK(substitute(s.term, identity_env(s.ctx)) == s.term);
      auto rs = enumerate_renamings(tgt, s.ctx);
      if (rs.empty()) continue;
      const Renaming& r = rs[std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng)];
      CHECK(oracle::from_term(rename(s.term, r)) ==
            oracle::rename(oracle::from_term(s.term), r.map(), tgt.size()));
    }
  }

  TEST_CASE("folds") {
    cbv::FragmentConfig c = cbv::FragmentConfig{}.with(cbv::Extension::Sequential).with(cbv::Extension::Functions);
    OperatorTable table = cbv::build_operator_table(c);
    cbv::TermGenerator gen(c, table);
    std::mt19937_64 rng(5);
    FoldAlgebra<std::size_t, Term> size;
    size.var = [](const Term&) { return std::size_t{1}; };
    size.op = [](const OperatorRef&, const Context&, std::vector<std::size_t> k) {
      std::size_t n = 1;
      for (auto x : k) n += x;
      return n;
    };
    FoldAlgebra<Term, Term> rebuild;
    rebuild.var = [](const Term& a) { return a; };
    rebuild.op = [](const OperatorRef& op, const Context& g, std::vector<Term> k) { return Term::op(op, g, std::move(k)); };
    for (int i = 0; i < 100; ++i) {
      cbv::Sample s = gen.sample(rng);
      CHECK(fold(s.term, size, identity_env(s.ctx), term_hooks()) == oracle::count_nodes(s.term));
      CHECK(fold(s.term, rebuild, identity_env(s.ctx), term_hooks()) == s.term);
    }
  }

  TEST_CASE("metavariables") {
    OperatorTable table = cbv::build_operator_table(functions());
    HoleSet holes;
    Context g{"b"};
    holes.declare("h", Sort::second("b"), g);
    Term t = parse_term_text("lam[b;b](?h{#1})", table, holes, g);
    CHECK(meta_substitute(t, meta_unit(holes)) == t);
    Term plain = parse_term_text("lam[b;b](val[b](#1))", table, holes, g);
    MetaSubst s;
    s.bodies.emplace("h", parse_term_text("val[b](#0)", table, holes, g));
    CHECK(meta_substitute(t, s) == plain);
    CHECK(meta_substitute(plain, s) == plain);
    CHECK_THROWS_AS(meta_substitute(t, MetaSubst{}), Error);
  }
}
