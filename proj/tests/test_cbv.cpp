#include <random>
#include <set>

#include "doctest.h"
#include "scopekit/cbv/generate.hpp"
#include "scopekit/cbv/operators.hpp"
#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/typecheck.hpp"

using namespace scopekit;
using cbv::Extension;
using cbv::FragmentConfig;

namespace {

std::string fulfillment(const FragmentConfig& c, const std::string& need) {
  for (auto& n : cbv::needs_of(c))
    if (n.need == need) return n.fulfillment;
  return {};
}

Term check_in(const std::string& text, const Context& ctx, const std::vector<std::string>& names, const Sort& s,
              const FragmentConfig& c) {
  OperatorTable table = cbv::build_operator_table(c);
  auto surface = s.is_first() ? cbv::parse_value(text, names) : cbv::parse_computation(text, names);
  return cbv::typecheck(surface, ctx, s, c, table);
}

}  // namespace

TEST_SUITE("cbv") {
  TEST_CASE("there are 128 fragments") {
    auto all = cbv::all_fragments();
    CHECK(all.size() == 128);
    std::set<std::string> names;
    for (auto& c : all) names.insert(c.name());
    CHECK(names.size() == 128);
    CHECK(cbv::parse_fragment("base").mask == 0);
    CHECK(cbv::parse_fragment("all").mask == 127);
    CHECK(cbv::parse_fragment("functions+records").has(Extension::Records));
  }

  TEST_CASE("types of the base fragment are the base types") {
    FragmentConfig c;
    c.base_types = {"b", "c"};
    for (auto& t : cbv::enumerate_types(c, 3)) CHECK(t->kind() == cbv::Type::Kind::Base);
    CHECK(cbv::needs_of(c).empty());
  }

  TEST_CASE("fulfillments") {
    FragmentConfig nat = FragmentConfig{}.with(Extension::Naturals);
    CHECK(fulfillment(nat, "Maybe t") == "<0:{},1+:t>");
    CHECK(cbv::type_valid(*cbv::maybe_type(cbv::Type::nat()), nat));
    CHECK_FALSE(cbv::type_valid(*cbv::parse_type("<a:b, c:b>"), nat));
    FragmentConfig rec = FragmentConfig{}.with(Extension::Recursion).with(Extension::Functions).with(Extension::Records);
    auto f = cbv::recreq_type({cbv::Type::base("b"), cbv::Type::nat()}, cbv::Type::base("b"));
    CHECK(f->kind() == cbv::Type::Kind::Fun);
    CHECK(f->dom()->kind() == cbv::Type::Kind::Record);
    CHECK(f->dom()->row().size() == 2);
    CHECK(cbv::type_valid(*cbv::recreq_type({cbv::Type::base("b")}, cbv::Type::base("b")), rec));
    FragmentConfig loop = FragmentConfig{}.with(Extension::While);
    CHECK(cbv::type_valid(*cbv::loop_type(cbv::Type::base("b"), cbv::Type::base("b")), loop));
  }

  TEST_CASE("recursive function types without records") {
    for (auto mask : {0u, 1u << static_cast<int>(Extension::Functions)}) {
      FragmentConfig c = FragmentConfig{}.with_mask(mask).with(Extension::Recursion);
      CHECK(cbv::type_valid(*cbv::recreq_type({cbv::Type::base("b")}, cbv::Type::base("b")), c));
      CHECK_FALSE(cbv::type_valid(*cbv::parse_type("{l:b}"), c));
    }
  }

  TEST_CASE("operators of the fragments") {
    auto b = cbv::Type::base("b");
    FragmentConfig base;
    cbv::OpInfo lam = cbv::decode_label(cbv::label_lam(b, b));
    CHECK(cbv::operator_problem(lam, base));
    CHECK_FALSE(cbv::operator_problem(cbv::decode_label(cbv::label_val(b)), base));

    FragmentConfig fun = base.with(Extension::Functions);
    CHECK_FALSE(cbv::operator_problem(lam, fun));
    Operator l = cbv::make_operator(lam);
    CHECK(l.result == Sort::first("(b->b)"));
    REQUIRE(l.args.size() == 1);
    CHECK(l.args[0].binder == Context{"b"});
    CHECK(l.args[0].sort == Sort::second("b"));
    Operator app = cbv::make_operator(cbv::decode_label(cbv::label_app(b, b)));
    REQUIRE(app.args.size() == 2);
    for (auto& a : app.args) {
      CHECK(a.binder.empty());
      CHECK_FALSE(a.sort.is_first());
    }

    auto n = cbv::Type::nat();
    Operator let = cbv::make_operator(cbv::decode_label(cbv::label_let({b, n, b}, b)));
    REQUIRE(let.args.size() == 4);
    CHECK(let.args[0].binder.empty());
    CHECK(let.args[1].binder == Context{"b"});
    CHECK(let.args[2].binder == Context{"b", "Nat"});
    CHECK(let.args[3].binder == Context{"b", "Nat", "b"});
  }

  TEST_CASE("typing examples") {
    FragmentConfig c = FragmentConfig{}.with(Extension::Functions);
    Context g{"b"};
    Term x = check_in("x", g, {"x"}, Sort::first("b"), c);
    CHECK(x.kind() == Term::Kind::Var);
    CHECK(x.position() == 0);
    Term v = check_in("val x", g, {"x"}, Sort::second("b"), c);
    CHECK(to_text(v) == "val[b](#0)");
    Term l = check_in("\\y : b. val y", g, {"x"}, Sort::first("(b->b)"), c);
    CHECK(to_text(l) == "lam[b;b](val[b](#1))");
  }

  TEST_CASE("typing errors") {
    FragmentConfig base;
    Context g{"b"};
    auto kind_of = [&](const std::string& text, const Sort& s, const FragmentConfig& c) {
      try {
        check_in(text, g, {"x"}, s, c);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::InvalidInput;
    };
    CHECK(kind_of("y", Sort::first("b"), base) == ErrorKind::UnknownVariable);
    CHECK(kind_of("\\y : b. val y", Sort::first("(b->b)"), base) == ErrorKind::DisabledConstruct);
    CHECK(kind_of("val x", Sort::second("(b->b)"), base.with(Extension::Functions)) == ErrorKind::SortMismatch);
    CHECK_THROWS_AS(cbv::parse_computation("val (", {}), Error);
  }

  TEST_CASE("sequencing round-trips") {
    FragmentConfig c = FragmentConfig{}.with(Extension::Sequential);
    OperatorTable table = cbv::build_operator_table(c);
    cbv::Program p = cbv::parse_program("x : b |- let y = val x; z = val y in val z");
    Term t = cbv::typecheck_program(p, c, table);
    std::string text = cbv::pretty(t, p.names);
    CHECK(text == "let x1 = val x; x2 = val x1 in val x2");
    CHECK(cbv::typecheck(cbv::parse_computation(text, p.names), t.context(), t.sort(), c, table) == t);
  }

  TEST_CASE("pretty printing round-trips on a random corpus") {
    std::mt19937_64 rng(9);
    int checked = 0;
    for (auto mask : {0x7fu, 0x03u, 0x1cu, 0x61u, 0x18u}) {
      FragmentConfig c = FragmentConfig{}.with_mask(mask);
      OperatorTable table = cbv::build_operator_table(c);
      cbv::TermGenerator gen(c, table);
      for (int i = 0; i < 12; ++i) {
        cbv::Sample s = gen.sample(rng);
        auto names = cbv::default_names(s.ctx.size());
        std::string text = cbv::pretty(s.term, names);
        auto surface = s.sort.is_first() ? cbv::parse_value(text, names) : cbv::parse_computation(text, names);
        Term back = cbv::typecheck(surface, s.ctx, s.sort, c, table);
        CHECK_MESSAGE(back == s.term, text);
        ++checked;
      }
    }
    CHECK(checked >= 50);
  }

  TEST_CASE("monotonicity across fragments") {
    FragmentConfig small = FragmentConfig{}.with(Extension::Sequential).with(Extension::Functions);
    OperatorTable t1 = cbv::build_operator_table(small);
    cbv::TermGenerator gen(small, t1);
    std::mt19937_64 rng(4);
    FragmentConfig big = FragmentConfig{}.with_mask(0x7f);
    OperatorTable t2 = cbv::build_operator_table(big);
    for (int i = 0; i < 30; ++i) {
      cbv::Sample s = gen.sample(rng);
      auto names = cbv::default_names(s.ctx.size());
      std::string text = cbv::pretty(s.term, names);
      auto surface = s.sort.is_first() ? cbv::parse_value(text, names) : cbv::parse_computation(text, names);
      CHECK(to_text(cbv::typecheck(surface, s.ctx, s.sort, big, t2)) == to_text(s.term));
    }
  }
}
