#include <memory>
#include <random>
#include <set>

#include "doctest.h"
#include "scopekit/finpresheaf.hpp"
#include "scopekit/suites.hpp"

using namespace scopekit;

namespace {

UniverseRef universe(std::vector<SortId> sorts, int bound) {
  return std::make_shared<const ContextUniverse>(std::move(sorts), bound);
}

bool has_record(const Report& r, const std::string& axiom, bool pass) {
  for (auto& rec : r.records())
    if (rec.axiom == axiom && rec.pass == pass) return true;
  return false;
}

}  // namespace

TEST_SUITE("presheaf") {
  TEST_CASE("context enumeration") {
    CHECK(enumerate_contexts({"b"}, 0).size() == 1);
    auto one = enumerate_contexts({"b"}, 2);
    REQUIRE(one.size() == 3);
    CHECK(one[0] == Context{});
    CHECK(one[1] == Context{"b"});
    CHECK(one[2] == Context{"b", "b"});
    CHECK(enumerate_contexts({"b", "c"}, 2).size() == 7);
    CHECK(universe({"(b->b)", "b"}, 2)->contexts().size() == 7);
  }

  TEST_CASE("renaming enumeration") {
    CHECK(enumerate_renamings(Context{"b"}, Context{}).size() == 1);
    CHECK(enumerate_renamings(Context{"b", "b"}, Context{"b"}).size() == 2);
    CHECK(enumerate_renamings(Context{"b", "c"}, Context{"c", "b"}).size() == 1);
    CHECK(enumerate_renamings(Context{"b", "c"}, Context{"c", "b"})[0].map() == std::vector<std::size_t>{1, 0});
  }

  TEST_CASE("unitors on random structures") {
    auto u = universe({"b"}, 2);
    std::mt19937_64 rng(11);
    FinStructure nu = variables(u);
    for (int i = 0; i < 10; ++i) {
      FinStructure p = random_structure(u, {Sort::first("b")}, rng);
      Tensor p_nu = tensor(p, nu);
      Mediator rho = right_unitor(p_nu, p);
      CHECK_FALSE(rho.defect);
      CHECK(is_bijection(rho.map, p_nu.structure(), p));
      Tensor nu_p = tensor(nu, p);
      Mediator lam = left_unitor(nu_p, p);
      CHECK_FALSE(lam.defect);
      CHECK(is_bijection(lam.map, nu_p.structure(), p));
    }
  }

  TEST_CASE("closed elements ignore environments") {
    auto u = universe({"b"}, 2);
    std::mt19937_64 rng(2);
    RandomShape closed;
    closed.max_constants = 1;
    closed.allow_generator = false;
    FinStructure p = random_structure(u, {Sort::second("c")}, rng, closed);
    FinStructure q = random_structure(u, {Sort::first("b")}, rng);
    Tensor pq = tensor(p, q);
    for (std::size_t c = 0; c < u->contexts().size(); ++c) {
      std::set<std::size_t> classes;
      for (std::size_t i = 0; i < pq.triples(0, c).size(); ++i) classes.insert(pq.class_of_index(0, c, i));
      CHECK(classes.size() == p.size(0, 0));
    }
  }

  TEST_CASE("action axioms hold and a corrupted associator is caught") {
    auto u = universe({"b"}, 2);
    std::mt19937_64 rng(4);
    Sort fb = Sort::first("b"), sc = Sort::second("c");
    FinStructure p = random_structure(u, {sc}, rng);
    FinStructure q = random_structure(u, {fb}, rng);
    FinStructure l = random_structure(u, {fb}, rng);
    FinStructure m = random_structure(u, {fb}, rng);
    CHECK(check_action_axioms(p, q, l, m).all_pass());

    ActionCheckOptions bad;
    bool swapped = false;
    bad.corrupt_associator = [&](FinMorphism& a) {
      for (auto& cells : a.map)
        for (auto& cell : cells)
          if (!swapped && cell.size() >= 2 && cell[0] != cell[1]) {
            std::swap(cell[0], cell[1]);
            swapped = true;
          }
    };
    Report broken = check_action_axioms(p, q, l, m, bad);
    REQUIRE(swapped);
    CHECK_FALSE(broken.all_pass());
    bool witnessed = false;
    for (auto& r : broken.records())
      if (!r.pass) witnessed = witnessed || !r.witness.empty();
    CHECK(witnessed);
  }

  TEST_CASE("empty structures pass vacuously") {
    auto u = universe({"b"}, 2);
    Sort fb = Sort::first("b");
    FinStructure e = empty_structure(u, {Sort::second("c")});
    FinStructure q = variables(u);
    CHECK(check_action_axioms(e, q, q, q).all_pass());
    CHECK(tensor(e, q).structure().total_size() == 0);
    (void)fb;
  }

  TEST_CASE("skew structure has a non-invertible left unitor") {
    Report r = run_suite("skew", SuiteOptions{});
    CHECK(r.all_pass());
    CHECK(has_record(r, "left unitor not invertible", true));
    bool empty_witness = false;
    for (auto& rec : r.records())
      if (rec.axiom == "left unitor not invertible") empty_witness = rec.witness.find("= {}") != std::string::npos;
    CHECK(empty_witness);
  }

  TEST_CASE("law suite over twenty structures") {
    Report r = presheaf_law_suite(1, 20);
    CHECK(r.all_pass());
  }
}
