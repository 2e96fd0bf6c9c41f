#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scopekit/report.hpp"
#include "scopekit/sorts.hpp"

namespace scopekit {

std::vector<Context> enumerate_contexts(const std::vector<SortId>& sorts, int max_len);
std::vector<Renaming> enumerate_renamings(const Context& g1, const Context& g2);

// All contexts up to a bound and all renamings between them.
class ContextUniverse {
 public:
  ContextUniverse(std::vector<SortId> sorts, int bound);

  const std::vector<SortId>& sorts() const { return sorts_; }
  int bound() const { return bound_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  std::size_t context_index(const Context& g) const;  // throws BoundExceeded

  const std::vector<Renaming>& renamings() const { return renamings_; }
  std::size_t src(std::size_t rid) const { return src_[rid]; }
  std::size_t tgt(std::size_t rid) const { return tgt_[rid]; }
  const std::vector<std::size_t>& between(std::size_t s, std::size_t t) const { return between_[s][t]; }
  std::size_t find(std::size_t s, std::size_t t, const std::vector<std::size_t>& map) const;
  std::size_t identity(std::size_t c) const { return identity_[c]; }

 private:
  std::vector<SortId> sorts_;
  int bound_;
  std::vector<Context> contexts_;
  std::map<std::vector<SortId>, std::size_t> ctx_index_;
  std::vector<Renaming> renamings_;
  std::vector<std::size_t> src_, tgt_, identity_;
  std::vector<std::vector<std::vector<std::size_t>>> between_;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> rid_;
};

using UniverseRef = std::shared_ptr<const ContextUniverse>;

// A finite presheaf: for each sort and enumerated context a set of labelled
// elements, and for each renaming rho : Ga -> Gb a map from the Gb cell to the Ga cell.
class FinStructure {
 public:
  FinStructure() = default;
  FinStructure(UniverseRef u, std::vector<Sort> sorts);

  const UniverseRef& universe() const { return u_; }
  const std::vector<Sort>& sorts() const { return sorts_; }
  std::size_t sort_index(const Sort& s) const;
  bool has_sort(const Sort& s) const;

  std::size_t size(std::size_t s, std::size_t c) const { return labels_[s][c].size(); }
  std::size_t total_size() const;
  const std::string& label(std::size_t s, std::size_t c, std::size_t e) const { return labels_[s][c][e]; }
  std::optional<std::size_t> find_label(std::size_t s, std::size_t c, const std::string& l) const;

  std::size_t add_element(std::size_t s, std::size_t c, std::string label);
  void set_action(std::size_t rid, std::size_t s, std::size_t e, std::size_t image);
  std::size_t act(std::size_t rid, std::size_t s, std::size_t e) const { return act_[rid][s][e]; }

  // totality and functor laws; returns a description of the first violation
  std::optional<std::string> check_functor_laws() const;
  void validate() const;

 private:
  UniverseRef u_;
  std::vector<Sort> sorts_;
  std::vector<std::vector<std::vector<std::string>>> labels_;  // [s][c][e]
  std::vector<std::vector<std::vector<std::size_t>>> act_;     // [rid][s][e in tgt cell]
};

inline constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

// Elementwise map between structures with the same sorts.
struct FinMorphism {
  std::vector<std::vector<std::vector<std::size_t>>> map;  // [s][c][e]
  std::size_t operator()(std::size_t s, std::size_t c, std::size_t e) const { return map[s][c][e]; }
};

FinMorphism identity_morphism(const FinStructure& x);
FinMorphism compose(const FinMorphism& g, const FinMorphism& f);  // g after f
bool equal(const FinMorphism& f, const FinMorphism& g);
std::optional<std::string> naturality_witness(const FinMorphism& f, const FinStructure& x, const FinStructure& y);
std::optional<std::string> difference_witness(const FinMorphism& f, const FinMorphism& g, const FinStructure& x);
bool is_bijection(const FinMorphism& f, const FinStructure& x, const FinStructure& y);
std::optional<FinMorphism> inverse(const FinMorphism& f, const FinStructure& x, const FinStructure& y);

FinStructure variables(const UniverseRef& u);                                  // nu
FinStructure terminal(const UniverseRef& u, const std::vector<Sort>& sorts);   // singleton cells
FinStructure empty_structure(const UniverseRef& u, const std::vector<Sort>& sorts);

struct Triple {
  std::size_t ctx;               // G'
  std::size_t elem;              // t in P_s G'
  std::vector<std::size_t> env;  // per position y of G', an element of Q_{G'[y]} G
};

class Tensor {
 public:
  const FinStructure& structure() const { return result_; }
  const std::vector<Triple>& triples(std::size_t s, std::size_t c) const { return triples_[s][c]; }
  std::size_t class_of_index(std::size_t s, std::size_t c, std::size_t i) const { return class_[s][c][i]; }
  std::size_t class_of(std::size_t s, std::size_t c, const Triple& t) const;
  const Triple& representative(std::size_t s, std::size_t c, std::size_t k) const;
  std::vector<std::size_t> members(std::size_t s, std::size_t c, std::size_t k) const;
  std::size_t generator_pairs() const { return generators_; }
  // well-definedness of the renaming action on classes
  const std::optional<std::string>& action_defect() const { return action_defect_; }
  std::size_t raw_index(std::size_t s, std::size_t c, const Triple& t) const;

 private:
  friend Tensor tensor(const FinStructure& p, const FinStructure& q);
  FinStructure result_;
  std::vector<std::vector<std::vector<Triple>>> triples_;
  std::vector<std::vector<std::vector<std::size_t>>> class_;
  std::vector<std::vector<std::vector<std::size_t>>> rep_;
  std::vector<std::vector<std::map<std::vector<std::size_t>, std::size_t>>> index_;
  std::size_t generators_ = 0;
  std::optional<std::string> action_defect_;
};

// Substitution tensor as a coend over the truncated context enumeration.
// q must be indexed by every first-class sort of the universe.
Tensor tensor(const FinStructure& p, const FinStructure& q);

// env of Q over G for a context G' (all tuples), used by the tensor and exponential
std::vector<std::vector<std::size_t>> all_envs(const FinStructure& q, std::size_t gprime, std::size_t g);

// --- mediators (returned maps may carry a defect message when not well defined)
struct Mediator {
  FinMorphism map;
  std::optional<std::string> defect;
};

Mediator left_unitor(const Tensor& nu_p, const FinStructure& p);           // nu (x) P -> P
Mediator right_unitor(const Tensor& p_nu, const FinStructure& p);          // P (x) nu -> P
Mediator right_unitor_inverse(const FinStructure& p, const Tensor& p_nu);  // P -> P (x) nu
// ((P (x) Q) (x) L) -> (P (x) (Q (x) L))
Mediator associator(const Tensor& pq_l, const Tensor& pq, const Tensor& ql, const Tensor& p_ql);
// f (x) g : P (x) Q -> P' (x) Q'
Mediator tensor_map(const FinMorphism& f, const FinMorphism& g, const Tensor& pq, const Tensor& pq2);

// --- right closure
struct Exponential {
  FinStructure structure;
  // tables[s][c][e][g2] = images, one per env in all_envs(q, c, g2)
  std::vector<std::vector<std::vector<std::vector<std::vector<std::size_t>>>>> tables;
};

Exponential exponential(const FinStructure& p, const FinStructure& q, std::size_t limit = 100000);
Mediator exp_eval(const Exponential& e, const Tensor& e_q, const FinStructure& p, const FinStructure& q);
Mediator exp_curry(const FinMorphism& f, const Tensor& r_q, const FinStructure& r, const Exponential& e,
                   const FinStructure& q);

// All natural maps x -> y (sorts of x and y must agree), up to limit.
std::vector<FinMorphism> natural_maps(const FinStructure& x, const FinStructure& y, std::size_t limit = 100000);

// --- random structures
// Generated inside a class closed under the truncated enumeration: elements
// at [] (constants) and [b] (constants weakened plus at most one generator u),
// elements at [b,b] being constants and u along each projection.
struct RandomShape {
  int max_constants = 2;
  bool allow_generator = true;
  bool force_generator = false;  // pointed structures need the generator
};

FinStructure random_structure(const UniverseRef& u, const std::vector<Sort>& sorts, std::mt19937_64& rng,
                              RandomShape shape = {});
// point of a structure built with force_generator: x |-> u(x)
FinMorphism generator_point(const FinStructure& a, const FinStructure& nu);

// --- file format
FinStructure structure_from_json(const std::string& text);
std::string structure_to_json(const FinStructure& s);

// --- law checks
struct ActionCheckOptions {
  std::function<void(FinMorphism&)> corrupt_associator;
};

Report check_action_axioms(const FinStructure& p, const FinStructure& q, const FinStructure& l,
                           const FinStructure& m, const ActionCheckOptions& opt = {});

struct SkewObject {
  FinStructure mon;  // homogeneous part
  FinStructure act;  // second-class part
};

Report check_skew(const std::vector<SkewObject>& objects, const UniverseRef& u, const Sort& second_sort);
Report check_pointed_tensor(const FinStructure& a, const FinMorphism& var_a, const FinStructure& b,
                            const FinMorphism& var_b, const FinStructure& c, const FinMorphism& var_c);
Report check_exponential(const FinStructure& p, const FinStructure& q, const FinStructure& r,
                         std::size_t max_maps = 64);

// the full randomized suite used by the cli and acceptance test
Report presheaf_law_suite(std::uint64_t seed, int structures);

}  // namespace scopekit
