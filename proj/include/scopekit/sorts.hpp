#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "scopekit/error.hpp"

namespace scopekit {

using SortId = std::string;

enum class SortTag { First, Second };

struct Sort {
  SortTag tag = SortTag::First;
  SortId id;

  static Sort first(SortId s) { return Sort{SortTag::First, std::move(s)}; }
  static Sort second(SortId s) { return Sort{SortTag::Second, std::move(s)}; }
  bool is_first() const { return tag == SortTag::First; }

  friend bool operator==(const Sort& a, const Sort& b) { return a.tag == b.tag && a.id == b.id; }
  friend bool operator!=(const Sort& a, const Sort& b) { return !(a == b); }
  friend bool operator<(const Sort& a, const Sort& b) {
    return std::tie(a.tag, a.id) < std::tie(b.tag, b.id);
  }
};

// "b" for first-class, "C b" for second-class
std::string to_string(const Sort& s);

// Either component may be an explicit finite list or a membership predicate
// (the CBV type families are infinite).
class SortingSystem {
 public:
  using Membership = std::function<bool(const SortId&)>;

  SortingSystem() = default;
  SortingSystem(std::vector<SortId> fst, std::vector<SortId> snd);
  static SortingSystem open(Membership fst, Membership snd, std::string description);

  bool is_finite() const { return finite_; }
  bool homogeneous() const { return finite_ && snd_.empty(); }
  const std::vector<SortId>& fst_sorts() const;
  const std::vector<SortId>& snd_sorts() const;
  bool has_first(const SortId& s) const;
  bool has_second(const SortId& s) const;
  bool contains(const Sort& s) const { return s.is_first() ? has_first(s.id) : has_second(s.id); }
  const std::string& description() const { return description_; }

 private:
  bool finite_ = true;
  std::vector<SortId> fst_, snd_;
  Membership fst_pred_, snd_pred_;
  std::string description_;
};

// Entries are shared, so copying a context is cheap.
class Context {
 public:
  Context() : entries_(empty_entries()) {}
  Context(std::vector<SortId> entries)
      : entries_(std::make_shared<const std::vector<SortId>>(std::move(entries))) {}
  Context(std::initializer_list<SortId> entries)
      : entries_(std::make_shared<const std::vector<SortId>>(entries)) {}

  std::size_t size() const { return entries_->size(); }
  bool empty() const { return entries_->empty(); }
  const SortId& operator[](std::size_t i) const { return entries_->at(i); }
  const std::vector<SortId>& entries() const { return *entries_; }

  Context extended(const Context& delta) const;
  void validate(const SortingSystem& sys) const;

  friend bool operator==(const Context& a, const Context& b) {
    return a.entries_ == b.entries_ || *a.entries_ == *b.entries_;
  }
  friend bool operator!=(const Context& a, const Context& b) { return !(a == b); }
  friend bool operator<(const Context& a, const Context& b) { return *a.entries_ < *b.entries_; }

 private:
  static const std::shared_ptr<const std::vector<SortId>>& empty_entries();
  std::shared_ptr<const std::vector<SortId>> entries_;
};

std::string to_string(const Context& c);

// rho : source -> target acts on variables of target, sending them to
// variables of source.  map[y] is a position of source.
class Renaming {
 public:
  Renaming(Context source, Context target, std::vector<std::size_t> map);

  const Context& source() const { return source_; }
  const Context& target() const { return target_; }
  const std::vector<std::size_t>& map() const { return map_; }
  std::size_t operator()(std::size_t y) const { return map_.at(y); }

  friend bool operator==(const Renaming& a, const Renaming& b) {
    return a.map_ == b.map_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  Context source_, target_;
  std::vector<std::size_t> map_;
};

std::string to_string(const Renaming& r);

Renaming identity_renaming(const Context& g);
// rho : G1 -> G2, rho2 : G2 -> G3, result G1 -> G3
Renaming compose_renamings(const Renaming& rho, const Renaming& rho2);

struct Concat {
  Context context;
  Renaming pi1;
  Renaming pi2;
};
Concat concat_contexts(const Context& g1, const Context& g2);

// rho : G -> G2 lifted to G ++ delta -> G2 ++ delta
Renaming extend_renaming(const Renaming& rho, const Context& delta);

// unique renaming G -> G1 ++ G2 whose components are a : G -> G1, b : G -> G2
Renaming pair_renamings(const Renaming& a, const Renaming& b);

std::vector<std::size_t> vars_of_sort(const Context& g, const SortId& s);

}  // namespace scopekit
