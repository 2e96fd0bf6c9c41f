#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scopekit/sorts.hpp"

namespace scopekit::cbv {

enum class Extension { Sequential, Functions, Records, Variants, Naturals, While, Recursion };
inline constexpr int kExtensionCount = 7;

const char* extension_name(Extension e);
std::optional<Extension> extension_from_name(std::string_view name);
std::vector<Extension> all_extensions();

struct FragmentConfig {
  unsigned mask = 0;
  std::vector<std::string> base_types{"b"};
  int nat_bound = 4;
  int type_depth = 3;

  bool has(Extension e) const { return (mask >> static_cast<int>(e)) & 1u; }
  FragmentConfig with(Extension e) const;
  FragmentConfig with_mask(unsigned m) const;
  // "base" for the empty set, otherwise extension names joined by '+'
  std::string name() const;
};

// all 128 extension subsets sharing proto's other settings, ordered by mask
std::vector<FragmentConfig> all_fragments(const FragmentConfig& proto = {});
// "base", "all", or a list of extension names separated by ',' or '+'
FragmentConfig parse_fragment(std::string_view spec, const FragmentConfig& proto = {});
FragmentConfig fragment_from_json(const std::string& text);
std::string fragment_to_json(const FragmentConfig& c);

class Type;
using TypeRef = std::shared_ptr<const Type>;

struct Field {
  std::string label;
  TypeRef type;
};

// Types are interned through their canonical text, so pointer equality is
// type equality.
class Type {
 public:
  enum class Kind { Base, Fun, Record, Variant, Nat };

  static TypeRef base(const std::string& name);
  static TypeRef fun(const TypeRef& a, const TypeRef& b);
  static TypeRef record(std::vector<Field> row);
  static TypeRef variant(std::vector<Field> row);
  static TypeRef nat();

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }  // base types
  const TypeRef& dom() const { return a_; }
  const TypeRef& cod() const { return b_; }
  const std::vector<Field>& row() const { return row_; }  // canonical label order
  std::optional<std::size_t> field_index(std::string_view label) const;
  const std::string& str() const { return str_; }
  int depth() const { return depth_; }

 private:
  static TypeRef intern(Type t);
  Kind kind_ = Kind::Base;
  std::string name_;
  TypeRef a_, b_;
  std::vector<Field> row_;
  std::string str_;
  int depth_ = 0;
};

inline Sort value_sort(const TypeRef& t) { return Sort::first(t->str()); }
inline Sort comp_sort(const TypeRef& t) { return Sort::second(t->str()); }

// numeric labels first in numeric order, then the rest lexicographically
bool label_less(std::string_view a, std::string_view b);
bool is_label(std::string_view s);

// Accepts the canonical form and the spaced surface form (A -> B right associative).
TypeRef parse_type(std::string_view text);
TypeRef type_of_sort(const Sort& s);  // parses s.id

// fulfillments of the typing needs
TypeRef unit_type();
TypeRef maybe_type(const TypeRef& t);                       // <0:{}, 1+:t>
TypeRef loop_type(const TypeRef& cont, const TypeRef& done);  // <Cont:.., Done:..>
TypeRef positional_record(const std::vector<TypeRef>& fields);
TypeRef recreq_type(const std::vector<TypeRef>& params, const TypeRef& result);

bool is_maybe_shape(const Type& t);
bool is_loop_shape(const Type& t);
bool is_positional_record(const Type& t);

// empty when t is a type of the fragment, otherwise the reason
std::optional<std::string> type_problem(const Type& t, const FragmentConfig& c);
inline bool type_valid(const Type& t, const FragmentConfig& c) { return !type_problem(t, c); }

// the four typing needs and their (functional) fulfillments
struct NeedInfo {
  std::string need;
  std::string fulfillment;
  Extension owner;
};
std::vector<NeedInfo> needs_of(const FragmentConfig& c);

struct MenuRow {
  Extension ext;
  std::string constructs;
  std::string types;
  std::string model;
};
const std::vector<MenuRow>& menu();
const char* base_model_requirement();

// Types of the fragment up to a depth, rows drawn from a small label pool.
std::vector<TypeRef> enumerate_types(const FragmentConfig& c, int depth, std::size_t limit = 5000);

// Context entries as types
std::vector<TypeRef> context_types(const Context& g);
Context make_context(const std::vector<TypeRef>& ts);

}  // namespace scopekit::cbv
