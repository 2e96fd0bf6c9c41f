#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scopekit/cbv/types.hpp"
#include "scopekit/term.hpp"

namespace scopekit::cbv {

struct Surface;
using SurfaceRef = std::shared_ptr<const Surface>;

// Untyped syntax with names already resolved to context positions.
struct Surface {
  enum class Kind {
    // values
    Var, Lam, VRecord, VInj, Lit,
    // computations
    Val, Let, App, Record, RecMatch, Inj, Case, Unroll, Roll, Fold, For, LetRec, Call, Annot,
  };
  Kind kind = Kind::Var;
  SourceLoc loc;
  std::string name;                  // Var: the source name
  long index = -1;                   // Var: resolved position, -1 when unbound
  long lit = 0;                      // Lit
  std::vector<std::string> binders;  // names bound by this node, in binding order
  std::vector<std::string> labels;   // record labels, case constructors, injection constructor
  std::vector<TypeRef> types;        // Lam: [domain]; VInj/Inj: [variant]; Annot: [t]; LetRec: result types
  std::vector<std::vector<std::pair<std::string, TypeRef>>> params;  // LetRec parameter lists
  std::vector<SurfaceRef> kids;

  bool is_value() const { return kind <= Kind::Lit; }
};

// A program: named, typed free variables and a computation.
struct Program {
  std::vector<std::string> names;
  std::vector<TypeRef> types;
  SurfaceRef body;
  Context context() const { return make_context(types); }
};

// Computation text; names resolve against free_names (later entries shadow earlier ones).
SurfaceRef parse_computation(const std::string& text, const std::vector<std::string>& free_names = {});
SurfaceRef parse_value(const std::string& text, const std::vector<std::string>& free_names = {});
// "x : b, y : Nat |- M" (the context part is optional)
Program parse_program(const std::string& text);
// "x : b |- y := V, z := W": a context and one value per variable of `over`
struct SubstSpec {
  std::vector<std::string> names;
  std::vector<TypeRef> types;
  std::vector<SurfaceRef> values;
};
SubstSpec parse_substitution(const std::string& text, const std::vector<std::string>& domain_names);

// Concrete syntax of a typed term; names[i] names context position i.
std::string pretty(const Term& t, const std::vector<std::string>& names);
std::vector<std::string> default_names(std::size_t n);
std::string context_text(const std::vector<std::string>& names, const std::vector<TypeRef>& types);

}  // namespace scopekit::cbv
