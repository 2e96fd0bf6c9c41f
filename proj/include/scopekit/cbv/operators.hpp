#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scopekit/cbv/types.hpp"
#include "scopekit/signature.hpp"

namespace scopekit::cbv {

enum class OpKind { Val, Let, Lam, App, VRec, Rec, RecMatch, VInj, Inj, Case, Lit, Unroll, Roll, Fold, For, LetRec, Call };

// Decoded operator label.  Which fields are used depends on the kind:
//   val[t]  let[t1,..,tn;s]  lam[a;b]  app[a;b]  vrec[R]  rec[R]  recmatch[R;s]
//   vinj[V;C]  inj[V;C]  case[V;s]  lit[n]  unroll  roll  fold[t]  for[t;s]
//   letrec[F1,..,Fn;s]  call[F]
struct OpInfo {
  OpKind kind = OpKind::Val;
  std::vector<TypeRef> ts;
  TypeRef res;
  std::string ctor;
  long lit = 0;
};

const char* family_name(OpKind k);
OpInfo decode_label(std::string_view label);  // throws UnknownOperator
std::string encode_label(const OpInfo& info);

// the operator's binding shape, straight from the typing rules
Operator make_operator(const OpInfo& info);

// the extension missing for this construct under c, or nullopt
std::optional<std::string> construct_problem(const OpInfo& info, const FragmentConfig& c);
// construct_problem, or a type of the instance outside the fragment
std::optional<std::string> operator_problem(const OpInfo& info, const FragmentConfig& c);
// the extensions that can supply the family at all
std::vector<Extension> family_owners(OpKind k);

SortingSystem cbv_sorting_system(const FragmentConfig& c);
// Families are registered only for enabled extensions and instantiate only
// shape-valid labels.  Instantiation beyond c.type_depth throws DepthExceeded.
OperatorTable build_operator_table(const FragmentConfig& c);

struct RuleInfo {
  OpKind kind;
  std::string rule;
};
const std::vector<RuleInfo>& rule_table();

// label builders
std::string label_val(const TypeRef& t);
std::string label_let(const std::vector<TypeRef>& ts, const TypeRef& s);
std::string label_lam(const TypeRef& a, const TypeRef& b);
std::string label_app(const TypeRef& a, const TypeRef& b);
std::string label_vrec(const TypeRef& r);
std::string label_rec(const TypeRef& r);
std::string label_recmatch(const TypeRef& r, const TypeRef& s);
std::string label_vinj(const TypeRef& v, const std::string& ctor);
std::string label_inj(const TypeRef& v, const std::string& ctor);
std::string label_case(const TypeRef& v, const TypeRef& s);
std::string label_lit(long n);
std::string label_fold(const TypeRef& t);
std::string label_for(const TypeRef& t, const TypeRef& s);
std::string label_letrec(const std::vector<TypeRef>& fs, const TypeRef& s);
std::string label_call(const TypeRef& f);

// parameters of a recursive function type ({0:..,..} -> t)
std::vector<TypeRef> recfun_params(const Type& f);

}  // namespace scopekit::cbv
