#pragma once

#include "scopekit/cbv/surface.hpp"
#include "scopekit/cbv/types.hpp"
#include "scopekit/signature.hpp"
#include "scopekit/term.hpp"

namespace scopekit::cbv {

// Bidirectional: values and eliminator scrutinees synthesize, bodies check.
// Errors carry the source location of the offending node.
Term typecheck(const SurfaceRef& t, const Context& ctx, const Sort& expected, const FragmentConfig& c,
               const OperatorTable& table);
Term typecheck_synth(const SurfaceRef& t, const Context& ctx, const FragmentConfig& c, const OperatorTable& table);
Term typecheck_program(const Program& p, const FragmentConfig& c, const OperatorTable& table);

// every type of the context must belong to the fragment (NeedUnfulfilled otherwise)
void check_context(const Context& ctx, const FragmentConfig& c);

}  // namespace scopekit::cbv
