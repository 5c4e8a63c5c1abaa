#pragma once

#include "minicore/core_ir.hpp"
#include "minicore/var_env.hpp"

namespace minicore {

/// Free local variables of an expression. Globals are filtered out, judged
/// by the unique's tag. Type and coercion payloads contribute nothing.
/// When two free occurrences share a unique the stored Var is the first one
/// met in a leftmost-innermost traversal.
VarSet exprFreeVars(const ExprPtr& e);

/// Free locals of a bind: a NonRec rhs sees the outer scope; a Rec group
/// binds all of its binders in every rhs.
VarSet bindFreeVars(const Bind& b);

}  // namespace minicore
