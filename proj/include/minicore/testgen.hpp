// Random generation of invariant-satisfying programs and substitution
// inputs, plus structural shrinking. Generation is construction-correct:
// scope, jumpable join points, and join arities are tracked while the term
// is built, so every output satisfies both program checkers by design.
#pragma once

#include <cstdint>

#include "minicore/core_ir.hpp"
#include "minicore/subst.hpp"
#include "minicore/var_env.hpp"

namespace minicore {

/// Deterministic in the seed. shadow_p is the probability that a new binder
/// reuses an in-scope unique (with a fresh type atom); join_density is the
/// probability that a generated let is a recursive join group. Top binders
/// are global vanilla ids.
CoreProgram genProgram(std::uint64_t seed, std::uint32_t size, double shadow_p,
                       double join_density);

/// A substitution, the scope the expression lives in, and the expression;
/// satisfies wellScopedSubst and wellScoped by construction. Environment
/// ranges mix renamings and expressions over the new scope, and binders
/// inside the expression sometimes collide with the in-scope set to force
/// uniqAway work.
struct SubstCase {
  Subst subst;
  VarSet expr_scope;
  ExprPtr expr;
};
SubstCase genSubstPair(std::uint64_t seed, std::uint32_t size);

/// Structural shrinks: dropped binds, dropped rec pairs, dropped case
/// alternatives, subtrees replaced by literals. Every candidate offered
/// passes both program checkers and is strictly smaller.
std::vector<CoreProgram> shrink(const CoreProgram& p);

}  // namespace minicore
