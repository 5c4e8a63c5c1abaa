// Exitification: float the exit paths of recursive join-point groups into
// fresh non-recursive join points so the simplifier can inline into them.
// LegacyBug reproduces the abstraction behaviour before GHC #15110 was fixed.
#pragma once

#include <utility>
#include <vector>

#include "minicore/core_ir.hpp"
#include "minicore/var_env.hpp"

namespace minicore {

enum class ExitifyMode { Fixed, LegacyBug };

/// The designated local unique that seeds the exit-id supply.
extern const Unique initExitJoinUnique;

/// Supply and accumulator for minted exit join points, threaded through one
/// pass invocation. Every accumulated binder is a local join id whose unique
/// was absent from the avoid set when it was created.
struct ExitState {
  std::uint64_t next_exit_number = initExitJoinUnique.number;
  std::vector<std::pair<Var, ExprPtr>> exits;
};

/// Chooses the captured binders an exit join point must take as parameters.
/// Fixed scans from the innermost binder outwards and claims each needed
/// unique once; LegacyBug keeps every captured binder whose unique is free,
/// duplicates included. Both zap the chosen binders' info.
std::vector<Var> pickAbsVars(ExitifyMode mode, const std::vector<Var>& captured,
                             const VarSet& fvs);

/// Rewrites one recursive group of join points: exit binds (in creation
/// order) followed by the rewritten Rec. Throws MalformedJoinRhs when a
/// binder is not a join id or a rhs is short of its arity in lambdas.
std::vector<Bind> exitifyRec(ExitifyMode mode, const InScopeSet& in_scope,
                             const std::vector<std::pair<Var, ExprPtr>>& pairs);
std::vector<Bind> exitifyRec(ExitifyMode mode, const InScopeSet& in_scope,
                             const std::vector<std::pair<Var, ExprPtr>>& pairs,
                             ExitState& state);

CoreProgram exitifyProgram(ExitifyMode mode, const CoreProgram& p);

}  // namespace minicore
