// Executable invariant checkers: GoodVar, well-scopedness, join-point
// validity, and the substitution-side relations. Boolean cores with
// report-producing wrappers.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minicore/core_ir.hpp"
#include "minicore/subst.hpp"
#include "minicore/var_env.hpp"

namespace minicore {

struct LintViolation {
  std::string path;  // breadcrumb into the AST
  std::string rule;
  std::string detail;
};

struct LintReport {
  bool ok = true;
  std::vector<LintViolation> violations;
};

// --- GoodVar -----------------------------------------------------------

/// The scope flag agrees with the unique's tag and the name's unique agrees
/// with the real unique.
bool goodVar(const Var& v);
bool goodLocalVar(const Var& v);

// --- Well-scopedness ----------------------------------------------------

/// A local occurrence must find an almostEqual entry in scope and be a
/// GoodVar; a global occurrence only needs GoodVar.
bool wellScopedVar(const Var& v, const VarSet& in_scope);
bool wellScoped(const ExprPtr& e, const VarSet& in_scope);
bool wellScopedBind(const Bind& b, const VarSet& in_scope);
/// Top binders must have distinct uniques and every right-hand side must be
/// well scoped in the set of all top binders.
bool wellScopedProgram(const CoreProgram& p);

LintReport wellScopedReport(const ExprPtr& e, const VarSet& in_scope);
LintReport wellScopedProgramReport(const CoreProgram& p);

// --- Join points --------------------------------------------------------

bool isJoinId(const Var& v);
std::optional<std::uint64_t> isJoinIdMaybe(const Var& v);

/// Tracks jumpable join points across a binder: a join binder becomes
/// jumpable, any other binder shadows whatever held its unique.
VarSet updJPS(VarSet jps, const Var& v);
VarSet updJPSs(VarSet jps, const std::vector<Var>& vs);

/// e is valid when applied to n arguments with jps jumpable.
bool isJoinPointsValid(const ExprPtr& e, std::uint64_t n, const VarSet& jps);
bool isJoinRHS(const ExprPtr& rhs, std::uint64_t arity, const VarSet& jps);
bool isJoinPointsValidPair(const Var& v, const ExprPtr& rhs, const VarSet& jps);
bool isValidJoinPointsPair(const Var& v, const ExprPtr& rhs, const VarSet& jps);
bool isJoinPointsValidProgram(const CoreProgram& p);

LintReport joinPointsValidProgramReport(const CoreProgram& p);

/// Both program checkers in one report; join-point rules only when asked.
LintReport lintProgram(const CoreProgram& p, bool check_join_points);

// --- Substitution-side relations -----------------------------------------

/// Every var of a has an almostEqual partner in b.
bool strongSubset(const VarSet& a, const VarSet& b);

/// The in-scope set covers the expression scope outside the environment's
/// domain, and every expression in the environment's range is well scoped
/// in it.
bool wellScopedSubst(const Subst& s, const VarSet& expr_scope);

/// The seven conditions relating a substitution and binder list to their
/// images under substBndrs.
bool substExtends(const Subst& s1, const std::vector<Var>& vars1,
                  const Subst& s2, const std::vector<Var>& vars2);

/// Every entry's key equals its var's unique. Holds for any set built by
/// the VarSet operations; exported for forged sets.
bool validVarSetCheck(const VarSet& vs);

}  // namespace minicore
