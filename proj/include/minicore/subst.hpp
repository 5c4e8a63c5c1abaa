// Capture-avoiding parallel substitution over Core expressions.
#pragma once

#include <string>
#include <vector>

#include "minicore/core_ir.hpp"
#include "minicore/var_env.hpp"

namespace minicore {

/// An in-scope set (the variables in scope after the substitution has been
/// applied) paired with the identifier substitution environment.
struct Subst {
  InScopeSet in_scope;
  VarEnv<ExprPtr> id_env;
};

/// A scope violation met while substituting. The doc string names the call
/// site; substitution never aborts, it reports.
struct ScopeWarning {
  std::string doc;
  Var offending_var;
};

Subst mkEmptySubst(InScopeSet iss);
const VarSet& getSubstInScopeVars(const Subst& s);

/// Freshens v against the in-scope set: if v's unique is already taken, both
/// the real unique and the name's unique are bumped to the first free number
/// above it (same locality tag); otherwise v comes back untouched. Total and
/// deterministic; every other field is preserved.
Var uniqAway(const InScopeSet& iss, const Var& v);

/// Resolves an occurrence: globals pass through, then the environment, then
/// the in-scope set (whose entry refines the occurrence); a miss produces the
/// occurrence itself plus a warning.
std::pair<ExprPtr, std::optional<ScopeWarning>> lookupIdSubst(
    const std::string& doc, const Subst& s, const Var& v);

/// Prepares one binder: freshens it, cuts or extends the environment, and
/// records it in scope. Returns the substitution to use for the body.
std::pair<Subst, Var> substIdBndr(const std::string& doc, const Subst& s,
                                  const Var& old_id);

std::pair<Subst, Var> substBndr(const std::string& doc, const Subst& s,
                                const Var& bndr);
std::pair<Subst, std::vector<Var>> substBndrs(const std::string& doc, Subst s,
                                              const std::vector<Var>& bndrs);
/// Same left-to-right accumulation; the recursive knot is severed because
/// binder metadata is inert here.
std::pair<Subst, std::vector<Var>> substRecBndrs(const std::string& doc, Subst s,
                                                 const std::vector<Var>& bndrs);

std::pair<ExprPtr, std::vector<ScopeWarning>> substExpr(const std::string& doc,
                                                        const Subst& s,
                                                        const ExprPtr& e);

/// Substitutes through one bind, returning the substitution for whatever
/// follows it.
struct SubstBindResult {
  Subst subst;
  Bind bind;
  std::vector<ScopeWarning> warnings;
};
SubstBindResult substBind(const std::string& doc, const Subst& s, const Bind& b);

}  // namespace minicore
