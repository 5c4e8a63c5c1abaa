#include "minicore/var_env.hpp"

namespace minicore {

VarSet emptyVarSet() { return {}; }

VarSet unitVarSet(const Var& v) {
  VarSet vs;
  vs.insert(v);
  return vs;
}

VarSet extendVarSet(VarSet vs, const Var& v) {
  vs.insert(v);
  return vs;
}

VarSet extendVarSetList(VarSet vs, const std::vector<Var>& vars) {
  for (const Var& v : vars) vs.insert(v);
  return vs;
}

VarSet delVarSet(VarSet vs, const Var& v) {
  vs.eraseUnique(varUnique(v));
  return vs;
}

VarSet delVarSetList(VarSet vs, const std::vector<Var>& vars) {
  for (const Var& v : vars) vs.eraseUnique(varUnique(v));
  return vs;
}

std::optional<Var> lookupVarSet(const VarSet& vs, const Var& v) {
  return lookupVarSetByUnique(vs, varUnique(v));
}

std::optional<Var> lookupVarSetByUnique(const VarSet& vs, Unique u) {
  auto it = vs.entries().find(u);
  if (it == vs.entries().end()) return std::nullopt;
  return it->second;
}

bool elemVarSet(const Var& v, const VarSet& vs) {
  return vs.containsUnique(varUnique(v));
}

VarSet mkVarSet(const std::vector<Var>& vars) {
  return extendVarSetList(emptyVarSet(), vars);
}

VarSet unionVarSet(VarSet a, const VarSet& b) {
  for (const auto& [u, v] : b.entries())
    if (!a.containsUnique(u)) a.insert(v);
  return a;
}

VarSet minusVarSet(VarSet a, const VarSet& b) {
  for (const auto& [u, v] : b.entries()) a.eraseUnique(u);
  return a;
}

bool disjointVarSet(const VarSet& a, const VarSet& b) {
  // walk the smaller set
  const VarSet& probe = a.size() <= b.size() ? a : b;
  const VarSet& other = a.size() <= b.size() ? b : a;
  for (const auto& [u, v] : probe.entries())
    if (other.containsUnique(u)) return false;
  return true;
}

bool subVarSet(const VarSet& a, const VarSet& b) {
  for (const auto& [u, v] : a.entries())
    if (!b.containsUnique(u)) return false;
  return true;
}

bool anyVarSet(const std::function<bool(const Var&)>& pred, const VarSet& vs) {
  for (const auto& [u, v] : vs.entries())
    if (pred(v)) return true;
  return false;
}

VarSet filterVarSet(const std::function<bool(const Var&)>& pred, VarSet vs) {
  VarSet out;
  for (const auto& [u, v] : vs.entries())
    if (pred(v)) out.insert(v);
  return out;
}

InScopeSet mkInScopeSet(VarSet vs) { return InScopeSet(std::move(vs)); }

const VarSet& getInScopeVars(const InScopeSet& iss) { return iss.vars(); }

InScopeSet extendInScopeSet(InScopeSet iss, const Var& v) {
  return InScopeSet(extendVarSet(iss.vars(), v));
}

InScopeSet extendInScopeSetList(InScopeSet iss, const std::vector<Var>& vars) {
  return InScopeSet(extendVarSetList(iss.vars(), vars));
}

std::optional<Var> lookupInScope(const InScopeSet& iss, const Var& v) {
  return lookupVarSet(iss.vars(), v);
}

}  // namespace minicore
