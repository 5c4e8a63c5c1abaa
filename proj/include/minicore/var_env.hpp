// Unique-keyed finite sets and environments of variables. Persistent value
// semantics: every operation returns a new collection.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "minicore/core_ir.hpp"

namespace minicore {

/// A set of variables keyed by their uniques. Invariant (ValidVarSet):
/// every stored entry (u, v) has varUnique(v) == u; all constructors and
/// operations here insert only at key varUnique(v). Iteration order is the
/// unique order, so printing and folds are deterministic.
class VarSet {
 public:
  using Map = std::map<Unique, Var>;

  VarSet() = default;

  /// Unchecked escape hatch; lets tests forge sets that break ValidVarSet.
  static VarSet fromRaw(Map raw) {
    VarSet vs;
    vs.entries_ = std::move(raw);
    return vs;
  }

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool containsUnique(Unique u) const { return entries_.count(u) != 0; }
  void insert(const Var& v) { entries_.insert_or_assign(varUnique(v), v); }
  void eraseUnique(Unique u) { entries_.erase(u); }

 private:
  Map entries_;
};

VarSet emptyVarSet();
VarSet unitVarSet(const Var& v);
VarSet extendVarSet(VarSet vs, const Var& v);
VarSet extendVarSetList(VarSet vs, const std::vector<Var>& vars);
VarSet delVarSet(VarSet vs, const Var& v);
VarSet delVarSetList(VarSet vs, const std::vector<Var>& vars);
std::optional<Var> lookupVarSet(const VarSet& vs, const Var& v);
std::optional<Var> lookupVarSetByUnique(const VarSet& vs, Unique u);
bool elemVarSet(const Var& v, const VarSet& vs);
VarSet mkVarSet(const std::vector<Var>& vars);
/// Left-biased: on a unique collision the entry from `a` is kept.
VarSet unionVarSet(VarSet a, const VarSet& b);
VarSet minusVarSet(VarSet a, const VarSet& b);
bool disjointVarSet(const VarSet& a, const VarSet& b);
/// Domain inclusion on uniques only.
bool subVarSet(const VarSet& a, const VarSet& b);
bool anyVarSet(const std::function<bool(const Var&)>& pred, const VarSet& vs);
VarSet filterVarSet(const std::function<bool(const Var&)>& pred, VarSet vs);

/// Environment keyed by variable uniques.
template <typename V>
class VarEnv {
 public:
  using Map = std::map<Unique, V>;

  const Map& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  void insert(Unique u, V value) { entries_.insert_or_assign(u, std::move(value)); }
  void eraseUnique(Unique u) { entries_.erase(u); }
  bool containsUnique(Unique u) const { return entries_.count(u) != 0; }

 private:
  Map entries_;
};

template <typename V>
std::optional<V> lookupVarEnv(const VarEnv<V>& env, const Var& v) {
  auto it = env.entries().find(varUnique(v));
  if (it == env.entries().end()) return std::nullopt;
  return it->second;
}

template <typename V>
VarEnv<V> extendVarEnv(VarEnv<V> env, const Var& v, V value) {
  env.insert(varUnique(v), std::move(value));
  return env;
}

template <typename V>
VarEnv<V> delVarEnv(VarEnv<V> env, const Var& v) {
  env.eraseUnique(varUnique(v));
  return env;
}

template <typename V>
bool isEmptyVarEnv(const VarEnv<V>& env) {
  return env.empty();
}

template <typename V>
std::vector<Unique> domainUniques(const VarEnv<V>& env) {
  std::vector<Unique> out;
  out.reserve(env.entries().size());
  for (const auto& [u, value] : env.entries()) out.push_back(u);
  return out;
}

/// vs restricted to the uniques not bound by env.
template <typename V>
VarSet minusDom(VarSet vs, const VarEnv<V>& env) {
  for (const auto& [u, value] : env.entries()) vs.eraseUnique(u);
  return vs;
}

/// The set of variables in scope; lookups drive capture-avoiding renaming.
class InScopeSet {
 public:
  InScopeSet() = default;
  explicit InScopeSet(VarSet vs) : vars_(std::move(vs)) {}

  const VarSet& vars() const { return vars_; }

 private:
  VarSet vars_;
};

InScopeSet mkInScopeSet(VarSet vs);
const VarSet& getInScopeVars(const InScopeSet& iss);
InScopeSet extendInScopeSet(InScopeSet iss, const Var& v);
InScopeSet extendInScopeSetList(InScopeSet iss, const std::vector<Var>& vars);
std::optional<Var> lookupInScope(const InScopeSet& iss, const Var& v);

}  // namespace minicore
