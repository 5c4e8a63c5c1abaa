#include "minicore/lint.hpp"

#include <set>

namespace minicore {

bool goodVar(const Var& v) {
  return isLocalVar(v) == isLocalUnique(varUnique(v)) &&
         varUnique(v) == v.var_name.name_unique;
}

bool goodLocalVar(const Var& v) { return goodVar(v) && isLocalVar(v); }

bool isJoinId(const Var& v) { return v.id_details.join_arity.has_value(); }

std::optional<std::uint64_t> isJoinIdMaybe(const Var& v) {
  return v.id_details.join_arity;
}

VarSet updJPS(VarSet jps, const Var& v) {
  return isJoinId(v) ? extendVarSet(std::move(jps), v)
                     : delVarSet(std::move(jps), v);
}

VarSet updJPSs(VarSet jps, const std::vector<Var>& vs) {
  for (const Var& v : vs) jps = updJPS(std::move(jps), v);
  return jps;
}

namespace {

std::string varLabel(const Var& v) {
  std::string s = v.var_name.occ_text + "_" +
                  std::to_string(varUnique(v).number);
  if (!isLocalUnique(varUnique(v))) s += "g";
  return s;
}

// Checker with an optional violation sink. Without a sink it short-circuits
// exactly like the boolean definitions; with one it keeps walking so a
// report lists every failure.
class Checker {
 public:
  explicit Checker(std::vector<LintViolation>* sink) : sink_(sink) {}

  bool goodVarC(const Var& v) {
    bool scope_ok = isLocalVar(v) == isLocalUnique(varUnique(v));
    bool name_ok = varUnique(v) == v.var_name.name_unique;
    if (!scope_ok)
      fail("GoodVar/ScopeMismatch",
           varLabel(v) + ": idScope disagrees with the unique's tag");
    if (!scope_ok && !sink_) return false;
    if (!name_ok)
      fail("GoodVar/NameUniqueMismatch",
           varLabel(v) + ": name unique differs from the real unique");
    return scope_ok && name_ok;
  }

  bool goodLocalVarC(const Var& v) {
    bool good = goodVarC(v);
    if (!good && !sink_) return false;
    if (!isLocalVar(v)) {
      fail("GoodLocalVar/NotLocal", varLabel(v) + ": binder is not local");
      return false;
    }
    return good;
  }

  bool wellScopedVarC(const Var& v, const VarSet& in_scope) {
    if (!isLocalVar(v)) return goodVarC(v);
    auto hit = lookupVarSet(in_scope, v);
    if (!hit) {
      fail("WellScopedVar/None", varLabel(v) + ": no binder in scope");
      return false;
    }
    bool ae = almostEqual(v, *hit);
    if (!ae)
      fail("WellScopedVar/AlmostEqual",
           varLabel(v) + ": in-scope entry differs beyond IdInfo");
    if (!ae && !sink_) return false;
    return goodVarC(v) && ae;
  }

  bool wellScopedC(const ExprPtr& e, const VarSet& in_scope) {
    return std::visit(
        overloaded{
            [&](const VarExpr& v) {
              Frame f(this, "var(" + varLabel(v.var) + ")");
              return wellScopedVarC(v.var, in_scope);
            },
            [&](const LitExpr&) { return true; },
            [&](const AppExpr& a) {
              bool ok = with("app.fun", [&] { return wellScopedC(a.fun, in_scope); });
              if (!ok && !sink_) return false;
              return with("app.arg", [&] { return wellScopedC(a.arg, in_scope); }) && ok;
            },
            [&](const LamExpr& l) {
              bool ok = with("lam(" + varLabel(l.binder) + ")",
                             [&] { return goodLocalVarC(l.binder); });
              if (!ok && !sink_) return false;
              return with("lam.body", [&] {
                       return wellScopedC(l.body,
                                          extendVarSet(in_scope, l.binder));
                     }) &&
                     ok;
            },
            [&](const LetExpr& l) {
              bool ok = wellScopedBindC(l.bind, in_scope);
              if (!ok && !sink_) return false;
              VarSet body_scope = extendVarSetList(in_scope, bindersOf(l.bind));
              return with("let.body",
                          [&] { return wellScopedC(l.body, body_scope); }) &&
                     ok;
            },
            [&](const CaseExpr& c) {
              bool ok = with("case.scrut",
                             [&] { return wellScopedC(c.scrut, in_scope); });
              if (!ok && !sink_) return false;
              bool bndr_ok = with("case(" + varLabel(c.case_bndr) + ")",
                                  [&] { return goodLocalVarC(c.case_bndr); });
              ok = ok && bndr_ok;
              if (!ok && !sink_) return false;
              for (std::size_t i = 0; i < c.alts.size(); ++i) {
                const Alt& alt = c.alts[i];
                Frame f(this, "case.alt[" + std::to_string(i) + "]");
                for (const Var& p : alt.pats) {
                  bool p_ok = with("pat(" + varLabel(p) + ")",
                                   [&] { return goodLocalVarC(p); });
                  ok = ok && p_ok;
                  if (!ok && !sink_) return false;
                }
                VarSet alt_scope = extendVarSet(in_scope, c.case_bndr);
                alt_scope = extendVarSetList(std::move(alt_scope), alt.pats);
                bool rhs_ok =
                    with("rhs", [&] { return wellScopedC(alt.rhs, alt_scope); });
                ok = ok && rhs_ok;
                if (!ok && !sink_) return false;
              }
              return ok;
            },
            [&](const CastExpr& c) {
              return with("cast.body",
                          [&] { return wellScopedC(c.body, in_scope); });
            },
            [&](const TypeExpr&) { return true; },
            [&](const CoercionExpr&) { return true; }},
        e->node);
  }

  bool wellScopedBindC(const Bind& b, const VarSet& in_scope) {
    return std::visit(
        overloaded{
            [&](const NonRec& nr) {
              bool ok = with("nonrec(" + varLabel(nr.binder) + ")",
                             [&] { return goodLocalVarC(nr.binder); });
              if (!ok && !sink_) return false;
              // the rhs sees the outer scope only
              return with("nonrec.rhs",
                          [&] { return wellScopedC(nr.rhs, in_scope); }) &&
                     ok;
            },
            [&](const Rec& r) {
              bool ok = true;
              std::vector<Var> binders;
              binders.reserve(r.pairs.size());
              for (const auto& [v, rhs] : r.pairs) binders.push_back(v);
              for (const Var& v : binders) {
                bool v_ok = with("rec(" + varLabel(v) + ")",
                                 [&] { return goodLocalVarC(v); });
                ok = ok && v_ok;
                if (!ok && !sink_) return false;
              }
              std::set<Unique> seen;
              for (const Var& v : binders) {
                if (!seen.insert(varUnique(v)).second) {
                  fail("WellScoped/RecDupUnique",
                       "rec group binds " + varLabel(v) + " twice");
                  ok = false;
                  if (!sink_) return false;
                }
              }
              VarSet rhs_scope = extendVarSetList(in_scope, binders);
              for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                bool rhs_ok = with("rec.rhs[" + std::to_string(i) + "]", [&] {
                  return wellScopedC(r.pairs[i].second, rhs_scope);
                });
                ok = ok && rhs_ok;
                if (!ok && !sink_) return false;
              }
              return ok;
            }},
        b);
  }

  bool wellScopedProgramC(const CoreProgram& p) {
    bool ok = true;
    std::vector<Var> top = bindersOfBinds(p);
    std::set<Unique> seen;
    for (const Var& v : top) {
      if (!seen.insert(varUnique(v)).second) {
        fail("Program/DupTopUnique",
             "top level binds " + varLabel(v) + " twice");
        ok = false;
        if (!sink_) return false;
      }
    }
    VarSet scope = mkVarSet(top);
    auto flat = flattenBinds(p);
    for (std::size_t i = 0; i < flat.size(); ++i) {
      Frame f(this, "top[" + std::to_string(i) + "](" +
                        varLabel(flat[i].first) + ")");
      bool rhs_ok = wellScopedC(flat[i].second, scope);
      ok = ok && rhs_ok;
      if (!ok && !sink_) return false;
    }
    return ok;
  }

  bool joinValidC(const ExprPtr& e, std::uint64_t n, const VarSet& jps) {
    return std::visit(
        overloaded{
            [&](const VarExpr& v) {
              auto arity = isJoinIdMaybe(v.var);
              if (!arity) return true;
              bool ok = isLocalVar(v.var) && *arity <= n &&
                        elemVarSet(v.var, jps);
              if (!ok)
                fail("JoinPoints/BadJump",
                     varLabel(v.var) + ": join occurrence is not a saturated "
                                       "tail call to a jumpable join point");
              return ok;
            },
            [&](const LitExpr&) { return true; },
            [&](const AppExpr& a) {
              bool ok = with("app.fun",
                             [&] { return joinValidC(a.fun, n + 1, jps); });
              if (!ok && !sink_) return false;
              return with("app.arg", [&] {
                       return joinValidC(a.arg, 0, emptyVarSet());
                     }) &&
                     ok;
            },
            [&](const LamExpr& l) {
              bool ok = true;
              if (isJoinId(l.binder)) {
                fail("JoinPoints/LamJoinBinder",
                     varLabel(l.binder) + ": lambda binder is a join id");
                ok = false;
                if (!sink_) return false;
              }
              return with("lam.body", [&] {
                       return joinValidC(l.body, 0, emptyVarSet());
                     }) &&
                     ok;
            },
            [&](const LetExpr& l) {
              return std::visit(
                  overloaded{
                      [&](const NonRec& nr) {
                        bool ok = with("nonrec(" + varLabel(nr.binder) + ")",
                                       [&] {
                                         return joinValidPairC(nr.binder,
                                                               nr.rhs, jps);
                                       });
                        if (!ok && !sink_) return false;
                        VarSet jps2 = updJPS(jps, nr.binder);
                        return with("let.body", [&] {
                                 return joinValidC(l.body, 0, jps2);
                               }) &&
                               ok;
                      },
                      [&](const Rec& r) {
                        bool ok = true;
                        if (r.pairs.empty()) {
                          fail("JoinPoints/EmptyRec", "empty rec group");
                          ok = false;
                          if (!sink_) return false;
                        }
                        bool all_join = true, none_join = true;
                        for (const auto& [v, rhs] : r.pairs)
                          (isJoinId(v) ? none_join : all_join) = false;
                        if (!(all_join || none_join)) {
                          fail("JoinPoints/MixedRec",
                               "rec group mixes join and non-join binders");
                          ok = false;
                          if (!sink_) return false;
                        }
                        std::vector<Var> binders;
                        for (const auto& [v, rhs] : r.pairs)
                          binders.push_back(v);
                        VarSet jps2 = updJPSs(jps, binders);
                        for (std::size_t i = 0; i < r.pairs.size(); ++i) {
                          bool p_ok = with(
                              "rec(" + varLabel(r.pairs[i].first) + ")", [&] {
                                return joinValidPairC(r.pairs[i].first,
                                                      r.pairs[i].second, jps2);
                              });
                          ok = ok && p_ok;
                          if (!ok && !sink_) return false;
                        }
                        return with("let.body", [&] {
                                 return joinValidC(l.body, 0, jps2);
                               }) &&
                               ok;
                      }},
                  l.bind);
            },
            [&](const CaseExpr& c) {
              bool ok = true;
              if (isJoinId(c.case_bndr)) {
                fail("JoinPoints/CaseJoinBinder",
                     varLabel(c.case_bndr) + ": case binder is a join id");
                ok = false;
                if (!sink_) return false;
              }
              bool scrut_ok = with("case.scrut", [&] {
                return joinValidC(c.scrut, 0, emptyVarSet());
              });
              ok = ok && scrut_ok;
              if (!ok && !sink_) return false;
              VarSet jps2 = delVarSet(jps, c.case_bndr);
              for (std::size_t i = 0; i < c.alts.size(); ++i) {
                const Alt& alt = c.alts[i];
                Frame f(this, "case.alt[" + std::to_string(i) + "]");
                VarSet jps3 = delVarSetList(jps2, alt.pats);
                for (const Var& p : alt.pats) {
                  if (isJoinId(p)) {
                    fail("JoinPoints/PatJoinBinder",
                         varLabel(p) + ": pattern binder is a join id");
                    ok = false;
                    if (!sink_) return false;
                  }
                }
                bool rhs_ok =
                    with("rhs", [&] { return joinValidC(alt.rhs, 0, jps3); });
                ok = ok && rhs_ok;
                if (!ok && !sink_) return false;
              }
              return ok;
            },
            [&](const CastExpr& c) {
              return with("cast.body",
                          [&] { return joinValidC(c.body, 0, jps); });
            },
            [&](const TypeExpr&) { return true; },
            [&](const CoercionExpr&) { return true; }},
        e->node);
  }

  bool joinRHSAuxC(std::uint64_t a, const ExprPtr& rhs, const VarSet& jps) {
    if (a < 1) return false;
    const auto* lam = std::get_if<LamExpr>(&rhs->node);
    if (!lam) {
      fail("JoinPoints/MalformedRhs",
           "join rhs has fewer leading lambdas than its arity");
      return false;
    }
    bool ok = true;
    if (isJoinId(lam->binder)) {
      fail("JoinPoints/LamJoinBinder",
           varLabel(lam->binder) + ": join rhs parameter is a join id");
      ok = false;
      if (!sink_) return false;
    }
    VarSet jps2 = delVarSet(jps, lam->binder);
    bool rest = a == 1 ? with("lam.body",
                              [&] { return joinValidC(lam->body, 0, jps2); })
                       : joinRHSAuxC(a - 1, lam->body, jps2);
    return rest && ok;
  }

  bool joinValidPairC(const Var& v, const ExprPtr& rhs, const VarSet& jps) {
    auto arity = isJoinIdMaybe(v);
    if (!arity) return joinValidC(rhs, 0, emptyVarSet());
    if (*arity == 0) return joinValidC(rhs, 0, jps);
    return joinRHSAuxC(*arity, rhs, jps);
  }

  bool joinValidProgramC(const CoreProgram& p) {
    bool ok = true;
    auto flat = flattenBinds(p);
    for (std::size_t i = 0; i < flat.size(); ++i) {
      Frame f(this, "top[" + std::to_string(i) + "](" +
                        varLabel(flat[i].first) + ")");
      if (isJoinId(flat[i].first)) {
        fail("Program/TopLevelJoin",
             varLabel(flat[i].first) + ": top-level binder is a join id");
        ok = false;
        if (!sink_) return false;
      }
      bool rhs_ok = joinValidC(flat[i].second, 0, emptyVarSet());
      ok = ok && rhs_ok;
      if (!ok && !sink_) return false;
    }
    return ok;
  }

 private:
  struct Frame {
    Frame(Checker* c, std::string label) : checker(c) {
      if (checker->sink_) checker->path_.push_back(std::move(label));
    }
    ~Frame() {
      if (checker->sink_) checker->path_.pop_back();
    }
    Checker* checker;
  };

  template <typename F>
  bool with(std::string label, F&& f) {
    Frame frame(this, std::move(label));
    return f();
  }

  void fail(std::string rule, std::string detail) {
    if (!sink_) return;
    std::string path;
    for (const std::string& seg : path_) {
      if (!path.empty()) path += '/';
      path += seg;
    }
    sink_->push_back({std::move(path), std::move(rule), std::move(detail)});
  }

  std::vector<LintViolation>* sink_;
  std::vector<std::string> path_;
};

LintReport runReport(const std::function<bool(Checker&)>& run) {
  LintReport report;
  Checker checker(&report.violations);
  report.ok = run(checker);
  return report;
}

}  // namespace

bool wellScopedVar(const Var& v, const VarSet& in_scope) {
  return Checker(nullptr).wellScopedVarC(v, in_scope);
}

bool wellScoped(const ExprPtr& e, const VarSet& in_scope) {
  return Checker(nullptr).wellScopedC(e, in_scope);
}

bool wellScopedBind(const Bind& b, const VarSet& in_scope) {
  return Checker(nullptr).wellScopedBindC(b, in_scope);
}

bool wellScopedProgram(const CoreProgram& p) {
  return Checker(nullptr).wellScopedProgramC(p);
}

LintReport wellScopedReport(const ExprPtr& e, const VarSet& in_scope) {
  return runReport([&](Checker& c) { return c.wellScopedC(e, in_scope); });
}

LintReport wellScopedProgramReport(const CoreProgram& p) {
  return runReport([&](Checker& c) { return c.wellScopedProgramC(p); });
}

bool isJoinPointsValid(const ExprPtr& e, std::uint64_t n, const VarSet& jps) {
  return Checker(nullptr).joinValidC(e, n, jps);
}

bool isJoinRHS(const ExprPtr& rhs, std::uint64_t arity, const VarSet& jps) {
  if (arity == 0) return isJoinPointsValid(rhs, 0, jps);
  return Checker(nullptr).joinRHSAuxC(arity, rhs, jps);
}

bool isJoinPointsValidPair(const Var& v, const ExprPtr& rhs, const VarSet& jps) {
  return Checker(nullptr).joinValidPairC(v, rhs, jps);
}

bool isValidJoinPointsPair(const Var& v, const ExprPtr& rhs, const VarSet& jps) {
  auto arity = isJoinIdMaybe(v);
  if (!arity) return false;
  return isJoinRHS(rhs, *arity, jps);
}

bool isJoinPointsValidProgram(const CoreProgram& p) {
  return Checker(nullptr).joinValidProgramC(p);
}

LintReport joinPointsValidProgramReport(const CoreProgram& p) {
  return runReport([&](Checker& c) { return c.joinValidProgramC(p); });
}

LintReport lintProgram(const CoreProgram& p, bool check_join_points) {
  LintReport report = wellScopedProgramReport(p);
  if (check_join_points) {
    LintReport join = joinPointsValidProgramReport(p);
    report.ok = report.ok && join.ok;
    report.violations.insert(report.violations.end(), join.violations.begin(),
                             join.violations.end());
  }
  return report;
}

bool strongSubset(const VarSet& a, const VarSet& b) {
  for (const auto& [u, v] : a.entries()) {
    auto hit = lookupVarSetByUnique(b, u);
    if (!hit || !almostEqual(v, *hit)) return false;
  }
  return true;
}

bool wellScopedSubst(const Subst& s, const VarSet& expr_scope) {
  const VarSet& in_scope = getSubstInScopeVars(s);
  if (!strongSubset(minusDom(expr_scope, s.id_env), in_scope)) return false;
  for (const auto& [u, range_expr] : s.id_env.entries())
    if (!wellScoped(range_expr, in_scope)) return false;
  return true;
}

bool substExtends(const Subst& s1, const std::vector<Var>& vars1,
                  const Subst& s2, const std::vector<Var>& vars2) {
  // 1. equal lengths
  if (vars1.size() != vars2.size()) return false;
  // 2. no duplicate uniques among the new binders
  std::set<Unique> seen;
  for (const Var& v : vars2)
    if (!seen.insert(varUnique(v)).second) return false;
  // 3. the new binders are all good local vars
  for (const Var& v : vars2)
    if (!goodLocalVar(v)) return false;
  // 4. none of them was already in scope
  const VarSet& is1 = getSubstInScopeVars(s1);
  for (const Var& v : vars2)
    if (is1.containsUnique(varUnique(v))) return false;
  // 5. the new in-scope set is strongly equal to the old one plus vars2
  const VarSet& is2 = getSubstInScopeVars(s2);
  VarSet extended = extendVarSetList(is1, vars2);
  if (!strongSubset(is2, extended) || !strongSubset(extended, is2))
    return false;
  // 6. old scope plus old binders, minus the new domain, sits inside is2
  VarSet with_old = extendVarSetList(is1, vars1);
  if (!strongSubset(minusDom(std::move(with_old), s2.id_env), is2))
    return false;
  // 7. new entries are renamings of old binders or were already present
  for (const auto& [u, range_expr] : s2.id_env.entries()) {
    bool accounted = false;
    for (std::size_t i = 0; i < vars1.size() && !accounted; ++i) {
      if (varUnique(vars1[i]) != u) continue;
      const auto* occ = std::get_if<VarExpr>(&range_expr->node);
      accounted = occ && occ->var == vars2[i];
    }
    if (!accounted) {
      auto it = s1.id_env.entries().find(u);
      accounted = it != s1.id_env.entries().end() &&
                  exprEqual(it->second, range_expr);
    }
    if (!accounted) return false;
  }
  return true;
}

bool validVarSetCheck(const VarSet& vs) {
  for (const auto& [u, v] : vs.entries())
    if (varUnique(v) != u) return false;
  return true;
}

}  // namespace minicore
