#include "minicore/exitify.hpp"

#include <algorithm>

#include "minicore/freevars.hpp"
#include "minicore/lint.hpp"
#include "minicore/subst.hpp"

namespace minicore {

const Unique initExitJoinUnique{ScopeClass::Local, 101};

namespace {

Var zapInfo(Var v) {
  v.id_info = {};
  return v;
}

void collectBoundVars(const ExprPtr& e, std::vector<Var>& out);

void collectBindBoundVars(const Bind& b, std::vector<Var>& out) {
  std::visit(overloaded{[&](const NonRec& nr) {
                          out.push_back(nr.binder);
                          collectBoundVars(nr.rhs, out);
                        },
                        [&](const Rec& r) {
                          for (const auto& [v, rhs] : r.pairs) {
                            out.push_back(v);
                            collectBoundVars(rhs, out);
                          }
                        }},
             b);
}

void collectBoundVars(const ExprPtr& e, std::vector<Var>& out) {
  std::visit(overloaded{[&](const VarExpr&) {},
                        [&](const LitExpr&) {},
                        [&](const AppExpr& a) {
                          collectBoundVars(a.fun, out);
                          collectBoundVars(a.arg, out);
                        },
                        [&](const LamExpr& l) {
                          out.push_back(l.binder);
                          collectBoundVars(l.body, out);
                        },
                        [&](const LetExpr& l) {
                          collectBindBoundVars(l.bind, out);
                          collectBoundVars(l.body, out);
                        },
                        [&](const CaseExpr& c) {
                          collectBoundVars(c.scrut, out);
                          out.push_back(c.case_bndr);
                          for (const Alt& alt : c.alts) {
                            out.insert(out.end(), alt.pats.begin(),
                                       alt.pats.end());
                            collectBoundVars(alt.rhs, out);
                          }
                        },
                        [&](const CastExpr& c) { collectBoundVars(c.body, out); },
                        [&](const TypeExpr&) {},
                        [&](const CoercionExpr&) {}},
             e->node);
}

std::uint64_t joinArityOf(const Var& v) {
  auto arity = isJoinIdMaybe(v);
  if (!arity)
    throw MalformedJoinRhs("exitify: " + v.var_name.occ_text +
                           " is not a join id in a join group");
  return *arity;
}

// One recursive group. go walks tail positions only; when a subtree has no
// recursive calls it either stays put or becomes a jump to a fresh exit
// join point.
class RecExitifier {
 public:
  RecExitifier(ExitifyMode mode, const InScopeSet& in_scope,
               const std::vector<std::pair<Var, ExprPtr>>& pairs,
               ExitState& state)
      : mode_(mode), in_scope_(in_scope), pairs_(pairs), state_(state) {
    std::vector<Var> binders;
    binders.reserve(pairs.size());
    for (const auto& [v, rhs] : pairs) binders.push_back(v);
    recursive_calls_ = mkVarSet(binders);
    group_binders_ = std::move(binders);
  }

  std::vector<Bind> run() {
    std::size_t first_exit = state_.exits.size();
    Rec rewritten;
    rewritten.pairs.reserve(pairs_.size());
    for (const auto& [join_id, rhs] : pairs_) {
      auto [params, body] = collectNBinders(joinArityOf(join_id), rhs);
      ExprPtr body2 = go(params, body);
      rewritten.pairs.emplace_back(join_id, mkLams(params, std::move(body2)));
    }
    std::vector<Bind> out;
    for (std::size_t i = first_exit; i < state_.exits.size(); ++i)
      out.push_back(NonRec{state_.exits[i].first, state_.exits[i].second});
    out.push_back(std::move(rewritten));
    return out;
  }

 private:
  ExprPtr go(const std::vector<Var>& captured, const ExprPtr& e) {
    VarSet fvs = exprFreeVars(e);
    if (disjointVarSet(fvs, recursive_calls_)) return goExit(captured, e, fvs);

    if (const auto* let = std::get_if<LetExpr>(&e->node)) {
      if (const auto* nr = std::get_if<NonRec>(&let->bind)) {
        if (isJoinId(nr->binder)) {
          auto [params, jbody] = collectNBinders(joinArityOf(nr->binder), nr->rhs);
          ExprPtr jbody2 = go(append(captured, params), jbody);
          ExprPtr body2 = go(append(captured, {nr->binder}), let->body);
          return mkLet(NonRec{nr->binder, mkLams(params, std::move(jbody2))},
                       std::move(body2));
        }
        ExprPtr body2 = go(append(captured, {nr->binder}), let->body);
        return mkLet(let->bind, std::move(body2));
      }
      const auto& rec = std::get<Rec>(let->bind);
      std::vector<Var> group = bindersOf(let->bind);
      if (!rec.pairs.empty() && isJoinId(rec.pairs.front().first)) {
        Rec rewritten;
        rewritten.pairs.reserve(rec.pairs.size());
        std::vector<Var> with_group = append(captured, group);
        for (const auto& [j, rhs] : rec.pairs) {
          auto [params, jbody] = collectNBinders(joinArityOf(j), rhs);
          ExprPtr jbody2 = go(append(with_group, params), jbody);
          rewritten.pairs.emplace_back(j, mkLams(params, std::move(jbody2)));
        }
        ExprPtr body2 = go(with_group, let->body);
        return mkLet(std::move(rewritten), std::move(body2));
      }
      ExprPtr body2 = go(append(captured, group), let->body);
      return mkLet(let->bind, std::move(body2));
    }

    if (const auto* cs = std::get_if<CaseExpr>(&e->node)) {
      std::vector<Alt> alts;
      alts.reserve(cs->alts.size());
      for (const Alt& alt : cs->alts) {
        std::vector<Var> inner = append(captured, {cs->case_bndr});
        inner = append(inner, alt.pats);
        ExprPtr rhs = go(inner, alt.rhs);
        alts.push_back(Alt{alt.con, alt.pats, std::move(rhs)});
      }
      return mkCase(cs->scrut, cs->case_bndr, cs->result_ty, std::move(alts));
    }

    // jumps back into the group, lambdas, casts, atoms: not tail positions
    // we can float from
    return e;
  }

  ExprPtr goExit(const std::vector<Var>& captured, const ExprPtr& e,
                 const VarSet& fvs) {
    // too small to be worth a join point
    if (std::holds_alternative<VarExpr>(e->node) ||
        std::holds_alternative<LitExpr>(e->node))
      return e;
    // a lambda is already a value; floating it would also give the exit
    // join point more leading lambdas than its arity
    if (std::holds_alternative<LamExpr>(e->node)) return e;
    // nothing from outside the loop becomes inlinable by floating this
    if (minusVarSet(fvs, mkVarSet(captured)).empty()) return e;
    std::vector<Var> abs_vars = pickAbsVars(mode_, captured, fvs);
    // join points cannot become lambda parameters
    for (const Var& v : abs_vars)
      if (isJoinId(v)) return e;

    ExprPtr rhs = mkLams(abs_vars, e);
    InScopeSet avoid = extendInScopeSetList(in_scope_, captured);
    avoid = extendInScopeSetList(std::move(avoid), group_binders_);
    for (const auto& [exit_id, exit_rhs] : state_.exits)
      avoid = extendInScopeSet(std::move(avoid), exit_id);

    Unique supply{ScopeClass::Local, state_.next_exit_number++};
    Var tmpl{Name{"exit", supply}, supply, TypeAtom{}, IdScope::LocalId,
             IdDetails::joinId(abs_vars.size()), IdInfo{}};
    Var exit_id = uniqAway(avoid, tmpl);
    state_.exits.emplace_back(exit_id, std::move(rhs));

    std::vector<ExprPtr> args;
    args.reserve(abs_vars.size());
    for (const Var& v : abs_vars) args.push_back(mkVar(v));
    return mkApps(mkVar(exit_id), args);
  }

  static std::vector<Var> append(std::vector<Var> base,
                                 const std::vector<Var>& extra) {
    base.insert(base.end(), extra.begin(), extra.end());
    return base;
  }

  ExitifyMode mode_;
  const InScopeSet& in_scope_;
  const std::vector<std::pair<Var, ExprPtr>>& pairs_;
  ExitState& state_;
  VarSet recursive_calls_;
  std::vector<Var> group_binders_;
};

class ProgramExitifier {
 public:
  ProgramExitifier(ExitifyMode mode, ExitState& state)
      : mode_(mode), state_(state) {}

  ExprPtr go(const InScopeSet& iss, const ExprPtr& e) {
    return std::visit(
        overloaded{
            [&](const VarExpr&) { return e; },
            [&](const LitExpr&) { return e; },
            [&](const AppExpr& a) {
              return mkApp(go(iss, a.fun), go(iss, a.arg));
            },
            [&](const LamExpr& l) {
              return mkLam(l.binder,
                           go(extendInScopeSet(iss, l.binder), l.body));
            },
            [&](const LetExpr& l) {
              return std::visit(
                  overloaded{
                      [&](const NonRec& nr) {
                        ExprPtr rhs = go(iss, nr.rhs);
                        InScopeSet inner = extendInScopeSet(iss, nr.binder);
                        return mkLet(NonRec{nr.binder, std::move(rhs)},
                                     go(inner, l.body));
                      },
                      [&](const Rec& r) {
                        std::vector<Var> binders = bindersOf(l.bind);
                        InScopeSet inner = extendInScopeSetList(iss, binders);
                        std::vector<std::pair<Var, ExprPtr>> pairs;
                        pairs.reserve(r.pairs.size());
                        for (const auto& [v, rhs] : r.pairs)
                          pairs.emplace_back(v, go(inner, rhs));
                        ExprPtr body = go(inner, l.body);
                        bool all_join =
                            !pairs.empty() &&
                            std::all_of(pairs.begin(), pairs.end(),
                                        [](const auto& p) {
                                          return isJoinId(p.first);
                                        });
                        if (all_join) {
                          RecExitifier rec(mode_, inner, pairs, state_);
                          return mkLets(rec.run(), std::move(body));
                        }
                        return mkLet(Rec{std::move(pairs)}, std::move(body));
                      }},
                  l.bind);
            },
            [&](const CaseExpr& c) {
              ExprPtr scrut = go(iss, c.scrut);
              InScopeSet with_bndr = extendInScopeSet(iss, c.case_bndr);
              std::vector<Alt> alts;
              alts.reserve(c.alts.size());
              for (const Alt& alt : c.alts) {
                InScopeSet inner = extendInScopeSetList(with_bndr, alt.pats);
                ExprPtr rhs = go(inner, alt.rhs);
                alts.push_back(Alt{alt.con, alt.pats, std::move(rhs)});
              }
              return mkCase(std::move(scrut), c.case_bndr, c.result_ty,
                            std::move(alts));
            },
            [&](const CastExpr&) { return e; },  // not traversed
            [&](const TypeExpr&) { return e; },
            [&](const CoercionExpr&) { return e; }},
        e->node);
  }

 private:
  ExitifyMode mode_;
  ExitState& state_;
};

}  // namespace

std::vector<Var> pickAbsVars(ExitifyMode mode, const std::vector<Var>& captured,
                             const VarSet& fvs) {
  std::vector<Var> out;
  if (mode == ExitifyMode::LegacyBug) {
    for (const Var& v : captured)
      if (fvs.containsUnique(varUnique(v))) out.push_back(zapInfo(v));
    return out;
  }
  VarSet remaining = fvs;
  std::vector<std::size_t> picked;
  for (std::size_t i = captured.size(); i-- > 0;) {
    Unique u = varUnique(captured[i]);
    if (remaining.containsUnique(u)) {
      picked.push_back(i);
      remaining.eraseUnique(u);
    }
  }
  std::reverse(picked.begin(), picked.end());
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(zapInfo(captured[i]));
  return out;
}

std::vector<Bind> exitifyRec(ExitifyMode mode, const InScopeSet& in_scope,
                             const std::vector<std::pair<Var, ExprPtr>>& pairs,
                             ExitState& state) {
  RecExitifier rec(mode, in_scope, pairs, state);
  return rec.run();
}

std::vector<Bind> exitifyRec(ExitifyMode mode, const InScopeSet& in_scope,
                             const std::vector<std::pair<Var, ExprPtr>>& pairs) {
  ExitState state;
  return exitifyRec(mode, in_scope, pairs, state);
}

CoreProgram exitifyProgram(ExitifyMode mode, const CoreProgram& p) {
  ExitState state;
  // Seed the scope with every binder of the program, not just the path to a
  // group, so no fresh exit id can collide with a bound name anywhere.
  std::vector<Var> bound = bindersOfBinds(p);
  for (const auto& [v, rhs] : flattenBinds(p)) collectBoundVars(rhs, bound);
  InScopeSet top = mkInScopeSet(mkVarSet(bound));

  ProgramExitifier pass(mode, state);
  CoreProgram out;
  out.reserve(p.size());
  for (const Bind& b : p) {
    out.push_back(std::visit(
        overloaded{[&](const NonRec& nr) -> Bind {
                     return NonRec{nr.binder, pass.go(top, nr.rhs)};
                   },
                   [&](const Rec& r) -> Bind {
                     Rec rewritten;
                     rewritten.pairs.reserve(r.pairs.size());
                     for (const auto& [v, rhs] : r.pairs)
                       rewritten.pairs.emplace_back(v, pass.go(top, rhs));
                     return rewritten;
                   }},
        b));
  }
  return out;
}

}  // namespace minicore
