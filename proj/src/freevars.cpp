#include "minicore/freevars.hpp"

namespace minicore {

namespace {

// Unions are left-biased, so the earlier (leftmost) occurrence wins.
VarSet exprFvs(const ExprPtr& e) {
  return std::visit(
      overloaded{
          [](const VarExpr& v) {
            return isLocalUnique(varUnique(v.var)) ? unitVarSet(v.var)
                                                   : emptyVarSet();
          },
          [](const LitExpr&) { return emptyVarSet(); },
          [](const AppExpr& a) { return unionVarSet(exprFvs(a.fun), exprFvs(a.arg)); },
          [](const LamExpr& l) { return delVarSet(exprFvs(l.body), l.binder); },
          [](const LetExpr& l) {
            VarSet body = delVarSetList(exprFvs(l.body), bindersOf(l.bind));
            return unionVarSet(bindFreeVars(l.bind), std::move(body));
          },
          [](const CaseExpr& c) {
            VarSet acc = exprFvs(c.scrut);
            for (const Alt& alt : c.alts) {
              VarSet rhs = delVarSetList(exprFvs(alt.rhs), alt.pats);
              rhs = delVarSet(std::move(rhs), c.case_bndr);
              acc = unionVarSet(std::move(acc), rhs);
            }
            return acc;
          },
          [](const CastExpr& c) { return exprFvs(c.body); },
          [](const TypeExpr&) { return emptyVarSet(); },
          [](const CoercionExpr&) { return emptyVarSet(); }},
      e->node);
}

}  // namespace

VarSet exprFreeVars(const ExprPtr& e) { return exprFvs(e); }

VarSet bindFreeVars(const Bind& b) {
  return std::visit(
      overloaded{[](const NonRec& nr) { return exprFvs(nr.rhs); },
                 [](const Rec& r) {
                   VarSet acc;
                   for (const auto& [v, rhs] : r.pairs)
                     acc = unionVarSet(std::move(acc), exprFvs(rhs));
                   for (const auto& [v, rhs] : r.pairs)
                     acc.eraseUnique(varUnique(v));
                   return acc;
                 }},
      b);
}

}  // namespace minicore
