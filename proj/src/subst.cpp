#include "minicore/subst.hpp"

namespace minicore {

Subst mkEmptySubst(InScopeSet iss) { return Subst{std::move(iss), {}}; }

const VarSet& getSubstInScopeVars(const Subst& s) {
  return getInScopeVars(s.in_scope);
}

Var uniqAway(const InScopeSet& iss, const Var& v) {
  const VarSet& taken = getInScopeVars(iss);
  if (!taken.containsUnique(varUnique(v))) return v;
  Unique candidate = varUnique(v);
  do {
    ++candidate.number;
  } while (taken.containsUnique(candidate));
  Var fresh = v;
  fresh.real_unique = candidate;
  fresh.var_name.name_unique = candidate;
  return fresh;
}

std::pair<ExprPtr, std::optional<ScopeWarning>> lookupIdSubst(
    const std::string& doc, const Subst& s, const Var& v) {
  if (!isLocalVar(v)) return {mkVar(v), std::nullopt};
  if (auto hit = lookupVarEnv(s.id_env, v)) return {*hit, std::nullopt};
  if (auto in_scope = lookupInScope(s.in_scope, v))
    return {mkVar(*in_scope), std::nullopt};
  return {mkVar(v), ScopeWarning{doc, v}};
}

std::pair<Subst, Var> substIdBndr(const std::string& /*doc*/, const Subst& s,
                                  const Var& old_id) {
  // No type or metadata rewriting happens here: types are opaque atoms and
  // the info token is inert, so the freshened id is the new id.
  Var new_id = uniqAway(s.in_scope, old_id);
  bool no_change = varUnique(new_id) == varUnique(old_id);
  VarEnv<ExprPtr> env = no_change
                            ? delVarEnv(s.id_env, old_id)
                            : extendVarEnv(s.id_env, old_id, mkVar(new_id));
  Subst out{extendInScopeSet(s.in_scope, new_id), std::move(env)};
  return {std::move(out), std::move(new_id)};
}

std::pair<Subst, Var> substBndr(const std::string& doc, const Subst& s,
                                const Var& bndr) {
  return substIdBndr(doc, s, bndr);
}

std::pair<Subst, std::vector<Var>> substBndrs(const std::string& doc, Subst s,
                                              const std::vector<Var>& bndrs) {
  std::vector<Var> out;
  out.reserve(bndrs.size());
  for (const Var& b : bndrs) {
    auto [s2, b2] = substIdBndr(doc, s, b);
    s = std::move(s2);
    out.push_back(std::move(b2));
  }
  return {std::move(s), std::move(out)};
}

std::pair<Subst, std::vector<Var>> substRecBndrs(const std::string& doc, Subst s,
                                                 const std::vector<Var>& bndrs) {
  return substBndrs(doc, std::move(s), bndrs);
}

namespace {

ExprPtr substExprGo(const std::string& doc, const Subst& s, const ExprPtr& e,
                    std::vector<ScopeWarning>& warnings) {
  return std::visit(
      overloaded{
          [&](const VarExpr& v) {
            auto [result, warning] = lookupIdSubst(doc, s, v.var);
            if (warning) warnings.push_back(std::move(*warning));
            return result;
          },
          [&](const LitExpr&) { return e; },
          [&](const AppExpr& a) {
            ExprPtr fun = substExprGo(doc, s, a.fun, warnings);
            ExprPtr arg = substExprGo(doc, s, a.arg, warnings);
            return mkApp(std::move(fun), std::move(arg));
          },
          [&](const LamExpr& l) {
            auto [s1, bndr] = substBndr(doc, s, l.binder);
            return mkLam(std::move(bndr), substExprGo(doc, s1, l.body, warnings));
          },
          [&](const LetExpr& l) {
            return std::visit(
                overloaded{
                    [&](const NonRec& nr) {
                      ExprPtr rhs = substExprGo(doc, s, nr.rhs, warnings);
                      auto [s1, bndr] = substBndr(doc, s, nr.binder);
                      ExprPtr body = substExprGo(doc, s1, l.body, warnings);
                      return mkLet(NonRec{std::move(bndr), std::move(rhs)},
                                   std::move(body));
                    },
                    [&](const Rec& r) {
                      std::vector<Var> olds;
                      olds.reserve(r.pairs.size());
                      for (const auto& [v, rhs] : r.pairs) olds.push_back(v);
                      auto [s1, news] = substRecBndrs(doc, s, olds);
                      Rec out;
                      out.pairs.reserve(r.pairs.size());
                      for (std::size_t i = 0; i < r.pairs.size(); ++i)
                        out.pairs.emplace_back(
                            news[i],
                            substExprGo(doc, s1, r.pairs[i].second, warnings));
                      ExprPtr body = substExprGo(doc, s1, l.body, warnings);
                      return mkLet(std::move(out), std::move(body));
                    }},
                l.bind);
          },
          [&](const CaseExpr& c) {
            ExprPtr scrut = substExprGo(doc, s, c.scrut, warnings);
            auto [s1, bndr] = substBndr(doc, s, c.case_bndr);
            std::vector<Alt> alts;
            alts.reserve(c.alts.size());
            for (const Alt& alt : c.alts) {
              auto [s2, pats] = substBndrs(doc, s1, alt.pats);
              ExprPtr rhs = substExprGo(doc, s2, alt.rhs, warnings);
              alts.push_back(Alt{alt.con, std::move(pats), std::move(rhs)});
            }
            return mkCase(std::move(scrut), std::move(bndr), c.result_ty,
                          std::move(alts));
          },
          [&](const CastExpr& c) {
            return mkCast(substExprGo(doc, s, c.body, warnings), c.coercion);
          },
          [&](const TypeExpr&) { return e; },
          [&](const CoercionExpr&) { return e; }},
      e->node);
}

}  // namespace

std::pair<ExprPtr, std::vector<ScopeWarning>> substExpr(const std::string& doc,
                                                        const Subst& s,
                                                        const ExprPtr& e) {
  std::vector<ScopeWarning> warnings;
  ExprPtr out = substExprGo(doc, s, e, warnings);
  return {std::move(out), std::move(warnings)};
}

SubstBindResult substBind(const std::string& doc, const Subst& s, const Bind& b) {
  std::vector<ScopeWarning> warnings;
  return std::visit(
      overloaded{
          [&](const NonRec& nr) {
            ExprPtr rhs = substExprGo(doc, s, nr.rhs, warnings);
            auto [s1, bndr] = substBndr(doc, s, nr.binder);
            return SubstBindResult{std::move(s1),
                                   NonRec{std::move(bndr), std::move(rhs)},
                                   std::move(warnings)};
          },
          [&](const Rec& r) {
            std::vector<Var> olds;
            olds.reserve(r.pairs.size());
            for (const auto& [v, rhs] : r.pairs) olds.push_back(v);
            auto [s1, news] = substRecBndrs(doc, s, olds);
            Rec out;
            out.pairs.reserve(r.pairs.size());
            for (std::size_t i = 0; i < r.pairs.size(); ++i)
              out.pairs.emplace_back(
                  news[i], substExprGo(doc, s1, r.pairs[i].second, warnings));
            return SubstBindResult{std::move(s1), std::move(out),
                                   std::move(warnings)};
          }},
      b);
}

}  // namespace minicore
