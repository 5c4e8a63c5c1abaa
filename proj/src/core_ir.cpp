#include "minicore/core_ir.hpp"

#include <algorithm>

namespace minicore {

bool almostEqual(const Var& v1, const Var& v2) {
  return v1.var_name == v2.var_name && v1.real_unique == v2.real_unique &&
         v1.var_type == v2.var_type && v1.id_scope == v2.id_scope &&
         v1.id_details == v2.id_details;
}

Var mkLocalId(std::string occ, std::uint64_t number, TypeAtom ty, IdInfo info) {
  Unique u{ScopeClass::Local, number};
  return Var{Name{std::move(occ), u}, u, std::move(ty), IdScope::LocalId,
             IdDetails::vanilla(), std::move(info)};
}

Var mkGlobalId(std::string occ, std::uint64_t number, TypeAtom ty, IdInfo info) {
  Unique u{ScopeClass::Global, number};
  return Var{Name{std::move(occ), u}, u, std::move(ty), IdScope::GlobalId,
             IdDetails::vanilla(), std::move(info)};
}

Var mkLocalJoinId(std::string occ, std::uint64_t number, std::uint64_t arity,
                  TypeAtom ty, IdInfo info) {
  Unique u{ScopeClass::Local, number};
  return Var{Name{std::move(occ), u}, u, std::move(ty), IdScope::LocalId,
             IdDetails::joinId(arity), std::move(info)};
}

ExprPtr mkVar(Var v) { return std::make_shared<Expr>(Expr{VarExpr{std::move(v)}}); }
ExprPtr mkLit(Literal l) { return std::make_shared<Expr>(Expr{LitExpr{std::move(l)}}); }
ExprPtr mkIntLit(std::int64_t n) { return mkLit(Literal{n}); }
ExprPtr mkStringLit(std::string s) { return mkLit(Literal{std::move(s)}); }
ExprPtr mkApp(ExprPtr fun, ExprPtr arg) {
  return std::make_shared<Expr>(Expr{AppExpr{std::move(fun), std::move(arg)}});
}
ExprPtr mkLam(Var binder, ExprPtr body) {
  return std::make_shared<Expr>(Expr{LamExpr{std::move(binder), std::move(body)}});
}
ExprPtr mkLet(Bind bind, ExprPtr body) {
  return std::make_shared<Expr>(Expr{LetExpr{std::move(bind), std::move(body)}});
}
ExprPtr mkCase(ExprPtr scrut, Var case_bndr, TypeAtom result_ty,
               std::vector<Alt> alts) {
  return std::make_shared<Expr>(Expr{CaseExpr{
      std::move(scrut), std::move(case_bndr), std::move(result_ty), std::move(alts)}});
}
ExprPtr mkCast(ExprPtr body, CoercionAtom co) {
  return std::make_shared<Expr>(Expr{CastExpr{std::move(body), std::move(co)}});
}
ExprPtr mkType(TypeAtom ty) { return std::make_shared<Expr>(Expr{TypeExpr{std::move(ty)}}); }
ExprPtr mkCoercion(CoercionAtom co) {
  return std::make_shared<Expr>(Expr{CoercionExpr{std::move(co)}});
}

std::vector<Var> bindersOf(const Bind& b) {
  return std::visit(
      overloaded{[](const NonRec& nr) { return std::vector<Var>{nr.binder}; },
                 [](const Rec& r) {
                   std::vector<Var> out;
                   out.reserve(r.pairs.size());
                   for (const auto& [v, rhs] : r.pairs) out.push_back(v);
                   return out;
                 }},
      b);
}

std::vector<Var> bindersOfBinds(const CoreProgram& p) {
  std::vector<Var> out;
  for (const Bind& b : p) {
    auto vs = bindersOf(b);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  return out;
}

std::vector<std::pair<Var, ExprPtr>> flattenBinds(const CoreProgram& p) {
  std::vector<std::pair<Var, ExprPtr>> out;
  for (const Bind& b : p) {
    std::visit(overloaded{[&](const NonRec& nr) { out.emplace_back(nr.binder, nr.rhs); },
                          [&](const Rec& r) {
                            for (const auto& pr : r.pairs) out.push_back(pr);
                          }},
               b);
  }
  return out;
}

std::pair<ExprPtr, std::vector<ExprPtr>> collectArgs(ExprPtr e) {
  std::vector<ExprPtr> args;
  while (const auto* app = std::get_if<AppExpr>(&e->node)) {
    args.push_back(app->arg);
    e = app->fun;
  }
  std::reverse(args.begin(), args.end());
  return {std::move(e), std::move(args)};
}

std::pair<std::vector<Var>, ExprPtr> collectNBinders(std::uint64_t n, ExprPtr e) {
  std::vector<Var> params;
  params.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto* lam = std::get_if<LamExpr>(&e->node);
    if (!lam)
      throw MalformedJoinRhs("collectNBinders: expected " + std::to_string(n) +
                             " leading lambdas, found " + std::to_string(i));
    params.push_back(lam->binder);
    e = lam->body;
  }
  return {std::move(params), std::move(e)};
}

ExprPtr mkLams(const std::vector<Var>& params, ExprPtr body) {
  for (auto it = params.rbegin(); it != params.rend(); ++it)
    body = mkLam(*it, std::move(body));
  return body;
}

ExprPtr mkApps(ExprPtr fun, const std::vector<ExprPtr>& args) {
  for (const ExprPtr& a : args) fun = mkApp(std::move(fun), a);
  return fun;
}

ExprPtr mkLets(const std::vector<Bind>& binds, ExprPtr body) {
  for (auto it = binds.rbegin(); it != binds.rend(); ++it)
    body = mkLet(*it, std::move(body));
  return body;
}

namespace {
// bndrSize is the constant 1; altSize/pairSize are the inlined helpers.
constexpr std::uint64_t kBndrSize = 1;

std::uint64_t altSize(const Alt& a) { return kBndrSize + exprSize(a.rhs); }
std::uint64_t pairSize(const std::pair<Var, ExprPtr>& p) {
  return kBndrSize + exprSize(p.second);
}
}  // namespace

std::uint64_t exprSize(const ExprPtr& e) {
  return std::visit(
      overloaded{
          [](const VarExpr&) -> std::uint64_t { return 1; },
          [](const LitExpr&) -> std::uint64_t { return 1; },
          [](const AppExpr& a) { return exprSize(a.fun) + exprSize(a.arg); },
          [](const LamExpr& l) { return kBndrSize + exprSize(l.body); },
          [](const LetExpr& l) { return bindSize(l.bind) + exprSize(l.body); },
          [](const CaseExpr& c) {
            std::uint64_t alts = 0;
            for (const Alt& a : c.alts) alts += altSize(a);
            return exprSize(c.scrut) + kBndrSize + 1 + alts;
          },
          [](const CastExpr& c) { return 1 + exprSize(c.body); },
          [](const TypeExpr&) -> std::uint64_t { return 1; },
          [](const CoercionExpr&) -> std::uint64_t { return 1; }},
      e->node);
}

std::uint64_t bindSize(const Bind& b) {
  return std::visit(
      overloaded{[](const NonRec& nr) { return kBndrSize + exprSize(nr.rhs); },
                 [](const Rec& r) {
                   std::uint64_t total = 0;
                   for (const auto& p : r.pairs) total += pairSize(p);
                   return total;
                 }},
      b);
}

namespace {
bool altEqual(const Alt& a, const Alt& b) {
  return a.con == b.con && a.pats == b.pats && exprEqual(a.rhs, b.rhs);
}
}  // namespace

bool exprEqual(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      overloaded{
          [&](const VarExpr& x) { return x.var == std::get<VarExpr>(b->node).var; },
          [&](const LitExpr& x) { return x.lit == std::get<LitExpr>(b->node).lit; },
          [&](const AppExpr& x) {
            const auto& y = std::get<AppExpr>(b->node);
            return exprEqual(x.fun, y.fun) && exprEqual(x.arg, y.arg);
          },
          [&](const LamExpr& x) {
            const auto& y = std::get<LamExpr>(b->node);
            return x.binder == y.binder && exprEqual(x.body, y.body);
          },
          [&](const LetExpr& x) {
            const auto& y = std::get<LetExpr>(b->node);
            return bindEqual(x.bind, y.bind) && exprEqual(x.body, y.body);
          },
          [&](const CaseExpr& x) {
            const auto& y = std::get<CaseExpr>(b->node);
            if (!(x.case_bndr == y.case_bndr) || !(x.result_ty == y.result_ty) ||
                x.alts.size() != y.alts.size() || !exprEqual(x.scrut, y.scrut))
              return false;
            for (std::size_t i = 0; i < x.alts.size(); ++i)
              if (!altEqual(x.alts[i], y.alts[i])) return false;
            return true;
          },
          [&](const CastExpr& x) {
            const auto& y = std::get<CastExpr>(b->node);
            return x.coercion == y.coercion && exprEqual(x.body, y.body);
          },
          [&](const TypeExpr& x) { return x.ty == std::get<TypeExpr>(b->node).ty; },
          [&](const CoercionExpr& x) {
            return x.coercion == std::get<CoercionExpr>(b->node).coercion;
          }},
      a->node);
}

bool bindEqual(const Bind& a, const Bind& b) {
  if (a.index() != b.index()) return false;
  if (const auto* nr = std::get_if<NonRec>(&a)) {
    const auto& other = std::get<NonRec>(b);
    return nr->binder == other.binder && exprEqual(nr->rhs, other.rhs);
  }
  const auto& ra = std::get<Rec>(a);
  const auto& rb = std::get<Rec>(b);
  if (ra.pairs.size() != rb.pairs.size()) return false;
  for (std::size_t i = 0; i < ra.pairs.size(); ++i) {
    if (!(ra.pairs[i].first == rb.pairs[i].first) ||
        !exprEqual(ra.pairs[i].second, rb.pairs[i].second))
      return false;
  }
  return true;
}

bool programEqual(const CoreProgram& a, const CoreProgram& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!bindEqual(a[i], b[i])) return false;
  return true;
}

}  // namespace minicore
