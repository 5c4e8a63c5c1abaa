#include "minicore/testgen.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <random>
#include <set>

#include "minicore/lint.hpp"

namespace minicore {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

  bool chance(double p) {
    if (p <= 0.0) return false;
    return static_cast<double>(gen_()) / 18446744073709551616.0 < p;
  }

  std::int64_t smallInt() { return static_cast<std::int64_t>(below(201)) - 100; }

 private:
  std::mt19937_64 gen_;
};

const char* kOccNames[] = {"x", "y", "z", "v", "w", "p", "q", "r", "t", "u"};
const char* kJoinNames[] = {"j", "k", "m"};
const char* kConNames[] = {"Just", "Pair", "Cons", "Leaf"};
const char* kInfoTokens[] = {"", "", "", "", "", "", "s", "u", "d1"};

struct GenCtx {
  std::map<Unique, Var> scope;   // innermost binder per unique
  std::set<Unique> jumpable;     // join points reachable by a tail call
  std::vector<Var> outer_values; // locals bound outside the nearest join group

  GenCtx nonTail() const {
    GenCtx out = *this;
    out.jumpable.clear();
    return out;
  }

  void bind(const Var& v, bool tail_context) {
    Unique u = varUnique(v);
    scope[u] = v;
    jumpable.erase(u);
    if (tail_context && isJoinId(v)) jumpable.insert(u);
  }
};

class Generator {
 public:
  Generator(std::uint64_t seed, double shadow_p, double join_density,
            std::uint64_t first_unique)
      : rng_(seed),
        shadow_p_(shadow_p),
        join_density_(join_density),
        next_unique_(first_unique) {}

  Rng& rng() { return rng_; }

  /// Extra uniques that binders may deliberately collide with (used to make
  /// expression binders clash with a substitution's in-scope set).
  void addShadowPool(const std::vector<Var>& vars) {
    for (const Var& v : vars) shadow_pool_.push_back(varUnique(v));
  }

  TypeAtom randomType() {
    return TypeAtom{"T" + std::to_string(rng_.below(6))};
  }

  IdInfo randomInfo() {
    return IdInfo{kInfoTokens[rng_.below(std::size(kInfoTokens))]};
  }

  Var mintLocal(const GenCtx& ctx, IdDetails details,
                const std::set<Unique>* avoid = nullptr) {
    std::string occ = details.join_arity
                          ? kJoinNames[rng_.below(std::size(kJoinNames))]
                          : kOccNames[rng_.below(std::size(kOccNames))];
    std::uint64_t number = 0;
    TypeAtom ty = randomType();
    bool shadowed = false;
    if (rng_.chance(shadow_p_)) {
      std::vector<Unique> candidates;
      for (const auto& [u, v] : ctx.scope)
        if (isLocalUnique(u)) candidates.push_back(u);
      candidates.insert(candidates.end(), shadow_pool_.begin(),
                        shadow_pool_.end());
      if (avoid) {
        std::erase_if(candidates,
                      [&](Unique u) { return avoid->count(u) != 0; });
      }
      if (!candidates.empty()) {
        Unique u = candidates[rng_.below(candidates.size())];
        number = u.number;
        shadowed = true;
        // a different type atom makes the shadow observable
        if (auto it = ctx.scope.find(u); it != ctx.scope.end())
          while (ty == it->second.var_type) ty = randomType();
      }
    }
    if (!shadowed) number = next_unique_++;
    Var v = details.join_arity
                ? mkLocalJoinId(std::move(occ), number, *details.join_arity, ty)
                : mkLocalId(std::move(occ), number, ty);
    v.id_info = randomInfo();
    return v;
  }

  std::vector<Var> mintDistinctLocals(const GenCtx& ctx, std::size_t count,
                                      const std::vector<IdDetails>& details) {
    std::set<Unique> used;
    std::vector<Var> out;
    for (std::size_t i = 0; i < count; ++i) {
      Var v = mintLocal(ctx, details[i], &used);
      used.insert(varUnique(v));
      out.push_back(std::move(v));
    }
    return out;
  }

  ExprPtr genLeaf(const GenCtx& ctx) {
    // arity-0 joins are jumpable as bare occurrences
    std::vector<Var> jumps0;
    std::vector<Var> values;
    for (const auto& [u, v] : ctx.scope) {
      if (isJoinId(v)) {
        if (ctx.jumpable.count(u) && *isJoinIdMaybe(v) == 0)
          jumps0.push_back(v);
      } else {
        values.push_back(v);
      }
    }
    std::uint64_t roll = rng_.below(10);
    if (roll < 5 && !values.empty()) {
      Var occ = values[rng_.below(values.size())];
      if (rng_.chance(0.2)) occ.id_info = randomInfo();  // almostEqual ignores it
      return mkVar(std::move(occ));
    }
    if (roll == 5 && !jumps0.empty())
      return mkVar(jumps0[rng_.below(jumps0.size())]);
    if (roll == 6) return mkStringLit("s" + std::to_string(rng_.below(100)));
    if (roll == 7) return mkType(randomType());
    if (roll == 8 && rng_.chance(0.3))
      return mkCoercion(CoercionAtom{"C" + std::to_string(rng_.below(4))});
    return mkIntLit(rng_.smallInt());
  }

  /// A short application spine over in-scope values, the typical shape of
  /// an exit path ("t x").
  ExprPtr genSmallApp(const GenCtx& ctx) {
    std::vector<Var> values;
    for (const auto& [u, v] : ctx.scope)
      if (!isJoinId(v)) values.push_back(v);
    if (values.empty()) return genLeaf(ctx);

    // prefer a head that is still visible from outside the join group, so
    // the expression stays worth floating
    std::vector<Var> outer;
    for (const Var& v : ctx.outer_values) {
      auto it = ctx.scope.find(varUnique(v));
      if (it != ctx.scope.end() && it->second == v) outer.push_back(v);
    }
    const std::vector<Var>& heads =
        (!outer.empty() && rng_.chance(0.7)) ? outer : values;

    GenCtx arg_ctx = ctx.nonTail();
    ExprPtr e = mkVar(heads[rng_.below(heads.size())]);
    std::uint64_t args = 1 + rng_.below(2);
    for (std::uint64_t i = 0; i < args; ++i)
      e = mkApp(std::move(e), genLeaf(arg_ctx));
    return e;
  }

  ExprPtr genExpr(const GenCtx& ctx, std::uint32_t budget) {
    if (budget == 0) return mkIntLit(rng_.smallInt());
    if (budget <= 1) return genLeaf(ctx);

    std::vector<Var> jumpTargets;
    for (Unique u : ctx.jumpable) jumpTargets.push_back(ctx.scope.at(u));

    switch (rng_.below(10)) {
      case 0:
        return rng_.chance(0.5) ? genSmallApp(ctx) : genLeaf(ctx);
      case 1:
      case 2: {  // saturated tail jump
        if (jumpTargets.empty()) return genLeaf(ctx);
        Var j = jumpTargets[rng_.below(jumpTargets.size())];
        std::uint64_t arity = *isJoinIdMaybe(j);
        GenCtx arg_ctx = ctx.nonTail();
        std::vector<ExprPtr> args;
        std::uint32_t each =
            arity == 0 ? 0 : std::max<std::uint32_t>(1, budget / (arity + 1));
        for (std::uint64_t i = 0; i < arity; ++i)
          args.push_back(genExpr(arg_ctx, each / 2));
        return mkApps(mkVar(j), args);
      }
      case 3: {  // application of something vanilla
        GenCtx inner = ctx.nonTail();
        ExprPtr fun = genExpr(inner, budget / 2);
        ExprPtr arg = genExpr(inner, budget / 2);
        return mkApp(std::move(fun), std::move(arg));
      }
      case 4: {  // lambda (body leaves tail position)
        Var v = mintLocal(ctx, IdDetails::vanilla());
        GenCtx inner = ctx.nonTail();
        inner.bind(v, false);
        return mkLam(v, genExpr(inner, budget - 1));
      }
      case 5: return genLet(ctx, budget);
      case 6:
      case 7: return genCase(ctx, budget);
      case 8: {  // cast keeps the jumpable set
        GenCtx inner = ctx;
        return mkCast(genExpr(inner, budget - 1),
                      CoercionAtom{"C" + std::to_string(rng_.below(4))});
      }
      default: return genLet(ctx, budget);
    }
  }

  ExprPtr genLet(const GenCtx& ctx, std::uint32_t budget) {
    if (rng_.chance(join_density_)) return genRecJoinLet(ctx, budget);
    switch (rng_.below(3)) {
      case 0: {  // non-recursive vanilla binding
        ExprPtr rhs = genExpr(ctx.nonTail(), budget / 3);
        Var v = mintLocal(ctx, IdDetails::vanilla());
        GenCtx inner = ctx;
        inner.bind(v, true);
        return mkLet(NonRec{v, std::move(rhs)},
                     genExpr(inner, budget - budget / 3));
      }
      case 1: {  // non-recursive join point
        std::uint64_t arity = rng_.below(3);
        Var j = mintLocal(ctx, IdDetails::joinId(arity));
        ExprPtr rhs = genJoinRhs(ctx, j, {}, budget / 3);
        GenCtx inner = ctx;
        inner.bind(j, true);
        return mkLet(NonRec{j, std::move(rhs)},
                     genExpr(inner, budget - budget / 3));
      }
      default: {  // recursive vanilla group
        std::size_t count = 1 + rng_.below(2);
        std::vector<IdDetails> details(count, IdDetails::vanilla());
        std::vector<Var> binders = mintDistinctLocals(ctx, count, details);
        GenCtx group_scope = ctx;
        for (const Var& v : binders) group_scope.bind(v, false);
        GenCtx rhs_ctx = group_scope.nonTail();
        Rec rec;
        std::uint32_t each = std::max<std::uint32_t>(1, budget / (count + 1));
        for (const Var& v : binders)
          rec.pairs.emplace_back(v, genExpr(rhs_ctx, each));
        GenCtx body_ctx = ctx;
        for (const Var& v : binders) body_ctx.bind(v, true);
        return mkLet(std::move(rec), genExpr(body_ctx, each));
      }
    }
  }

  ExprPtr genCase(const GenCtx& ctx, std::uint32_t budget) {
    ExprPtr scrut = genExpr(ctx.nonTail(), budget / 4);
    Var bndr = mintLocal(ctx, IdDetails::vanilla());
    GenCtx with_bndr = ctx;
    with_bndr.bind(bndr, true);
    std::size_t alt_count = 1 + rng_.below(3);
    std::uint32_t each = std::max<std::uint32_t>(1, budget / (alt_count + 1));
    std::vector<Alt> alts;
    bool used_default = false;
    for (std::size_t i = 0; i < alt_count; ++i) {
      AltCon con{DefaultAlt{}};
      std::vector<Var> pats;
      std::uint64_t roll = rng_.below(3);
      if (roll == 0 && !used_default) {
        used_default = true;
      } else if (roll == 1) {
        con = LitAlt{Literal{rng_.smallInt()}};
      } else {
        con = DataAlt{kConNames[rng_.below(std::size(kConNames))]};
        std::size_t pat_count = rng_.below(3);
        for (std::size_t k = 0; k < pat_count; ++k)
          pats.push_back(mintLocal(with_bndr, IdDetails::vanilla()));
      }
      GenCtx alt_ctx = with_bndr;
      for (const Var& pat : pats) alt_ctx.bind(pat, true);
      // some alternatives take the exit-path shape: a small application
      ExprPtr rhs = rng_.chance(0.3) ? genSmallApp(alt_ctx)
                                     : genExpr(alt_ctx, each);
      alts.push_back(Alt{std::move(con), std::move(pats), std::move(rhs)});
    }
    TypeAtom result_ty = rng_.chance(0.3) ? randomType() : TypeAtom{};
    return mkCase(std::move(scrut), std::move(bndr), std::move(result_ty),
                  std::move(alts));
  }

  ExprPtr genRecJoinLet(const GenCtx& ctx, std::uint32_t budget) {
    // anchor the group under a few local lets, so exit paths have
    // outer-scope locals worth abstracting over
    GenCtx outer = ctx;
    std::vector<std::pair<Var, ExprPtr>> anchor_binds;
    if (rng_.chance(0.7)) {
      std::size_t anchor_count = 1 + rng_.below(2);
      for (std::size_t i = 0; i < anchor_count; ++i) {
        ExprPtr rhs = genExpr(outer.nonTail(), 1 + rng_.below(3));
        Var t = mintLocal(outer, IdDetails::vanilla());
        anchor_binds.emplace_back(t, std::move(rhs));
        outer.bind(t, true);
      }
    }

    std::size_t count = 1 + rng_.below(2);
    std::vector<IdDetails> details;
    for (std::size_t i = 0; i < count; ++i)
      details.push_back(IdDetails::joinId(rng_.below(3)));
    std::vector<Var> binders = mintDistinctLocals(outer, count, details);
    GenCtx group_ctx = outer;
    group_ctx.outer_values.clear();
    for (const auto& [u, v] : outer.scope)
      if (!isJoinId(v) && isLocalUnique(u)) group_ctx.outer_values.push_back(v);
    for (const Var& v : binders) group_ctx.bind(v, true);
    Rec rec;
    std::uint32_t each = std::max<std::uint32_t>(1, budget / (count + 1));
    for (const Var& j : binders)
      rec.pairs.emplace_back(j, genJoinRhs(group_ctx, j, binders, each));
    ExprPtr out = mkLet(std::move(rec), genExpr(group_ctx, each));
    for (auto it = anchor_binds.rbegin(); it != anchor_binds.rend(); ++it)
      out = mkLet(NonRec{it->first, it->second}, std::move(out));
    return out;
  }

  /// Builds exactly arity leading lambdas over a tail body. The body keeps
  /// the caller's jumpable set (minus shadowed params), so it can jump back
  /// to the group or to enclosing join points.
  ExprPtr genJoinRhs(const GenCtx& ctx, const Var& join_id,
                     const std::vector<Var>& group, std::uint32_t budget) {
    std::uint64_t arity = *isJoinIdMaybe(join_id);
    std::set<Unique> avoid;
    for (const Var& g : group) avoid.insert(varUnique(g));
    std::vector<Var> params;
    GenCtx inner = ctx;
    for (std::uint64_t i = 0; i < arity; ++i) {
      Var p = mintLocal(inner, IdDetails::vanilla(), &avoid);
      avoid.insert(varUnique(p));
      inner.bind(p, false);  // params shadow but are not jumpable
      params.push_back(std::move(p));
    }
    // loop-shaped bodies (a case deciding between exits and more jumps)
    // are the common join point form
    ExprPtr body = (budget >= 6 && rng_.chance(0.4))
                       ? genCase(inner, budget)
                       : genExpr(inner, budget);
    return mkLams(params, std::move(body));
  }

 private:
  Rng rng_;
  double shadow_p_;
  double join_density_;
  std::uint64_t next_unique_;
  std::vector<Unique> shadow_pool_;
};

std::uint64_t programSize(const CoreProgram& p) {
  std::uint64_t total = 0;
  for (const Bind& b : p) total += bindSize(b);
  return total;
}

// single-edit variants of an expression, preorder
void shrinkExpr(const ExprPtr& e, const std::function<void(ExprPtr)>& offer,
                int& fuel);

template <typename Rebuild>
void shrinkChild(const ExprPtr& child, const Rebuild& rebuild,
                 const std::function<void(ExprPtr)>& offer, int& fuel) {
  shrinkExpr(
      child, [&](ExprPtr replacement) { offer(rebuild(std::move(replacement))); },
      fuel);
}

void shrinkExpr(const ExprPtr& e, const std::function<void(ExprPtr)>& offer,
                int& fuel) {
  if (fuel <= 0) return;
  --fuel;
  if (exprSize(e) > 1) offer(mkIntLit(0));
  std::visit(
      overloaded{
          [&](const VarExpr&) {},
          [&](const LitExpr&) {},
          [&](const AppExpr& a) {
            shrinkChild(a.fun, [&](ExprPtr f) { return mkApp(f, a.arg); },
                        offer, fuel);
            shrinkChild(a.arg, [&](ExprPtr x) { return mkApp(a.fun, x); },
                        offer, fuel);
          },
          [&](const LamExpr& l) {
            shrinkChild(l.body, [&](ExprPtr b) { return mkLam(l.binder, b); },
                        offer, fuel);
          },
          [&](const LetExpr& l) {
            offer(l.body);  // drop the binding
            shrinkChild(l.body, [&](ExprPtr b) { return mkLet(l.bind, b); },
                        offer, fuel);
            if (const auto* nr = std::get_if<NonRec>(&l.bind)) {
              shrinkChild(nr->rhs,
                          [&](ExprPtr r) {
                            return mkLet(NonRec{nr->binder, r}, l.body);
                          },
                          offer, fuel);
            } else {
              const auto& rec = std::get<Rec>(l.bind);
              for (std::size_t i = 0; i < rec.pairs.size(); ++i) {
                if (rec.pairs.size() > 1) {
                  Rec smaller = rec;
                  smaller.pairs.erase(smaller.pairs.begin() + i);
                  offer(mkLet(std::move(smaller), l.body));
                }
                shrinkChild(rec.pairs[i].second,
                            [&](ExprPtr r) {
                              Rec edited = rec;
                              edited.pairs[i].second = std::move(r);
                              return mkLet(std::move(edited), l.body);
                            },
                            offer, fuel);
              }
            }
          },
          [&](const CaseExpr& c) {
            for (std::size_t i = 0; i < c.alts.size(); ++i) {
              if (c.alts.size() > 1) {
                CaseExpr smaller = c;
                smaller.alts.erase(smaller.alts.begin() + i);
                offer(std::make_shared<Expr>(Expr{std::move(smaller)}));
              }
              shrinkChild(c.alts[i].rhs,
                          [&](ExprPtr r) {
                            CaseExpr edited = c;
                            edited.alts[i].rhs = std::move(r);
                            return std::make_shared<Expr>(Expr{std::move(edited)});
                          },
                          offer, fuel);
            }
            shrinkChild(c.scrut,
                        [&](ExprPtr s) {
                          CaseExpr edited = c;
                          edited.scrut = std::move(s);
                          return std::make_shared<Expr>(Expr{std::move(edited)});
                        },
                        offer, fuel);
          },
          [&](const CastExpr& c) {
            offer(c.body);
            shrinkChild(c.body,
                        [&](ExprPtr b) { return mkCast(b, c.coercion); }, offer,
                        fuel);
          },
          [&](const TypeExpr&) {},
          [&](const CoercionExpr&) {}},
      e->node);
}

}  // namespace

CoreProgram genProgram(std::uint64_t seed, std::uint32_t size, double shadow_p,
                       double join_density) {
  Generator gen(seed, shadow_p, join_density, /*first_unique=*/1000);
  Rng& rng = gen.rng();

  std::size_t top_count = 1 + rng.below(3);
  std::vector<Var> top_binders;
  for (std::size_t i = 0; i < top_count; ++i) {
    Var g = mkGlobalId("f" + std::to_string(i), i + 1, gen.randomType());
    top_binders.push_back(std::move(g));
  }

  GenCtx top_ctx;
  for (const Var& g : top_binders) top_ctx.bind(g, false);

  CoreProgram p;
  std::size_t i = 0;
  std::uint32_t each = size / static_cast<std::uint32_t>(top_count);
  while (i < top_binders.size()) {
    // occasionally group two adjacent top binders into a letrec
    if (i + 1 < top_binders.size() && rng.chance(0.25)) {
      Rec rec;
      rec.pairs.emplace_back(top_binders[i], gen.genExpr(top_ctx, each));
      rec.pairs.emplace_back(top_binders[i + 1], gen.genExpr(top_ctx, each));
      p.push_back(std::move(rec));
      i += 2;
    } else {
      p.push_back(NonRec{top_binders[i], gen.genExpr(top_ctx, each)});
      i += 1;
    }
  }
  return p;
}

SubstCase genSubstPair(std::uint64_t seed, std::uint32_t size) {
  Generator gen(seed, /*shadow_p=*/0.3, /*join_density=*/0.3,
                /*first_unique=*/1000);
  Rng& rng = gen.rng();

  // the scope the expression lives in
  std::size_t base_count = 2 + rng.below(4);
  std::vector<Var> base;
  for (std::size_t i = 0; i < base_count; ++i)
    base.push_back(mkLocalId(std::string(kOccNames[i % std::size(kOccNames)]),
                             i + 1, gen.randomType()));
  VarSet expr_scope = mkVarSet(base);

  // fresh locals that exist only in the new scope (renaming targets)
  std::size_t fresh_count = 1 + rng.below(3);
  std::vector<Var> fresh;
  for (std::size_t i = 0; i < fresh_count; ++i)
    fresh.push_back(
        mkLocalId("n" + std::to_string(i), 100 + i, gen.randomType()));

  // choose the substitution domain
  std::vector<Var> dom;
  for (const Var& b : base)
    if (rng.chance(0.4)) dom.push_back(b);

  // target scope: untouched base vars plus the fresh ones
  std::vector<Var> target;
  for (const Var& b : base) {
    bool in_dom = false;
    for (const Var& d : dom) in_dom |= varUnique(d) == varUnique(b);
    if (!in_dom) target.push_back(b);
  }
  target.insert(target.end(), fresh.begin(), fresh.end());

  GenCtx range_ctx;
  for (const Var& t : target) range_ctx.bind(t, false);

  VarEnv<ExprPtr> env;
  for (const Var& d : dom) {
    ExprPtr range = !target.empty() && rng.chance(0.5)
                        ? mkVar(target[rng.below(target.size())])
                        : gen.genExpr(range_ctx, 1 + rng.below(4));
    env = extendVarEnv(std::move(env), d, std::move(range));
  }

  Subst subst{mkInScopeSet(mkVarSet(target)), std::move(env)};

  // binders inside the expression may reuse in-scope or substituted uniques,
  // which is what makes substIdBndr rename
  gen.addShadowPool(fresh);
  gen.addShadowPool(dom);
  GenCtx expr_ctx;
  for (const Var& b : base) expr_ctx.bind(b, false);
  ExprPtr expr = gen.genExpr(expr_ctx, size);

  return SubstCase{std::move(subst), std::move(expr_scope), std::move(expr)};
}

std::vector<CoreProgram> shrink(const CoreProgram& p) {
  std::vector<CoreProgram> raw;

  for (std::size_t i = 0; i < p.size(); ++i) {
    CoreProgram smaller = p;
    smaller.erase(smaller.begin() + i);
    raw.push_back(std::move(smaller));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (const auto* rec = std::get_if<Rec>(&p[i])) {
      for (std::size_t j = 0; j < rec->pairs.size(); ++j) {
        if (rec->pairs.size() <= 1) continue;
        CoreProgram edited = p;
        Rec smaller = *rec;
        smaller.pairs.erase(smaller.pairs.begin() + j);
        edited[i] = std::move(smaller);
        raw.push_back(std::move(edited));
      }
    }
  }

  auto offerRhsVariants = [&](std::size_t bind_index, std::size_t pair_index,
                              const ExprPtr& rhs) {
    int fuel = 200;
    shrinkExpr(rhs,
               [&](ExprPtr replacement) {
                 CoreProgram edited = p;
                 if (auto* nr = std::get_if<NonRec>(&edited[bind_index])) {
                   nr->rhs = std::move(replacement);
                 } else {
                   std::get<Rec>(edited[bind_index]).pairs[pair_index].second =
                       std::move(replacement);
                 }
                 raw.push_back(std::move(edited));
               },
               fuel);
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (const auto* nr = std::get_if<NonRec>(&p[i])) {
      offerRhsVariants(i, 0, nr->rhs);
    } else {
      const auto& rec = std::get<Rec>(p[i]);
      for (std::size_t j = 0; j < rec.pairs.size(); ++j)
        offerRhsVariants(i, j, rec.pairs[j].second);
    }
  }

  std::uint64_t original = programSize(p);
  std::vector<CoreProgram> out;
  for (CoreProgram& candidate : raw) {
    if (programSize(candidate) >= original) continue;
    if (!wellScopedProgram(candidate)) continue;
    if (!isJoinPointsValidProgram(candidate)) continue;
    out.push_back(std::move(candidate));
  }
  return out;
}

}  // namespace minicore
