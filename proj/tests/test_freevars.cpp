#include <doctest.h>

#include "minicore/freevars.hpp"
#include "minicore/lint.hpp"
#include "minicore/testgen.hpp"
#include "naive_checks.hpp"
#include "test_helpers.hpp"

using namespace minicore;

namespace {

std::set<Unique> uniques(const VarSet& vs) {
  std::set<Unique> out;
  for (const auto& [u, v] : vs.entries()) out.insert(u);
  return out;
}

}  // namespace

TEST_CASE("bound occurrences are not free") {
  Var x = mkLocalId("x", 2);
  CHECK(exprFreeVars(mkLam(x, mkVar(x))).empty());
}

TEST_CASE("global occurrences are filtered out") {
  Var f = mkLocalId("f", 1);
  Var g = mkGlobalId("g", 2);
  VarSet fvs = exprFreeVars(mkApp(mkVar(f), mkVar(g)));
  CHECK(fvs.size() == 1);
  CHECK(elemVarSet(f, fvs));
}

TEST_CASE("a NonRec rhs sees the outer scope") {
  // let x = x in x  --  the rhs occurrence of x is free
  Var x = mkLocalId("x", 3);
  ExprPtr e = mkLet(NonRec{x, mkVar(x)}, mkVar(x));
  VarSet fvs = exprFreeVars(e);
  CHECK(fvs.size() == 1);
  CHECK(elemVarSet(x, fvs));
}

TEST_CASE("rec binders are bound in their own right-hand sides") {
  Var f = mkLocalId("f", 1);
  CHECK(bindFreeVars(Rec{{{f, mkVar(f)}}}).empty());
}

TEST_CASE("bindFreeVars spot checks") {
  Var x = mkLocalId("x", 1), y = mkLocalId("y", 2);
  VarSet nr = bindFreeVars(NonRec{x, mkVar(y)});
  CHECK(nr.size() == 1);
  CHECK(elemVarSet(y, nr));
  CHECK(bindFreeVars(NonRec{x, mkIntLit(1)}).empty());
}

TEST_CASE("case binds the case binder and the patterns per alternative") {
  ExprPtr e = test::parseRhs(
      "case z_1 as b_2 of { Pair p_3 q_4 -> p_3 q_4 w_5 ; DEFAULT -> b_2 }");
  auto fvs = uniques(exprFreeVars(e));
  CHECK(fvs == std::set<Unique>{Unique{ScopeClass::Local, 1},
                                Unique{ScopeClass::Local, 5}});
}

TEST_CASE("type and coercion payloads contribute nothing") {
  CHECK(exprFreeVars(test::parseRhs("@T3")).empty());
  CHECK(exprFreeVars(test::parseRhs("@~C2")).empty());
  Var x = mkLocalId("x", 1);
  CHECK(exprFreeVars(mkCast(mkVar(x), CoercionAtom{"C9"})).size() == 1);
}

TEST_CASE("every free var is local") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CoreProgram p = genProgram(seed, 60, 0.4, 0.5);
    for (const auto& [v, rhs] : flattenBinds(p)) {
      VarSet fvs = exprFreeVars(rhs);
      for (const auto& [u, fv] : fvs.entries()) CHECK(isLocalUnique(u));
    }
  }
}

TEST_CASE("agrees with the naive computation on generated terms") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    CoreProgram p = genProgram(seed, 200, 0.5, 0.5);
    for (const auto& [v, rhs] : flattenBinds(p)) {
      CHECK(uniques(exprFreeVars(rhs)) == naive::freeVarUniques(rhs));
    }
  }
}

TEST_CASE("let free vars decompose through bindFreeVars") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CoreProgram p = genProgram(seed, 80, 0.4, 0.7);
    for (const auto& [v, rhs] : flattenBinds(p)) {
      if (const auto* let = std::get_if<LetExpr>(&rhs->node)) {
        VarSet body =
            delVarSetList(exprFreeVars(let->body), bindersOf(let->bind));
        VarSet expected = unionVarSet(bindFreeVars(let->bind), body);
        CHECK(uniques(exprFreeVars(rhs)) == uniques(expected));
      }
    }
  }
}

TEST_CASE("well-scoped expressions have free vars inside the scope") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SubstCase sc = genSubstPair(seed, 40);
    REQUIRE(wellScoped(sc.expr, sc.expr_scope));
    CHECK(subVarSet(exprFreeVars(sc.expr), sc.expr_scope));
  }
}
