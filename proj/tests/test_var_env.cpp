#include <doctest.h>

#include <random>

#include "minicore/lint.hpp"
#include "minicore/var_env.hpp"

using namespace minicore;

TEST_CASE("lookup is keyed by the unique and returns the stored entry") {
  Var v = mkLocalId("x", 7, TypeAtom{"T1"});
  Var v_other_type = mkLocalId("x", 7, TypeAtom{"T2"});

  VarSet vs = extendVarSet(emptyVarSet(), v);
  auto hit = lookupVarSet(vs, v_other_type);
  REQUIRE(hit);
  CHECK(*hit == v);  // the stored var, not the probe

  SUBCASE("last write wins") {
    VarSet vs2 = extendVarSet(vs, v_other_type);
    auto inner = lookupVarSet(vs2, v);
    REQUIRE(inner);
    CHECK(*inner == v_other_type);
    CHECK(vs2.size() == 1);
  }
}

TEST_CASE("elemVarSet agrees with lookupVarSet") {
  Var a = mkLocalId("a", 1), b = mkLocalId("b", 2);
  VarSet vs = mkVarSet({a});
  CHECK(elemVarSet(a, vs) == lookupVarSet(vs, a).has_value());
  CHECK(elemVarSet(b, vs) == lookupVarSet(vs, b).has_value());
}

TEST_CASE("subVarSet compares unique domains only") {
  Var a = mkLocalId("a", 1, TypeAtom{"T1"});
  Var a2 = mkLocalId("a", 1, TypeAtom{"T5"});
  CHECK(subVarSet(emptyVarSet(), mkVarSet({a})));
  CHECK(subVarSet(mkVarSet({a}), mkVarSet({a2})));  // same unique suffices
  CHECK_FALSE(subVarSet(mkVarSet({a}), emptyVarSet()));
}

TEST_CASE("set algebra basics") {
  Var a = mkLocalId("a", 1), b = mkLocalId("b", 2), c = mkLocalId("c", 3);
  VarSet ab = mkVarSet({a, b});
  VarSet bc = mkVarSet({b, c});

  CHECK(unionVarSet(ab, bc).size() == 3);
  CHECK(minusVarSet(ab, bc).size() == 1);
  CHECK(elemVarSet(a, minusVarSet(ab, bc)));
  CHECK(subVarSet(minusVarSet(ab, bc), ab));
  CHECK_FALSE(disjointVarSet(ab, bc));
  CHECK(disjointVarSet(mkVarSet({a}), mkVarSet({c})));
  CHECK(anyVarSet([&](const Var& v) { return v.var_name.occ_text == "b"; }, ab));
  CHECK(filterVarSet([](const Var& v) { return varUnique(v).number > 1; }, ab)
            .size() == 1);

  SUBCASE("delVarSetList removes by unique") {
    CHECK(delVarSetList(ab, {a, b}).empty());
    CHECK(delVarSet(ab, c).size() == 2);
  }
}

TEST_CASE("union keeps the left entry on a unique collision") {
  Var v1 = mkLocalId("x", 7, TypeAtom{"T1"});
  Var v2 = mkLocalId("x", 7, TypeAtom{"T2"});
  auto merged = unionVarSet(mkVarSet({v1}), mkVarSet({v2}));
  CHECK(*lookupVarSet(merged, v1) == v1);
}

TEST_CASE("VarEnv basics") {
  Var x = mkLocalId("x", 1);
  ExprPtr one = mkIntLit(1), two = mkIntLit(2);

  VarEnv<ExprPtr> env;
  CHECK(isEmptyVarEnv(env));
  env = extendVarEnv(std::move(env), x, one);
  CHECK_FALSE(isEmptyVarEnv(env));
  CHECK(exprEqual(*lookupVarEnv(env, x), one));

  SUBCASE("extend twice keeps the second payload") {
    env = extendVarEnv(std::move(env), x, two);
    CHECK(exprEqual(*lookupVarEnv(env, x), two));
  }
  SUBCASE("delete removes the entry") {
    env = delVarEnv(std::move(env), x);
    CHECK_FALSE(lookupVarEnv(env, x).has_value());
  }
  CHECK(domainUniques(extendVarEnv(VarEnv<ExprPtr>{}, x, one)) ==
        std::vector<Unique>{varUnique(x)});
}

TEST_CASE("minusDom restricts to uniques outside the environment") {
  Var x = mkLocalId("x", 1), y = mkLocalId("y", 2);
  VarEnv<ExprPtr> env = extendVarEnv(VarEnv<ExprPtr>{}, x, mkIntLit(0));

  CHECK(minusDom(mkVarSet({x, y}), VarEnv<ExprPtr>{}).size() == 2);
  CHECK(minusDom(mkVarSet({x}), env).empty());
  VarSet rest = minusDom(mkVarSet({x, y}), env);
  CHECK(rest.size() == 1);
  CHECK(elemVarSet(y, rest));
}

TEST_CASE("InScopeSet wraps a VarSet") {
  Var x = mkLocalId("x", 1);
  VarSet vs = mkVarSet({x});
  InScopeSet iss = mkInScopeSet(vs);
  CHECK(getInScopeVars(iss).entries() == vs.entries());
  CHECK(lookupInScope(extendInScopeSet(InScopeSet{}, x), x).has_value());
  InScopeSet same = extendInScopeSetList(iss, {});
  CHECK(getInScopeVars(same).entries() == vs.entries());
}

// randomized sequences of set operations keep ValidVarSet and the
// subset/disjointness laws
TEST_CASE("set operations preserve ValidVarSet and the subset laws") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 300; ++round) {
    VarSet vs;
    VarSet other;
    for (int step = 0; step < 30; ++step) {
      Var v = mkLocalId("v", rng() % 12);
      switch (rng() % 6) {
        case 0: vs = extendVarSet(std::move(vs), v); break;
        case 1: vs = delVarSet(std::move(vs), v); break;
        case 2: other = extendVarSet(std::move(other), v); break;
        case 3: vs = unionVarSet(std::move(vs), other); break;
        case 4: vs = minusVarSet(std::move(vs), other); break;
        default:
          vs = filterVarSet(
              [](const Var& w) { return varUnique(w).number % 2 == 0; },
              std::move(vs));
      }
      CHECK(validVarSetCheck(vs));
    }
    CHECK(subVarSet(vs, vs));                       // reflexive
    CHECK(subVarSet(minusVarSet(vs, other), vs));   // minus shrinks
    VarSet inter = minusVarSet(vs, minusVarSet(vs, other));
    CHECK(disjointVarSet(vs, other) == inter.empty());
    // transitive along inter ⊆ vs ⊆ vs ∪ other
    CHECK(subVarSet(vs, unionVarSet(vs, other)));
    CHECK(subVarSet(inter, unionVarSet(vs, other)));
  }
}
