// Core AST: variables with uniques, expressions, bindings, and the
// structural helpers every pass leans on.
#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace minicore {

// ---------------------------------------------------------------------------
// Uniques and variables
// ---------------------------------------------------------------------------

enum class ScopeClass : std::uint8_t { Local = 0, Global = 1 };

/// The identity of a variable. Equality of variables is unique equality;
/// the locality of a unique is an explicit tag. Local sorts before Global.
struct Unique {
  ScopeClass scope_class = ScopeClass::Local;
  std::uint64_t number = 0;

  auto operator<=>(const Unique&) const = default;
};

struct Name {
  std::string occ_text;
  Unique name_unique;

  bool operator==(const Name&) const = default;
};

enum class IdScope : std::uint8_t { LocalId, GlobalId };

/// VanillaId or JoinId(arity). Join arity is the number of leading lambdas
/// a tail call must saturate.
struct IdDetails {
  std::optional<std::uint64_t> join_arity;  // engaged iff JoinId

  static IdDetails vanilla() { return {}; }
  static IdDetails joinId(std::uint64_t arity) { return {arity}; }

  bool operator==(const IdDetails&) const = default;
};

/// Opaque, uninterpreted metadata; the empty token is the zapped default.
struct IdInfo {
  std::string info_token;

  bool operator==(const IdInfo&) const = default;
};

struct TypeAtom {
  std::string atom_name = "T0";

  bool operator==(const TypeAtom&) const = default;
};

struct CoercionAtom {
  std::string atom_name = "C0";

  bool operator==(const CoercionAtom&) const = default;
};

struct Var {
  Name var_name;
  Unique real_unique;
  TypeAtom var_type;
  IdScope id_scope = IdScope::LocalId;
  IdDetails id_details;
  IdInfo id_info;

  bool operator==(const Var&) const = default;
};

inline Unique varUnique(const Var& v) { return v.real_unique; }
inline bool isLocalUnique(Unique u) { return u.scope_class == ScopeClass::Local; }
inline bool isLocalVar(const Var& v) { return v.id_scope == IdScope::LocalId; }

/// True iff the two vars differ at most in their IdInfo.
bool almostEqual(const Var& v1, const Var& v2);

// Constructors that keep the unique, the name's unique, and the scope flag
// in sync (see goodVar in lint.hpp).
Var mkLocalId(std::string occ, std::uint64_t number, TypeAtom ty = {},
              IdInfo info = {});
Var mkGlobalId(std::string occ, std::uint64_t number, TypeAtom ty = {},
               IdInfo info = {});
Var mkLocalJoinId(std::string occ, std::uint64_t number, std::uint64_t arity,
                  TypeAtom ty = {}, IdInfo info = {});

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Literal {
  std::variant<std::int64_t, std::string> value;

  bool operator==(const Literal&) const = default;
};

struct DataAlt {
  std::string con_name;
  bool operator==(const DataAlt&) const = default;
};
struct LitAlt {
  Literal lit;
  bool operator==(const LitAlt&) const = default;
};
struct DefaultAlt {
  bool operator==(const DefaultAlt&) const = default;
};
using AltCon = std::variant<DataAlt, LitAlt, DefaultAlt>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Alt {
  AltCon con;
  std::vector<Var> pats;
  ExprPtr rhs;
};

struct NonRec {
  Var binder;
  ExprPtr rhs;
};
struct Rec {
  std::vector<std::pair<Var, ExprPtr>> pairs;
};
using Bind = std::variant<NonRec, Rec>;

struct VarExpr {
  Var var;
};
struct LitExpr {
  Literal lit;
};
struct AppExpr {
  ExprPtr fun;
  ExprPtr arg;
};
struct LamExpr {
  Var binder;
  ExprPtr body;
};
struct LetExpr {
  Bind bind;
  ExprPtr body;
};
struct CaseExpr {
  ExprPtr scrut;
  Var case_bndr;
  TypeAtom result_ty;
  std::vector<Alt> alts;
};
struct CastExpr {
  ExprPtr body;
  CoercionAtom coercion;
};
struct TypeExpr {
  TypeAtom ty;
};
struct CoercionExpr {
  CoercionAtom coercion;
};

struct Expr {
  std::variant<VarExpr, LitExpr, AppExpr, LamExpr, LetExpr, CaseExpr, CastExpr,
               TypeExpr, CoercionExpr>
      node;
};

using CoreProgram = std::vector<Bind>;

// visitor helper for std::visit
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ExprPtr mkVar(Var v);
ExprPtr mkLit(Literal l);
ExprPtr mkIntLit(std::int64_t n);
ExprPtr mkStringLit(std::string s);
ExprPtr mkApp(ExprPtr fun, ExprPtr arg);
ExprPtr mkLam(Var binder, ExprPtr body);
ExprPtr mkLet(Bind bind, ExprPtr body);
ExprPtr mkCase(ExprPtr scrut, Var case_bndr, TypeAtom result_ty,
               std::vector<Alt> alts);
ExprPtr mkCast(ExprPtr body, CoercionAtom co);
ExprPtr mkType(TypeAtom ty);
ExprPtr mkCoercion(CoercionAtom co);

// ---------------------------------------------------------------------------
// Structural helpers
// ---------------------------------------------------------------------------

std::vector<Var> bindersOf(const Bind& b);
std::vector<Var> bindersOfBinds(const CoreProgram& p);
std::vector<std::pair<Var, ExprPtr>> flattenBinds(const CoreProgram& p);

/// Raised when an alleged join-point right-hand side has fewer leading
/// lambdas than its arity demands.
struct MalformedJoinRhs : std::runtime_error {
  explicit MalformedJoinRhs(const std::string& what) : std::runtime_error(what) {}
};

/// Peels a left-associated application spine: (f a b) -> (f, [a, b]).
std::pair<ExprPtr, std::vector<ExprPtr>> collectArgs(ExprPtr e);

/// Strips exactly n leading lambdas; throws MalformedJoinRhs when there
/// are fewer.
std::pair<std::vector<Var>, ExprPtr> collectNBinders(std::uint64_t n, ExprPtr e);

ExprPtr mkLams(const std::vector<Var>& params, ExprPtr body);
ExprPtr mkApps(ExprPtr fun, const std::vector<ExprPtr>& args);
ExprPtr mkLets(const std::vector<Bind>& binds, ExprPtr body);

/// Size metric: every expression counts at least 1; binders count 1,
/// each case alternative adds 1 + the size of its right-hand side.
std::uint64_t exprSize(const ExprPtr& e);
std::uint64_t bindSize(const Bind& b);

// Structural equality over the whole tree (all Var fields included).
bool exprEqual(const ExprPtr& a, const ExprPtr& b);
bool bindEqual(const Bind& a, const Bind& b);
bool programEqual(const CoreProgram& a, const CoreProgram& b);

}  // namespace minicore
