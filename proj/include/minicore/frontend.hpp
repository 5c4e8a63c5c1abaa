// Textual surface syntax for Core programs and substitution specs.
//
//   program ::= { topbind ";" }
//   topbind ::= "let" pair | "letrec" pair { "and" pair }
//   pair    ::= binder "=" expr
//   expr    ::= lam | let | case | app
//   lam     ::= "\" binder { binder } "->" expr
//   case    ::= "case" expr "as" binder [ "return" tyatom ]
//               "of" "{" alt { ";" alt } "}"
//   app     ::= atom { atom }
//   atom    ::= var | intlit | strlit | "(" expr ")" | "(" expr "|>" coatom ")"
//             | "@" tyatom | "@~" coatom
//   var     ::= ident "_" nat [ "g" | "g?" ] [ "!j" nat ] [ ":" tyatom ]
//               [ "%" ident ]
//
// Unique numbers are explicit so shadowing fixtures, including same-unique
// shadowing, can be written literally. "g" marks a global (unique tag and
// scope flag together); "g?" deliberately splits them for lint-negative
// fixtures. "--" starts a line comment.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "minicore/core_ir.hpp"

namespace minicore {

struct ParseError : std::runtime_error {
  ParseError(int line, int column, const std::string& message,
             std::vector<std::string> expected_tokens);

  int line;
  int column;
  std::vector<std::string> expected;
};

CoreProgram parseProgram(const std::string& text);

/// In-scope variables plus substitution mappings, as read from a spec file:
///   inscope { x_1, y_2 } map { x_1 => y_2 ; }
struct SubstSpec {
  std::vector<Var> inscope;
  std::vector<std::pair<Var, ExprPtr>> mappings;  // distinct uniques
};
SubstSpec parseSubstSpec(const std::string& text);

/// Canonical text: one top bind per line, minimal parentheses, default type
/// atoms and empty info tokens omitted. parseProgram(printProgram(p)) == p.
std::string printProgram(const CoreProgram& p);
std::string printExpr(const ExprPtr& e);
std::string printVarToken(const Var& v);

}  // namespace minicore
