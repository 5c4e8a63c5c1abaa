#include <sstream>

#include "minicore/frontend.hpp"

namespace minicore {

namespace {

std::string escapeString(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

std::string printLiteral(const Literal& lit) {
  if (const auto* n = std::get_if<std::int64_t>(&lit.value))
    return std::to_string(*n);
  return escapeString(std::get<std::string>(lit.value));
}

std::string printAltCon(const AltCon& con) {
  return std::visit(
      overloaded{[](const DataAlt& d) { return d.con_name; },
                 [](const LitAlt& l) { return printLiteral(l.lit); },
                 [](const DefaultAlt&) { return std::string("DEFAULT"); }},
      con);
}

bool isAtomic(const ExprPtr& e) {
  return std::holds_alternative<VarExpr>(e->node) ||
         std::holds_alternative<LitExpr>(e->node) ||
         std::holds_alternative<TypeExpr>(e->node) ||
         std::holds_alternative<CoercionExpr>(e->node) ||
         std::holds_alternative<CastExpr>(e->node);  // prints its own parens
}

std::string printExprTop(const ExprPtr& e);

std::string printAtom(const ExprPtr& e) {
  if (isAtomic(e)) return printExprTop(e);
  return "(" + printExprTop(e) + ")";
}

std::string printPair(const Var& v, const ExprPtr& rhs) {
  return printVarToken(v) + " = " + printExprTop(rhs);
}

std::string printBind(const Bind& b) {
  return std::visit(
      overloaded{[](const NonRec& nr) {
                   return "let " + printPair(nr.binder, nr.rhs);
                 },
                 [](const Rec& r) {
                   std::string out = "letrec ";
                   bool first = true;
                   for (const auto& [v, rhs] : r.pairs) {
                     if (!first) out += " and ";
                     first = false;
                     out += printPair(v, rhs);
                   }
                   return out;
                 }},
      b);
}

std::string printExprTop(const ExprPtr& e) {
  return std::visit(
      overloaded{
          [](const VarExpr& v) { return printVarToken(v.var); },
          [](const LitExpr& l) { return printLiteral(l.lit); },
          [&](const AppExpr&) {
            auto [head, args] = collectArgs(e);
            std::string out = printAtom(head);
            for (const ExprPtr& a : args) out += " " + printAtom(a);
            return out;
          },
          [&](const LamExpr&) {
            std::string out = "\\";
            ExprPtr body = e;
            bool first = true;
            while (const auto* lam = std::get_if<LamExpr>(&body->node)) {
              if (!first) out += " ";
              first = false;
              out += printVarToken(lam->binder);
              body = lam->body;
            }
            return out + " -> " + printExprTop(body);
          },
          [](const LetExpr& l) {
            return printBind(l.bind) + " in " + printExprTop(l.body);
          },
          [](const CaseExpr& c) {
            std::string out = "case " + printExprTop(c.scrut) + " as " +
                              printVarToken(c.case_bndr);
            if (!(c.result_ty == TypeAtom{}))
              out += " return " + c.result_ty.atom_name;
            out += " of { ";
            bool first = true;
            for (const Alt& alt : c.alts) {
              if (!first) out += " ; ";
              first = false;
              out += printAltCon(alt.con);
              for (const Var& p : alt.pats) out += " " + printVarToken(p);
              out += " -> " + printExprTop(alt.rhs);
            }
            return out + " }";
          },
          [](const CastExpr& c) {
            return "(" + printExprTop(c.body) + " |> " +
                   c.coercion.atom_name + ")";
          },
          [](const TypeExpr& t) { return "@" + t.ty.atom_name; },
          [](const CoercionExpr& c) { return "@~" + c.coercion.atom_name; }},
      e->node);
}

}  // namespace

std::string printVarToken(const Var& v) {
  std::string out =
      v.var_name.occ_text + "_" + std::to_string(varUnique(v).number);
  bool global_unique = !isLocalUnique(varUnique(v));
  bool global_scope = !isLocalVar(v);
  if (global_unique && global_scope)
    out += "g";
  else if (global_unique != global_scope)
    out += "g?";
  if (auto arity = v.id_details.join_arity)
    out += "!j" + std::to_string(*arity);
  if (!(v.var_type == TypeAtom{})) out += ":" + v.var_type.atom_name;
  if (!v.id_info.info_token.empty()) out += "%" + v.id_info.info_token;
  return out;
}

std::string printExpr(const ExprPtr& e) { return printExprTop(e); }

std::string printProgram(const CoreProgram& p) {
  std::ostringstream out;
  for (const Bind& b : p) out << printBind(b) << " ;\n";
  return out.str();
}

}  // namespace minicore
