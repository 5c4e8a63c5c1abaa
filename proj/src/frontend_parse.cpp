#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>

#include "minicore/frontend.hpp"

namespace minicore {

namespace {

std::string joinExpected(const std::vector<std::string>& expected) {
  std::string out;
  for (const std::string& e : expected) {
    if (!out.empty()) out += ", ";
    out += e;
  }
  return out;
}

}  // namespace

ParseError::ParseError(int line_, int column_, const std::string& message,
                       std::vector<std::string> expected_tokens)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) +
                         ": " + message +
                         (expected_tokens.empty()
                              ? ""
                              : " (expected " + joinExpected(expected_tokens) +
                                    ")")),
      line(line_),
      column(column_),
      expected(std::move(expected_tokens)) {}

namespace {

enum class Tok {
  KwLet,
  KwLetrec,
  KwAnd,
  KwIn,
  KwCase,
  KwAs,
  KwReturn,
  KwOf,
  KwDefault,
  Backslash,
  Arrow,     // ->
  FatArrow,  // =>
  Equals,
  Semi,
  Comma,
  LBrace,
  RBrace,
  LParen,
  RParen,
  CastOp,  // |>
  At,      // @
  AtTilde, // @~
  Ident,
  VarTok,
  IntLit,
  StrLit,
  End,
};

enum class GlobalMark { None, Global, Mismatch };

struct Token {
  Tok kind = Tok::End;
  int line = 1;
  int column = 1;

  std::string text;                         // Ident / StrLit / info
  std::int64_t int_value = 0;               // IntLit
  // VarTok payload
  std::string occ;
  std::uint64_t number = 0;
  GlobalMark mark = GlobalMark::None;
  std::optional<std::uint64_t> join_arity;
  std::optional<std::string> type_atom;
  std::optional<std::string> info_token;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool identChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpaceAndComments();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  [[noreturn]] void err(const std::string& msg) {
    throw ParseError(line_, column_, msg, {});
  }

  bool done() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skipSpaceAndComments() {
    for (;;) {
      while (!done() && std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (!done() && peek() == '-' && peek(1) == '-') {
        while (!done() && peek() != '\n') advance();
        continue;
      }
      return;
    }
  }

  std::string scanWord() {
    std::string w;
    while (!done() && identChar(peek())) w += advance();
    return w;
  }

  std::uint64_t scanNat(const char* what) {
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      err(std::string("expected ") + what);
    std::string digits;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek())))
      digits += advance();
    return std::strtoull(digits.c_str(), nullptr, 10);
  }

  Token next() {
    Token t;
    t.line = line_;
    t.column = column_;
    if (done()) return t;

    char c = peek();
    if (identStart(c)) return word(t);
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::IntLit;
      t.int_value = static_cast<std::int64_t>(scanNat("integer literal"));
      return t;
    }

    advance();
    switch (c) {
      case '\\': t.kind = Tok::Backslash; return t;
      case '=':
        if (peek() == '>') {
          advance();
          t.kind = Tok::FatArrow;
        } else {
          t.kind = Tok::Equals;
        }
        return t;
      case ';': t.kind = Tok::Semi; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '|':
        if (peek() != '>') err("stray '|'");
        advance();
        t.kind = Tok::CastOp;
        return t;
      case '@':
        if (peek() == '~') {
          advance();
          t.kind = Tok::AtTilde;
        } else {
          t.kind = Tok::At;
        }
        return t;
      case '-':
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
          t.kind = Tok::IntLit;
          t.int_value = -static_cast<std::int64_t>(scanNat("integer literal"));
          return t;
        }
        if (peek() == '>') {
          advance();
          t.kind = Tok::Arrow;
          return t;
        }
        err("stray '-'");
      case '"': return stringLit(t);
      default: err(std::string("unexpected character '") + c + "'");
    }
  }

  Token stringLit(Token t) {
    t.kind = Tok::StrLit;
    std::string s;
    for (;;) {
      if (done()) err("unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (done()) err("unterminated escape");
        char e = advance();
        switch (e) {
          case '\\': s += '\\'; break;
          case '"': s += '"'; break;
          case 'n': s += '\n'; break;
          default: err("unsupported escape sequence");
        }
      } else {
        s += c;
      }
    }
    t.text = std::move(s);
    return t;
  }

  // Words are keywords, plain identifiers, or full variable tokens. A var
  // token carries its unique as a trailing "_nat", so split on the last
  // underscore whose suffix is all digits (an optional 'g' glued on the end
  // marks a global).
  Token word(Token t) {
    std::string w = scanWord();

    static const std::map<std::string, Tok> kKeywords = {
        {"let", Tok::KwLet},       {"letrec", Tok::KwLetrec},
        {"and", Tok::KwAnd},       {"in", Tok::KwIn},
        {"case", Tok::KwCase},     {"as", Tok::KwAs},
        {"return", Tok::KwReturn}, {"of", Tok::KwOf},
        {"DEFAULT", Tok::KwDefault}};
    if (auto it = kKeywords.find(w); it != kKeywords.end()) {
      t.kind = it->second;
      t.text = w;
      return t;
    }

    GlobalMark mark = GlobalMark::None;
    std::string body = w;
    auto splitUnique = [](const std::string& s, std::string& occ,
                          std::uint64_t& number) {
      std::size_t i = s.size();
      while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
      if (i == s.size() || i < 2 || s[i - 1] != '_') return false;
      occ = s.substr(0, i - 1);
      number = std::strtoull(s.c_str() + i, nullptr, 10);
      return !occ.empty() && identStart(occ[0]);
    };

    std::string occ;
    std::uint64_t number = 0;
    if (!splitUnique(body, occ, number)) {
      if (body.size() > 1 && body.back() == 'g' &&
          splitUnique(body.substr(0, body.size() - 1), occ, number)) {
        mark = GlobalMark::Global;
        if (peek() == '?') {
          advance();
          mark = GlobalMark::Mismatch;
        }
      } else {
        t.kind = Tok::Ident;
        t.text = std::move(body);
        return t;
      }
    }

    t.kind = Tok::VarTok;
    t.occ = std::move(occ);
    t.number = number;
    t.mark = mark;

    // glued suffixes, in grammar order
    if (peek() == '!') {
      advance();
      if (peek() != 'j') err("expected 'j' after '!'");
      advance();
      t.join_arity = scanNat("join arity");
    }
    if (peek() == ':') {
      advance();
      std::string ty = scanWord();
      if (ty.empty() || ty[0] != 'T') err("expected type atom after ':'");
      t.type_atom = std::move(ty);
    }
    if (peek() == '%') {
      advance();
      std::string info = scanWord();
      if (info.empty()) err("expected info token after '%'");
      t.info_token = std::move(info);
    }
    return t;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

Var varFromToken(const Token& t) {
  ScopeClass tag =
      t.mark == GlobalMark::None ? ScopeClass::Local : ScopeClass::Global;
  IdScope scope =
      t.mark == GlobalMark::Global ? IdScope::GlobalId : IdScope::LocalId;
  Unique u{tag, t.number};
  Var v;
  v.var_name = Name{t.occ, u};
  v.real_unique = u;
  v.var_type = TypeAtom{t.type_atom.value_or("T0")};
  v.id_scope = scope;
  v.id_details = t.join_arity ? IdDetails::joinId(*t.join_arity)
                              : IdDetails::vanilla();
  v.id_info = IdInfo{t.info_token.value_or("")};
  return v;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  CoreProgram program() {
    CoreProgram p;
    while (!at(Tok::End)) {
      p.push_back(topBind());
      expect(Tok::Semi, ";");
    }
    return p;
  }

  SubstSpec substSpec() {
    SubstSpec spec;
    expectIdent("inscope");
    expect(Tok::LBrace, "{");
    while (!at(Tok::RBrace)) {
      spec.inscope.push_back(binder());
      if (at(Tok::Comma)) bump();
    }
    bump();
    expectIdent("map");
    expect(Tok::LBrace, "{");
    std::map<Unique, bool> seen;
    while (!at(Tok::RBrace)) {
      Var key = binder();
      if (seen.count(varUnique(key)))
        throw ParseError(prev().line, prev().column,
                         "duplicate unique in substitution mappings", {});
      seen[varUnique(key)] = true;
      expect(Tok::FatArrow, "=>");
      ExprPtr value = expr();
      expect(Tok::Semi, ";");
      spec.mappings.emplace_back(std::move(key), std::move(value));
    }
    bump();
    expect(Tok::End, "end of input");
    return spec;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  const Token& prev() const { return tokens_[pos_ == 0 ? 0 : pos_ - 1]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token bump() { return tokens_[pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    throw ParseError(cur().line, cur().column, "unexpected token",
                     std::move(expected));
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) unexpected({what});
    return bump();
  }

  void expectIdent(const std::string& word) {
    if (!at(Tok::Ident) || cur().text != word) unexpected({"'" + word + "'"});
    bump();
  }

  Var binder() {
    if (!at(Tok::VarTok)) unexpected({"variable"});
    return varFromToken(bump());
  }

  Bind topBind() {
    if (at(Tok::KwLet)) {
      bump();
      auto [v, rhs] = pair();
      return NonRec{std::move(v), std::move(rhs)};
    }
    if (at(Tok::KwLetrec)) {
      bump();
      Rec r;
      r.pairs.push_back(pair());
      while (at(Tok::KwAnd)) {
        bump();
        r.pairs.push_back(pair());
      }
      return r;
    }
    unexpected({"'let'", "'letrec'"});
  }

  std::pair<Var, ExprPtr> pair() {
    Var v = binder();
    expect(Tok::Equals, "=");
    return {std::move(v), expr()};
  }

  ExprPtr expr() {
    switch (cur().kind) {
      case Tok::Backslash: return lambda();
      case Tok::KwLet:
      case Tok::KwLetrec: return letExpr();
      case Tok::KwCase: return caseExpr();
      default: return app();
    }
  }

  ExprPtr lambda() {
    bump();  // backslash
    std::vector<Var> binders;
    binders.push_back(binder());
    while (at(Tok::VarTok)) binders.push_back(binder());
    expect(Tok::Arrow, "->");
    return mkLams(binders, expr());
  }

  ExprPtr letExpr() {
    Bind b = topBind();
    expect(Tok::KwIn, "'in'");
    return mkLet(std::move(b), expr());
  }

  ExprPtr caseExpr() {
    bump();  // case
    ExprPtr scrut = expr();
    expect(Tok::KwAs, "'as'");
    Var bndr = binder();
    TypeAtom result_ty;
    if (at(Tok::KwReturn)) {
      bump();
      result_ty = tyAtom();
    }
    expect(Tok::KwOf, "'of'");
    expect(Tok::LBrace, "{");
    std::vector<Alt> alts;
    alts.push_back(alt());
    while (at(Tok::Semi)) {
      bump();
      alts.push_back(alt());
    }
    expect(Tok::RBrace, "}");
    return mkCase(std::move(scrut), std::move(bndr), std::move(result_ty),
                  std::move(alts));
  }

  Alt alt() {
    AltCon con{DefaultAlt{}};
    if (at(Tok::KwDefault)) {
      bump();
    } else if (at(Tok::IntLit)) {
      con = LitAlt{Literal{bump().int_value}};
    } else if (at(Tok::Ident) &&
               std::isupper(static_cast<unsigned char>(cur().text[0]))) {
      con = DataAlt{bump().text};
    } else {
      unexpected({"'DEFAULT'", "constructor", "integer literal"});
    }
    std::vector<Var> pats;
    while (at(Tok::VarTok)) pats.push_back(binder());
    expect(Tok::Arrow, "->");
    // rhs parsed before the braces: gcc 11 fails to clean up partially
    // built aggregates when a later element throws
    ExprPtr rhs = expr();
    return Alt{std::move(con), std::move(pats), std::move(rhs)};
  }

  bool atAtomStart() const {
    switch (cur().kind) {
      case Tok::VarTok:
      case Tok::IntLit:
      case Tok::StrLit:
      case Tok::LParen:
      case Tok::At:
      case Tok::AtTilde: return true;
      default: return false;
    }
  }

  ExprPtr app() {
    if (!atAtomStart())
      unexpected({"expression"});
    ExprPtr e = atom();
    while (atAtomStart()) e = mkApp(std::move(e), atom());
    return e;
  }

  TypeAtom tyAtom() {
    if (!at(Tok::Ident) || cur().text.empty() || cur().text[0] != 'T')
      unexpected({"type atom"});
    return TypeAtom{bump().text};
  }

  CoercionAtom coAtom() {
    if (!at(Tok::Ident) || cur().text.empty() || cur().text[0] != 'C')
      unexpected({"coercion atom"});
    return CoercionAtom{bump().text};
  }

  ExprPtr atom() {
    switch (cur().kind) {
      case Tok::VarTok: return mkVar(varFromToken(bump()));
      case Tok::IntLit: return mkIntLit(bump().int_value);
      case Tok::StrLit: return mkStringLit(bump().text);
      case Tok::At: bump(); return mkType(tyAtom());
      case Tok::AtTilde: bump(); return mkCoercion(coAtom());
      case Tok::LParen: {
        bump();
        ExprPtr e = expr();
        if (at(Tok::CastOp)) {
          bump();
          CoercionAtom co = coAtom();
          expect(Tok::RParen, ")");
          return mkCast(std::move(e), std::move(co));
        }
        expect(Tok::RParen, ")");
        return e;
      }
      default: unexpected({"expression"});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

CoreProgram parseProgram(const std::string& text) {
  Parser parser(Lexer(text).run());
  return parser.program();
}

SubstSpec parseSubstSpec(const std::string& text) {
  Parser parser(Lexer(text).run());
  return parser.substSpec();
}

}  // namespace minicore
