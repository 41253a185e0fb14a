#include <cctype>
#include <string>

#include "gsheaf/logic.hpp"
#include "gsheaf/report.hpp"

namespace gsheaf {

namespace {

enum class Tok { End, Ident, Number, LParen, RParen, Comma, Slash, Eq, Neq, And, Or, Not, Arrow, Forall, Exists };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

// Tokenizer for both the declaration and the formula grammar. Accepts the
// ASCII connectives and their Unicode counterparts.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    auto take = [&](Tok k, size_t n) {
      t.kind = k;
      t.text = std::string(src_.substr(pos_, n));
      advance(n);
      return t;
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t n = 0;
      while (pos_ + n < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_ + n])) || src_[pos_ + n] == '_' ||
              src_[pos_ + n] == '\'')) {
        ++n;
      }
      t = take(Tok::Ident, n);
      if (t.text == "forall") t.kind = Tok::Forall;
      if (t.text == "exists") t.kind = Tok::Exists;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      if (c == '-' && starts_with("->")) return take(Tok::Arrow, 2);
      size_t n = c == '-' ? 1 : 0;
      while (pos_ + n < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + n]))) ++n;
      if (n == 0 || (c == '-' && n == 1)) fail("unexpected character '-'");
      return take(Tok::Number, n);
    }
    switch (c) {
      case '(': return take(Tok::LParen, 1);
      case ')': return take(Tok::RParen, 1);
      case ',': return take(Tok::Comma, 1);
      case '/': return take(Tok::Slash, 1);
      case '=': return take(Tok::Eq, 1);
      case '&': return take(Tok::And, 1);
      case '|': return take(Tok::Or, 1);
      case '!':
        if (starts_with("!=")) return take(Tok::Neq, 2);
        return take(Tok::Not, 1);
      case '~': return take(Tok::Not, 1);
      default: break;
    }
    if (starts_with("∧")) return take(Tok::And, 3);
    if (starts_with("∨")) return take(Tok::Or, 3);
    if (starts_with("¬")) return take(Tok::Not, 2);
    if (starts_with("→")) return take(Tok::Arrow, 3);
    if (starts_with("∀")) return take(Tok::Forall, 3);
    if (starts_with("∃")) return take(Tok::Exists, 3);
    if (starts_with("≠")) return take(Tok::Neq, 3);
    fail(std::string("unexpected character '") + c + "'");
    return t;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

 private:
  bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

  void advance(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      // Count UTF-8 code points, not bytes, for columns.
      const auto b = static_cast<unsigned char>(src_[pos_ + i]);
      if (src_[pos_ + i] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((b & 0xC0) != 0x80) {
        ++column_;
      }
    }
    pos_ += n;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

bool is_variable_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'v') return false;
  for (size_t i = 1; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) { bump(); }

  Formula formula_eof() {
    Formula f = implication();
    if (cur_.kind != Tok::End) error("unexpected '" + cur_.text + "'");
    return f;
  }

  Term term_eof() {
    Term t = term();
    if (cur_.kind != Tok::End) error("unexpected '" + cur_.text + "'");
    return t;
  }

 private:
  void bump() { cur_ = lex_.next(); }

  [[noreturn]] void error(const std::string& what) const { throw ParseError(what, cur_.line, cur_.column); }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) error(std::string("expected ") + what);
    bump();
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (cur_.kind == Tok::Arrow) {
      bump();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (cur_.kind == Tok::Or) {
      bump();
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (cur_.kind == Tok::And) {
      bump();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  int variable() {
    if (cur_.kind != Tok::Ident || !is_variable_name(cur_.text)) error("expected a variable vN");
    int v = std::stoi(cur_.text.substr(1));
    bump();
    return v;
  }

  Formula unary() {
    switch (cur_.kind) {
      case Tok::Not:
        bump();
        return Formula::neg(unary());
      case Tok::Forall:
      case Tok::Exists: {
        const bool ex = cur_.kind == Tok::Exists;
        bump();
        int v = variable();
        Formula body = unary();
        return ex ? Formula::exists(v, body) : Formula::forall(v, body);
      }
      case Tok::LParen: {
        bump();
        Formula f = implication();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        return atom();
    }
  }

  Formula atom() {
    if (cur_.kind == Tok::Ident) {
      if (auto r = sig_.relation_index(cur_.text)) {
        const Token at = cur_;
        bump();
        expect(Tok::LParen, "'(' after relation symbol");
        std::vector<Term> args = term_list();
        const int arity = sig_.relations()[*r].arity;
        if (static_cast<int>(args.size()) != arity) {
          throw ParseError("relation '" + at.text + "' expects " + std::to_string(arity) + " arguments, got " +
                               std::to_string(args.size()),
                           at.line, at.column);
        }
        return Formula::rel(*r, std::move(args));
      }
    }
    Term lhs = term();
    if (cur_.kind == Tok::Eq) {
      bump();
      return Formula::eq(lhs, term());
    }
    if (cur_.kind == Tok::Neq) {
      bump();
      return Formula::neg(Formula::eq(lhs, term()));
    }
    error("expected '=' after term");
  }

  std::vector<Term> term_list() {
    std::vector<Term> args;
    if (cur_.kind == Tok::RParen) error("empty argument list");
    args.push_back(term());
    while (cur_.kind == Tok::Comma) {
      bump();
      args.push_back(term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term term() {
    if (cur_.kind != Tok::Ident) error("expected a term");
    const Token at = cur_;
    if (is_variable_name(at.text)) {
      bump();
      return Term::var(std::stoi(at.text.substr(1)));
    }
    if (auto c = sig_.constant_index(at.text)) {
      bump();
      return Term::constant(*c);
    }
    if (auto f = sig_.function_index(at.text)) {
      bump();
      expect(Tok::LParen, "'(' after function symbol");
      std::vector<Term> args = term_list();
      const int arity = sig_.functions()[*f].arity;
      if (static_cast<int>(args.size()) != arity) {
        throw ParseError("function '" + at.text + "' expects " + std::to_string(arity) + " arguments, got " +
                             std::to_string(args.size()),
                         at.line, at.column);
      }
      return Term::apply(*f, std::move(args));
    }
    if (sig_.relation_index(at.text)) error("relation '" + at.text + "' used as a term");
    error("unknown symbol '" + at.text + "'");
  }

  Lexer lex_;
  const Signature& sig_;
  Token cur_;
};

}  // namespace

Signature parse_signature(std::string_view text) {
  Lexer lex(text);
  Signature sig;
  auto name_token = [&](const Token& kw) {
    Token t = lex.next();
    if (t.kind != Tok::Ident) throw ParseError("expected a symbol name after '" + kw.text + "'", t.line, t.column);
    if (is_variable_name(t.text)) throw ParseError("'" + t.text + "' is reserved for variables", t.line, t.column);
    return t;
  };
  auto arity_of = [&]() {
    Token slash = lex.next();
    if (slash.kind != Tok::Slash) throw ParseError("expected '/arity'", slash.line, slash.column);
    Token n = lex.next();
    if (n.kind != Tok::Number) throw ParseError("expected an arity", n.line, n.column);
    return std::make_pair(std::stoi(n.text), n);
  };
  for (Token kw = lex.next(); kw.kind != Tok::End; kw = lex.next()) {
    if (kw.kind == Tok::Comma) continue;
    if (kw.kind != Tok::Ident || (kw.text != "fun" && kw.text != "rel" && kw.text != "const")) {
      throw ParseError("expected 'fun', 'rel' or 'const'", kw.line, kw.column);
    }
    Token name = name_token(kw);
    try {
      if (kw.text == "const") {
        sig.add_constant(name.text);
      } else {
        auto [arity, at] = arity_of();
        if (arity < 1) throw ParseError("arity of '" + name.text + "' must be positive", at.line, at.column);
        if (kw.text == "fun") {
          sig.add_function(name.text, arity);
        } else {
          sig.add_relation(name.text, arity);
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), name.line, name.column);
    }
  }
  return sig;
}

Formula parse_formula(std::string_view text, const Signature& sig) { return Parser(text, sig).formula_eof(); }

Term parse_term(std::string_view text, const Signature& sig) { return Parser(text, sig).term_eof(); }

}  // namespace gsheaf
