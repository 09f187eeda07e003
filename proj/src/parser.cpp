#include "stlsat/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace stlsat {

namespace {

enum class Tok {
  End, Ident, Number, LParen, RParen, LBracket, RBracket, Comma,
  Not, And, Or, Arrow, Plus, Minus, Star,
  Lt, Le, Gt, Ge, EqEq, Neq,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space();
    int line = line_, col = col_;
    if (pos_ >= text_.size()) return {Tok::End, "", line, col};
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        id += advance();
      return {Tok::Ident, id, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      auto digits = [&] {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
          num += advance();
      };
      digits();
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == '/')) {
        num += advance();
        std::size_t before = num.size();
        digits();
        if (num.size() == before) throw ParseError("malformed rational constant", line, col);
      }
      return {Tok::Number, num, line, col};
    }
    advance();
    switch (c) {
      case '(': return {Tok::LParen, "(", line, col};
      case ')': return {Tok::RParen, ")", line, col};
      case '[': return {Tok::LBracket, "[", line, col};
      case ']': return {Tok::RBracket, "]", line, col};
      case ',': return {Tok::Comma, ",", line, col};
      case '&': return {Tok::And, "&", line, col};
      case '|': return {Tok::Or, "|", line, col};
      case '+': return {Tok::Plus, "+", line, col};
      case '*': return {Tok::Star, "*", line, col};
      case '-':
        if (peek() == '>') {
          advance();
          return {Tok::Arrow, "->", line, col};
        }
        return {Tok::Minus, "-", line, col};
      case '!':
        if (peek() == '=') {
          advance();
          return {Tok::Neq, "!=", line, col};
        }
        return {Tok::Not, "!", line, col};
      case '<':
        if (peek() == '=') {
          advance();
          return {Tok::Le, "<=", line, col};
        }
        return {Tok::Lt, "<", line, col};
      case '>':
        if (peek() == '=') {
          advance();
          return {Tok::Ge, ">=", line, col};
        }
        return {Tok::Gt, ">", line, col};
      case '=':
        if (peek() == '=') {
          advance();
          return {Tok::EqEq, "==", line, col};
        }
        throw ParseError("unexpected '='; use '==' for equality", line, col);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(const std::string& text, bool mltl) : lexer_(text), mltl_(mltl) { shift(); }

  Formula parse() {
    Formula f = parse_implication();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  void shift() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.column);
  }

  void expect(Tok kind, const std::string& what) {
    if (current_.kind != kind) fail("expected " + what);
    shift();
  }

  bool accept(Tok kind) {
    if (current_.kind != kind) return false;
    shift();
    return true;
  }

  bool at_ident(const char* word) const {
    return current_.kind == Tok::Ident && current_.text == word;
  }

  Formula parse_implication() {
    Formula lhs = parse_or();
    if (accept(Tok::Arrow)) return Formula::implies(lhs, parse_implication());
    return lhs;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (accept(Tok::Or)) f = Formula::disj(f, parse_and());
    return f;
  }

  Formula parse_and() {
    Formula f = parse_temporal();
    while (accept(Tok::And)) f = Formula::conj(f, parse_temporal());
    return f;
  }

  Formula parse_temporal() {
    Formula lhs = parse_unary();
    std::optional<TOp> op;
    if (at_ident("U")) op = TOp::U;
    else if (at_ident("R")) op = TOp::R;
    else if (at_ident("sU")) op = TOp::SU;
    else if (at_ident("sR")) op = TOp::SR;
    if (!op) return lhs;
    shift();
    Interval ivl = parse_interval();
    return Formula::temporal(*op, ivl, lhs, parse_temporal());
  }

  Formula parse_unary() {
    if (accept(Tok::Not)) return Formula::negation(parse_unary());
    if (at_ident("G") || at_ident("F")) {
      TOp op = current_.text == "G" ? TOp::G : TOp::F;
      shift();
      Interval ivl = parse_interval();
      return Formula::temporal(op, ivl, parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (at_ident("true")) {
      shift();
      return Formula::tt();
    }
    if (accept(Tok::LParen)) {
      Formula f = parse_implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (mltl_) {
      if (current_.kind != Tok::Ident) fail("expected proposition");
      std::string name = current_.text;
      shift();
      if (is_relop(current_.kind))
        fail("MLTL atoms are bare propositions; comparisons are not allowed");
      LinearConstraint lc;
      lc.terms[name] = 1;
      lc.cmp = Cmp::Eq;
      lc.bound = 1;
      return Formula::atom(std::move(lc));
    }
    return parse_atom();
  }

  Interval parse_interval() {
    expect(Tok::LBracket, "'['");
    Token lo_tok = current_;
    Time lo = parse_natural();
    expect(Tok::Comma, "','");
    Time hi = parse_natural();
    expect(Tok::RBracket, "']'");
    if (lo > hi)
      throw ParseError("interval lower bound exceeds upper bound", lo_tok.line, lo_tok.column);
    return {lo, hi};
  }

  Time parse_natural() {
    if (current_.kind != Tok::Number) fail("expected natural number");
    const std::string& text = current_.text;
    if (text.find('.') != std::string::npos || text.find('/') != std::string::npos)
      fail("interval bounds must be naturals");
    Time value = 0;
    for (char c : text) {
      value = value * 10 + (c - '0');
      if (value < 0) fail("interval bound out of range");
    }
    shift();
    return value;
  }

  static bool is_relop(Tok kind) {
    switch (kind) {
      case Tok::Lt:
      case Tok::Le:
      case Tok::Gt:
      case Tok::Ge:
      case Tok::EqEq:
      case Tok::Neq:
        return true;
      default:
        return false;
    }
  }

  Rational parse_rational_token() {
    bool neg = false;
    while (current_.kind == Tok::Minus || current_.kind == Tok::Plus) {
      if (current_.kind == Tok::Minus) neg = !neg;
      shift();
    }
    if (current_.kind != Tok::Number) fail("expected rational constant");
    auto value = parse_rational(current_.text);
    if (!value) fail("malformed rational constant");
    shift();
    return neg ? Rational(-*value) : *value;
  }

  // linexpr := ["-"] term (("+"|"-") term)*, term := [rational "*"] ident
  Formula parse_atom() {
    std::map<std::string, Rational> terms;
    bool first = true;
    Rational sign = 1;
    while (true) {
      if (first) {
        if (accept(Tok::Minus)) sign = -1;
        first = false;
      } else if (accept(Tok::Plus)) {
        sign = 1;
      } else if (accept(Tok::Minus)) {
        sign = -1;
      } else {
        break;
      }
      Rational coeff = 1;
      if (current_.kind == Tok::Number) {
        auto value = parse_rational(current_.text);
        if (!value) fail("malformed rational constant");
        coeff = *value;
        shift();
        expect(Tok::Star, "'*' between coefficient and variable");
      }
      if (current_.kind != Tok::Ident || is_reserved(current_.text))
        fail("expected signal variable");
      terms[current_.text] += sign * coeff;
      shift();
    }

    Tok rel = current_.kind;
    if (!is_relop(rel)) fail("expected comparison operator");
    shift();
    Rational bound = parse_rational_token();

    // f < k and f <= k are normalized by negating the linear function.
    bool flip = rel == Tok::Lt || rel == Tok::Le;
    LinearConstraint lc;
    lc.cmp = (rel == Tok::Gt || rel == Tok::Lt)   ? Cmp::Gt
             : (rel == Tok::Ge || rel == Tok::Le) ? Cmp::Ge
             : (rel == Tok::EqEq)                 ? Cmp::Eq
                                                  : Cmp::Neq;
    lc.bound = flip ? Rational(-bound) : bound;
    for (auto& [var, coeff] : terms) {
      if (coeff == 0) continue;
      lc.terms[var] = flip ? Rational(-coeff) : coeff;
    }

    // All variables cancelled: the atom is a ground truth or falsehood.
    if (lc.terms.empty()) {
      Rational zero = 0;
      bool truth = false;
      switch (lc.cmp) {
        case Cmp::Gt: truth = zero > lc.bound; break;
        case Cmp::Ge: truth = zero >= lc.bound; break;
        case Cmp::Eq: truth = zero == lc.bound; break;
        case Cmp::Neq: truth = zero != lc.bound; break;
      }
      return truth ? Formula::tt() : Formula::negation(Formula::tt());
    }
    return Formula::atom(std::move(lc));
  }

  static bool is_reserved(const std::string& id) {
    return id == "true" || id == "G" || id == "F" || id == "U" || id == "R" || id == "sU" ||
           id == "sR";
  }

  Lexer lexer_;
  bool mltl_;
  Token current_;
};

}  // namespace

Formula parse_stl(const std::string& text) { return Parser(text, false).parse(); }

Formula parse_mltl(const std::string& text) { return Parser(text, true).parse(); }

}  // namespace stlsat
