#include "idspec/algebra/expression.hpp"

#include <cctype>

namespace idspec {

namespace {
std::string format_position(std::size_t line, std::size_t column, const std::string& message,
                            const std::vector<std::string>& expected) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}
}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::vector<std::string> expected)
    : Error("ParseError", format_position(line, column, message, expected)),
      line_(line),
      column_(column),
      detail_(message),
      expected_(std::move(expected)) {}

ValidationError::ValidationError(std::size_t line, std::size_t column, const std::string& message)
    : Error("ValidationError", format_position(line, column, message, {})), line_(line), column_(column) {}

}  // namespace idspec

namespace idspec::algebra {

bool is_identifier_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_identifier_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, const NameResolver& resolve, std::size_t line, std::size_t column)
      : text_(text), resolve_(resolve), line_(line), column_(column) {}

  RationalFunction parse() {
    skip_space();
    if (at_end()) fail("empty expression", {"expression"});
    RationalFunction r = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'", {"operator", "end of expression"});
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected = {}) const {
    throw ParseError(line_, column_ + pos_, message, std::move(expected));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RationalFunction expr() {
    RationalFunction acc = term();
    for (;;) {
      if (accept('+')) {
        acc = acc + term();
      } else if (accept('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  RationalFunction term() {
    RationalFunction acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RationalFunction d = unary();
        if (d.is_zero()) {
          pos_ = at;
          skip_space();
          fail("division by zero");
        }
        acc = acc / d;
      } else {
        return acc;
      }
    }
  }

  RationalFunction unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RationalFunction power() {
    RationalFunction base = primary();
    if (!accept('^')) return base;
    skip_space();
    bool paren = accept('(');
    skip_space();
    if (!at_end() && text_[pos_] == '-') fail("negative exponents are not allowed", {"non-negative integer"});
    if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("exponent must be a non-negative integer literal", {"non-negative integer"});
    }
    BigInt e = integer_literal();
    if (paren && !accept(')')) fail("missing ')'", {")"});
    if (e > 100000) fail("exponent too large");
    RationalFunction r = base.pow(static_cast<int>(e.get_si()));
    if (accept('^')) fail("chained exponents need parentheses");
    return r;
  }

  BigInt integer_literal() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (!at_end() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      fail("floating-point literals are not allowed; use integer ratios", {"integer"});
    }
    return BigInt(std::string(text_.substr(start, pos_ - start)));
  }

  RationalFunction primary() {
    skip_space();
    if (at_end()) fail("unexpected end of expression", {"identifier", "integer", "("});
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (c == '(') {
      ++pos_;
      RationalFunction r = expr();
      if (!accept(')')) fail("missing ')'", {")"});
      return r;
    }
    if (std::isdigit(c)) return RationalFunction(BigRational(integer_literal()));
    if (c == '.') fail("floating-point literals are not allowed; use integer ratios", {"integer"});
    if (is_identifier_start(c)) {
      std::size_t start = pos_;
      while (!at_end() && is_identifier_char(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (!at_end() && text_[pos_] == '\'') {
        throw ValidationError(line_, column_ + pos_, "derivative " + std::string(name) + "' is only allowed on left-hand sides");
      }
      auto v = resolve_(name);
      if (!v) throw ValidationError(line_, column_ + start, "unknown identifier '" + std::string(name) + "'");
      return RationalFunction::variable(*v);
    }
    fail(std::string("unexpected '") + text_[pos_] + "'", {"identifier", "integer", "("});
  }

  std::string_view text_;
  const NameResolver& resolve_;
  std::size_t line_;
  std::size_t column_;
  std::size_t pos_ = 0;
};

}  // namespace

RationalFunction parse_expression(std::string_view text, const NameResolver& resolve, std::size_t line,
                                  std::size_t column) {
  return ExprParser(text, resolve, line, column).parse();
}

RationalFunction parse_expression(std::string_view text) {
  NameResolver r = [](std::string_view name) -> std::optional<VarId> { return intern_variable(name); };
  return parse_expression(text, r);
}

}  // namespace idspec::algebra
