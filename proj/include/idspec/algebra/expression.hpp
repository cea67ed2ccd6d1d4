#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idspec/algebra/rational_function.hpp"

namespace idspec {

/// Syntax error with a 1-based position into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message, std::vector<std::string> expected = {});
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& detail() const { return detail_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
  std::vector<std::string> expected_;
};

/// Semantically invalid model (unknown or duplicate identifier, ...).
class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace idspec

namespace idspec::algebra {

/// Maps an identifier to its variable; nullopt marks it unknown.
using NameResolver = std::function<std::optional<VarId>(std::string_view)>;

/// Parses + - * / ^ expressions over integer literals and identifiers.
/// `line` and `column` locate text[0] in the enclosing source for errors.
RationalFunction parse_expression(std::string_view text, const NameResolver& resolve, std::size_t line = 1,
                                  std::size_t column = 1);

/// Resolver that interns every identifier.
RationalFunction parse_expression(std::string_view text);

bool is_identifier_start(unsigned char c);
bool is_identifier_char(unsigned char c);

}  // namespace idspec::algebra
