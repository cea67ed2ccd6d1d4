#include "idspec/algebra/scalar.hpp"

#include <stdexcept>

namespace idspec::algebra {

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(const BigRational& v) { return v.get_str(); }

BigRational parse_rational(std::string_view text) {
  std::string s(text);
  BigRational out;
  if (s.empty() || out.set_str(s, 10) != 0 || out.get_den() == 0) {
    throw std::invalid_argument("not a rational literal: " + s);
  }
  out.canonicalize();
  return out;
}

}  // namespace idspec::algebra
