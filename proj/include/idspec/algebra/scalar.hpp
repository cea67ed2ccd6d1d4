#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace idspec::algebra {

using BigInt = mpz_class;
/// Canonical rational: gcd(|num|, den) = 1 and den > 0, maintained by GMP.
using BigRational = mpq_class;

std::string to_string(const BigInt& v);
std::string to_string(const BigRational& v);

/// Parses "p" or "p/q" with optional sign. Throws std::invalid_argument.
BigRational parse_rational(std::string_view text);

inline bool is_integer(const BigRational& v) { return v.get_den() == 1; }

}  // namespace idspec::algebra
