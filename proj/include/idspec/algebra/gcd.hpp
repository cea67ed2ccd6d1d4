#pragma once

#include <span>

#include "idspec/algebra/polynomial.hpp"

namespace idspec::algebra {

/// Greatest common divisor over Q, returned primitive (integer coefficients,
/// content 1, positive leading coefficient). gcd(p, 0) = primitive_part(p).
Polynomial gcd(const Polynomial& a, const Polynomial& b);
Polynomial gcd(std::span<const Polynomial> polys);
/// Primitive least common multiple.
Polynomial lcm(const Polynomial& a, const Polynomial& b);

/// Product of the distinct irreducible factors, up to a constant.
Polynomial squarefree_part(const Polynomial& p);

/// Content of p seen as a polynomial in `v`: gcd of its coefficients.
Polynomial content_in(const Polynomial& p, VarId v);

struct GcdStats {
  std::size_t heuristic_hits = 0;
  std::size_t prs_fallbacks = 0;
};
GcdStats gcd_stats();

}  // namespace idspec::algebra
