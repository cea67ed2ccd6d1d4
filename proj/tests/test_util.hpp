#pragma once

#include <random>
#include <string>
#include <vector>

#include "idspec/algebra/expression.hpp"
#include "idspec/algebra/rational_function.hpp"

namespace idspec::testing {

using algebra::BigRational;
using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;

inline RationalFunction rf(std::string_view s) { return algebra::parse_expression(s); }
inline Polynomial poly(std::string_view s) { return algebra::parse_expression(s).num(); }
inline VarId var(std::string_view s) { return algebra::intern_variable(s); }

inline Polynomial random_poly(std::mt19937_64& rng, const std::vector<VarId>& vars, int terms, int max_exp) {
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> expo(0, max_exp);
  std::vector<algebra::Term> ts;
  for (int i = 0; i < terms; ++i) {
    std::vector<algebra::VarPower> ps;
    for (VarId v : vars) {
      int e = expo(rng);
      if (e) ps.push_back({v, static_cast<std::uint32_t>(e)});
    }
    int c = coeff(rng);
    if (c == 0) c = 1;
    ts.push_back({algebra::Monomial::from_powers(ps), BigRational(c)});
  }
  return Polynomial::from_terms(std::move(ts));
}

inline Polynomial random_nonzero(std::mt19937_64& rng, const std::vector<VarId>& vars, int terms, int max_exp) {
  for (;;) {
    Polynomial p = random_poly(rng, vars, terms, max_exp);
    if (!p.is_zero()) return p;
  }
}

}  // namespace idspec::testing
