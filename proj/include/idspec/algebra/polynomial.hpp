#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "idspec/algebra/monomial.hpp"
#include "idspec/algebra/scalar.hpp"

namespace idspec::algebra {

struct Term {
  Monomial mono;
  BigRational coeff;
};

/// Sparse multivariate polynomial over Q. Terms are kept in descending
/// canonical monomial order with no zero coefficients, so structural equality
/// is mathematical equality. Immutable in practice: every operation returns a
/// new value.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(long c) : Polynomial(BigRational(c)) {}  // NOLINT(implicit)
  Polynomial(const BigInt& c) : Polynomial(BigRational(c)) {}  // NOLINT
  Polynomial(const BigRational& c);  // NOLINT

  static Polynomial variable(VarId v);
  static Polynomial monomial(Monomial m, BigRational c = 1);
  /// Sorts, merges equal monomials and drops zeros.
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  bool is_one() const;
  BigRational constant_value() const;  // pre: is_constant()
  /// Leading term under the canonical order. pre: !is_zero()
  const Term& leading_term() const { return terms_.front(); }
  const BigRational& leading_coefficient() const { return terms_.front().coeff; }

  /// The variable universe: sorted ids of variables with nonzero degree.
  std::vector<VarId> variables() const;
  bool depends_on(VarId v) const;
  bool depends_on_any(std::span<const VarId> vars) const;
  std::uint32_t degree(VarId v) const;
  std::uint32_t total_degree() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  Polynomial& operator*=(const BigRational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const BigRational& c) const { Polynomial out(*this); out *= c; return out; }
  Polynomial mul_monomial(const Monomial& m, const BigRational& c) const;

  Polynomial pow(unsigned e) const;
  Polynomial derivative(VarId v) const;

  /// Coefficients with respect to one variable: degree -> coefficient.
  std::map<std::uint32_t, Polynomial> coefficients_in(VarId v) const;
  /// Groups terms by their power product in `vars` (sorted ids); the value is
  /// the cofactor polynomial in the remaining variables.
  std::vector<std::pair<Monomial, Polynomial>> collect(std::span<const VarId> vars) const;

  /// Replaces v by `value` everywhere.
  Polynomial substitute(VarId v, const Polynomial& value) const;
  Polynomial substitute(const std::unordered_map<VarId, Polynomial>& values) const;
  Polynomial rename(const std::unordered_map<VarId, VarId>& mapping) const;

  std::size_t hash() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<Term> terms_;
};

/// gcd of numerators over lcm of denominators; zero polynomial has content 0.
BigRational rational_content(const Polynomial& p);
/// p / content with the leading coefficient made positive: integer
/// coefficients, content 1.
Polynomial primitive_part(const Polynomial& p);
/// Same as primitive_part but also returns the factor c with p = c * result.
std::pair<BigRational, Polynomial> content_and_primitive(const Polynomial& p);

/// Exact quotient a / b when b divides a, otherwise nullopt. b must be nonzero.
std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b);

BigRational evaluate(const Polynomial& p, const std::unordered_map<VarId, BigRational>& point);

}  // namespace idspec::algebra
