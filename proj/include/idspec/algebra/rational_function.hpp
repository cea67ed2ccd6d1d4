#pragma once

#include <unordered_map>

#include "idspec/algebra/polynomial.hpp"
#include "idspec/errors.hpp"

namespace idspec::algebra {

IDSPEC_ERROR_TYPE(ZeroDenominator);
IDSPEC_ERROR_TYPE(EvalDenominatorZero);

/// num/den over Q, fully reduced. The denominator is a primitive integer
/// polynomial with positive leading coefficient (1 for polynomials), so two
/// equal rational functions are structurally equal.
class RationalFunction {
 public:
  RationalFunction() : den_(1) {}
  RationalFunction(long c) : num_(c), den_(1) {}  // NOLINT(implicit)
  RationalFunction(const BigRational& c) : num_(c), den_(1) {}  // NOLINT
  RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT

  /// Throws ZeroDenominator when den is zero.
  static RationalFunction make(Polynomial num, Polynomial den);
  static RationalFunction variable(VarId v) { return RationalFunction(Polynomial::variable(v)); }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_one(); }
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }
  BigRational constant_value() const { return num_.constant_value(); }

  std::vector<VarId> variables() const;
  bool depends_on(VarId v) const { return num_.depends_on(v) || den_.depends_on(v); }
  bool depends_on_any(std::span<const VarId> vars) const {
    return num_.depends_on_any(vars) || den_.depends_on_any(vars);
  }

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  /// Throws ZeroDenominator when b is zero.
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }

  RationalFunction inverse() const;
  RationalFunction pow(int e) const;
  RationalFunction derivative(VarId v) const;
  RationalFunction substitute(const std::unordered_map<VarId, RationalFunction>& values) const;
  RationalFunction rename(const std::unordered_map<VarId, VarId>& mapping) const;

  std::size_t hash() const { return num_.hash() * 31 + den_.hash(); }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  RationalFunction(Polynomial num, Polynomial den, int /*raw*/) : num_(std::move(num)), den_(std::move(den)) {}
  Polynomial num_;
  Polynomial den_;
};

/// Exact value at a point covering every variable of f.
/// Throws EvalDenominatorZero when the denominator vanishes there.
BigRational evaluate(const RationalFunction& f, const std::unordered_map<VarId, BigRational>& point);

/// Substitutes rational-function values into a polynomial.
RationalFunction substitute(const Polynomial& p, const std::unordered_map<VarId, RationalFunction>& values);

}  // namespace idspec::algebra
