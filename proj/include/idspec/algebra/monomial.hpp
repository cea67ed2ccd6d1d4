#pragma once

#include <boost/container/small_vector.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "idspec/algebra/variables.hpp"

namespace idspec::algebra {

struct VarPower {
  VarId var;
  std::uint32_t exp;
  friend bool operator==(const VarPower&, const VarPower&) = default;
};

/// Sparse power product. Powers are sorted by variable id and never carry a
/// zero exponent.
class Monomial {
 public:
  using Storage = boost::container::small_vector<VarPower, 4>;

  Monomial() = default;
  static Monomial variable(VarId v, std::uint32_t exp = 1);
  static Monomial from_powers(std::vector<VarPower> powers);

  std::span<const VarPower> powers() const { return {powers_.data(), powers_.size()}; }
  bool is_one() const { return powers_.empty(); }
  std::uint32_t degree(VarId v) const;
  std::uint32_t total_degree() const;
  bool depends_on(VarId v) const { return degree(v) != 0; }

  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  /// Exact quotient; `divisor` must divide *this.
  Monomial operator/(const Monomial& divisor) const;

  template <class Pred>
  Monomial filtered(Pred keep) const {
    Monomial out;
    for (const auto& p : powers_)
      if (keep(p.var)) out.powers_.push_back(p);
    return out;
  }

  static Monomial lcm(const Monomial& a, const Monomial& b);
  static Monomial gcd(const Monomial& a, const Monomial& b);

  std::size_t hash() const;

  /// Canonical order: lexicographic, lower variable id more significant.
  friend int compare(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.powers_ == b.powers_; }
  friend bool operator<(const Monomial& a, const Monomial& b) { return compare(a, b) < 0; }

 private:
  Storage powers_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace idspec::algebra
