#pragma once

#include <cstdint>
#include <unordered_map>

#include "idspec/algebra/rational_function.hpp"

namespace idspec::algebra {

/// Arithmetic modulo the Mersenne prime 2^61 - 1. Used only for rank probes.
struct Fp61 {
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kPrime ? s - kPrime : s;
  }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    return add(lo, hi);
  }
  static std::uint64_t pow(std::uint64_t a, std::uint64_t e);
  /// pre: a != 0
  static std::uint64_t inv(std::uint64_t a) { return pow(a, kPrime - 2); }
  static std::uint64_t from(const BigInt& v);
  /// Throws EvalDenominatorZero when the denominator is divisible by the prime.
  static std::uint64_t from(const BigRational& v);
};

using ModPoint = std::unordered_map<VarId, std::uint64_t>;

std::uint64_t evaluate_mod(const Polynomial& p, const ModPoint& point);
/// Throws EvalDenominatorZero when the denominator vanishes modulo the prime.
std::uint64_t evaluate_mod(const RationalFunction& f, const ModPoint& point);

/// Rank of a dense matrix over F_p by Gaussian elimination. When `pivots` is
/// given it receives (row, column) pairs of a nonsingular maximal minor,
/// preferring the smallest row indices.
std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> rows,
                     std::vector<std::pair<std::size_t, std::size_t>>* pivots = nullptr);

}  // namespace idspec::algebra
