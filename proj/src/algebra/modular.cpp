#include "idspec/algebra/modular.hpp"

namespace idspec::algebra {

std::uint64_t Fp61::pow(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e != 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t Fp61::from(const BigInt& v) {
  static const BigInt prime(std::to_string(kPrime));
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), prime.get_mpz_t());
  return std::stoull(r.get_str());
}

std::uint64_t Fp61::from(const BigRational& v) {
  std::uint64_t d = from(BigInt(v.get_den()));
  if (d == 0) throw EvalDenominatorZero("coefficient denominator divisible by the modulus");
  return mul(from(BigInt(v.get_num())), inv(d));
}

std::uint64_t evaluate_mod(const Polynomial& p, const ModPoint& point) {
  std::unordered_map<VarId, std::vector<std::uint64_t>> powers;
  std::uint64_t acc = 0;
  for (const auto& t : p.terms()) {
    std::uint64_t term = Fp61::from(t.coeff);
    for (const auto& vp : t.mono.powers()) {
      auto it = point.find(vp.var);
      if (it == point.end()) throw std::invalid_argument("evaluate_mod: missing value for " + variable_name(vp.var));
      auto& cache = powers[vp.var];
      if (cache.empty()) cache.push_back(1);
      while (cache.size() <= vp.exp) cache.push_back(Fp61::mul(cache.back(), it->second));
      term = Fp61::mul(term, cache[vp.exp]);
    }
    acc = Fp61::add(acc, term);
  }
  return acc;
}

std::uint64_t evaluate_mod(const RationalFunction& f, const ModPoint& point) {
  std::uint64_t d = evaluate_mod(f.den(), point);
  if (d == 0) throw EvalDenominatorZero("denominator vanishes modulo the prime");
  return Fp61::mul(evaluate_mod(f.num(), point), Fp61::inv(d));
}

std::size_t rank_mod(std::vector<std::vector<std::uint64_t>> rows,
                     std::vector<std::pair<std::size_t, std::size_t>>* pivots) {
  // Rows are processed in order; a row joins the basis when it is independent
  // of the earlier accepted rows, which yields the smallest-row-index minor.
  std::vector<std::vector<std::uint64_t>> basis;
  std::vector<std::size_t> basis_col;
  std::size_t rank = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto row = rows[r];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      std::size_t c = basis_col[b];
      if (row[c] == 0) continue;
      std::uint64_t f = row[c];
      for (std::size_t k = 0; k < row.size(); ++k) row[k] = Fp61::sub(row[k], Fp61::mul(f, basis[b][k]));
    }
    std::size_t c = 0;
    while (c < row.size() && row[c] == 0) ++c;
    if (c == row.size()) continue;
    std::uint64_t inv = Fp61::inv(row[c]);
    for (auto& x : row) x = Fp61::mul(x, inv);
    // keep the basis fully reduced in column c
    for (auto& brow : basis) {
      if (brow[c] == 0) continue;
      std::uint64_t f = brow[c];
      for (std::size_t k = 0; k < row.size(); ++k) brow[k] = Fp61::sub(brow[k], Fp61::mul(f, row[k]));
    }
    basis.push_back(std::move(row));
    basis_col.push_back(c);
    if (pivots) pivots->emplace_back(r, c);
    ++rank;
  }
  return rank;
}

}  // namespace idspec::algebra
