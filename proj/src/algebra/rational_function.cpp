#include "idspec/algebra/rational_function.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "idspec/algebra/gcd.hpp"

namespace idspec::algebra {
RationalFunction RationalFunction::make(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw ZeroDenominator("rational function with zero denominator");
  if (num.is_zero()) return {};
  if (den.is_constant()) return RationalFunction(num.scaled(1 / den.constant_value()));
  Polynomial g = gcd(num, den);
  if (!g.is_one()) {
    num = *divide_exact(num, g);
    den = *divide_exact(den, g);
  }
  auto [c, pp] = content_and_primitive(den);
  if (pp.is_one()) return RationalFunction(num.scaled(1 / c));
  return RationalFunction(num.scaled(1 / c), std::move(pp), 0);
}

std::vector<VarId> RationalFunction::variables() const {
  auto a = num_.variables();
  auto b = den_.variables();
  std::vector<VarId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

RationalFunction RationalFunction::operator-() const { return RationalFunction(-num_, den_, 0); }

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.is_polynomial()) return RationalFunction(a.num_ + b.num_);
    return RationalFunction::make(a.num_ + b.num_, a.den_);
  }
  if (a.is_polynomial()) return RationalFunction(a.num_ * b.den_ + b.num_, b.den_, 0);
  if (b.is_polynomial()) return RationalFunction(a.num_ + b.num_ * a.den_, a.den_, 0);
  Polynomial g = gcd(a.den_, b.den_);
  if (g.is_one()) {
    return RationalFunction::make(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  Polynomial ad = *divide_exact(a.den_, g);
  Polynomial bd = *divide_exact(b.den_, g);
  return RationalFunction::make(a.num_ * bd + b.num_ * ad, ad * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
  // cross-cancel before multiplying
  Polynomial an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  if (!bd.is_one()) {
    Polynomial g = gcd(an, bd);
    if (!g.is_one()) {
      an = *divide_exact(an, g);
      bd = *divide_exact(bd, g);
    }
  }
  if (!ad.is_one()) {
    Polynomial g = gcd(bn, ad);
    if (!g.is_one()) {
      bn = *divide_exact(bn, g);
      ad = *divide_exact(ad, g);
    }
  }
  Polynomial num = an * bn;
  Polynomial den = ad * bd;
  auto [c, pp] = content_and_primitive(den);
  if (pp.is_one()) return RationalFunction(num.scaled(1 / c));
  return RationalFunction(num.scaled(1 / c), std::move(pp), 0);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.inverse(); }

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw ZeroDenominator("inverse of zero");
  auto [c, pp] = content_and_primitive(num_);
  if (pp.is_one()) return RationalFunction(den_.scaled(1 / c));
  return RationalFunction(den_.scaled(1 / c), std::move(pp), 0);
}

RationalFunction RationalFunction::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  return RationalFunction(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)), 0);
}

RationalFunction RationalFunction::derivative(VarId v) const {
  if (is_polynomial()) return RationalFunction(num_.derivative(v));
  Polynomial dn = num_.derivative(v);
  Polynomial dd = den_.derivative(v);
  if (dd.is_zero()) return make(dn, den_);
  return make(dn * den_ - num_ * dd, den_ * den_);
}

RationalFunction substitute(const Polynomial& p, const std::unordered_map<VarId, RationalFunction>& values) {
  bool all_poly = true;
  for (const auto& [v, val] : values) {
    if (p.depends_on(v) && !val.is_polynomial()) {
      all_poly = false;
      break;
    }
  }
  if (all_poly) {
    std::unordered_map<VarId, Polynomial> pv;
    for (const auto& [v, val] : values)
      if (p.depends_on(v)) pv.emplace(v, val.num());
    return RationalFunction(p.substitute(pv));
  }
  // Common denominator: p(x) = sum c m(num/den); scale by prod den^deg.
  std::map<VarId, unsigned> degs;
  for (const auto& [v, val] : values)
    if (p.depends_on(v)) degs[v] = p.degree(v);
  std::unordered_map<VarId, std::vector<Polynomial>> num_pows;
  std::unordered_map<VarId, std::vector<Polynomial>> den_pows;
  for (const auto& [v, d] : degs) {
    const auto& val = values.at(v);
    auto& np = num_pows[v];
    auto& dp = den_pows[v];
    np.push_back(Polynomial(1));
    dp.push_back(Polynomial(1));
    for (unsigned k = 1; k <= d; ++k) {
      np.push_back(np.back() * val.num());
      dp.push_back(dp.back() * val.den());
    }
  }
  Polynomial total;
  for (const auto& t : p.terms()) {
    Polynomial term = Polynomial::monomial(t.mono.filtered([&](VarId v) { return !degs.count(v); }), t.coeff);
    for (const auto& [v, d] : degs) {
      unsigned e = t.mono.degree(v);
      term *= num_pows[v][e];
      if (e < d) term *= den_pows[v][d - e];
    }
    total += term;
  }
  Polynomial den(1);
  for (const auto& [v, d] : degs) den *= den_pows[v][d];
  return RationalFunction::make(std::move(total), std::move(den));
}

RationalFunction RationalFunction::substitute(const std::unordered_map<VarId, RationalFunction>& values) const {
  RationalFunction n = algebra::substitute(num_, values);
  if (is_polynomial()) return n;
  return n / algebra::substitute(den_, values);
}

RationalFunction RationalFunction::rename(const std::unordered_map<VarId, VarId>& mapping) const {
  return make(num_.rename(mapping), den_.rename(mapping));
}

BigRational evaluate(const RationalFunction& f, const std::unordered_map<VarId, BigRational>& point) {
  BigRational d = evaluate(f.den(), point);
  if (d == 0) throw EvalDenominatorZero("denominator vanishes at evaluation point");
  return evaluate(f.num(), point) / d;
}

}  // namespace idspec::algebra
