#include "idspec/algebra/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

#include "idspec/algebra/deadline.hpp"

namespace idspec::algebra {
namespace {

bool term_desc(const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; }

// Merges two sorted term lists computing a + sign*b.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    int c = compare(i->mono, j->mono);
    if (c > 0) {
      out.push_back(*i++);
    } else if (c < 0) {
      out.push_back(subtract ? Term{j->mono, -j->coeff} : *j);
      ++j;
    } else {
      BigRational s = subtract ? BigRational(i->coeff - j->coeff) : BigRational(i->coeff + j->coeff);
      if (sgn(s) != 0) out.push_back({i->mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i != a.end(); ++i) out.push_back(*i);
  for (; j != b.end(); ++j) out.push_back(subtract ? Term{j->mono, -j->coeff} : *j);
  return out;
}

}  // namespace

Polynomial::Polynomial(const BigRational& c) {
  if (sgn(c) != 0) terms_.push_back({Monomial(), c});
}

Polynomial Polynomial::variable(VarId v) { return monomial(Monomial::variable(v), 1); }

Polynomial Polynomial::monomial(Monomial m, BigRational c) {
  Polynomial p;
  if (sgn(c) != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_desc);
  Polynomial p;
  p.terms_.reserve(terms.size());
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_one() const {
  return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1;
}

BigRational Polynomial::constant_value() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw std::logic_error("constant_value of non-constant polynomial");
  return terms_[0].coeff;
}

std::vector<VarId> Polynomial::variables() const {
  std::vector<VarId> vars;
  for (const auto& t : terms_)
    for (const auto& p : t.mono.powers()) vars.push_back(p.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

bool Polynomial::depends_on(VarId v) const {
  for (const auto& t : terms_)
    if (t.mono.depends_on(v)) return true;
  return false;
}

bool Polynomial::depends_on_any(std::span<const VarId> vars) const {
  for (const auto& t : terms_)
    for (const auto& p : t.mono.powers())
      if (std::find(vars.begin(), vars.end(), p.var) != vars.end()) return true;
  return false;
}

std::uint32_t Polynomial::degree(VarId v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
  return d;
}

std::uint32_t Polynomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
  return d;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  if (terms_.empty()) return *this = other;
  terms_ = merge(terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.terms_.empty()) return *this;
  terms_ = merge(terms_, other.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) { return *this = *this * other; }

Polynomial& Polynomial::operator*=(const BigRational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
  } else if (c != 1) {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Polynomial Polynomial::mul_monomial(const Monomial& m, const BigRational& c) const {
  Polynomial out;
  if (sgn(c) == 0) return out;
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_) out.terms_.push_back({t.mono * m, t.coeff * c});
  return out;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.size() == 1) return b.mul_monomial(a.terms_[0].mono, a.terms_[0].coeff);
  if (b.size() == 1) return a.mul_monomial(b.terms_[0].mono, b.terms_[0].coeff);
  std::vector<Term> prod;
  prod.reserve(a.size() * b.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) prod.push_back({s.mono * t.mono, s.coeff * t.coeff});
  return Polynomial::from_terms(std::move(prod));
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1);
  Polynomial base(*this);
  while (e != 0) {
    if (e & 1U) result *= base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::derivative(VarId v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    std::uint32_t e = t.mono.degree(v);
    if (e == 0) continue;
    out.push_back({t.mono / Monomial::variable(v), t.coeff * e});
  }
  // dividing every monomial by the same variable keeps lex order except for
  // collisions, which cannot occur; still normalize for safety.
  return from_terms(std::move(out));
}

std::map<std::uint32_t, Polynomial> Polynomial::coefficients_in(VarId v) const {
  std::map<std::uint32_t, std::vector<Term>> groups;
  for (const auto& t : terms_) {
    std::uint32_t e = t.mono.degree(v);
    groups[e].push_back({e == 0 ? t.mono : t.mono / Monomial::variable(v, e), t.coeff});
  }
  std::map<std::uint32_t, Polynomial> out;
  for (auto& [e, ts] : groups) out.emplace(e, from_terms(std::move(ts)));
  return out;
}

std::vector<std::pair<Monomial, Polynomial>> Polynomial::collect(std::span<const VarId> vars) const {
  auto in_set = [&](VarId v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); };
  std::vector<std::pair<Monomial, std::vector<Term>>> groups;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  for (const auto& t : terms_) {
    Monomial key = t.mono.filtered(in_set);
    Monomial rest = t.mono.filtered([&](VarId v) { return !in_set(v); });
    auto [it, inserted] = index.emplace(key, groups.size());
    if (inserted) groups.push_back({key, {}});
    groups[it->second].second.push_back({std::move(rest), t.coeff});
  }
  std::vector<std::pair<Monomial, Polynomial>> out;
  out.reserve(groups.size());
  for (auto& [k, ts] : groups) out.emplace_back(k, from_terms(std::move(ts)));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return compare(a.first, b.first) > 0; });
  return out;
}

Polynomial Polynomial::substitute(VarId v, const Polynomial& value) const {
  if (!depends_on(v)) return *this;
  auto coeffs = coefficients_in(v);
  // Horner in v, highest degree first.
  Polynomial result;
  std::uint32_t prev = coeffs.rbegin()->first;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    result *= value.pow(prev - it->first);
    result += it->second;
    prev = it->first;
  }
  if (prev != 0) result *= value.pow(prev);
  return result;
}

Polynomial Polynomial::substitute(const std::unordered_map<VarId, Polynomial>& values) const {
  std::unordered_map<VarId, std::vector<Polynomial>> powers;
  auto power_of = [&](VarId v, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Polynomial(1));
    while (cache.size() <= e) cache.push_back(cache.back() * values.at(v));
    return cache[e];
  };
  Polynomial result;
  std::vector<Term> untouched;
  for (const auto& t : terms_) {
    Polynomial piece = Polynomial::monomial(
        t.mono.filtered([&](VarId v) { return !values.count(v); }), t.coeff);
    bool substituted = false;
    for (const auto& p : t.mono.powers()) {
      if (!values.count(p.var)) continue;
      piece *= power_of(p.var, p.exp);
      substituted = true;
    }
    if (substituted) {
      result += piece;
    } else {
      untouched.push_back(t);
    }
  }
  result += from_terms(std::move(untouched));
  return result;
}

Polynomial Polynomial::rename(const std::unordered_map<VarId, VarId>& mapping) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    std::vector<VarPower> powers;
    for (const auto& p : t.mono.powers()) {
      auto it = mapping.find(p.var);
      powers.push_back({it == mapping.end() ? p.var : it->second, p.exp});
    }
    out.push_back({Monomial::from_powers(std::move(powers)), t.coeff});
  }
  return from_terms(std::move(out));
}

std::size_t Polynomial::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h = h * 31 + t.mono.hash();
    h ^= std::hash<std::string>{}(t.coeff.get_str()) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

BigRational rational_content(const Polynomial& p) {
  if (p.is_zero()) return 0;
  BigInt num = 0;
  BigInt den = 1;
  for (const auto& t : p.terms()) {
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  BigRational c(num, den);
  c.canonicalize();
  return c;
}

std::pair<BigRational, Polynomial> content_and_primitive(const Polynomial& p) {
  if (p.is_zero()) return {0, p};
  BigRational c = rational_content(p);
  if (sgn(p.leading_coefficient()) < 0) c = -c;
  if (c == 1) return {c, p};
  BigRational inv = 1 / c;
  return {c, p.scaled(inv)};
}

Polynomial primitive_part(const Polynomial& p) { return content_and_primitive(p).second; }

std::optional<Polynomial> divide_exact(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return Polynomial();
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  const Term& lb = b.leading_term();
  // cheap rejection on per-variable degrees
  for (const auto& p : lb.mono.powers())
    if (a.degree(p.var) < p.exp) return std::nullopt;
  for (VarId v : b.variables())
    if (a.degree(v) < b.degree(v)) return std::nullopt;

  std::vector<Term> quotient;
  Polynomial rem = a;
  BigRational inv_lc = 1 / lb.coeff;
  while (!rem.is_zero()) {
    check_deadline("exact division");
    const Term& lr = rem.leading_term();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lr.mono / lb.mono;
    BigRational c = lr.coeff * inv_lc;
    rem -= b.mul_monomial(m, c);
    quotient.push_back({std::move(m), std::move(c)});
  }
  // quotient terms were produced in strictly decreasing order
  Polynomial q;
  q = Polynomial::from_terms(std::move(quotient));
  return q;
}

BigRational evaluate(const Polynomial& p, const std::unordered_map<VarId, BigRational>& point) {
  BigRational acc = 0;
  for (const auto& t : p.terms()) {
    BigRational v = t.coeff;
    for (const auto& pw : t.mono.powers()) {
      auto it = point.find(pw.var);
      if (it == point.end()) throw std::invalid_argument("evaluation point misses variable " + variable_name(pw.var));
      BigRational x;
      mpz_pow_ui(x.get_num_mpz_t(), it->second.get_num_mpz_t(), pw.exp);
      mpz_pow_ui(x.get_den_mpz_t(), it->second.get_den_mpz_t(), pw.exp);
      v *= x;
    }
    acc += v;
  }
  return acc;
}

}  // namespace idspec::algebra
