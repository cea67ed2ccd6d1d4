#include "idspec/algebra/gcd.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <tuple>

#include "idspec/algebra/deadline.hpp"

namespace idspec::algebra {
namespace {

std::atomic<std::size_t> g_heuristic_hits{0};
std::atomic<std::size_t> g_prs_fallbacks{0};

constexpr int kHeuristicAttempts = 6;

Monomial monomial_content(const Polynomial& p) {
  Monomial m = p.terms().front().mono;
  for (const auto& t : p.terms()) {
    m = Monomial::gcd(m, t.mono);
    if (m.is_one()) break;
  }
  return m;
}

Polynomial divide_by_monomial(const Polynomial& p, const Monomial& m) {
  if (m.is_one()) return p;
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) out.push_back({t.mono / m, t.coeff});
  return Polynomial::from_terms(std::move(out));
}

BigInt max_norm(const Polynomial& p) {
  BigInt m = 0;
  for (const auto& t : p.terms()) {
    BigInt a = abs(t.coeff.get_num());
    if (a > m) m = a;
  }
  return m;
}

std::vector<VarId> union_vars(const Polynomial& a, const Polynomial& b) {
  auto va = a.variables();
  auto vb = b.variables();
  std::vector<VarId> out;
  std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(out));
  return out;
}

// Evaluates integer polynomial p at v = xi.
Polynomial eval_at(const Polynomial& p, VarId v, const BigInt& xi) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const auto& t : p.terms()) {
    std::uint32_t e = t.mono.degree(v);
    if (e == 0) {
      out.push_back(t);
      continue;
    }
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), xi.get_mpz_t(), e);
    out.push_back({t.mono / Monomial::variable(v, e), BigRational(t.coeff * pw)});
  }
  return Polynomial::from_terms(std::move(out));
}

// Symmetric remainder of an integer into (-xi/2, xi/2].
BigInt sym_mod(const BigInt& c, const BigInt& xi) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), xi.get_mpz_t());
  if (2 * r > xi) r -= xi;
  return r;
}

// Rebuilds a polynomial in v from its image at v = xi by xi-adic expansion of
// every integer coefficient.
Polynomial interpolate(Polynomial h, VarId v, const BigInt& xi) {
  std::vector<Term> out;
  std::uint32_t power = 0;
  while (!h.is_zero()) {
    std::vector<Term> digit;
    std::vector<Term> rest;
    for (const auto& t : h.terms()) {
      BigInt c = t.coeff.get_num();
      BigInt d = sym_mod(c, xi);
      if (d != 0) digit.push_back({t.mono, BigRational(d)});
      BigInt q = (c - d) / xi;
      if (q != 0) rest.push_back({t.mono, BigRational(q)});
    }
    for (auto& t : digit) out.push_back({t.mono * Monomial::variable(v, power), t.coeff});
    h = Polynomial::from_terms(std::move(rest));
    ++power;
  }
  Polynomial p = Polynomial::from_terms(std::move(out));
  if (!p.is_zero() && sgn(p.leading_coefficient()) < 0) p = -p;
  return p;
}

struct HeuResult {
  Polynomial h, cff, cfg;
};

BigInt integer_content(const Polynomial& p) {
  BigInt c = 0;
  for (const auto& t : p.terms()) {
    mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), t.coeff.get_num_mpz_t());
    if (c == 1) break;
  }
  return c;
}

// Heuristic gcd on integer polynomials (Char, Geddes and Gonnet). The
// returned h carries the common integer content so that h * cff = f exactly,
// which the outer interpolation relies on.
std::optional<HeuResult> heu_gcd(Polynomial f, Polynomial g) {
  auto vars = union_vars(f, g);
  if (vars.empty()) {
    BigInt a = f.constant_value().get_num();
    BigInt b = g.constant_value().get_num();
    BigInt h;
    mpz_gcd(h.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return HeuResult{Polynomial(h), Polynomial(BigInt(a / h)), Polynomial(BigInt(b / h))};
  }
  BigInt common;
  {
    BigInt cf = integer_content(f);
    BigInt cg = integer_content(g);
    mpz_gcd(common.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
    if (common != 1) {
      f = f.scaled(BigRational(1) / common);
      g = g.scaled(BigRational(1) / common);
    }
  }
  const VarId v = vars.back();
  BigInt fn = max_norm(f);
  BigInt gn = max_norm(g);
  BigInt b = 2 * std::min(fn, gn) + 29;
  BigInt sq = sqrt(b);
  BigInt xi = std::min(b, BigInt(99 * sq));
  BigInt lf = abs(f.leading_coefficient().get_num());
  BigInt lg = abs(g.leading_coefficient().get_num());
  BigInt alt = 2 * std::min(BigInt(fn / lf), BigInt(gn / lg)) + 2;
  if (alt > xi) xi = alt;

  auto done = [&](Polynomial h, Polynomial cff, Polynomial cfg) {
    return HeuResult{h.scaled(BigRational(common)), std::move(cff), std::move(cfg)};
  };
  for (int attempt = 0; attempt < kHeuristicAttempts; ++attempt) {
    Polynomial ff = eval_at(f, v, xi);
    Polynomial gg = eval_at(g, v, xi);
    if (!ff.is_zero() && !gg.is_zero()) {
      auto inner = heu_gcd(ff, gg);
      if (!inner) return std::nullopt;
      Polynomial h = interpolate(inner->h, v, xi);
      if (!h.is_zero()) {
        BigInt hc = integer_content(h);
        if (hc != 1) h = h.scaled(BigRational(1) / hc);
        if (auto cf = divide_exact(f, h)) {
          if (auto cg = divide_exact(g, h)) return done(h, *cf, *cg);
        }
      }
      Polynomial cff = interpolate(inner->cff, v, xi);
      if (!cff.is_zero()) {
        if (auto hh = divide_exact(f, cff)) {
          if (auto cg = divide_exact(g, *hh)) return done(*hh, cff, *cg);
        }
      }
      Polynomial cfg = interpolate(inner->cfg, v, xi);
      if (!cfg.is_zero()) {
        if (auto hh = divide_exact(g, cfg)) {
          if (auto cf = divide_exact(f, *hh)) return done(*hh, *cf, cfg);
        }
      }
    }
    BigInt s = sqrt(sqrt(xi));
    xi = 73794 * xi * s / 27011;
  }
  return std::nullopt;
}

Polynomial leading_coeff_in(const Polynomial& p, VarId v) {
  auto coeffs = p.coefficients_in(v);
  return coeffs.rbegin()->second;
}

// Pseudo-remainder of a by b in v, without the final lc power (irrelevant for
// gcd since results are made primitive).
Polynomial prem(Polynomial a, const Polynomial& b, VarId v) {
  const std::uint32_t db = b.degree(v);
  const Polynomial lb = leading_coeff_in(b, v);
  while (!a.is_zero() && a.degree(v) >= db) {
    check_deadline("polynomial gcd");
    const std::uint32_t da = a.degree(v);
    Polynomial la = leading_coeff_in(a, v);
    a = lb * a - la * b.mul_monomial(Monomial::variable(v, da - db), 1);
  }
  return a;
}

Polynomial primitive_in(const Polynomial& p, VarId v) {
  Polynomial c = content_in(p, v);
  auto q = divide_exact(p, c);
  return primitive_part(*q);
}

Polynomial prs_gcd(const Polynomial& f, const Polynomial& g) {
  auto vars = union_vars(f, g);
  if (vars.empty()) return Polynomial(1);
  const VarId v = vars.front();
  Polynomial cf = content_in(f, v);
  Polynomial cg = content_in(g, v);
  Polynomial c = gcd(cf, cg);
  Polynomial a = primitive_part(*divide_exact(f, cf));
  Polynomial b = primitive_part(*divide_exact(g, cg));
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  if (b.degree(v) == 0) return c;
  for (;;) {
    check_deadline("polynomial gcd");
    Polynomial r = prem(a, b, v);
    if (r.is_zero()) break;
    if (r.degree(v) == 0) {
      b = Polynomial(1);
      break;
    }
    a = std::move(b);
    b = primitive_in(r, v);
  }
  return primitive_part(c * primitive_in(b, v));
}

Polynomial gcd_primitive_nonconstant(Polynomial a, Polynomial b) {
  // strip monomial contents
  Monomial ma = monomial_content(a);
  Monomial mb = monomial_content(b);
  Monomial mg = Monomial::gcd(ma, mb);
  a = divide_by_monomial(a, ma);
  b = divide_by_monomial(b, mb);
  Polynomial factor = Polynomial::monomial(mg, 1);
  if (a.is_constant() || b.is_constant()) return factor;

  // a variable present in only one argument must vanish from the gcd
  auto va = a.variables();
  auto vb = b.variables();
  std::vector<VarId> only_a;
  std::vector<VarId> only_b;
  std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(only_a));
  std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(only_b));
  if (!only_a.empty() || !only_b.empty()) {
    Polynomial acc = only_a.empty() ? a : b;
    const Polynomial& split = only_a.empty() ? b : a;
    const auto& split_vars = only_a.empty() ? only_b : only_a;
    auto pieces = split.collect(split_vars);
    std::sort(pieces.begin(), pieces.end(),
              [](const auto& x, const auto& y) { return x.second.size() < y.second.size(); });
    for (const auto& [mono, coeff] : pieces) {
      acc = gcd(acc, coeff);
      if (acc.is_constant()) break;
    }
    return primitive_part(factor * acc);
  }
  if (a == b) return primitive_part(factor * a);

  if (auto r = heu_gcd(a, b)) {
    ++g_heuristic_hits;
    return primitive_part(factor * r->h);
  }
  ++g_prs_fallbacks;
  return primitive_part(factor * prs_gcd(a, b));
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return primitive_part(b);
  if (b.is_zero()) return primitive_part(a);
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  return gcd_primitive_nonconstant(primitive_part(a), primitive_part(b));
}

Polynomial gcd(std::span<const Polynomial> polys) {
  Polynomial acc;
  for (const auto& p : polys) {
    acc = gcd(acc, p);
    if (acc.is_one()) break;
  }
  return acc;
}

Polynomial lcm(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Polynomial g = gcd(a, b);
  return primitive_part(*divide_exact(primitive_part(a), g) * primitive_part(b));
}

Polynomial content_in(const Polynomial& p, VarId v) {
  if (p.is_zero()) return {};
  auto coeffs = p.coefficients_in(v);
  std::vector<Polynomial> cs;
  for (auto& [e, c] : coeffs) cs.push_back(c);
  std::sort(cs.begin(), cs.end(), [](const Polynomial& x, const Polynomial& y) { return x.size() < y.size(); });
  return gcd(cs);
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_constant()) return Polynomial(1);
  const VarId v = p.variables().front();
  Polynomial c = content_in(p, v);
  Polynomial pp = primitive_part(*divide_exact(p, c));
  Polynomial g = gcd(pp, pp.derivative(v));
  Polynomial s = *divide_exact(pp, g);
  return primitive_part(s * squarefree_part(c));
}

GcdStats gcd_stats() { return {g_heuristic_hits.load(), g_prs_fallbacks.load()}; }

}  // namespace idspec::algebra
