// Internal Buchberger kernel: dense exponent vectors over the ordered ring
// variables, fraction-free coefficients in a gcd domain.
#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "idspec/algebra/gcd.hpp"
#include "idspec/groebner/groebner.hpp"

namespace idspec::groebner::detail {

using algebra::BigInt;
using algebra::BigRational;

struct IMono {
  boost::container::small_vector<std::uint16_t, 24> e;
  boost::container::small_vector<std::uint32_t, 4> bdeg;
  std::uint32_t deg = 0;
  std::uint64_t mask = 0;
};

class OrderCtx {
 public:
  explicit OrderCtx(const MonomialOrder& order) {
    std::size_t pos = 0;
    for (const auto& b : order.block_list()) {
      blocks_.emplace_back(pos, pos + b.size());
      for (VarId v : b) {
        if (!index_.emplace(v, pos).second) throw std::invalid_argument("variable listed twice in monomial order");
        vars_.push_back(v);
        ++pos;
      }
    }
  }

  std::size_t size() const { return vars_.size(); }
  const std::vector<VarId>& vars() const { return vars_; }
  std::optional<std::size_t> position(VarId v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void finish(IMono& m) const {
    m.bdeg.assign(blocks_.size(), 0);
    m.deg = 0;
    m.mask = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      for (std::size_t i = blocks_[b].first; i < blocks_[b].second; ++i) {
        m.bdeg[b] += m.e[i];
        if (m.e[i]) m.mask |= std::uint64_t{1} << (i & 63);
      }
      m.deg += m.bdeg[b];
    }
  }

  IMono one() const {
    IMono m;
    m.e.assign(size(), 0);
    finish(m);
    return m;
  }

  /// +1 if a > b, -1 if a < b, 0 if equal.
  int compare(const IMono& a, const IMono& b) const {
    for (std::size_t k = 0; k < blocks_.size(); ++k) {
      if (a.bdeg[k] != b.bdeg[k]) return a.bdeg[k] > b.bdeg[k] ? 1 : -1;
      for (std::size_t i = blocks_[k].second; i-- > blocks_[k].first;) {
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? 1 : -1;
      }
    }
    return 0;
  }

  IMono mul(const IMono& a, const IMono& b) const {
    IMono m;
    m.e.resize(size());
    for (std::size_t i = 0; i < size(); ++i) {
      std::uint32_t s = std::uint32_t{a.e[i]} + b.e[i];
      if (s > 0xFFFF) throw std::overflow_error("exponent overflow in Groebner kernel");
      m.e[i] = static_cast<std::uint16_t>(s);
    }
    m.bdeg.resize(a.bdeg.size());
    for (std::size_t k = 0; k < a.bdeg.size(); ++k) m.bdeg[k] = a.bdeg[k] + b.bdeg[k];
    m.deg = a.deg + b.deg;
    m.mask = a.mask | b.mask;
    return m;
  }

  // pre: b divides a
  IMono div(const IMono& a, const IMono& b) const {
    IMono m;
    m.e.resize(size());
    for (std::size_t i = 0; i < size(); ++i) m.e[i] = static_cast<std::uint16_t>(a.e[i] - b.e[i]);
    finish(m);
    return m;
  }

  IMono lcm(const IMono& a, const IMono& b) const {
    IMono m;
    m.e.resize(size());
    for (std::size_t i = 0; i < size(); ++i) m.e[i] = std::max(a.e[i], b.e[i]);
    finish(m);
    return m;
  }

  bool divides(const IMono& a, const IMono& b) const {
    if (a.mask & ~b.mask) return false;
    if (a.deg > b.deg) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (a.e[i] > b.e[i]) return false;
    return true;
  }

  bool coprime(const IMono& a, const IMono& b) const {
    if (size() <= 64) return (a.mask & b.mask) == 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (a.e[i] && b.e[i]) return false;
    return true;
  }

  bool equal(const IMono& a, const IMono& b) const { return a.e == b.e; }

  Monomial to_monomial(const IMono& m) const {
    std::vector<algebra::VarPower> ps;
    for (std::size_t i = 0; i < size(); ++i)
      if (m.e[i]) ps.push_back({vars_[i], m.e[i]});
    return Monomial::from_powers(std::move(ps));
  }

 private:
  std::vector<std::pair<std::size_t, std::size_t>> blocks_;
  std::vector<VarId> vars_;
  std::unordered_map<VarId, std::size_t> index_;
};

struct IntRing {
  using R = BigInt;
  static R one() { return 1; }
  static bool is_zero(const R& a) { return a == 0; }
  static bool is_one(const R& a) { return a == 1; }
  static R mul(const R& a, const R& b) { return a * b; }
  static R add(const R& a, const R& b) { return a + b; }
  static R neg(const R& a) { return -a; }
  static R gcd(const R& a, const R& b) {
    R g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
  }
  static R div(const R& a, const R& b) {
    R q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
  }
  static int sign(const R& a) { return sgn(a); }
  static Polynomial to_poly(const R& a) { return Polynomial(a); }
  static std::size_t weight(const R& a) { return mpz_size(a.get_mpz_t()); }
};

struct PolyRing {
  using R = Polynomial;
  static R one() { return Polynomial(1); }
  static bool is_zero(const R& a) { return a.is_zero(); }
  static bool is_one(const R& a) { return a.is_one(); }
  static R mul(const R& a, const R& b) { return a * b; }
  static R add(const R& a, const R& b) { return a + b; }
  static R neg(const R& a) { return -a; }
  static R gcd(const R& a, const R& b) {
    if (a.is_constant() || b.is_constant()) return Polynomial(int_gcd(a, b));
    return algebra::gcd(a, b).scaled(BigRational(int_gcd(a, b)));
  }
  static R div(const R& a, const R& b) {
    if (b.is_constant()) return a.scaled(1 / b.constant_value());
    auto q = algebra::divide_exact(a, b);
    if (!q) throw std::logic_error("inexact coefficient division in Groebner kernel");
    return *q;
  }
  static int sign(const R& a) { return sgn(a.leading_coefficient()); }
  static Polynomial to_poly(const R& a) { return a; }
  static std::size_t weight(const R& a) { return a.size(); }

 private:
  static BigInt int_gcd(const R& a, const R& b) {
    BigInt g = 0;
    for (const auto* p : {&a, &b})
      for (const auto& t : p->terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    return g == 0 ? BigInt(1) : g;
  }
};

template <class Ring>
struct IPoly {
  using R = typename Ring::R;
  std::vector<std::pair<IMono, R>> t;
  std::uint32_t sugar = 0;

  bool empty() const { return t.empty(); }
  const IMono& lm() const { return t.front().first; }
  const R& lc() const { return t.front().second; }
};

template <class Ring>
typename Ring::R content(const IPoly<Ring>& p) {
  typename Ring::R g;
  bool first = true;
  for (const auto& [m, c] : p.t) {
    if (first) {
      g = c;
      first = false;
    } else {
      g = Ring::gcd(g, c);
    }
    if (Ring::is_one(g)) break;
  }
  if (Ring::sign(g) < 0) g = Ring::neg(g);
  return g;
}

template <class Ring>
void divide_coeffs(IPoly<Ring>& p, const typename Ring::R& k) {
  for (auto& [m, c] : p.t) c = Ring::div(c, k);
}

/// Removes the content and makes the leading coefficient positive.
template <class Ring>
void make_primitive(IPoly<Ring>& p) {
  if (p.empty()) return;
  auto g = content(p);
  if (Ring::sign(p.lc()) < 0) g = Ring::neg(g);
  if (!Ring::is_one(g)) divide_coeffs(p, g);
}

/// Running multiplier: mult_num / mult_den * input == remainder (mod ideal).
template <class Ring>
struct Multiplier {
  typename Ring::R num = Ring::one();
  typename Ring::R den = Ring::one();
};

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

template <class Ring>
class Kernel {
 public:
  using R = typename Ring::R;
  using P = IPoly<Ring>;

  explicit Kernel(OrderCtx ctx) : ctx_(std::move(ctx)) {}

  const OrderCtx& ctx() const { return ctx_; }

  /// a*p - b*q*g, with the leading terms of p and q*g assumed to cancel when
  /// `skip_leads` is set.
  P combine(const P& p, std::size_t p_from, const R& a, const R& b, const IMono& q, const P& g,
            std::size_t g_from) const {
    P out;
    out.t.reserve(p.t.size() - p_from + g.t.size() - g_from);
    const bool a_one = Ring::is_one(a);
    std::size_t i = p_from, j = g_from;
    IMono qg;
    bool have_qg = false;
    while (i < p.t.size() || j < g.t.size()) {
      if (j < g.t.size() && !have_qg) {
        qg = ctx_.mul(q, g.t[j].first);
        have_qg = true;
      }
      int cmp;
      if (i >= p.t.size()) {
        cmp = -1;
      } else if (j >= g.t.size()) {
        cmp = 1;
      } else {
        cmp = ctx_.compare(p.t[i].first, qg);
      }
      if (cmp > 0) {
        out.t.emplace_back(p.t[i].first, a_one ? p.t[i].second : Ring::mul(a, p.t[i].second));
        ++i;
      } else if (cmp < 0) {
        out.t.emplace_back(std::move(qg), Ring::neg(Ring::mul(b, g.t[j].second)));
        have_qg = false;
        ++j;
      } else {
        R c = Ring::add(a_one ? p.t[i].second : Ring::mul(a, p.t[i].second), Ring::neg(Ring::mul(b, g.t[j].second)));
        if (!Ring::is_zero(c)) out.t.emplace_back(std::move(qg), std::move(c));
        have_qg = false;
        ++i;
        ++j;
      }
    }
    return out;
  }

  const P* find_reducer(const IMono& m, const std::vector<const P*>& reducers) const {
    const P* best = nullptr;
    for (const P* g : reducers) {
      if (ctx_.divides(g->lm(), m)) {
        if (!best || g->t.size() < best->t.size()) best = g;
      }
    }
    return best;
  }

  /// Full reduction of p by `reducers`. When `mult` is given it receives the
  /// exact scaling relation; otherwise contents are removed freely.
  P reduce(P p, const std::vector<const P*>& reducers, Multiplier<Ring>* mult, const Clock* clock = nullptr,
           double max_seconds = 0) const {
    P r;
    r.sugar = p.sugar;
    std::size_t head = 0;
    std::size_t steps = 0;
    std::size_t base_weight = weight(p);
    while (head < p.t.size()) {
      const P* g = find_reducer(p.t[head].first, reducers);
      if (!g) {
        r.t.push_back(std::move(p.t[head]));
        ++head;
        continue;
      }
      const R& c = p.t[head].second;
      const R& lg = g->lc();
      R d = Ring::gcd(c, lg);
      R a = Ring::div(lg, d);
      R b = Ring::div(c, d);
      if (Ring::sign(a) < 0) {
        a = Ring::neg(a);
        b = Ring::neg(b);
      }
      IMono q = ctx_.div(p.t[head].first, g->lm());
      std::uint32_t sugar = std::max(p.sugar, q.deg + g->sugar);
      P next = combine(p, head + 1, a, b, q, *g, 1);
      next.sugar = sugar;
      r.sugar = std::max(r.sugar, sugar);
      if (!Ring::is_one(a)) {
        for (auto& [m, cr] : r.t) cr = Ring::mul(a, cr);
        if (mult) mult->num = Ring::mul(mult->num, a);
      }
      p = std::move(next);
      head = 0;
      ++steps;
      if ((steps & 7) == 0) {
        if (clock && max_seconds > 0 && clock->seconds() > max_seconds) {
          throw BudgetExceeded("time budget exhausted during reduction");
        }
        std::size_t w = weight(p) + weight(r);
        if (w > 2 * base_weight + 16) {
          shrink(p, r, mult);
          base_weight = weight(p) + weight(r);
        }
      }
    }
    return r;
  }

  P spoly(const P& f, const P& g) const {
    IMono l = ctx_.lcm(f.lm(), g.lm());
    R d = Ring::gcd(f.lc(), g.lc());
    R a = Ring::div(g.lc(), d);
    R b = Ring::div(f.lc(), d);
    IMono qf = ctx_.div(l, f.lm());
    IMono qg = ctx_.div(l, g.lm());
    P fq = scale_shift(f, qf);
    P s = combine(fq, 1, a, b, qg, g, 1);
    s.sugar = std::max(qf.deg + f.sugar, qg.deg + g.sugar);
    return s;
  }

  P scale_shift(const P& f, const IMono& q) const {
    P out;
    out.t.reserve(f.t.size());
    for (const auto& [m, c] : f.t) out.t.emplace_back(ctx_.mul(q, m), c);
    out.sugar = f.sugar + q.deg;
    return out;
  }

 private:
  static std::size_t weight(const P& p) {
    std::size_t w = 0;
    for (const auto& [m, c] : p.t) w += Ring::weight(c);
    return w;
  }

  // Divides p and r by their common content.
  void shrink(P& p, P& r, Multiplier<Ring>* mult) const {
    if (p.t.empty() && r.t.empty()) return;
    R g;
    bool first = true;
    for (const P* x : {&p, &r}) {
      for (const auto& [m, c] : x->t) {
        g = first ? c : Ring::gcd(g, c);
        first = false;
        if (Ring::is_one(g)) return;
      }
    }
    if (Ring::sign(g) < 0) g = Ring::neg(g);
    if (Ring::is_one(g)) return;
    divide_coeffs(p, g);
    divide_coeffs(r, g);
    if (mult) mult->den = Ring::mul(mult->den, g);
  }

  OrderCtx ctx_;
};

template <class Ring>
struct BasisImpl {
  OrderCtx ctx;
  std::vector<IPoly<Ring>> polys;  // reduced basis, increasing leading monomial
};

}  // namespace idspec::groebner::detail

namespace idspec::groebner {

struct BasisData {
  std::variant<detail::BasisImpl<detail::IntRing>, detail::BasisImpl<detail::PolyRing>> impl;
  std::vector<VarId> parameters;
};

}  // namespace idspec::groebner
