#include "idspec/algebra/monomial.hpp"

#include <algorithm>
#include <cassert>

namespace idspec::algebra {

Monomial Monomial::variable(VarId v, std::uint32_t exp) {
  Monomial m;
  if (exp != 0) m.powers_.push_back({v, exp});
  return m;
}

Monomial Monomial::from_powers(std::vector<VarPower> powers) {
  std::sort(powers.begin(), powers.end(),
            [](const VarPower& a, const VarPower& b) { return a.var < b.var; });
  Monomial m;
  for (const auto& p : powers) {
    if (p.exp == 0) continue;
    if (!m.powers_.empty() && m.powers_.back().var == p.var) {
      m.powers_.back().exp += p.exp;
    } else {
      m.powers_.push_back(p);
    }
  }
  return m;
}

std::uint32_t Monomial::degree(VarId v) const {
  for (const auto& p : powers_) {
    if (p.var == v) return p.exp;
    if (p.var > v) break;
  }
  return 0;
}

std::uint32_t Monomial::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& p : powers_) d += p.exp;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  auto j = other.powers_.begin();
  for (const auto& p : powers_) {
    while (j != other.powers_.end() && j->var < p.var) ++j;
    if (j == other.powers_.end() || j->var != p.var || j->exp < p.exp) return false;
    ++j;
  }
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.powers_.reserve(powers_.size() + other.powers_.size());
  auto i = powers_.begin();
  auto j = other.powers_.begin();
  while (i != powers_.end() || j != other.powers_.end()) {
    if (j == other.powers_.end() || (i != powers_.end() && i->var < j->var)) {
      out.powers_.push_back(*i++);
    } else if (i == powers_.end() || j->var < i->var) {
      out.powers_.push_back(*j++);
    } else {
      out.powers_.push_back({i->var, i->exp + j->exp});
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial Monomial::operator/(const Monomial& divisor) const {
  Monomial out;
  auto j = divisor.powers_.begin();
  for (const auto& p : powers_) {
    std::uint32_t e = p.exp;
    if (j != divisor.powers_.end() && j->var == p.var) {
      assert(j->exp <= e);
      e -= j->exp;
      ++j;
    }
    if (e != 0) out.powers_.push_back({p.var, e});
  }
  assert(j == divisor.powers_.end());
  return out;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto i = a.powers_.begin();
  auto j = b.powers_.begin();
  while (i != a.powers_.end() || j != b.powers_.end()) {
    if (j == b.powers_.end() || (i != a.powers_.end() && i->var < j->var)) {
      out.powers_.push_back(*i++);
    } else if (i == a.powers_.end() || j->var < i->var) {
      out.powers_.push_back(*j++);
    } else {
      out.powers_.push_back({i->var, std::max(i->exp, j->exp)});
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto i = a.powers_.begin();
  auto j = b.powers_.begin();
  while (i != a.powers_.end() && j != b.powers_.end()) {
    if (i->var < j->var) {
      ++i;
    } else if (j->var < i->var) {
      ++j;
    } else {
      out.powers_.push_back({i->var, std::min(i->exp, j->exp)});
      ++i;
      ++j;
    }
  }
  return out;
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto& p : powers_) {
    h ^= (static_cast<std::size_t>(p.var) << 20) ^ p.exp;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int compare(const Monomial& a, const Monomial& b) {
  auto i = a.powers_.begin();
  auto j = b.powers_.begin();
  for (;;) {
    const bool ai = i == a.powers_.end();
    const bool bj = j == b.powers_.end();
    if (ai && bj) return 0;
    if (ai) return -1;
    if (bj) return 1;
    if (i->var != j->var) return i->var < j->var ? 1 : -1;
    if (i->exp != j->exp) return i->exp > j->exp ? 1 : -1;
    ++i;
    ++j;
  }
}

}  // namespace idspec::algebra
