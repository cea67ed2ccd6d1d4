#include "idspec/algebra/text.hpp"

#include <algorithm>
#include <unordered_map>

namespace idspec::algebra {
namespace {

struct Ranker {
  std::unordered_map<VarId, std::size_t> rank;

  Ranker(const Polynomial& p, const RenderOptions& opts) {
    for (std::size_t i = 0; i < opts.precedence.size(); ++i) rank.emplace(opts.precedence[i], i);
    auto vars = p.variables();
    std::vector<VarId> rest;
    for (VarId v : vars)
      if (!rank.count(v)) rest.push_back(v);
    std::sort(rest.begin(), rest.end(), [](VarId a, VarId b) { return variable_name(a) < variable_name(b); });
    std::size_t next = opts.precedence.size();
    for (VarId v : rest) rank.emplace(v, next++);
  }

  // exponent vector indexed by rank
  std::vector<std::uint32_t> key(const Monomial& m) const {
    std::vector<std::uint32_t> k(rank.size(), 0);
    for (const auto& vp : m.powers()) k[rank.at(vp.var)] = vp.exp;
    return k;
  }
};

bool needs_parens(const Polynomial& p) { return p.size() > 1; }

}  // namespace

std::string render(const BigRational& c) { return to_string(c); }

std::string render(const Monomial& m) {
  std::vector<VarPower> ps(m.powers().begin(), m.powers().end());
  std::sort(ps.begin(), ps.end(),
            [](const VarPower& a, const VarPower& b) { return variable_name(a.var) < variable_name(b.var); });
  std::string out;
  for (const auto& vp : ps) {
    if (!out.empty()) out += '*';
    out += variable_name(vp.var);
    if (vp.exp > 1) out += '^' + std::to_string(vp.exp);
  }
  return out.empty() ? "1" : out;
}

std::vector<Term> canonical_terms(const Polynomial& p, const RenderOptions& opts) {
  Ranker ranker(p, opts);
  std::vector<std::pair<std::vector<std::uint32_t>, const Term*>> keyed;
  keyed.reserve(p.size());
  for (const auto& t : p.terms()) keyed.emplace_back(ranker.key(t.mono), &t);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    std::uint32_t da = 0, db = 0;
    for (auto e : a.first) da += e;
    for (auto e : b.first) db += e;
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::vector<Term> out;
  out.reserve(keyed.size());
  for (const auto& [k, t] : keyed) out.push_back(*t);
  return out;
}

std::string render(const Polynomial& p, const RenderOptions& opts) {
  if (p.is_zero()) return "0";
  std::string out;
  Ranker ranker(p, opts);
  for (const auto& t : canonical_terms(p, opts)) {
    bool neg = sgn(t.coeff) < 0;
    BigRational mag = abs(t.coeff);
    if (out.empty()) {
      if (neg) out += '-';
    } else {
      out += neg ? " - " : " + ";
    }
    // variables inside a term follow the same precedence
    std::vector<VarPower> ps(t.mono.powers().begin(), t.mono.powers().end());
    std::sort(ps.begin(), ps.end(),
              [&](const VarPower& a, const VarPower& b) { return ranker.rank.at(a.var) < ranker.rank.at(b.var); });
    std::string mono;
    for (const auto& vp : ps) {
      if (!mono.empty()) mono += '*';
      mono += variable_name(vp.var);
      if (vp.exp > 1) mono += '^' + std::to_string(vp.exp);
    }
    if (mono.empty()) {
      out += to_string(mag);
    } else if (mag == 1) {
      out += mono;
    } else {
      out += to_string(mag) + '*' + mono;
    }
  }
  return out;
}

std::string render(const RationalFunction& f, const RenderOptions& opts) {
  std::string n = render(f.num(), opts);
  if (f.is_polynomial()) return n;
  if (needs_parens(f.num())) n = '(' + n + ')';
  std::string d = render(f.den(), opts);
  const auto& lead = f.den().terms().front();
  bool simple = f.den().size() == 1 && (lead.mono.is_one() || (lead.coeff == 1 && lead.mono.powers().size() == 1));
  if (!simple) d = '(' + d + ')';
  return n + '/' + d;
}

}  // namespace idspec::algebra
