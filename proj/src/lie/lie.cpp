#include "idspec/lie/lie.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "idspec/algebra/deadline.hpp"
#include "idspec/algebra/gcd.hpp"
#include "idspec/lie/jets.hpp"

namespace idspec::lie {
namespace {

struct VectorField {
  std::vector<VarId> states;
  std::vector<Polynomial> numerators;  // f_k = numerators[k] / q
  Polynomial q;
};

VectorField common_field(const Model& m) {
  VectorField vf;
  vf.states = m.states;
  vf.q = Polynomial(1);
  for (const auto& f : m.rhs) vf.q = algebra::lcm(vf.q, f.den());
  for (const auto& f : m.rhs) vf.numerators.push_back(f.num() * *algebra::divide_exact(vf.q, f.den()));
  return vf;
}

// q * L(p) for a polynomial p.
Polynomial scaled_lie(const Model& m, const VectorField& vf, const Polynomial& p) {
  Polynomial out;
  for (std::size_t k = 0; k < vf.states.size(); ++k) {
    algebra::check_deadline("Lie derivative");
    Polynomial d = p.derivative(vf.states[k]);
    if (!d.is_zero()) out += d * vf.numerators[k];
  }
  Polynomial inputs;
  for (VarId v : p.variables()) {
    auto info = jet_info(v);
    VarId base = info ? info->first : v;
    unsigned order = info ? info->second : 0;
    if (!m.is_input(base)) continue;
    inputs += p.derivative(v) * Polynomial::variable(jet(base, order + 1));
  }
  if (!inputs.is_zero()) out += inputs * vf.q;
  return out;
}

RationalFunction lie_step(const Model& m, const VectorField& vf, const RationalFunction& f) {
  const Polynomial& n = f.num();
  const Polynomial& d = f.den();
  Polynomial ln = scaled_lie(m, vf, n);
  if (d.is_one()) return RationalFunction::make(ln, vf.q);
  Polynomial ld = scaled_lie(m, vf, d);
  algebra::check_deadline("Lie derivative");
  return RationalFunction::make(ln * d - n * ld, vf.q * d * d);
}

std::uint64_t random_residue(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1, algebra::Fp61::kPrime - 1);
  return dist(rng);
}

}  // namespace

RationalFunction lie_derivative(const Model& m, const RationalFunction& f) { return lie_step(m, common_field(m), f); }

LieTable lie_table(const Model& m, unsigned max_order) {
  VectorField vf = common_field(m);
  LieTable t;
  t.max_order = max_order;
  for (const auto& g : m.obs) {
    std::vector<RationalFunction> row{g};
    for (unsigned i = 1; i <= max_order; ++i) row.push_back(lie_step(m, vf, row.back()));
    t.entries.push_back(std::move(row));
  }
  return t;
}

Jacobian jacobian(const Model& m, const LieTable& t) {
  Jacobian J;
  J.columns = m.states;
  for (unsigned i = 0; i <= t.max_order; ++i)
    for (std::size_t j = 0; j < t.entries.size(); ++j) J.rows.push_back({j, i});
  for (const auto& r : J.rows) {
    std::vector<RationalFunction> row;
    for (VarId x : m.states) row.push_back(t.entries[r.output][r.order].derivative(x));
    J.entries.push_back(std::move(row));
  }
  return J;
}

RankCertificate rank_probabilistic(const Jacobian& M, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("rank_probabilistic: trials must be >= 1");
  std::set<VarId> vars;
  for (const auto& row : M.entries)
    for (const auto& e : row)
      for (VarId v : e.variables()) vars.insert(v);
  std::mt19937_64 rng(seed);
  RankCertificate best;
  bool any = false;
  const std::size_t max_resamples = 50 * trials;
  std::size_t done = 0;
  while (done < trials) {
    algebra::ModPoint pt;
    for (VarId v : vars) pt[v] = random_residue(rng);
    std::vector<std::vector<std::uint64_t>> values;
    try {
      for (const auto& row : M.entries) {
        std::vector<std::uint64_t> vr;
        for (const auto& e : row) vr.push_back(algebra::evaluate_mod(e, pt));
        values.push_back(std::move(vr));
      }
    } catch (const algebra::EvalDenominatorZero&) {
      if (++best.resamples > max_resamples) break;
      continue;
    }
    ++done;
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    std::size_t r = algebra::rank_mod(values, &piv);
    if (!any || r > best.rank) {
      any = true;
      best.rank = r;
      best.rows.clear();
      best.cols.clear();
      for (auto [row, col] : piv) {
        best.rows.push_back(row);
        best.cols.push_back(col);
      }
      best.witness = pt;
    }
  }
  if (!any) throw DegeneratePoint("every sample point hit a vanishing denominator");
  best.trials = done;
  std::sort(best.cols.begin(), best.cols.end());
  return best;
}

RationalFunction determinant(const std::vector<std::vector<RationalFunction>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) return RationalFunction(1);
  // clear denominators row by row
  std::vector<std::vector<Polynomial>> a(n);
  Polynomial scale(1);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial l(1);
    for (const auto& e : rows[i]) l = algebra::lcm(l, e.den());
    for (const auto& e : rows[i]) a[i].push_back(e.num() * *algebra::divide_exact(l, e.den()));
    scale *= l;
  }
  int sign = 1;
  Polynomial prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t p = k + 1;
      while (p < n && a[p][k].is_zero()) ++p;
      if (p == n) return RationalFunction();
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        algebra::check_deadline("determinant");
        Polynomial v = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        a[i][j] = prev.is_one() ? v : *algebra::divide_exact(v, prev);
      }
      a[i][k] = Polynomial();
    }
    prev = a[k][k];
  }
  Polynomial det = a[n - 1][n - 1];
  if (sign < 0) det = -det;
  return RationalFunction::make(det, scale);
}

std::size_t rank_symbolic(const Jacobian& M) {
  auto a = M.entries;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[rank], a[p]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      if (a[i][c].is_zero()) continue;
      RationalFunction f = a[i][c] / a[rank][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] = a[i][j] - f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

std::vector<VarId> dynamic_variables(const Model& m, const RationalFunction& f) {
  std::vector<VarId> out;
  for (VarId v : f.variables())
    if (!m.is_param(v)) out.push_back(v);
  return out;
}

Minor minor_and_coefficient(const Model& m, const Jacobian& M, const RankCertificate& cert) {
  std::vector<std::vector<RationalFunction>> sub;
  for (std::size_t r : cert.rows) {
    std::vector<RationalFunction> row;
    for (std::size_t c : cert.cols) row.push_back(M.entries[r][c]);
    sub.push_back(std::move(row));
  }
  Minor out;
  out.D = determinant(sub);
  if (out.D.is_zero()) throw MinorVanishes("certified minor has zero determinant");
  auto dyn = dynamic_variables(m, out.D);
  auto coeffs = out.D.num().collect(std::span<const VarId>(dyn));
  out.D0 = coeffs.front().second;
  return out;
}

}  // namespace idspec::lie
