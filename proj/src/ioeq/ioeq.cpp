#include "idspec/ioeq/ioeq.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "idspec/algebra/gcd.hpp"
#include "idspec/algebra/modular.hpp"
#include "idspec/algebra/text.hpp"
#include "idspec/lie/jets.hpp"

namespace idspec::ioeq {

using groebner::Budget;
using groebner::Ideal;
using groebner::MonomialOrder;
using lie::jet;
using lie::jet_info;

namespace {

int compare_ranked(const Monomial& a, const Monomial& b, const std::vector<VarId>& ranking) {
  for (VarId v : ranking) {
    auto da = a.degree(v), db = b.degree(v);
    if (da != db) return da > db ? 1 : -1;
  }
  return 0;
}

// Squarefree part of the product of the dynamic denominators, with any
// factor living purely in the parameters removed (those are units).
Polynomial saturation_polynomial(const std::vector<Polynomial>& dens, const Model& m) {
  Polynomial q(1);
  for (const auto& d : dens) {
    if (d.is_constant()) continue;
    q = algebra::lcm(q, d);
  }
  if (q.is_constant()) return Polynomial(1);
  q = algebra::squarefree_part(q);
  std::vector<VarId> dyn;
  for (VarId v : q.variables())
    if (!m.is_param(v)) dyn.push_back(v);
  std::vector<Polynomial> coeffs;
  for (auto& [mono, c] : q.collect(std::span<const VarId>(dyn))) coeffs.push_back(c);
  Polynomial content = algebra::gcd(std::span<const Polynomial>(coeffs));
  if (!content.is_constant()) q = *algebra::divide_exact(q, content);
  return algebra::primitive_part(q);
}

std::uint64_t random_residue(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1, algebra::Fp61::kPrime - 1);
  return dist(rng);
}

// Jets of the model inputs appearing in any of `fs`, highest order first.
std::vector<VarId> input_jets(const Model& m, const std::vector<RationalFunction>& fs) {
  std::map<std::pair<std::size_t, unsigned>, VarId> found;
  for (const auto& f : fs)
    for (VarId v : f.variables()) {
      auto info = jet_info(v);
      VarId base = info ? info->first : v;
      if (!m.is_input(base)) continue;
      auto idx = std::find(m.inputs.begin(), m.inputs.end(), base) - m.inputs.begin();
      found[{static_cast<std::size_t>(idx), info ? info->second : 0u}] = v;
    }
  std::vector<std::pair<std::pair<unsigned, std::size_t>, VarId>> keyed;
  for (auto& [k, v] : found) keyed.push_back({{k.second, k.first}, v});
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<VarId> out;
  for (auto& [k, v] : keyed) out.push_back(v);
  return out;
}


// Value of every jet at a random point of the model, for nonvanishing checks
// on the solution variety.
struct JetPoint {
  algebra::ModPoint point;
  bool valid = false;
};

JetPoint sample_jets(const Model& m, const lie::LieTable& t, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    JetPoint jp;
    std::set<VarId> vars;
    for (const auto& row : t.entries)
      for (const auto& e : row)
        for (VarId v : e.variables()) vars.insert(v);
    for (VarId v : m.states) vars.insert(v);
    for (VarId v : vars) jp.point[v] = random_residue(rng);
    try {
      for (std::size_t j = 0; j < t.entries.size(); ++j)
        for (unsigned i = 0; i < t.entries[j].size(); ++i)
          jp.point[jet(m.outputs[j], i)] = algebra::evaluate_mod(t.entries[j][i], jp.point);
    } catch (const algebra::EvalDenominatorZero&) {
      continue;
    }
    jp.valid = true;
    return jp;
  }
  return {};
}

bool nonzero_at(const Polynomial& p, const JetPoint& jp) {
  if (!jp.valid) return false;
  return algebra::evaluate_mod(p, jp.point) != 0;
}

// h with x replaced by -b/a, multiplied by a^deg_x(h).
Polynomial substitute_linear(const Polynomial& h, VarId x, const Polynomial& a, const Polynomial& b) {
  auto coeffs = h.coefficients_in(x);
  std::uint32_t top = coeffs.rbegin()->first;
  Polynomial out;
  Polynomial nb = -b;
  for (auto& [d, c] : coeffs) out += c * nb.pow(d) * a.pow(top - d);
  return out;
}

// Divides out every factor shared with a saturating polynomial; those are
// units in the localized ring.
Polynomial strip_saturated(Polynomial g, const std::vector<Polynomial>& sat) {
  for (const auto& d : sat) {
    if (d.is_constant()) continue;
    for (;;) {
      Polynomial h = algebra::gcd(g, d);
      if (h.is_constant()) break;
      g = *algebra::divide_exact(g, h);
    }
  }
  return algebra::primitive_part(g);
}

// Removes states that occur linearly in some generator by solving for them.
// Each solved leading coefficient joins the saturation set; candidates whose
// coefficient vanishes on the solution variety are skipped.
void solve_linear_states(std::vector<Polynomial>& gens, std::vector<VarId>& states, std::vector<Polynomial>& sat,
                         const JetPoint& jp) {
  for (;;) {
    std::size_t best_gen = 0;
    VarId best_var = 0;
    std::size_t best_cost = 0;
    bool found = false;
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (VarId x : states) {
        auto coeffs = gens[g].coefficients_in(x);
        if (coeffs.size() != 2 || coeffs.rbegin()->first != 1) continue;
        const Polynomial& a = coeffs.rbegin()->second;
        if (!a.is_constant() && !nonzero_at(a, jp)) continue;
        std::size_t cost = a.size() * 4 + gens[g].size();
        if (!found || cost < best_cost) {
          found = true;
          best_gen = g;
          best_var = x;
          best_cost = cost;
        }
      }
    if (!found) return;
    auto coeffs = gens[best_gen].coefficients_in(best_var);
    Polynomial a = coeffs.rbegin()->second;
    Polynomial b = coeffs.count(0) ? coeffs.at(0) : Polynomial();
    gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(best_gen));
    for (auto& h : gens)
      if (h.depends_on(best_var)) h = algebra::primitive_part(substitute_linear(h, best_var, a, b));
    std::erase_if(gens, [](const Polynomial& h) { return h.is_zero(); });
    for (auto& d : sat)
      if (d.depends_on(best_var)) d = algebra::primitive_part(substitute_linear(d, best_var, a, b));
    if (!a.is_constant()) sat.push_back(a);
    for (auto& d : sat) d = algebra::squarefree_part(d);
    for (auto& h : gens) h = strip_saturated(h, sat);
    states.erase(std::find(states.begin(), states.end(), best_var));
  }
}

}  // namespace

Polynomial DiffPolynomial::to_polynomial() const {
  Polynomial den(1);
  for (const auto& [mono, c] : terms) den = algebra::lcm(den, c.den());
  Polynomial out;
  for (const auto& [mono, c] : terms)
    out += (c.num() * *algebra::divide_exact(den, c.den())).mul_monomial(mono, 1);
  return algebra::primitive_part(out);
}

std::vector<RationalFunction> DiffPolynomial::coefficients() const {
  std::vector<RationalFunction> out;
  for (const auto& [mono, c] : terms) out.push_back(c);
  return out;
}

DiffPolynomial make_monic(const Polynomial& p, std::vector<VarId> ranking, std::size_t output) {
  DiffPolynomial e;
  e.output = output;
  e.ranking = std::move(ranking);
  std::vector<VarId> jets = e.ranking;
  std::sort(jets.begin(), jets.end());
  auto groups = p.collect(std::span<const VarId>(jets));
  std::sort(groups.begin(), groups.end(),
            [&](const auto& a, const auto& b) { return compare_ranked(a.first, b.first, e.ranking) > 0; });
  RationalFunction lead(groups.front().second);
  for (auto& [mono, c] : groups) e.terms.push_back({mono, RationalFunction(c) / lead});
  return e;
}

std::string render(const DiffPolynomial& e, const std::vector<VarId>& param_precedence) {
  algebra::RenderOptions opts{param_precedence};
  std::string out;
  for (const auto& [mono, c] : e.terms) {
    bool first = out.empty();
    std::string coeff;
    bool negative = false;
    if (c.is_constant()) {
      algebra::BigRational v = c.constant_value();
      negative = v < 0;
      if (negative) v = -v;
      if (!(v == 1) || mono.is_one()) coeff = algebra::render(v);
    } else if (c.is_polynomial() && c.num().size() == 1) {
      Polynomial n = c.num();
      negative = algebra::canonical_terms(n, opts).front().coeff < 0;
      coeff = algebra::render(negative ? -n : n, opts);
    } else if (c.is_polynomial()) {
      Polynomial n = c.num();
      negative = algebra::canonical_terms(n, opts).front().coeff < 0;
      coeff = "(" + algebra::render(negative ? -n : n, opts) + ")";
    } else {
      negative = algebra::canonical_terms(c.num(), opts).front().coeff < 0;
      coeff = "(" + algebra::render(negative ? -c : c, opts) + ")";
    }
    out += first ? (negative ? "-" : "") : (negative ? " - " : " + ");
    if (!coeff.empty()) out += coeff;
    if (!mono.is_one()) out += (coeff.empty() ? "" : "*") + algebra::render(mono);
  }
  return out.empty() ? "0" : out;
}

std::vector<unsigned> io_orders(const Model& m, const lie::LieTable& t, std::uint64_t seed, std::size_t trials) {
  const std::size_t n = m.states.size();
  auto J = lie::jacobian(m, t);
  auto row_of = [&](std::size_t j, unsigned i) {
    for (std::size_t r = 0; r < J.rows.size(); ++r)
      if (J.rows[r].output == j && J.rows[r].order == i) return r;
    throw std::logic_error("missing Jacobian row");
  };
  std::set<VarId> vars;
  for (const auto& row : J.entries)
    for (const auto& e : row)
      for (VarId v : e.variables()) vars.insert(v);
  std::mt19937_64 rng(seed);
  std::vector<unsigned> orders(m.outputs.size(), 0);
  std::size_t done = 0, misses = 0;
  while (done < trials) {
    algebra::ModPoint pt;
    for (VarId v : vars) pt[v] = random_residue(rng);
    std::vector<std::vector<std::uint64_t>> values;
    try {
      for (const auto& row : J.entries) {
        std::vector<std::uint64_t> vr;
        for (const auto& e : row) vr.push_back(algebra::evaluate_mod(e, pt));
        values.push_back(std::move(vr));
      }
    } catch (const algebra::EvalDenominatorZero&) {
      if (++misses > 50 * trials) throw lie::DegeneratePoint("every sample point hit a vanishing denominator");
      continue;
    }
    ++done;
    for (std::size_t j = 0; j < m.outputs.size(); ++j) {
      std::vector<std::vector<std::uint64_t>> base;
      for (std::size_t l = 0; l < j; ++l)
        for (unsigned i = 0; i <= n; ++i) base.push_back(values[row_of(l, i)]);
      std::size_t rank = algebra::rank_mod(base);
      unsigned k = 0;
      for (; k <= n; ++k) {
        base.push_back(values[row_of(j, k)]);
        std::size_t r = algebra::rank_mod(base);
        if (r == rank) break;
        rank = r;
      }
      orders[j] = std::max(orders[j], std::min<unsigned>(k, n));
    }
  }
  return orders;
}

IOEquations io_equations(const Model& m, const IOOptions& opts) {
  const unsigned n = static_cast<unsigned>(m.states.size());
  auto table = lie::lie_table(m, n);
  IOEquations out;
  out.orders = io_orders(m, table, opts.seed, opts.trials);
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  JetPoint jets_at = sample_jets(m, table, rng);
  for (std::size_t j = 0; j < m.outputs.size(); ++j) {
    std::vector<Polynomial> gens, dens;
    std::vector<RationalFunction> used;
    std::vector<VarId> own, earlier;
    auto add = [&](std::size_t l, unsigned i) {
      const RationalFunction& R = table.entries[l][i];
      VarId y = jet(m.outputs[l], i);
      gens.push_back(R.den() * Polynomial::variable(y) - R.num());
      dens.push_back(R.den());
      used.push_back(R);
      return y;
    };
    for (unsigned i = 0; i <= out.orders[j]; ++i) own.push_back(add(j, i));
    std::reverse(own.begin(), own.end());
    for (unsigned i = n + 1; i-- > 0;)
      for (std::size_t l = j; l-- > 0;) earlier.push_back(jet(m.outputs[l], i));
    for (std::size_t l = 0; l < j; ++l)
      for (unsigned i = 0; i <= n; ++i) add(l, i);
    std::vector<VarId> ranking = own;
    ranking.insert(ranking.end(), earlier.begin(), earlier.end());
    for (VarId v : input_jets(m, used)) ranking.push_back(v);

    std::vector<VarId> states = m.states;
    if (opts.solve_linear) solve_linear_states(gens, states, dens, jets_at);
    Polynomial q = saturation_polynomial(dens, m);
    std::vector<Polynomial> eliminated;
    bool states_left = std::any_of(gens.begin(), gens.end(), [&](const Polynomial& g) {
      return std::any_of(states.begin(), states.end(), [&](VarId x) { return g.depends_on(x); });
    });
    if (!states_left) {
      for (auto& g : gens) g = strip_saturated(g, {q});
      std::erase_if(gens, [](const Polynomial& g) { return g.is_zero(); });
    }
    if (!states_left && gens.size() == 1) {
      eliminated = gens;
    } else {
      std::vector<VarId> elim;
      if (!q.is_constant()) {
        VarId t = algebra::intern_variable("sat#io");
        gens.push_back(q * Polynomial::variable(t) - Polynomial(1));
        elim.push_back(t);
      }
      for (VarId x : states)
        if (std::any_of(gens.begin(), gens.end(), [&](const Polynomial& g) { return g.depends_on(x); }))
          elim.push_back(x);
      Ideal ideal{gens, m.params};
      if (elim.empty()) {
        auto gb = groebner::buchberger(ideal, MonomialOrder::grevlex(ranking), opts.budget);
        out.pairs += gb.pairs_processed();
        eliminated = gb.elements();
      } else {
        auto order = MonomialOrder::block(elim, ranking);
        auto [gb, filtered] = groebner::eliminate_with(ideal, elim, order, opts.budget);
        out.pairs += gb.pairs_processed();
        eliminated = std::move(filtered.generators);
      }
    }
    std::vector<Polynomial> mine;
    for (const auto& g : eliminated) {
      bool involves = std::any_of(own.begin(), own.end(), [&](VarId v) { return g.depends_on(v); });
      if (involves) mine.push_back(g);
    }
    if (mine.empty()) throw EliminationFailed("no relation found for output " + algebra::variable_name(m.outputs[j]));
    if (mine.size() > 1) out.non_hypersurface.push_back(j);
    for (const auto& g : mine) {
      DiffPolynomial e = make_monic(g, ranking, j);
      unsigned ord = 0;
      for (unsigned i = 0; i < own.size(); ++i)
        if (g.depends_on(own[i])) {
          ord = static_cast<unsigned>(own.size() - 1 - i);
          break;
        }
      e.order = ord;
      out.equations.push_back(std::move(e));
    }
  }
  return out;
}

RationalFunction normalize_generator(const RationalFunction& f) {
  if (f.is_constant()) return f;
  if (f.num().is_constant()) return RationalFunction(algebra::primitive_part(f.den()));
  Polynomial n = algebra::primitive_part(f.num());
  return RationalFunction::make(n, f.den());
}

std::vector<RationalFunction> field_generators(const std::vector<DiffPolynomial>& eqs) {
  std::vector<RationalFunction> out;
  for (const auto& e : eqs)
    for (const auto& c : e.coefficients()) {
      if (c.is_constant()) continue;
      RationalFunction g = c;
      if (g.num().leading_coefficient() < 0) g = -g;
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
  return out;
}

FieldOracle::FieldOracle(std::vector<RationalFunction> gens, std::vector<VarId> params, const Budget& budget)
    : gens_(std::move(gens)), params_(std::move(params)) {
  std::sort(params_.begin(), params_.end());
  params_.erase(std::unique(params_.begin(), params_.end()), params_.end());
  for (VarId p : params_) {
    VarId h = algebra::intern_variable(algebra::variable_name(p) + "~");
    hat_[p] = h;
    hat_vars_.push_back(h);
  }
  std::vector<Polynomial> polys;
  Polynomial sat(1);
  for (const auto& g : gens_) {
    if (g.is_constant()) continue;
    polys.push_back(binomial(g));
    Polynomial dh = g.den().rename(hat_);
    if (!dh.is_constant()) sat = algebra::lcm(sat, dh);
  }
  if (polys.empty()) return;
  Ideal ideal{polys, params_};
  if (!sat.is_constant()) ideal = groebner::saturate(ideal, algebra::squarefree_part(sat), budget);
  gb_ = groebner::buchberger(ideal, MonomialOrder::grevlex(hat_vars_), budget);
}

Polynomial FieldOracle::binomial(const RationalFunction& h) const {
  return h.num().rename(hat_) * h.den() - h.num() * h.den().rename(hat_);
}

bool FieldOracle::contains(const RationalFunction& h) const {
  if (h.is_constant()) return true;
  for (VarId v : h.variables())
    if (!hat_.count(v)) return false;
  if (!gb_) return false;
  return groebner::reduces_to_zero(binomial(h), *gb_);
}

bool field_membership(const RationalFunction& h, const std::vector<RationalFunction>& gens, const Budget& budget) {
  std::vector<VarId> params = h.variables();
  for (const auto& g : gens)
    for (VarId v : g.variables()) params.push_back(v);
  return FieldOracle(gens, params, budget).contains(h);
}

namespace {

struct Complexity {
  unsigned degree;
  std::size_t terms;
  std::string text;
  auto operator<=>(const Complexity&) const = default;
};

unsigned total_degree(const Polynomial& p) {
  unsigned d = 0;
  for (const auto& t : p.terms()) d = std::max(d, t.mono.total_degree());
  return d;
}

Complexity complexity(const RationalFunction& f) {
  return {total_degree(f.num()) + total_degree(f.den()), f.num().size() + f.den().size(), algebra::render(f)};
}

}  // namespace

std::vector<RationalFunction> simplify_generators(const std::vector<RationalFunction>& raw,
                                                  const std::vector<VarId>& params, const Budget& budget) {
  std::vector<RationalFunction> gens;
  for (const auto& g : raw)
    if (!g.is_constant()) gens.push_back(g);
  if (gens.empty()) return {};
  FieldOracle full(gens, params, budget);

  std::vector<RationalFunction> pool;
  for (VarId p : params) pool.push_back(RationalFunction::variable(p));
  std::vector<VarId> identifiable;
  for (VarId p : params)
    if (full.contains(RationalFunction::variable(p))) identifiable.push_back(p);
  std::sort(identifiable.begin(), identifiable.end());
  for (const auto& g : gens) {
    pool.push_back(g);
    for (const Polynomial* part : {&g.num(), &g.den()}) {
      pool.push_back(RationalFunction(*part));
      for (auto& [mono, c] : part->collect(std::span<const VarId>(identifiable))) pool.push_back(RationalFunction(c));
    }
  }
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t k = 0; k < gens.size(); ++k) {
      if (i == k) continue;
      pool.push_back(gens[i] / gens[k]);
      if (i < k) pool.push_back(gens[i] - gens[k]);
    }
  std::vector<std::pair<Complexity, RationalFunction>> ranked;
  std::set<std::string> seen;
  for (const auto& c : pool) {
    if (c.is_constant()) continue;
    RationalFunction g = normalize_generator(c);
    Complexity k = complexity(g);
    if (!seen.insert(k.text).second) continue;
    ranked.push_back({k, g});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<RationalFunction> chosen;
  std::optional<FieldOracle> current;
  auto covers = [&] {
    return std::all_of(gens.begin(), gens.end(), [&](const auto& g) { return current && current->contains(g); });
  };
  for (const auto& [k, c] : ranked) {
    if (current && current->contains(c)) continue;
    if (!full.contains(c)) continue;
    chosen.push_back(c);
    current.emplace(chosen, params, budget);
    if (covers()) break;
  }
  if (!covers()) throw MembershipAssertion("candidate pool does not generate the field");

  for (std::size_t i = chosen.size(); i-- > 0;) {
    std::vector<RationalFunction> rest = chosen;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (FieldOracle(rest, params, budget).contains(chosen[i])) chosen = std::move(rest);
  }
  FieldOracle simplified(chosen, params, budget);
  for (const auto& g : gens)
    if (!simplified.contains(g)) throw MembershipAssertion("simplified set misses " + algebra::render(g));
  for (const auto& g : chosen)
    if (!full.contains(g)) throw MembershipAssertion("simplified set exceeds the field at " + algebra::render(g));
  return chosen;
}

bool observability_condition(const IOEquations& eqs, const Model& m) {
  std::map<std::size_t, unsigned> per_output;
  for (const auto& e : eqs.equations) {
    auto it = per_output.find(e.output);
    if (it == per_output.end() || e.order < it->second) per_output[e.output] = e.order;
  }
  unsigned total = 0;
  for (auto& [j, o] : per_output) total += o;
  return total == m.states.size();
}

}  // namespace idspec::ioeq
