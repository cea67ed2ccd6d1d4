#include "idspec/specialize/specialize.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <unordered_map>

#include "idspec/algebra/gcd.hpp"
#include "idspec/algebra/modular.hpp"
#include "idspec/algebra/text.hpp"

namespace idspec::specialize {

using groebner::GroebnerBasis;
using groebner::Ideal;
using groebner::MonomialOrder;

namespace {

using Map = std::unordered_map<VarId, RationalFunction>;

std::string fresh(const std::string& base, unsigned& counter, const std::set<std::string>& taken) {
  for (;;) {
    std::string name = base + std::to_string(++counter);
    if (!taken.count(name)) return name;
  }
}

std::vector<VarId> beta_vars(const std::vector<BetaSymbol>& betas) {
  std::vector<VarId> out;
  for (const auto& b : betas) out.push_back(b.symbol);
  return out;
}

std::uint64_t random_residue(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1, algebra::Fp61::kPrime - 1);
  return dist(rng);
}

// Rank over F_p of d(generators)/d(vars) at one random point.
std::size_t jacobian_rank(const std::vector<RationalFunction>& gens, const std::vector<VarId>& vars,
                          const algebra::ModPoint& pt) {
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& g : gens) {
    std::vector<std::uint64_t> row;
    for (VarId v : vars) row.push_back(algebra::evaluate_mod(g.derivative(v), pt));
    rows.push_back(std::move(row));
  }
  return algebra::rank_mod(rows);
}

// Subsets of `n` indices of size `k`, lexicographic.
void subsets(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out, std::size_t cap) {
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  if (k > n) return;
  for (;;) {
    out.push_back(cur);
    if (out.size() >= cap) return;
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

// Index tuples of length k over [0, m), ordered by index sum then lex.
std::vector<std::vector<std::size_t>> tuples(std::size_t k, std::size_t m, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) return {{}};
  for (std::size_t total = 0; total <= k * (m - 1) && out.size() < cap; ++total) {
    std::vector<std::size_t> cur(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
      if (out.size() >= cap) return;
      if (pos + 1 == k) {
        if (left < m) {
          cur[pos] = left;
          out.push_back(cur);
        }
        return;
      }
      for (std::size_t v = 0; v <= std::min(left, m - 1); ++v) {
        cur[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, total);
  }
  return out;
}

bool is_pure_power_of(const algebra::Monomial& mono, VarId v) {
  return mono.powers().size() == 1 && mono.powers()[0].var == v;
}

struct Attempt {
  bool ok = false;
  Specialization spec;
};

Polynomial numerator_of(const Polynomial& p, const Map& values) {
  if (values.empty()) return p;
  return algebra::substitute(p, values).num();
}

}  // namespace

bool Specialization::has_formal_roots() const {
  return std::any_of(values.begin(), values.end(),
                     [](const AlgebraicValue& v) { return v.kind == AlgebraicValue::Kind::FormalRoot; });
}

RationalFunction Specialization::value_of(VarId p) const {
  for (std::size_t i = 0; i < params.size(); ++i)
    if (params[i] == p)
      return values[i].kind == AlgebraicValue::Kind::Explicit ? values[i].value
                                                              : RationalFunction::variable(values[i].root);
  throw std::out_of_range("value_of: unknown parameter " + algebra::variable_name(p));
}

std::vector<BetaSymbol> name_generators(const Model& m, const std::vector<RationalFunction>& simplified) {
  auto taken = identifiers(m);
  unsigned counter = 0;
  std::vector<BetaSymbol> out;
  for (const auto& g : simplified) {
    if (g.is_polynomial() && g.num().size() == 1 && g.num().leading_coefficient() == 1) {
      auto powers = g.num().leading_term().mono.powers();
      if (powers.size() == 1 && powers[0].exp == 1 && m.is_param(powers[0].var)) {
        out.push_back({powers[0].var, g});
        continue;
      }
    }
    out.push_back({algebra::intern_variable(fresh("B", counter, taken)), g});
  }
  return out;
}

SpecializationSystem build_system(const Model& m, const std::vector<BetaSymbol>& betas, const Polynomial& D0,
                                  const Polynomial& C) {
  SpecializationSystem sys;
  sys.params = m.params;
  sys.betas = betas;
  std::unordered_map<VarId, VarId> ren;
  for (VarId p : m.params) {
    VarId u = algebra::intern_variable(algebra::variable_name(p) + "@");
    sys.unknowns.push_back(u);
    ren[p] = u;
  }
  for (const auto& b : betas) {
    Polynomial num = b.generator.num().rename(ren);
    Polynomial den = b.generator.den().rename(ren);
    sys.equations.push_back(algebra::primitive_part(num - Polynomial::variable(b.symbol) * den));
  }
  sys.inequation = (D0 * C).rename(ren);
  return sys;
}

bool witness_holds(const SpecializationSystem& sys) {
  Map values;
  for (std::size_t i = 0; i < sys.params.size(); ++i) values[sys.unknowns[i]] = RationalFunction::variable(sys.params[i]);
  Map betas;
  for (const auto& b : sys.betas) betas[b.symbol] = b.generator;
  for (const auto& e : sys.equations) {
    // unknowns first, then betas; the two maps may share names (a beta named
    // after its parameter), so substitute in one pass.
    Map all = values;
    for (auto& [k, v] : betas) all[k] = v;
    if (!algebra::substitute(e, all).is_zero()) return false;
  }
  return !algebra::substitute(sys.inequation, values).is_zero();
}

std::vector<RationalFunction> trial_values(const std::vector<BetaSymbol>& betas) {
  std::vector<RationalFunction> out{RationalFunction(1), RationalFunction(2), RationalFunction(3),
                                    RationalFunction(-1)};
  for (const auto& b : betas) out.push_back(RationalFunction::variable(b.symbol));
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = i; j < betas.size(); ++j)
      out.push_back(RationalFunction::variable(betas[i].symbol) * RationalFunction::variable(betas[j].symbol));
  return out;
}

namespace {

// Solves the system with the unknowns in `fixed` set to `fixed_values`.
Attempt try_assignment(const SpecializationSystem& sys, const std::vector<std::size_t>& fixed,
                       const std::vector<RationalFunction>& fixed_values, const groebner::Budget& budget) {
  Attempt out;
  const auto betas = beta_vars(sys.betas);
  Map assign;
  for (std::size_t i = 0; i < fixed.size(); ++i) assign[sys.unknowns[fixed[i]]] = fixed_values[i];
  std::vector<VarId> rest;
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i)
    if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) rest.push_back(sys.unknowns[i]);

  std::vector<Polynomial> eqs;
  for (const auto& e : sys.equations) {
    Polynomial p = numerator_of(e, assign);
    if (p.is_zero()) continue;
    if (p.is_constant()) return out;
    eqs.push_back(p);
  }
  Map values = assign;  // unknown -> value in betas (explicit part)
  std::vector<VarId> roots;
  std::unordered_map<VarId, Polynomial> minpolys;
  if (!rest.empty()) {
    if (eqs.empty()) return out;
    Ideal ideal{eqs, betas};
    auto gb = groebner::buchberger(ideal, MonomialOrder::lex(rest), budget);
    if (gb.is_unit()) return out;
    for (VarId v : rest) {
      bool bounded = false;
      for (std::size_t i = 0; i < gb.size(); ++i)
        if (is_pure_power_of(gb.leading_monomial(i), v)) bounded = true;
      if (!bounded) return out;  // positive-dimensional
    }
    for (VarId v : rest) {
      std::vector<VarId> order;
      for (VarId w : rest)
        if (w != v) order.push_back(w);
      order.push_back(v);
      auto g = (order.back() == rest.back()) ? gb : groebner::buchberger(ideal, MonomialOrder::lex(order), budget);
      std::optional<Polynomial> uni;
      for (const auto& e : g.elements()) {
        auto vars = e.variables();
        bool only_v = std::all_of(vars.begin(), vars.end(), [&](VarId w) {
          return w == v || std::find(betas.begin(), betas.end(), w) != betas.end();
        });
        if (only_v && e.depends_on(v)) {
          uni = e;
          break;
        }
      }
      if (!uni) return out;
      auto coeffs = uni->coefficients_in(v);
      if (coeffs.rbegin()->first == 1) {
        Polynomial c0 = coeffs.count(0) ? coeffs.at(0) : Polynomial();
        values[v] = RationalFunction::make(-c0, coeffs.at(1));
      } else {
        roots.push_back(v);
        Polynomial mp = algebra::squarefree_part(*uni);
        if (mp.coefficients_in(v).rbegin()->second.leading_coefficient() < 0) mp = -mp;
        minpolys[v] = mp;
      }
    }
  }

  Specialization& s = out.spec;
  s.params = sys.params;
  s.betas = sys.betas;
  for (std::size_t i : fixed) s.free.push_back(sys.params[i]);
  std::unordered_map<VarId, VarId> to_root;
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i)
    if (std::find(roots.begin(), roots.end(), sys.unknowns[i]) != roots.end()) to_root[sys.unknowns[i]] = sys.params[i];
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i) {
    AlgebraicValue v;
    VarId u = sys.unknowns[i];
    if (to_root.count(u)) {
      v.kind = AlgebraicValue::Kind::FormalRoot;
      v.root = to_root[u];
      v.minimal_polynomial = minpolys[u].rename(to_root);
    } else {
      v.value = values.at(u);
    }
    s.values.push_back(std::move(v));
  }
  if (!roots.empty()) {
    Map explicit_values;
    for (auto& [k, v] : values) explicit_values[k] = v;
    std::vector<Polynomial> rel;
    for (const auto& e : sys.equations) {
      Polynomial p = numerator_of(e, explicit_values);
      if (!p.is_zero()) rel.push_back(p.rename(to_root));
    }
    std::vector<VarId> root_syms;
    for (VarId r : roots) root_syms.push_back(to_root[r]);
    auto gb = groebner::buchberger(Ideal{rel, betas}, MonomialOrder::lex(root_syms), budget);
    if (gb.is_unit()) return out;
    s.relations = gb.elements();
  }
  out.ok = true;
  return out;
}

}  // namespace

bool verify_specialization(const SpecializationSystem& sys, const Specialization& s) {
  Map values;
  for (std::size_t i = 0; i < sys.unknowns.size(); ++i) values[sys.unknowns[i]] = s.value_of(sys.params[i]);
  std::optional<GroebnerBasis> gb;
  std::vector<VarId> roots;
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) roots.push_back(v.root);
  if (!roots.empty())
    gb = groebner::buchberger(Ideal{s.relations, beta_vars(s.betas)}, MonomialOrder::lex(roots));
  auto vanishes = [&](const Polynomial& p) {
    RationalFunction f = algebra::substitute(p, values);
    if (!gb) return f.is_zero();
    return groebner::reduces_to_zero(f.num(), *gb);
  };
  for (const auto& e : sys.equations)
    if (!vanishes(e)) return false;
  if (vanishes(sys.inequation)) return false;
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) {
      if (v.minimal_polynomial.coefficients_in(v.root).rbegin()->first < 2) return false;
      if (gb && !groebner::reduces_to_zero(v.minimal_polynomial, *gb)) return false;
    }
  return true;
}

Specialization solve_specialization(const SpecializationSystem& sys, const SolveOptions& opts) {
  const auto betas = beta_vars(sys.betas);
  if (!sys.equations.empty()) {
    auto gb = groebner::buchberger(Ideal{sys.equations, betas}, MonomialOrder::lex(sys.unknowns), opts.budget);
    if (gb.is_unit()) throw InconsistentSystem("specialization equations generate the unit ideal");
  }
  std::vector<RationalFunction> gens;
  for (const auto& b : sys.betas) gens.push_back(b.generator);
  std::mt19937_64 rng(opts.seed);
  algebra::ModPoint pt;
  for (VarId p : sys.params) pt[p] = random_residue(rng);
  const std::size_t n = sys.params.size();
  const std::size_t trdeg = gens.empty() ? 0 : jacobian_rank(gens, sys.params, pt);
  const std::size_t d = n - trdeg;

  std::vector<std::vector<std::size_t>> candidates;
  subsets(n, d, candidates, 20000);
  std::vector<std::pair<std::pair<std::size_t, std::vector<std::size_t>>, std::vector<std::size_t>>> ranked;
  auto ineq_vars = sys.inequation.variables();
  for (auto& f : candidates) {
    std::vector<VarId> complement;
    for (std::size_t i = 0; i < n; ++i)
      if (std::find(f.begin(), f.end(), i) == f.end()) complement.push_back(sys.params[i]);
    if (!gens.empty() && jacobian_rank(gens, complement, pt) != trdeg) continue;
    std::size_t in_ineq = 0;
    for (std::size_t i : f)
      if (std::find(ineq_vars.begin(), ineq_vars.end(), sys.unknowns[i]) != ineq_vars.end()) ++in_ineq;
    ranked.push_back({{in_ineq, f}, f});
  }
  std::sort(ranked.begin(), ranked.end());

  auto trials = trial_values(sys.betas);
  std::optional<Specialization> fallback;
  std::size_t attempts = 0;
  for (auto& [key, f] : ranked) {
    for (auto& tuple : tuples(d, trials.size(), opts.max_attempts)) {
      if (attempts >= opts.max_attempts) break;
      ++attempts;
      std::vector<RationalFunction> vals;
      for (std::size_t idx : tuple) vals.push_back(trials[idx]);
      Attempt a = try_assignment(sys, f, vals, opts.budget);
      if (!a.ok || !verify_specialization(sys, a.spec)) continue;
      a.spec.attempts = attempts;
      if (!a.spec.has_formal_roots()) return a.spec;
      if (!fallback) fallback = a.spec;
      break;  // formal roots persist under other trial values of this subset
    }
  }
  if (fallback) return *fallback;
  throw NoSolutionFound("trial list exhausted after " + std::to_string(attempts) + " attempts");
}

Model apply_specialization(const Model& m, const Specialization& s) {
  Model out;
  out.name = m.name.empty() ? std::string("reparametrized") : m.name + "_reparametrized";
  std::set<std::string> taken;
  for (const auto* list : {&m.states, &m.inputs, &m.outputs})
    for (VarId v : *list) taken.insert(algebra::variable_name(v));
  for (const auto& b : s.betas) taken.insert(algebra::variable_name(b.symbol));
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) taken.insert(algebra::variable_name(v.root));
  Map subst;
  unsigned counter = 0;
  for (VarId x : m.states) {
    VarId w = algebra::intern_variable(fresh("w", counter, taken));
    out.states.push_back(w);
    subst[x] = RationalFunction::variable(w);
  }
  for (const auto& b : s.betas) out.params.push_back(b.symbol);
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) out.params.push_back(v.root);
  for (std::size_t i = 0; i < m.params.size(); ++i) subst[m.params[i]] = s.value_of(m.params[i]);
  out.inputs = m.inputs;
  out.outputs = m.outputs;
  auto specialize = [&](const RationalFunction& f) {
    try {
      return f.substitute(subst);
    } catch (const algebra::ZeroDenominator&) {
      throw DenominatorVanishes("denominator vanishes under the specialization");
    }
  };
  for (const auto& f : m.rhs) out.rhs.push_back(specialize(f));
  for (const auto& g : m.obs) out.obs.push_back(specialize(g));
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) out.constraints.push_back(algebra::primitive_part(v.minimal_polynomial));
  for (const auto& r : s.relations) {
    Polynomial p = algebra::primitive_part(r);
    if (std::find(out.constraints.begin(), out.constraints.end(), p) == out.constraints.end() &&
        std::find(out.constraints.begin(), out.constraints.end(), -p) == out.constraints.end())
      out.constraints.push_back(p);
  }
  return out;
}

std::set<std::string> identifiers(const Model& m) {
  std::set<std::string> out;
  for (const auto* list : {&m.states, &m.params, &m.inputs, &m.outputs})
    for (VarId v : *list) out.insert(algebra::variable_name(v));
  return out;
}

OriginalFrame original_frame(const Specialization& s, const std::set<std::string>& taken) {
  OriginalFrame f;
  for (const auto& v : s.values) {
    if (v.kind != AlgebraicValue::Kind::FormalRoot) continue;
    std::string name = algebra::variable_name(v.root) + "_root";
    for (unsigned k = 2; taken.count(name); ++k) name = algebra::variable_name(v.root) + "_root" + std::to_string(k);
    VarId r = algebra::intern_variable(name);
    f.substitution[v.root] = RationalFunction::variable(r);
    f.root_params.push_back(v.root);
    f.roots.push_back(r);
  }
  for (const auto& b : s.betas) f.substitution[b.symbol] = b.generator;
  auto push = [&](const Polynomial& p) {
    Polynomial q = algebra::primitive_part(algebra::substitute(p, f.substitution).num());
    if (std::find(f.relations.begin(), f.relations.end(), q) == f.relations.end()) f.relations.push_back(q);
  };
  for (const auto& r : s.relations) push(r);
  for (const auto& v : s.values)
    if (v.kind == AlgebraicValue::Kind::FormalRoot) push(v.minimal_polynomial);
  return f;
}

bool verify_same_io(const Model& m, const Model& mt, const Specialization* s, const ioeq::IOOptions& opts) {
  auto a = ioeq::io_equations(m, opts);
  auto b = ioeq::io_equations(mt, opts);
  if (a.equations.size() != b.equations.size()) return false;
  Map back;
  std::optional<GroebnerBasis> gb;
  if (s) {
    auto taken = identifiers(m);
    for (const auto& id : identifiers(mt)) taken.insert(id);
    auto frame = original_frame(*s, taken);
    back = frame.substitution;
    if (!frame.roots.empty())
      gb = groebner::buchberger(Ideal{frame.relations, m.params}, MonomialOrder::lex(frame.roots), opts.budget);
  }
  for (std::size_t k = 0; k < a.equations.size(); ++k) {
    std::map<algebra::Monomial, std::pair<RationalFunction, RationalFunction>> terms;
    for (const auto& [mono, c] : a.equations[k].terms) terms[mono].first = c;
    for (const auto& [mono, c] : b.equations[k].terms) terms[mono].second = back.empty() ? c : c.substitute(back);
    for (const auto& [mono, cs] : terms) {
      RationalFunction diff = cs.second - cs.first;
      if (diff.is_zero()) continue;
      if (!gb || !groebner::reduces_to_zero(diff.num(), *gb)) return false;
    }
  }
  return true;
}

}  // namespace idspec::specialize
