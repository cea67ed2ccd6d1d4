#include "idspec/transform/transform.hpp"

#include <algorithm>
#include <set>

#include "idspec/algebra/gcd.hpp"
#include "idspec/lie/jets.hpp"

namespace idspec::transform {

using groebner::GroebnerBasis;
using groebner::Ideal;
using groebner::MonomialOrder;

namespace {

using Map = std::unordered_map<VarId, RationalFunction>;

struct System {
  std::vector<Polynomial> equations;
  std::vector<Polynomial> denominators;  // must not vanish; involve unknowns
};

bool involves(const Polynomial& p, const std::vector<VarId>& vars) {
  return p.depends_on_any(std::span<const VarId>(vars));
}

void add_row(System& sys, const RationalFunction& lhs, const RationalFunction& rhs, const std::vector<VarId>& unknowns) {
  RationalFunction d = lhs - rhs;
  if (!d.is_zero()) sys.equations.push_back(algebra::primitive_part(d.num()));
  if (involves(lhs.den(), unknowns)) sys.denominators.push_back(lhs.den());
}

bool is_input_jet(VarId v, const Model& m) {
  if (m.is_input(v)) return true;
  auto info = lie::jet_info(v);
  return info && m.is_input(info->first);
}

std::vector<VarId> coefficient_variables(const std::vector<Polynomial>& polys, const std::vector<VarId>& ring) {
  std::set<VarId> out;
  for (const auto& p : polys)
    for (VarId v : p.variables())
      if (std::find(ring.begin(), ring.end(), v) == ring.end()) out.insert(v);
  return {out.begin(), out.end()};
}

std::optional<RationalFunction> solve_linear(const Polynomial& p, VarId w) {
  auto cs = p.coefficients_in(w);
  if (cs.rbegin()->first != 1) return std::nullopt;
  Polynomial rest = cs.count(0) ? cs.at(0) : Polynomial();
  return RationalFunction::make(-rest, cs.at(1));
}

/// Solves `sys` for `ws` over the field of every other variable, roots being
/// bound by `relations`. Elements whose leading monomial is a single w and
/// which involve no other w are read off a lex basis; the rest come from a
/// per-state elimination.
std::vector<StateMap> solve_states(const System& sys, const std::vector<VarId>& ws, const std::vector<VarId>& roots,
                                   const std::vector<Polynomial>& relations, const groebner::Budget& budget) {
  std::vector<Polynomial> gens = sys.equations;
  for (const auto& r : relations) gens.push_back(r);
  std::vector<VarId> head;
  if (!sys.denominators.empty()) {
    Polynomial q(1);
    for (const auto& d : sys.denominators) q *= d;
    q = algebra::squarefree_part(q);
    VarId t = algebra::intern_variable("sat#tr");
    gens.push_back(Polynomial::variable(t) * q - Polynomial(1));
    head.push_back(t);
  }
  auto ring = head;
  ring.insert(ring.end(), ws.begin(), ws.end());
  ring.insert(ring.end(), roots.begin(), roots.end());
  const auto params = coefficient_variables(gens, ring);

  auto order_for = [&](std::optional<std::size_t> last) {
    std::vector<VarId> vars = head;
    for (std::size_t i = 0; i < ws.size(); ++i)
      if (!last || i != *last) vars.push_back(ws[i]);
    if (last) vars.push_back(ws[*last]);
    vars.insert(vars.end(), roots.begin(), roots.end());
    return MonomialOrder::lex(vars);
  };
  auto gb = groebner::buchberger(Ideal{gens, params}, order_for(std::nullopt), budget);
  if (gb.is_unit()) throw NonZeroDimensional("transform equations are inconsistent");

  std::vector<StateMap> out;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    std::vector<VarId> others = head;
    for (std::size_t j = 0; j < ws.size(); ++j)
      if (j != i) others.push_back(ws[j]);
    auto pick = [&](const GroebnerBasis& g) -> std::optional<Polynomial> {
      std::optional<Polynomial> best;
      for (const auto& e : g.elements()) {
        if (!e.depends_on(ws[i]) || involves(e, others)) continue;
        if (!best || e.degree(ws[i]) < best->degree(ws[i])) best = e;
      }
      return best;
    };
    auto P = pick(gb);
    if (!P || P->degree(ws[i]) > 1) {
      auto gi = groebner::buchberger(Ideal{gens, params}, order_for(i), budget);
      P = pick(gi);
    }
    if (!P) throw NonZeroDimensional("no polynomial relation for " + algebra::variable_name(ws[i]));
    StateMap sm{ws[i], *P, std::nullopt};
    if (P->degree(ws[i]) == 1) sm.solved = solve_linear(*P, ws[i]);
    out.push_back(std::move(sm));
  }
  return out;
}

bool zero_modulo(const RationalFunction& f, const StateTransform& t, std::optional<GroebnerBasis>& gb) {
  if (f.is_zero()) return true;
  if (t.roots.empty()) return false;
  if (!gb) {
    auto params = coefficient_variables(t.relations, t.roots);
    // The basis must accept every coefficient variable of f as well.
    for (VarId v : f.num().variables())
      if (std::find(t.roots.begin(), t.roots.end(), v) == t.roots.end() &&
          std::find(params.begin(), params.end(), v) == params.end())
        params.push_back(v);
    gb = groebner::buchberger(Ideal{t.relations, params}, MonomialOrder::lex(t.roots));
  }
  for (VarId v : f.num().variables())
    if (std::find(t.roots.begin(), t.roots.end(), v) == t.roots.end() &&
        std::find(gb->parameters().begin(), gb->parameters().end(), v) == gb->parameters().end()) {
      // A new coefficient variable: rebuild with it.
      gb.reset();
      return zero_modulo(f, t, gb);
    }
  return groebner::reduces_to_zero(f.num(), *gb);
}

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k, std::size_t cap) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return out;
  for (;;) {
    out.push_back(idx);
    if (out.size() >= cap) return out;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return out;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::set<std::string> taken_names(const Model& a, const Model& b) {
  auto taken = specialize::identifiers(a);
  for (const auto& id : specialize::identifiers(b)) taken.insert(id);
  return taken;
}

}  // namespace

bool StateTransform::solved() const {
  return std::all_of(states.begin(), states.end(), [](const StateMap& s) { return s.solved.has_value(); });
}

std::unordered_map<VarId, RationalFunction> StateTransform::solved_map() const {
  std::unordered_map<VarId, RationalFunction> out;
  for (const auto& s : states) out.emplace(s.state, s.solved.value());
  return out;
}

StateTransform solve_state_transform(const Model& m, const Model& mt, const lie::LieTable& lie_old,
                                     const lie::LieTable& lie_new, const specialize::Specialization* s,
                                     const groebner::Budget& budget, std::uint64_t seed) {
  const auto J = lie::jacobian(m, lie_old);
  const auto cert = lie::rank_probabilistic(J, 3, seed);
  if (cert.rank < m.states.size())
    throw PreconditionObservability("Lie-table rank " + std::to_string(cert.rank) + " < state dimension " +
                                    std::to_string(m.states.size()));
  StateTransform t;
  if (s) {
    auto frame = specialize::original_frame(*s, taken_names(m, mt));
    t.parameters = frame.substitution;
    t.root_params = frame.root_params;
    t.roots = frame.roots;
    t.relations = frame.relations;
  }
  auto build = [&](bool all_rows) {
    System sys;
    for (std::size_t r = 0; r < J.rows.size(); ++r) {
      if (!all_rows && std::find(cert.rows.begin(), cert.rows.end(), r) == cert.rows.end()) continue;
      const auto [j, i] = J.rows[r];
      if (i > lie_new.max_order) continue;
      RationalFunction lhs = lie_new.entries[j][i].substitute(t.parameters);
      add_row(sys, lhs, lie_old.entries[j][i], mt.states);
    }
    return sys;
  };
  t.states = solve_states(build(false), mt.states, t.roots, t.relations, budget);
  if (!t.solved()) {
    auto retry = solve_states(build(true), mt.states, t.roots, t.relations, budget);
    for (std::size_t i = 0; i < retry.size(); ++i)
      if (retry[i].defining.degree(retry[i].state) < t.states[i].defining.degree(t.states[i].state))
        t.states[i] = retry[i];
  }
  for (const auto& sm : t.states)
    for (VarId v : sm.defining.variables())
      if (is_input_jet(v, m))
        throw InputDependence("transform for " + algebra::variable_name(sm.state) + " depends on " +
                              algebra::variable_name(v));
  return t;
}

namespace {

RationalFunction chain_rule(const RationalFunction& h, const Model& m) {
  RationalFunction out;
  for (std::size_t j = 0; j < m.states.size(); ++j) {
    auto dh = h.derivative(m.states[j]);
    if (!dh.is_zero()) out += dh * m.rhs[j];
  }
  return out;
}

Map closure_substitution(const StateTransform& t) {
  Map subst = t.parameters;
  for (const auto& [w, h] : t.solved_map()) subst[w] = h;
  return subst;
}

}  // namespace

std::vector<bool> closure_by_state(const StateTransform& t, const Model& m, const Model& mt) {
  std::vector<bool> out(mt.states.size(), false);
  if (!t.solved()) return out;
  const Map subst = closure_substitution(t);
  std::optional<GroebnerBasis> gb;
  for (std::size_t i = 0; i < mt.states.size(); ++i) {
    try {
      auto lhs = chain_rule(subst.at(mt.states[i]), m);
      out[i] = zero_modulo(lhs - mt.rhs[i].substitute(subst), t, gb);
    } catch (const algebra::ZeroDenominator&) {
      out[i] = false;
    }
  }
  return out;
}

bool check_closure(const StateTransform& t, const Model& m, const Model& mt) {
  auto states = closure_by_state(t, m, mt);
  if (std::find(states.begin(), states.end(), false) != states.end()) return false;
  const Map subst = closure_substitution(t);
  std::optional<GroebnerBasis> gb;
  try {
    for (std::size_t k = 0; k < mt.obs.size(); ++k)
      if (!zero_modulo(mt.obs[k].substitute(subst) - m.obs[k], t, gb)) return false;
  } catch (const algebra::ZeroDenominator&) {
    return false;
  }
  return true;
}

StateTransform compose(const StateTransform& outer, const StateTransform& inner) {
  StateTransform out;
  Map subst = inner.parameters;
  for (const auto& sm : inner.states)
    if (sm.solved) subst[sm.state] = *sm.solved;
  for (const auto& [p, e] : outer.parameters)
    out.parameters[p] = inner.parameters.empty() ? e : e.substitute(inner.parameters);
  out.root_params = inner.root_params;
  out.root_params.insert(out.root_params.end(), outer.root_params.begin(), outer.root_params.end());
  out.roots = inner.roots;
  out.roots.insert(out.roots.end(), outer.roots.begin(), outer.roots.end());
  out.relations = inner.relations;
  for (const auto& r : outer.relations)
    out.relations.push_back(algebra::primitive_part(algebra::substitute(r, inner.parameters).num()));
  for (const auto& sm : outer.states) {
    StateMap c{sm.state, algebra::primitive_part(algebra::substitute(sm.defining, subst).num()), std::nullopt};
    if (sm.solved) c.solved = sm.solved->substitute(subst);
    out.states.push_back(std::move(c));
  }
  return out;
}

ReducedModel reduce_dimension_linear_ansatz(const Model& m, const ioeq::IOEquations& eqs, const AnsatzOptions& opts) {
  std::size_t d = 0;
  unsigned top = 0;
  for (unsigned o : eqs.orders) {
    d += o;
    top = std::max(top, o);
  }
  if (d == 0 || d > m.states.size()) throw AnsatzFailed("target dimension " + std::to_string(d) + " out of range");
  const auto table = lie::lie_table(m, top);

  auto taken = specialize::identifiers(m);
  std::vector<VarId> ws;
  for (unsigned k = 1; ws.size() < d; ++k) {
    std::string name = "w" + std::to_string(k);
    if (!taken.count(name)) ws.push_back(algebra::intern_variable(name));
  }

  for (const auto& subset : combinations(m.states.size(), d, opts.max_candidates)) {
    Map phi;
    std::vector<RationalFunction> ansatz(m.states.size());
    for (std::size_t k = 0; k < d; ++k) ansatz[subset[k]] = RationalFunction::variable(ws[k]);
    for (std::size_t j = 0; j < m.states.size(); ++j) phi[m.states[j]] = ansatz[j];

    ReducedModel red;
    red.ansatz = ansatz;
    try {
      System sys;
      for (std::size_t j = 0; j < m.outputs.size(); ++j)
        for (unsigned i = 0; i < eqs.orders[j]; ++i)
          add_row(sys, table.entries[j][i].substitute(phi), table.entries[j][i], ws);
      red.transform.states = solve_states(sys, ws, {}, {}, opts.budget);
    } catch (const algebra::ZeroDenominator&) {
      continue;
    } catch (const NonZeroDimensional&) {
      continue;
    }
    if (!red.transform.solved()) continue;
    bool input_free = true;
    for (const auto& sm : red.transform.states)
      for (VarId v : sm.defining.variables()) input_free = input_free && !is_input_jet(v, m);
    if (!input_free) continue;

    Model& r = red.model;
    r.name = (m.name.empty() ? std::string("model") : m.name) + "_reduced";
    r.states = ws;
    r.params = m.params;
    r.inputs = m.inputs;
    r.outputs = m.outputs;
    r.constraints = m.constraints;
    try {
      for (const auto& sm : red.transform.states) {
        r.rhs.push_back(chain_rule(*sm.solved, m).substitute(phi));
      }
      for (const auto& g : m.obs) r.obs.push_back(g.substitute(phi));
    } catch (const algebra::ZeroDenominator&) {
      continue;
    }
    if (!check_closure(red.transform, m, r)) continue;

    auto io = ioeq::io_equations(r);
    bool same = io.equations.size() == eqs.equations.size();
    for (std::size_t k = 0; same && k < io.equations.size(); ++k)
      same = io.equations[k].terms == eqs.equations[k].terms;
    if (same) return red;
  }
  throw AnsatzFailed("no 0/1 linear ansatz of dimension " + std::to_string(d) + " reproduces the IO-equations");
}

}  // namespace idspec::transform
