#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "idspec/groebner/groebner.hpp"
#include "idspec/ioeq/ioeq.hpp"
#include "idspec/lie/lie.hpp"
#include "idspec/model/model.hpp"
#include "idspec/specialize/specialize.hpp"

namespace idspec::transform {

using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;
using model::Model;

IDSPEC_ERROR_TYPE(PreconditionObservability);
IDSPEC_ERROR_TYPE(NonZeroDimensional);
IDSPEC_ERROR_TYPE(InputDependence);
IDSPEC_ERROR_TYPE(AnsatzFailed);

struct StateMap {
  VarId state;         // new state
  Polynomial defining;  // P(w, x, params, roots), primitive
  std::optional<RationalFunction> solved;  // w = h(x, params, roots) when P is linear in w
};

/// New states as functions of the old ones. Old parameters stay symbolic;
/// the new model's parameters are expressions in them (and in root symbols
/// bound by `relations`).
struct StateTransform {
  std::vector<StateMap> states;
  std::unordered_map<VarId, RationalFunction> parameters;  // new param -> old params, roots
  std::vector<VarId> root_params;
  std::vector<VarId> roots;
  std::vector<Polynomial> relations;

  bool solved() const;
  /// Solved forms keyed by new state (pre: solved()).
  std::unordered_map<VarId, RationalFunction> solved_map() const;
};

/// Equates the Lie-table rows of the rank certificate and solves for the new
/// states over Q(params, x, u-jets), with root relations adjoined.
StateTransform solve_state_transform(const Model& m, const Model& mt, const lie::LieTable& lie_old,
                                     const lie::LieTable& lie_new, const specialize::Specialization* s = nullptr,
                                     const groebner::Budget& budget = {}, std::uint64_t seed = 1);

/// d/dt of every solved form (chain rule along m) equals the new right-hand
/// side at the solved forms, and the outputs agree; modulo the relations.
bool check_closure(const StateTransform& t, const Model& m, const Model& mt);
/// The derivative part of check_closure, one verdict per new state.
std::vector<bool> closure_by_state(const StateTransform& t, const Model& m, const Model& mt);

/// new(old(x)): `outer` maps states of `inner`'s target to a further model.
StateTransform compose(const StateTransform& outer, const StateTransform& inner);

struct ReducedModel {
  Model model;
  std::vector<RationalFunction> ansatz;  // aligned with the source states, linear in the new ones
  StateTransform transform;              // new states as functions of the source states
};

struct AnsatzOptions {
  groebner::Budget budget;
  std::size_t max_candidates = 2000;
};

/// Dimension reduction to sum of IO orders by a 0/1 linear ansatz.
ReducedModel reduce_dimension_linear_ansatz(const Model& m, const ioeq::IOEquations& eqs,
                                            const AnsatzOptions& opts = {});

}  // namespace idspec::transform
