#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "idspec/algebra/modular.hpp"
#include "idspec/errors.hpp"
#include "idspec/model/model.hpp"

namespace idspec::lie {

using algebra::Polynomial;
using algebra::RationalFunction;
using model::Model;
using algebra::VarId;

IDSPEC_ERROR_TYPE(DegeneratePoint);
IDSPEC_ERROR_TYPE(MinorVanishes);

/// entries[j][i] = i-th time derivative of output j as a rational function of
/// states, params and input jets.
struct LieTable {
  std::vector<std::vector<RationalFunction>> entries;
  unsigned max_order = 0;
};

LieTable lie_table(const Model& m, unsigned max_order);

/// One Lie derivative step: d/dt of f along the model, with input jets
/// advanced by one order.
RationalFunction lie_derivative(const Model& m, const RationalFunction& f);

/// Row ordering used by the Jacobian: derivative order first, then output.
struct RowIndex {
  std::size_t output;
  unsigned order;
  friend bool operator==(const RowIndex&, const RowIndex&) = default;
};

struct Jacobian {
  std::vector<RowIndex> rows;
  std::vector<VarId> columns;  // the states
  std::vector<std::vector<RationalFunction>> entries;
};

Jacobian jacobian(const Model& m, const LieTable& t);

struct RankCertificate {
  std::size_t rank = 0;
  std::vector<std::size_t> rows;  // indices into Jacobian::rows
  std::vector<std::size_t> cols;  // indices into Jacobian::columns
  algebra::ModPoint witness;
  std::size_t trials = 0;
  std::size_t resamples = 0;
};

/// Max rank over `trials` random points modulo 2^61-1, with a nonsingular
/// minor of that rank preferring the smallest row indices.
RankCertificate rank_probabilistic(const Jacobian& M, std::size_t trials, std::uint64_t seed);

/// Exact rank over the rational-function field (small matrices only).
std::size_t rank_symbolic(const Jacobian& M);

struct Minor {
  RationalFunction D;
  Polynomial D0;  // polynomial in the params
};

Minor minor_and_coefficient(const Model& m, const Jacobian& M, const RankCertificate& cert);

/// Determinant over the rational-function field (fraction-free Bareiss on the
/// row-cleared numerators).
RationalFunction determinant(const std::vector<std::vector<RationalFunction>>& rows);

/// Variables other than params: states and input jets, sorted by id.
std::vector<VarId> dynamic_variables(const Model& m, const RationalFunction& f);

}  // namespace idspec::lie
