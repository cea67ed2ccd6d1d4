#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idspec/algebra/expression.hpp"
#include "idspec/algebra/rational_function.hpp"

namespace idspec::model {

using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;

/// Parametric rational ODE system x' = f(x, params, u), y = g(x, params, u).
struct Model {
  std::string name;
  std::vector<VarId> states;
  std::vector<VarId> params;
  std::vector<VarId> inputs;
  std::vector<VarId> outputs;
  std::vector<RationalFunction> rhs;  // aligned with states
  std::vector<RationalFunction> obs;  // aligned with outputs
  /// Polynomial relations among params that must vanish (minimal polynomials
  /// of formal-root parameters). Empty for ordinary models.
  std::vector<Polynomial> constraints;

  std::size_t state_index(VarId v) const;  // throws std::out_of_range
  bool is_state(VarId v) const;
  bool is_param(VarId v) const;
  bool is_input(VarId v) const;

  friend bool operator==(const Model& a, const Model& b) = default;
};

/// Throws ParseError (syntax) or ValidationError (semantics).
Model parse_model(std::string_view source);
Model load_model(const std::string& path);

/// Canonical text; parse_model(render_model(m)) == m.
std::string render_model(const Model& m);

/// FNV-1a 64-bit hash of the canonical text, as 16 hex digits.
std::string model_digest(const Model& m);

/// Lcm of the parameter denominators of the coefficients of all right-hand
/// sides, each written over Q(params) with a denominator made monic in the
/// states and inputs. Primitive polynomial in the parameters.
Polynomial common_denominator(const Model& m);

/// Checks the invariants of Model; throws ValidationError (position 0:0).
void validate(const Model& m);

}  // namespace idspec::model
