#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "idspec/groebner/groebner.hpp"
#include "idspec/lie/lie.hpp"
#include "idspec/model/model.hpp"

namespace idspec::ioeq {

using algebra::Monomial;
using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;
using model::Model;

IDSPEC_ERROR_TYPE(EliminationFailed);
IDSPEC_ERROR_TYPE(MembershipAssertion);

/// Polynomial in jet variables with coefficients in Q(params). Terms are
/// sorted by the lexicographic order induced by `ranking` (highest first),
/// and the leading coefficient is 1.
struct DiffPolynomial {
  std::size_t output = 0;
  unsigned order = 0;          // order in the output's own jets
  std::vector<VarId> ranking;  // jet variables, highest rank first
  std::vector<std::pair<Monomial, RationalFunction>> terms;

  /// Denominators cleared, primitive over Z[params][jets].
  Polynomial to_polynomial() const;
  std::vector<RationalFunction> coefficients() const;
};

/// Builds the monic DiffPolynomial of `p` (a polynomial in jets and params).
DiffPolynomial make_monic(const Polynomial& p, std::vector<VarId> ranking, std::size_t output);

std::string render(const DiffPolynomial& e, const std::vector<VarId>& param_precedence = {});

struct IOEquations {
  std::vector<DiffPolynomial> equations;
  std::vector<unsigned> orders;  // IO order per output
  /// Outputs whose elimination ideal had several generators involving the
  /// output; all of them are kept in `equations`.
  std::vector<std::size_t> non_hypersurface;
  std::size_t pairs = 0;
};

struct IOOptions {
  groebner::Budget budget;
  std::uint64_t seed = 1;
  std::size_t trials = 3;
  /// Solve for states occurring linearly before the Groebner elimination.
  bool solve_linear = true;
};

/// Per-output order of the first algebraic relation, by incremental
/// Jacobian rank modulo the prime (earlier outputs taken to full order).
std::vector<unsigned> io_orders(const Model& m, const lie::LieTable& t, std::uint64_t seed, std::size_t trials);

IOEquations io_equations(const Model& m, const IOOptions& opts = {});

/// Non-constant coefficients of the equations, sign-normalized, duplicates
/// removed, in order of appearance.
std::vector<RationalFunction> field_generators(const std::vector<DiffPolynomial>& eqs);

/// Membership in Q(gens) via the ideal of the duplicated parameter tuple.
/// The basis is computed once; contains() only reduces.
class FieldOracle {
 public:
  FieldOracle(std::vector<RationalFunction> gens, std::vector<VarId> params, const groebner::Budget& budget = {});
  bool contains(const RationalFunction& h) const;
  const std::vector<RationalFunction>& generators() const { return gens_; }

 private:
  Polynomial binomial(const RationalFunction& h) const;
  std::vector<RationalFunction> gens_;
  std::vector<VarId> params_;
  std::unordered_map<VarId, VarId> hat_;
  std::vector<VarId> hat_vars_;
  std::optional<groebner::GroebnerBasis> gb_;
};

bool field_membership(const RationalFunction& h, const std::vector<RationalFunction>& gens,
                      const groebner::Budget& budget = {});

/// Irredundant generating set of Q(raw), preferring low-complexity
/// candidates. Throws MembershipAssertion if mutual membership fails.
std::vector<RationalFunction> simplify_generators(const std::vector<RationalFunction>& raw,
                                                  const std::vector<VarId>& params,
                                                  const groebner::Budget& budget = {});

/// Scales to a primitive numerator with positive leading coefficient.
RationalFunction normalize_generator(const RationalFunction& f);

bool observability_condition(const IOEquations& eqs, const Model& m);

}  // namespace idspec::ioeq
