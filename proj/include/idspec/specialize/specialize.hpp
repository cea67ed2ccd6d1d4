#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "idspec/groebner/groebner.hpp"
#include "idspec/ioeq/ioeq.hpp"
#include "idspec/model/model.hpp"

namespace idspec::specialize {

using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;
using model::Model;

IDSPEC_ERROR_TYPE(NoSolutionFound);
IDSPEC_ERROR_TYPE(InconsistentSystem);
IDSPEC_ERROR_TYPE(DenominatorVanishes);

/// Symbol standing for one generator of the identifiable field. A generator
/// that is a single parameter keeps that parameter's name.
struct BetaSymbol {
  VarId symbol;
  RationalFunction generator;  // in the original parameters
};

/// p_i(unknowns) - beta_i = 0 (denominators cleared) and D0*C != 0.
struct SpecializationSystem {
  std::vector<VarId> params;    // original parameters
  std::vector<VarId> unknowns;  // one per parameter, same order
  std::vector<BetaSymbol> betas;
  std::vector<Polynomial> equations;
  Polynomial inequation;
};

/// Names the betas (fresh B1, B2, ... avoiding every identifier of `m`).
std::vector<BetaSymbol> name_generators(const Model& m, const std::vector<RationalFunction>& simplified);

SpecializationSystem build_system(const Model& m, const std::vector<BetaSymbol>& betas, const Polynomial& D0,
                                  const Polynomial& C);

/// Substituting unknowns = params and betas = generators satisfies the
/// equations and the inequation.
bool witness_holds(const SpecializationSystem& sys);

struct AlgebraicValue {
  enum class Kind { Explicit, FormalRoot };
  Kind kind = Kind::Explicit;
  RationalFunction value;          // Explicit: in the beta symbols
  Polynomial minimal_polynomial;   // FormalRoot: univariate in `root` over Q(betas)
  VarId root = 0;                  // FormalRoot: symbol of the root (the parameter's name)
};

struct Specialization {
  std::vector<VarId> params;
  std::vector<AlgebraicValue> values;
  std::vector<BetaSymbol> betas;
  /// Reduced lex basis tying the formal roots together (in root symbols,
  /// coefficients in the betas). Empty when every value is explicit.
  std::vector<Polynomial> relations;
  std::vector<VarId> free;  // parameters taken from the trial list
  std::size_t attempts = 0;

  bool has_formal_roots() const;
  /// Value of parameter p as a rational function of betas and root symbols.
  RationalFunction value_of(VarId p) const;
};

struct SolveOptions {
  groebner::Budget budget;
  std::size_t max_attempts = 64;
  std::uint64_t seed = 1;
};

/// Trial constants and beta products, in preference order.
std::vector<RationalFunction> trial_values(const std::vector<BetaSymbol>& betas);

Specialization solve_specialization(const SpecializationSystem& sys, const SolveOptions& opts = {});

/// Equations vanish and the inequation does not, modulo the relations.
bool verify_specialization(const SpecializationSystem& sys, const Specialization& s);

/// States renamed w1..wn, parameters replaced by their values; formal roots
/// stay parameters, with their minimal polynomials and relations as
/// constraints.
Model apply_specialization(const Model& m, const Specialization& s);

/// The reparametrized model's parameters over the original ones. Betas map
/// to their generators. Each formal root gets a fresh symbol `<param>_root`,
/// avoiding `taken`, and the roots are tied together by `relations`
/// (coefficients in the original parameters).
struct OriginalFrame {
  std::unordered_map<VarId, RationalFunction> substitution;  // new param -> expression
  std::vector<VarId> root_params;  // parameters of the new model that are roots
  std::vector<VarId> roots;        // their fresh symbols, same order
  std::vector<Polynomial> relations;
};

OriginalFrame original_frame(const Specialization& s, const std::set<std::string>& taken);

/// Every identifier of the model (states, params, inputs, outputs).
std::set<std::string> identifiers(const Model& m);

/// Compares monic IO-equations coefficientwise. With a specialization the
/// betas of `mt` are re-expressed in the original parameters and formal-root
/// coefficients are compared modulo the relations.
bool verify_same_io(const Model& m, const Model& mt, const Specialization* s = nullptr,
                    const ioeq::IOOptions& opts = {});

}  // namespace idspec::specialize
