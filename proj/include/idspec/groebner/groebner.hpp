#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "idspec/algebra/deadline.hpp"
#include "idspec/algebra/rational_function.hpp"
#include "idspec/errors.hpp"
#include "idspec/groebner/order.hpp"

namespace idspec::groebner {

using algebra::Monomial;
using algebra::Polynomial;
using algebra::RationalFunction;

using algebra::BudgetExceeded;

enum class Selection { Normal, Sugar };

struct Budget {
  std::size_t max_pairs = 100000;
  double max_seconds = 600.0;
  /// Optional diagnostics stream: pairs processed, basis and queue sizes.
  std::ostream* trace = nullptr;
  Selection selection = Selection::Normal;
};

/// Generators live in Q[params][vars]; the coefficient field is Q(params)
/// (plain Q when `parameters` is empty). Parameters never appear in the
/// monomial order.
struct Ideal {
  std::vector<Polynomial> generators;
  std::vector<VarId> parameters;
};

struct BasisData;
class GroebnerBasis;
GroebnerBasis make_basis(std::shared_ptr<const BasisData>, const MonomialOrder&, std::size_t);

class GroebnerBasis {
 public:
  /// Elements are primitive in Z[params][vars] and sorted by increasing
  /// leading monomial.
  const std::vector<Polynomial>& elements() const { return elements_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<VarId>& parameters() const { return parameters_; }
  bool reduced() const { return reduced_; }
  bool is_unit() const;
  std::size_t size() const { return elements_.size(); }

  /// Leading monomial in the ordered variables.
  const Monomial& leading_monomial(std::size_t i) const { return leads_[i]; }
  /// Leading coefficient as a polynomial in the parameters.
  const Polynomial& leading_coefficient(std::size_t i) const { return lead_coeffs_[i]; }
  /// Element i divided by its leading coefficient: (monomial, coefficient)
  /// pairs in canonical monomial order.
  std::vector<std::pair<Monomial, RationalFunction>> monic(std::size_t i) const;

  std::size_t pairs_processed() const { return pairs_processed_; }
  const std::shared_ptr<const BasisData>& data() const { return data_; }

 private:
  friend GroebnerBasis make_basis(std::shared_ptr<const BasisData>, const MonomialOrder&, std::size_t);
  std::vector<Polynomial> elements_;
  std::vector<Monomial> leads_;
  std::vector<Polynomial> lead_coeffs_;
  MonomialOrder order_;
  std::vector<VarId> parameters_;
  bool reduced_ = false;
  std::size_t pairs_processed_ = 0;
  std::shared_ptr<const BasisData> data_;
};

/// Reduced Groebner basis. Throws BudgetExceeded.
GroebnerBasis buchberger(const Ideal& ideal, const MonomialOrder& order, const Budget& budget = {});

/// Fully reduced remainder, exact over Q(params): p - result lies in the
/// ideal and no term of the result is divisible by a leading monomial.
RationalFunction normal_form(const Polynomial& p, const GroebnerBasis& g);
bool reduces_to_zero(const Polynomial& p, const GroebnerBasis& g);

/// Called with every basis buchberger() returns; empty to disable.
/// Not thread-safe.
using BasisObserver = std::function<void(const GroebnerBasis&)>;
void set_basis_observer(BasisObserver f);

/// Direct check that every S-polynomial of the basis reduces to zero.
bool s_polynomials_reduce_to_zero(const GroebnerBasis& g);

/// I : f^infinity via one Rabinowitsch variable, eliminated immediately.
Ideal saturate(const Ideal& ideal, const Polynomial& f, const Budget& budget = {});

/// I intersected with the subring free of `vars`, computed with a block
/// order `vars` > rest (rest under grevlex by variable id).
Ideal eliminate(const Ideal& ideal, std::span<const VarId> vars, const Budget& budget = {});
/// Same, returning the basis of the whole ideal under `order` (which must be
/// an elimination order for `vars`) together with the filtered generators.
std::pair<GroebnerBasis, Ideal> eliminate_with(const Ideal& ideal, std::span<const VarId> vars,
                                               const MonomialOrder& order, const Budget& budget = {});

/// Variables of the ideal that are not parameters, sorted by id.
std::vector<VarId> ring_variables(const Ideal& ideal);

}  // namespace idspec::groebner
