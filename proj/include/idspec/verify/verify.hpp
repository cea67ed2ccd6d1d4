#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idspec/ioeq/ioeq.hpp"
#include "idspec/model/model.hpp"
#include "idspec/transform/transform.hpp"

namespace idspec::verify {

using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;
using model::Model;

IDSPEC_ERROR_TYPE(DenominatorHit);
IDSPEC_ERROR_TYPE(NonFinite);
IDSPEC_ERROR_TYPE(NoRealRoot);
IDSPEC_ERROR_TYPE(SamplingFailed);

using Values = std::unordered_map<VarId, double>;

/// A rational function compiled for repeated floating-point evaluation.
class NumericFunction {
 public:
  NumericFunction() = default;
  explicit NumericFunction(const RationalFunction& f);
  /// Throws DenominatorHit when the denominator evaluates to zero.
  double operator()(const Values& at) const;

 private:
  struct Term {
    double coeff;
    std::vector<std::pair<VarId, std::uint32_t>> powers;
  };
  static double eval(const std::vector<Term>& terms, const Values& at);
  std::vector<Term> num_, den_;
};

/// coeff * t^power * exp(rate*t) * cos(freq*t), or sin when `sine`.
struct SignalTerm {
  double coeff = 0;
  unsigned power = 0;
  double rate = 0;
  double freq = 0;
  bool sine = false;
};

/// Finite sum of SignalTerms; closed under differentiation.
struct Signal {
  std::vector<SignalTerm> terms;

  double operator()(double t) const;
  Signal derivative() const;
  /// Constant plus a sine plus a damped cosine, coefficients k/4.
  static Signal random(std::mt19937_64& rng);
};

struct SimConfig {
  double t_end = 5.0;
  double step = 1e-3;
  std::pair<double, double> param_box{1.0, 2.0};
  std::pair<double, double> state_box{1.0, 2.0};
  /// Missing inputs get Signal::random from the seed.
  std::unordered_map<VarId, Signal> inputs;
  std::uint64_t seed = 1;
  std::size_t samples = 10;
  /// Polynomials in params (and states at t = 0) that must not vanish at a
  /// sample, typically D0*C; |value| below 1e-9 triggers a resample.
  std::vector<Polynomial> avoid;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;   // [grid][state]
  std::vector<std::vector<double>> outputs;  // [grid][output]
};

/// Input signals for `m`: cfg.inputs, completed with seeded random ones.
std::unordered_map<VarId, Signal> input_signals(const Model& m, const SimConfig& cfg);

/// Classical fixed-step RK4 on the uniform grid 0, step, ..., t_end.
Trajectory integrate(const Model& m, const Values& params, const Values& x0, const SimConfig& cfg);

/// Real roots of sum c[i] x^i in increasing order (bisection on intervals
/// between roots of the derivative, then Newton polishing).
std::vector<double> real_roots(const std::vector<double>& coeffs);

struct SampleResult {
  Values params;      // old parameters
  Values new_params;  // parameters of the new model
  Values roots;       // numeric formal roots
  std::vector<std::size_t> root_indices;  // index among the real roots, increasing order
  Values x0, w0;
  std::vector<double> deviation;  // per output, max over the grid
};

struct CrossValidation {
  std::vector<SampleResult> samples;
  std::vector<double> max_deviation;  // per output
  std::size_t resamples = 0;

  double max() const;
  bool passed(double tol) const { return max() < tol; }
};

/// Integrates old and new models from matched initial conditions on sampled
/// parameters and compares the outputs.
CrossValidation cross_validate(const Model& m, const Model& mt, const transform::StateTransform& t,
                               const SimConfig& cfg);

/// Max deviation (over outputs) of one sample at step, step/2, ... (levels+1 values).
std::vector<double> step_halving(const Model& m, const Model& mt, const transform::StateTransform& t,
                                 const SimConfig& cfg, unsigned levels = 3);

struct Residual {
  std::vector<double> max_normalized;  // per equation
  double max() const;
};

/// |E| along a trajectory with output jets from the Lie table, divided by
/// the largest term magnitude.
Residual io_residual(const Model& m, const std::vector<ioeq::DiffPolynomial>& eqs, const SimConfig& cfg,
                     std::size_t stride = 10);

void write_csv(std::ostream& out, const Model& m, const Trajectory& traj);
nlohmann::json to_json(const CrossValidation& cv);

}  // namespace idspec::verify
