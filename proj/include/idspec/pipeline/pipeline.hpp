#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "idspec/verify/verify.hpp"

namespace idspec::pipeline {

using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;
using model::Model;

IDSPEC_ERROR_TYPE(DigestMismatch);
IDSPEC_ERROR_TYPE(SchemaError);

inline constexpr const char* kReportSchema = "idspec.report/1";
inline constexpr const char* kTransformSchema = "idspec.transform/1";

struct Options {
  std::uint64_t seed = 1;
  double budget_seconds = 600.0;
  std::size_t trials = 3;
  bool reduce = false;
  bool numeric = true;
  double tol = 1e-6;
  std::size_t samples = 10;
  double t_end = 5.0;
  double step = 1e-3;
};

/// Stage results of one run; a stage that did not run has a reason in `skipped`.
struct Report {
  Model model;
  std::string digest;
  std::uint64_t seed = 1;

  ioeq::IOEquations io;
  std::vector<RationalFunction> raw_field;
  std::vector<RationalFunction> simplified_field;
  bool observable = false;

  std::optional<transform::ReducedModel> reduced;
  std::optional<lie::RankCertificate> rank;
  std::vector<lie::RowIndex> rank_rows;
  std::optional<Polynomial> D0;
  std::optional<specialize::Specialization> specialization;
  std::optional<Model> reparametrized;
  std::optional<transform::StateTransform> transform;
  std::vector<bool> closure_states;
  std::optional<bool> closure;
  std::optional<bool> same_io;
  std::optional<verify::CrossValidation> numeric;

  std::map<std::string, std::string> skipped;
  std::vector<std::pair<std::string, double>> timings;

  /// Formal roots in the specialization: locally but not globally identifiable.
  bool local_not_global() const { return specialization && specialization->has_formal_roots(); }
  /// The model the specialization was computed for (reduced or original).
  const Model& working_model() const { return reduced ? reduced->model : model; }
};

/// IO-equations and identifiable field only.
Report run_io(const Model& m, const Options& opts);

/// Full pipeline. Throws groebner::BudgetExceeded and
/// specialize::NoSolutionFound; a missing transform is recorded in `skipped`.
Report run_reparametrize(const Model& m, const Options& opts);

nlohmann::json to_json(const Report& r, bool with_timings = true);

/// Transform artifact consumed by `verify`.
nlohmann::json transform_to_json(const transform::StateTransform& t, const Model& m, const Model& mt,
                                 const std::vector<bool>& closure_states);
/// Checks the digests against the two models; throws DigestMismatch.
transform::StateTransform transform_from_json(const nlohmann::json& j, const Model& m, const Model& mt);

}  // namespace idspec::pipeline
