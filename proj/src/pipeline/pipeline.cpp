#include "idspec/pipeline/pipeline.hpp"

#include <chrono>

#include "idspec/algebra/expression.hpp"
#include "idspec/algebra/text.hpp"

namespace idspec::pipeline {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

class Stages {
 public:
  Stages(Report& r, double budget) : report_(r), budget_(budget), start_(Clock::now()), deadline_(budget) {}

  groebner::Budget budget() const {
    groebner::Budget b;
    b.max_seconds = std::max(1e-3, budget_ - elapsed(start_));
    return b;
  }

  template <class F>
  auto run(const char* name, F&& f) {
    const auto t0 = Clock::now();
    struct Record {
      Report& r;
      const char* name;
      Clock::time_point t0;
      ~Record() { r.timings.emplace_back(name, elapsed(t0)); }
    } record{report_, name, t0};
    auto result = f();
    if (elapsed(start_) > budget_)
      throw groebner::BudgetExceeded("pipeline budget of " + std::to_string(budget_) + " s exhausted after stage " + name);
    return result;
  }

 private:
  static double elapsed(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }
  Report& report_;
  double budget_;
  Clock::time_point start_;
  algebra::DeadlineScope deadline_;
};

std::string text(const RationalFunction& f) { return algebra::render(f); }
std::string text(const Polynomial& p) { return algebra::render(p); }
std::string name(VarId v) { return algebra::variable_name(v); }

ioeq::IOOptions io_options(const Options& opts, const Stages& st) {
  ioeq::IOOptions o;
  o.budget = st.budget();
  o.seed = opts.seed;
  o.trials = opts.trials;
  return o;
}

void io_stages(Report& r, const Options& opts, Stages& st) {
  r.io = st.run("io_equations", [&] { return ioeq::io_equations(r.model, io_options(opts, st)); });
  r.raw_field = ioeq::field_generators(r.io.equations);
  r.simplified_field = st.run("field", [&] {
    return ioeq::simplify_generators(r.raw_field, r.model.params, st.budget());
  });
  r.observable = ioeq::observability_condition(r.io, r.model);
}

json io_json(const Report& r) {
  json eqs = json::array();
  for (const auto& e : r.io.equations)
    eqs.push_back({{"output", name(r.model.outputs[e.output])},
                   {"order", e.order},
                   {"text", ioeq::render(e, r.model.params)}});
  return eqs;
}

json field_json(const std::vector<RationalFunction>& gens) {
  json out = json::array();
  for (const auto& g : gens) out.push_back(text(g));
  return out;
}

json specialization_json(const specialize::Specialization& s) {
  json betas = json::array();
  for (const auto& b : s.betas) betas.push_back({{"symbol", name(b.symbol)}, {"generator", text(b.generator)}});
  json values = json::array();
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    const auto& v = s.values[i];
    if (v.kind == specialize::AlgebraicValue::Kind::Explicit)
      values.push_back({{"param", name(s.params[i])}, {"kind", "explicit"}, {"value", text(v.value)}});
    else
      values.push_back({{"param", name(s.params[i])},
                        {"kind", "formal_root"},
                        {"minimal_polynomial", text(v.minimal_polynomial)},
                        {"degree", v.minimal_polynomial.degree(v.root)}});
  }
  json relations = json::array();
  for (const auto& p : s.relations) relations.push_back(text(p));
  json free = json::array();
  for (VarId v : s.free) free.push_back(name(v));
  return {{"betas", betas}, {"values", values}, {"relations", relations}, {"free", free}, {"attempts", s.attempts}};
}

}  // namespace

Report run_io(const Model& m, const Options& opts) {
  Report r;
  r.model = m;
  r.digest = model::model_digest(m);
  r.seed = opts.seed;
  Stages st(r, opts.budget_seconds);
  io_stages(r, opts, st);
  for (const char* stage : {"reduction", "specialization", "reparametrized_model", "transform", "verification"})
    r.skipped[stage] = "not requested (io only)";
  return r;
}

Report run_reparametrize(const Model& m, const Options& opts) {
  Report r;
  r.model = m;
  r.digest = model::model_digest(m);
  r.seed = opts.seed;
  Stages st(r, opts.budget_seconds);
  io_stages(r, opts, st);

  if (r.observable) {
    r.skipped["reduction"] = "observability condition holds";
  } else if (!opts.reduce) {
    r.skipped["reduction"] = "observability condition false; --reduce not given";
  } else {
    try {
      transform::AnsatzOptions ao;
      ao.budget = st.budget();
      r.reduced = st.run("reduction", [&] { return transform::reduce_dimension_linear_ansatz(m, r.io, ao); });
    } catch (const transform::AnsatzFailed& e) {
      r.skipped["reduction"] = e.what();
    }
  }
  const Model& w = r.working_model();
  const auto n = static_cast<unsigned>(w.states.size());

  auto lt = st.run("rank", [&] { return lie::lie_table(w, n); });
  auto J = lie::jacobian(w, lt);
  r.rank = lie::rank_probabilistic(J, opts.trials, opts.seed);
  for (std::size_t i : r.rank->rows) r.rank_rows.push_back(J.rows[i]);
  r.D0 = lie::minor_and_coefficient(w, J, *r.rank).D0;

  const auto C = model::common_denominator(w);
  r.specialization = st.run("specialization", [&] {
    auto betas = specialize::name_generators(w, r.simplified_field);
    specialize::SolveOptions so;
    so.budget = st.budget();
    so.seed = opts.seed;
    return specialize::solve_specialization(specialize::build_system(w, betas, *r.D0, C), so);
  });
  r.reparametrized = specialize::apply_specialization(w, *r.specialization);
  r.same_io = st.run("same_io", [&] {
    return specialize::verify_same_io(w, *r.reparametrized, &*r.specialization, io_options(opts, st));
  });

  if (r.rank->rank < n) {
    r.skipped["transform"] = "observability condition false (IO order " + std::to_string(r.rank->rank) +
                             " < dimension " + std::to_string(n) + "); rerun with --reduce";
  } else {
    try {
      auto t = st.run("transform", [&] {
        auto lt_new = lie::lie_table(*r.reparametrized, n);
        return transform::solve_state_transform(w, *r.reparametrized, lt, lt_new, &*r.specialization, st.budget(),
                                                opts.seed);
      });
      bool closes = transform::check_closure(t, w, *r.reparametrized);
      if (r.reduced) t = transform::compose(t, r.reduced->transform);
      r.closure_states = transform::closure_by_state(t, m, *r.reparametrized);
      r.closure = closes && transform::check_closure(t, m, *r.reparametrized);
      r.transform = std::move(t);
      if (!r.transform->solved()) r.skipped["transform"] = "defining polynomial of degree > 1; no solved form";
    } catch (const transform::PreconditionObservability& e) {
      r.skipped["transform"] = e.what();
    } catch (const transform::NonZeroDimensional& e) {
      r.skipped["transform"] = e.what();
    } catch (const transform::InputDependence& e) {
      r.skipped["transform"] = e.what();
    }
  }

  if (!opts.numeric) {
    r.skipped["numeric"] = "disabled";
  } else if (!r.transform || !r.transform->solved()) {
    r.skipped["numeric"] = "no solved transform";
  } else {
    verify::SimConfig cfg;
    cfg.seed = opts.seed;
    cfg.samples = opts.samples;
    cfg.t_end = opts.t_end;
    cfg.step = opts.step;
    cfg.avoid = {*r.D0 * C};
    try {
      r.numeric = st.run("numeric", [&] { return verify::cross_validate(m, *r.reparametrized, *r.transform, cfg); });
    } catch (const verify::SamplingFailed& e) {
      r.skipped["numeric"] = e.what();
    }
  }
  return r;
}

json to_json(const Report& r, bool with_timings) {
  json j;
  j["schema"] = kReportSchema;
  j["seed"] = r.seed;
  j["model"] = {{"name", r.model.name}, {"digest", r.digest}};
  j["io_equations"] = io_json(r);
  j["non_hypersurface"] = r.io.non_hypersurface;
  j["observability_condition"] = r.observable;
  j["field"] = {{"raw", field_json(r.raw_field)}, {"simplified", field_json(r.simplified_field)}};
  if (r.reduced) {
    json ansatz = json::object();
    for (std::size_t i = 0; i < r.model.states.size(); ++i) ansatz[name(r.model.states[i])] = text(r.reduced->ansatz[i]);
    json map = json::object();
    for (const auto& sm : r.reduced->transform.states) map[name(sm.state)] = text(*sm.solved);
    j["reduction"] = {{"dimension", r.reduced->model.states.size()},
                      {"model", model::render_model(r.reduced->model)},
                      {"ansatz", ansatz},
                      {"transform", map}};
  }
  if (r.rank) {
    json rows = json::array();
    for (const auto& row : r.rank_rows)
      rows.push_back({{"output", name(r.working_model().outputs[row.output])}, {"order", row.order}});
    json cols = json::array();
    for (std::size_t c : r.rank->cols) cols.push_back(name(r.working_model().states[c]));
    std::map<std::string, std::uint64_t> witness;
    for (const auto& [v, x] : r.rank->witness) witness[name(v)] = x;
    j["rank_certificate"] = {{"rank", r.rank->rank}, {"rows", rows}, {"columns", cols}, {"witness", witness},
                             {"trials", r.rank->trials}, {"resamples", r.rank->resamples}};
  }
  if (r.D0) j["minor_coefficient"] = text(*r.D0);
  if (r.specialization) {
    j["specialization"] = specialization_json(*r.specialization);
    j["specialization"]["local_but_not_global"] = r.local_not_global();
    if (r.local_not_global())
      j["specialization"]["note"] =
          "formal roots: the reparametrization is locally but not globally identifiable";
  }
  if (r.reparametrized)
    j["reparametrized_model"] = {{"text", model::render_model(*r.reparametrized)},
                                 {"digest", model::model_digest(*r.reparametrized)}};
  if (r.transform && r.reparametrized)
    j["transform"] = transform_to_json(*r.transform, r.model, *r.reparametrized, r.closure_states);
  json ver = json::object();
  if (r.same_io) ver["same_io"] = *r.same_io;
  if (r.closure) ver["closure"] = *r.closure;
  if (r.numeric) {
    ver["numeric"] = verify::to_json(*r.numeric);
    ver["numeric"]["max"] = r.numeric->max();
  }
  if (!ver.empty()) j["verification"] = ver;
  json skipped = json::object();
  for (const auto& [stage, reason] : r.skipped) skipped[stage] = reason;
  j["skipped"] = skipped;
  if (with_timings) {
    json t = json::object();
    for (const auto& [stage, secs] : r.timings) t[stage] = secs;
    j["timings"] = t;
  }
  return j;
}

json transform_to_json(const transform::StateTransform& t, const Model& m, const Model& mt,
                       const std::vector<bool>& closure_states) {
  json states = json::array();
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    const auto& sm = t.states[i];
    json s = {{"state", name(sm.state)}, {"defining", text(sm.defining)}};
    s["solved"] = sm.solved ? json(text(*sm.solved)) : json(nullptr);
    s["closure"] = i < closure_states.size() ? closure_states[i] : false;
    states.push_back(std::move(s));
  }
  std::map<std::string, std::string> params;
  for (const auto& [p, e] : t.parameters) params[name(p)] = text(e);
  json roots = json::array();
  for (std::size_t i = 0; i < t.roots.size(); ++i)
    roots.push_back({{"symbol", name(t.roots[i])}, {"param", name(t.root_params[i])}});
  json relations = json::array();
  for (const auto& p : t.relations) relations.push_back(text(p));
  return {{"schema", kTransformSchema},
          {"old_model", {{"name", m.name}, {"digest", model::model_digest(m)}}},
          {"new_model", {{"name", mt.name}, {"digest", model::model_digest(mt)}}},
          {"states", states},
          {"parameters", params},
          {"roots", roots},
          {"relations", relations}};
}

transform::StateTransform transform_from_json(const json& j, const Model& m, const Model& mt) {
  try {
    if (j.at("schema") != kTransformSchema) throw SchemaError("unknown transform schema");
    if (j.at("old_model").at("digest") != model::model_digest(m))
      throw DigestMismatch("transform was computed for a different original model");
    if (j.at("new_model").at("digest") != model::model_digest(mt))
      throw DigestMismatch("transform was computed for a different reparametrized model");
    transform::StateTransform t;
    auto parse = [](const json& s) { return algebra::parse_expression(s.get<std::string>()); };
    for (const auto& s : j.at("states")) {
      transform::StateMap sm{algebra::intern_variable(s.at("state").get<std::string>()), parse(s.at("defining")).num(),
                             std::nullopt};
      if (!s.at("solved").is_null()) sm.solved = parse(s.at("solved"));
      t.states.push_back(std::move(sm));
    }
    for (const auto& [p, e] : j.at("parameters").items()) t.parameters[algebra::intern_variable(p)] = parse(e);
    for (const auto& r : j.at("roots")) {
      t.roots.push_back(algebra::intern_variable(r.at("symbol").get<std::string>()));
      t.root_params.push_back(algebra::intern_variable(r.at("param").get<std::string>()));
    }
    for (const auto& p : j.at("relations")) t.relations.push_back(parse(p).num());
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed transform JSON: ") + e.what());
  }
}

}  // namespace idspec::pipeline
