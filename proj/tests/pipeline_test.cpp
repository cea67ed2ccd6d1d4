#include <gtest/gtest.h>

#include "idspec/algebra/text.hpp"
#include "idspec/pipeline/pipeline.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::pipeline;
using namespace idspec::testing;

namespace {

model::Model load(const std::string& name) {
  return model::load_model(std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode");
}

Options fast() {
  Options o;
  o.samples = 3;
  o.t_end = 1.0;
  return o;
}

TEST(Pipeline, JsonIsDeterministicWithoutTimings) {
  auto m = load("lv");
  auto a = to_json(run_reparametrize(m, fast()), false);
  auto b = to_json(run_reparametrize(m, fast()), false);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_FALSE(a.contains("timings"));
  EXPECT_EQ(a["schema"], kReportSchema);
}

TEST(Pipeline, EveryStageReportedOrSkipped) {
  auto j = to_json(run_reparametrize(load("lv"), fast()));
  for (const char* key : {"io_equations", "field", "rank_certificate", "minor_coefficient", "specialization",
                          "reparametrized_model", "transform", "verification", "timings"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_TRUE(j["skipped"].contains("reduction"));
  EXPECT_TRUE(j["verification"]["same_io"]);
  EXPECT_TRUE(j["verification"]["closure"]);
  EXPECT_LT(j["verification"]["numeric"]["max"].get<double>(), 1e-6);

  auto io = to_json(run_io(load("lv"), fast()));
  for (const char* stage : {"reduction", "specialization", "reparametrized_model", "transform", "verification"})
    EXPECT_TRUE(io["skipped"].contains(stage)) << stage;
}

TEST(Pipeline, LotkaVolterraReport) {
  auto r = run_reparametrize(load("lv"), fast());
  ASSERT_EQ(r.io.equations.size(), 1u);
  EXPECT_EQ(r.simplified_field.size(), 3u);
  EXPECT_EQ(r.specialization->value_of(var("b")), rf("1"));
  EXPECT_EQ(r.transform->states[0].solved, rf("x1"));
  EXPECT_EQ(r.transform->states[1].solved, rf("b*x2"));
  EXPECT_FALSE(r.local_not_global());
}

TEST(Pipeline, ExpSumIsLocalNotGlobal) {
  auto r = run_reparametrize(load("expsum"), fast());
  ASSERT_TRUE(r.local_not_global());
  auto j = to_json(r, false);
  EXPECT_TRUE(j["specialization"]["local_but_not_global"]);
  int roots = 0;
  for (const auto& v : j["specialization"]["values"])
    if (v["kind"] == "formal_root") {
      ++roots;
      EXPECT_EQ(v["degree"], 2);
    }
  EXPECT_EQ(roots, 2);
  EXPECT_TRUE(*r.same_io);
}

TEST(Pipeline, CrnWithoutReduceSkipsTransform) {
  Options o = fast();
  o.numeric = false;
  auto r = run_reparametrize(load("crn"), o);
  EXPECT_FALSE(r.observable);
  EXPECT_FALSE(r.transform);
  EXPECT_TRUE(r.skipped.count("transform"));
  EXPECT_TRUE(r.skipped.count("reduction"));
}

TEST(Pipeline, CrnReduceKeepsIoEquation) {
  Options o = fast();
  o.reduce = true;
  auto m = load("crn");
  auto r = run_reparametrize(m, o);
  ASSERT_TRUE(r.reduced);
  EXPECT_EQ(r.reduced->model.states.size(), 3u);
  auto io = ioeq::io_equations(r.reduced->model);
  EXPECT_EQ(ioeq::render(io.equations[0]), ioeq::render(r.io.equations[0]));
  ASSERT_TRUE(r.transform && r.transform->solved());
  EXPECT_TRUE(*r.closure);
  EXPECT_TRUE(r.numeric->passed(1e-6));
}

TEST(Pipeline, TransformJsonRoundTrip) {
  auto r = run_reparametrize(load("expsum"), fast());
  auto j = transform_to_json(*r.transform, r.model, *r.reparametrized, r.closure_states);
  auto back = transform_from_json(nlohmann::json::parse(j.dump()), r.model, *r.reparametrized);
  ASSERT_EQ(back.states.size(), r.transform->states.size());
  for (std::size_t i = 0; i < back.states.size(); ++i) {
    EXPECT_EQ(back.states[i].state, r.transform->states[i].state);
    EXPECT_EQ(back.states[i].solved, r.transform->states[i].solved);
  }
  EXPECT_EQ(back.roots, r.transform->roots);
  EXPECT_EQ(back.relations.size(), r.transform->relations.size());
  EXPECT_TRUE(transform::check_closure(back, r.model, *r.reparametrized));
}

TEST(Pipeline, DigestMismatchThrows) {
  auto r = run_reparametrize(load("lv"), fast());
  auto j = transform_to_json(*r.transform, r.model, *r.reparametrized, r.closure_states);
  EXPECT_THROW(transform_from_json(j, load("harmonic"), *r.reparametrized), DigestMismatch);
  EXPECT_THROW(transform_from_json(j, r.model, r.model), DigestMismatch);
  j["schema"] = "idspec.transform/0";
  EXPECT_THROW(transform_from_json(j, r.model, *r.reparametrized), SchemaError);
}

TEST(Pipeline, EmittedModelsReparse) {
  for (const char* name : {"lv", "harmonic", "expsum", "bilinear", "lv_input"}) {
    auto r = run_reparametrize(load(name), fast());
    auto back = model::parse_model(model::render_model(*r.reparametrized));
    EXPECT_EQ(model::model_digest(back), model::model_digest(*r.reparametrized)) << name;
    EXPECT_TRUE(specialize::verify_same_io(r.model, back, &*r.specialization)) << name;
  }
}

TEST(Pipeline, TinyBudgetThrows) {
  Options o = fast();
  o.budget_seconds = 1e-6;
  EXPECT_THROW(run_reparametrize(load("goodwin"), o), groebner::BudgetExceeded);
}

}  // namespace
