#include <gtest/gtest.h>

#include "idspec/algebra/text.hpp"
#include "idspec/lie/lie.hpp"
#include "idspec/specialize/specialize.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::specialize;
using namespace idspec::testing;

namespace {

model::Model load(const std::string& name) {
  return model::load_model(std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode");
}

struct Pipeline {
  model::Model m;
  std::vector<BetaSymbol> betas;
  SpecializationSystem sys;
  Specialization spec;
  model::Model mt;
};

Pipeline run(const std::string& name) {
  Pipeline p;
  p.m = load(name);
  auto io = ioeq::io_equations(p.m);
  auto simp = ioeq::simplify_generators(ioeq::field_generators(io.equations), p.m.params);
  auto t = lie::lie_table(p.m, static_cast<unsigned>(p.m.states.size()));
  auto J = lie::jacobian(p.m, t);
  auto minor = lie::minor_and_coefficient(p.m, J, lie::rank_probabilistic(J, 3, 1));
  p.betas = name_generators(p.m, simp);
  p.sys = build_system(p.m, p.betas, minor.D0, model::common_denominator(p.m));
  p.spec = solve_specialization(p.sys);
  p.mt = apply_specialization(p.m, p.spec);
  return p;
}

std::string beta_name(const Pipeline& p, const char* generator) {
  for (const auto& b : p.betas)
    if (b.generator == rf(generator)) return variable_name(b.symbol);
  return "?";
}

std::size_t formal_roots(const Specialization& s) {
  std::size_t n = 0;
  for (const auto& v : s.values) n += v.kind == AlgebraicValue::Kind::FormalRoot;
  return n;
}

TEST(BuildSystem, ExpSum) {
  auto m = load("expsum");
  auto betas = name_generators(m, {rf("a + b"), rf("a*b")});
  auto sys = build_system(m, betas, poly("b - a"), Polynomial(1));
  ASSERT_EQ(sys.equations.size(), 2u);
  EXPECT_EQ(render(sys.equations[0]), "B1 - a@ - b@");
  EXPECT_EQ(render(sys.equations[1]), "-a@*b@ + B2");
  EXPECT_EQ(render(sys.inequation), "-a@ + b@");
  EXPECT_TRUE(witness_holds(sys));
}

TEST(BuildSystem, LotkaVolterraKeepsParameterNames) {
  auto m = load("lv");
  auto betas = name_generators(m, {rf("a"), rf("c"), rf("d")});
  EXPECT_EQ(variable_name(betas[0].symbol), "a");
  auto sys = build_system(m, betas, poly("-b"), Polynomial(1));
  EXPECT_EQ(render(sys.equations[0]), "a - a@");
  EXPECT_EQ(render(sys.inequation), "-b@");
  EXPECT_TRUE(witness_holds(sys));
}

TEST(BuildSystem, FreshNamesAvoidModelIdentifiers) {
  auto m = model::parse_model("states B1\nparams p, q\noutputs y\nB1' = p*q*B1\ny = B1\n");
  auto betas = name_generators(m, {rf("p*q")});
  EXPECT_EQ(variable_name(betas[0].symbol), "B2");
}

TEST(Solve, Harmonic) {
  auto p = run("harmonic");
  EXPECT_EQ(p.spec.value_of(var("a")), rf(beta_name(p, "a*b")));
  EXPECT_EQ(p.spec.value_of(var("b")), rf("1"));
  EXPECT_TRUE(verify_specialization(p.sys, p.spec));
  EXPECT_EQ(p.mt.rhs[0], RationalFunction::variable(var(beta_name(p, "a*b"))) * rf("w2"));
  EXPECT_EQ(p.mt.rhs[1], rf("w1"));
  EXPECT_TRUE(verify_same_io(p.m, p.mt, &p.spec));
}

TEST(Solve, LotkaVolterra) {
  auto p = run("lv");
  EXPECT_EQ(p.spec.value_of(var("a")), rf("a"));
  EXPECT_EQ(p.spec.value_of(var("b")), rf("1"));
  EXPECT_EQ(p.spec.value_of(var("c")), rf("c"));
  EXPECT_EQ(p.spec.value_of(var("d")), rf("d"));
  EXPECT_EQ(p.mt.rhs[0], rf("a*w1 - w1*w2"));
  EXPECT_EQ(p.mt.rhs[1], rf("-c*w2 + d*w1*w2"));
  EXPECT_TRUE(verify_same_io(p.m, p.mt, &p.spec));
}

TEST(Solve, ExpSumFormalRoots) {
  auto p = run("expsum");
  EXPECT_EQ(formal_roots(p.spec), 2u);
  for (const auto& v : p.spec.values) {
    ASSERT_EQ(v.kind, AlgebraicValue::Kind::FormalRoot);
    EXPECT_EQ(v.minimal_polynomial.coefficients_in(v.root).rbegin()->first, 2u);
  }
  EXPECT_TRUE(verify_specialization(p.sys, p.spec));
  EXPECT_TRUE(verify_same_io(p.m, p.mt, &p.spec));
}

TEST(Solve, BilinearTwoRootsSharingMinimalPolynomial) {
  auto p = run("bilinear");
  ASSERT_EQ(formal_roots(p.spec), 2u);
  EXPECT_EQ(p.spec.value_of(var("p2")), rf("1"));
  EXPECT_EQ(p.spec.value_of(var("p4")), rf(beta_name(p, "p2*p4")));
  const auto& r1 = p.spec.values[0];
  const auto& r3 = p.spec.values[2];
  // Z^2 - (p1 + p3) Z + p1 p3 for both roots
  std::string s = beta_name(p, "p1 + p3"), q = beta_name(p, "p1*p3");
  EXPECT_EQ(r1.minimal_polynomial, poly("p1^2 - " + s + "*p1 + " + q));
  EXPECT_EQ(r3.minimal_polynomial, poly("p3^2 - " + s + "*p3 + " + q));
  EXPECT_EQ(p.mt.constraints.size(), 3u);
  EXPECT_TRUE(verify_same_io(p.m, p.mt, &p.spec));
}

TEST(Solve, GoodwinFixesAlphaAndGamma) {
  auto p = run("goodwin");
  EXPECT_EQ(p.spec.value_of(var("alpha")), rf("1"));
  EXPECT_EQ(p.spec.value_of(var("gamma")), rf("1"));
  EXPECT_EQ(p.spec.value_of(var("b")), rf("b"));
  EXPECT_EQ(p.spec.value_of(var("sigma")), rf("sigma"));
  EXPECT_TRUE(verify_specialization(p.sys, p.spec));
}

TEST(Solve, TrialListOrder) {
  std::vector<BetaSymbol> betas{{var("B1"), rf("a*b")}, {var("B2"), rf("c")}};
  auto t = trial_values(betas);
  ASSERT_EQ(t.size(), 9u);
  EXPECT_EQ(t[3], rf("-1"));
  EXPECT_EQ(t[4], rf("B1"));
  EXPECT_EQ(t[6], rf("B1^2"));
  EXPECT_EQ(t[7], rf("B1*B2"));
}

TEST(Solve, InconsistentSystem) {
  SpecializationSystem sys;
  sys.params = {var("a")};
  sys.unknowns = {var("ua")};
  sys.equations = {poly("ua - 1"), poly("ua - 2")};
  sys.inequation = Polynomial(1);
  EXPECT_THROW(solve_specialization(sys), InconsistentSystem);
}

TEST(VerifySameIO, DetectsChangedParameter) {
  auto m = load("lv");
  auto shifted = m;
  shifted.rhs[1] = rf("-(c + 1)*x2 + d*x1*x2");
  EXPECT_FALSE(verify_same_io(m, shifted));
  EXPECT_TRUE(verify_same_io(m, m));
}

TEST(Specialization, ReparametrizedModelsRoundTrip) {
  for (const char* name : {"lv", "harmonic", "expsum", "bilinear", "lv_input", "crn"}) {
    auto p = run(name);
    auto again = model::parse_model(model::render_model(p.mt));
    EXPECT_EQ(again, p.mt) << name;
    EXPECT_TRUE(verify_same_io(p.m, again, &p.spec)) << name;
  }
}

// Rank of the Jacobian is unchanged by an explicit specialization.
TEST(Specialization, RankInvariant) {
  for (const char* name : {"lv", "harmonic", "lv_input", "crn"}) {
    auto p = run(name);
    auto n = static_cast<unsigned>(p.m.states.size());
    auto r_old = lie::rank_probabilistic(lie::jacobian(p.m, lie::lie_table(p.m, n)), 3, 1).rank;
    auto r_new = lie::rank_probabilistic(lie::jacobian(p.mt, lie::lie_table(p.mt, n)), 3, 1).rank;
    EXPECT_EQ(r_old, r_new) << name;
  }
}

}  // namespace
