#include <gtest/gtest.h>

#include <random>

#include "idspec/algebra/text.hpp"
#include "idspec/lie/jets.hpp"
#include "idspec/lie/lie.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::lie;
using namespace idspec::testing;

namespace {

model::Model load(const std::string& name) {
  return model::load_model(std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode");
}

// Independent route: sum of field-level partial derivatives times the RHS.
RationalFunction naive_lie(const model::Model& m, const RationalFunction& f) {
  RationalFunction out;
  for (std::size_t k = 0; k < m.states.size(); ++k) out = out + f.derivative(m.states[k]) * m.rhs[k];
  for (VarId v : f.variables()) {
    auto info = jet_info(v);
    VarId base = info ? info->first : v;
    unsigned order = info ? info->second : 0;
    if (m.is_input(base)) out = out + f.derivative(v) * RationalFunction::variable(jet(base, order + 1));
  }
  return out;
}

TEST(Jets, Naming) {
  VarId y = var("y");
  EXPECT_EQ(jet(y, 0), y);
  EXPECT_EQ(variable_name(jet(y, 2)), "y''");
  auto info = jet_info(jet(y, 3));
  ASSERT_TRUE(info);
  EXPECT_EQ(info->first, y);
  EXPECT_EQ(info->second, 3u);
  EXPECT_FALSE(jet_info(y));
}

TEST(LieTable, ExpSum) {
  auto m = load("expsum");
  auto t = lie_table(m, 2);
  EXPECT_EQ(t.entries[0][1], rf("a*x1 + b*x2"));
  EXPECT_EQ(t.entries[0][2], rf("a^2*x1 + b^2*x2"));
}

TEST(LieTable, LotkaVolterra) {
  auto m = load("lv");
  auto t = lie_table(m, 2);
  EXPECT_EQ(t.entries[0][1], rf("a*x1 - b*x1*x2"));
  RationalFunction expected = rf("(a - b*x2)^2*x1 - b*x1*(-c*x2 + d*x1*x2)");
  EXPECT_EQ(t.entries[0][2], expected);
}

TEST(LieTable, InputJets) {
  auto m = load("lv_input");
  auto t = lie_table(m, 3);
  EXPECT_EQ(t.entries[0][1], rf("x1*(-b*x2 + a + u)"));
  VarId u1 = jet(var("u"), 1);
  VarId u2 = jet(var("u"), 2);
  EXPECT_EQ(t.entries[0][2].derivative(u1), rf("x1"));
  EXPECT_TRUE(t.entries[0][3].depends_on(u2));
  EXPECT_FALSE(t.entries[0][2].depends_on(u2));
}

TEST(LieTable, RecurrenceMatchesNaiveRoute) {
  for (const char* name : {"lv", "lv_input", "harmonic", "bilinear", "goodwin", "crn"}) {
    auto m = load(name);
    auto t = lie_table(m, 3);
    for (std::size_t j = 0; j < t.entries.size(); ++j)
      for (unsigned i = 0; i < 3; ++i) EXPECT_EQ(t.entries[j][i + 1], naive_lie(m, t.entries[j][i])) << name << " " << i;
  }
}

TEST(Jacobian, ExpSumAndHarmonic) {
  auto m = load("expsum");
  auto J = jacobian(m, lie_table(m, 1));
  ASSERT_EQ(J.entries.size(), 2u);
  EXPECT_EQ(J.entries[0][0], rf("1"));
  EXPECT_EQ(J.entries[0][1], rf("1"));
  EXPECT_EQ(J.entries[1][0], rf("a"));
  EXPECT_EQ(J.entries[1][1], rf("b"));
  auto h = load("harmonic");
  auto Jh = jacobian(h, lie_table(h, 1));
  EXPECT_EQ(Jh.entries[0][0], rf("1"));
  EXPECT_EQ(Jh.entries[0][1], rf("0"));
  EXPECT_EQ(Jh.entries[1][0], rf("0"));
  EXPECT_EQ(Jh.entries[1][1], rf("a"));
}

TEST(Rank, SpecExamples) {
  for (const char* name : {"expsum", "harmonic", "lv"}) {
    auto m = load(name);
    auto J = jacobian(m, lie_table(m, 1));
    auto cert = rank_probabilistic(J, 3, 1);
    EXPECT_EQ(cert.rank, 2u) << name;
    EXPECT_EQ(cert.trials, 3u);
    EXPECT_EQ(rank_symbolic(J), 2u);
  }
}

TEST(Rank, DeterministicForSeed) {
  auto m = load("goodwin");
  auto J = jacobian(m, lie_table(m, 4));
  auto a = rank_probabilistic(J, 3, 42);
  auto b = rank_probabilistic(J, 3, 42);
  EXPECT_EQ(a.rank, 4u);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(Minor, Determinants) {
  auto e = load("expsum");
  auto Je = jacobian(e, lie_table(e, 1));
  auto me = minor_and_coefficient(e, Je, rank_probabilistic(Je, 3, 1));
  EXPECT_EQ(me.D, rf("b - a"));
  auto lv = load("lv");
  auto Jl = jacobian(lv, lie_table(lv, 1));
  auto ml = minor_and_coefficient(lv, Jl, rank_probabilistic(Jl, 3, 1));
  EXPECT_EQ(ml.D, rf("-b*x1"));
  EXPECT_EQ(ml.D0, poly("-b"));
}

TEST(Minor, GoodwinLeadingCoefficient) {
  auto m = load("goodwin");
  auto J = jacobian(m, lie_table(m, 3));
  auto cert = rank_probabilistic(J, 3, 7);
  ASSERT_EQ(cert.rank, 4u);
  auto mn = minor_and_coefficient(m, J, cert);
  Polynomial target = poly("alpha*gamma^2*sigma^2");
  Polynomial r = primitive_part(mn.D0);
  EXPECT_TRUE(r == target || r == -target) << render(mn.D0);
}

TEST(Determinant, AgreesWithCofactorExpansion) {
  std::mt19937_64 rng(5);
  std::vector<VarId> vs{var("p"), var("q"), var("r")};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<RationalFunction>> a(3, std::vector<RationalFunction>(3));
    for (auto& row : a)
      for (auto& e : row) e = RationalFunction::make(random_poly(rng, vs, 2, 2), random_nonzero(rng, vs, 2, 1));
    RationalFunction cof = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    EXPECT_EQ(determinant(a), cof);
  }
}

// Random polynomial models: modular rank equals the exact symbolic rank.
TEST(Rank, ProbabilisticMatchesSymbolic) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> dims(1, 3);
  for (int trial = 0; trial < 25; ++trial) {
    model::Model m;
    int n = dims(rng);
    for (int i = 0; i < n; ++i) m.states.push_back(var("s" + std::to_string(i)));
    m.params = {var("k")};
    std::vector<VarId> all = m.states;
    all.push_back(var("k"));
    for (int i = 0; i < n; ++i) m.rhs.push_back(RationalFunction(random_poly(rng, all, 2, 2)));
    m.outputs = {var("yy")};
    m.obs = {RationalFunction(random_poly(rng, m.states, 2, 1))};
    auto J = jacobian(m, lie_table(m, n - 1));
    auto cert = rank_probabilistic(J, 3, trial);
    EXPECT_EQ(cert.rank, rank_symbolic(J));
  }
}

}  // namespace
