#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "idspec/algebra/text.hpp"
#include "idspec/ioeq/ioeq.hpp"
#include "idspec/lie/jets.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::ioeq;
using namespace idspec::testing;

namespace {

model::Model load(const std::string& name) {
  return model::load_model(std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode");
}

// Parses with placeholder names y1, y2, ... standing for derivatives of y.
Polynomial jet_poly(std::string_view text, const std::string& base = "y", unsigned max_order = 4) {
  Polynomial p = poly(text);
  std::unordered_map<VarId, VarId> ren;
  for (unsigned i = 1; i <= max_order; ++i) ren[var(base + std::to_string(i))] = lie::jet(var(base), i);
  return p.rename(ren);
}

bool same_up_to_sign(const Polynomial& a, const Polynomial& b) {
  Polynomial pa = primitive_part(a), pb = primitive_part(b);
  return pa == pb || pa == -pb;
}

std::vector<std::string> rendered(const std::vector<RationalFunction>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(render(f));
  std::sort(out.begin(), out.end());
  return out;
}

// Substituting y^(i) -> R_i must give zero.
bool vanishes_on_lie_table(const model::Model& m, const DiffPolynomial& e) {
  auto t = lie::lie_table(m, static_cast<unsigned>(m.states.size()));
  std::unordered_map<VarId, RationalFunction> values;
  for (std::size_t j = 0; j < m.outputs.size(); ++j)
    for (unsigned i = 0; i < t.entries[j].size(); ++i) values[lie::jet(m.outputs[j], i)] = t.entries[j][i];
  return substitute(e.to_polynomial(), values).is_zero();
}

TEST(IOEquations, ExampleModels) {
  struct Case {
    const char* model;
    const char* expected;
  };
  for (const Case& c : {Case{"lv", "y*y2 - y1^2 - d*y^2*y1 + c*y*y1 + a*d*y^3 - a*c*y^2"},
                        Case{"harmonic", "y2 - a*b*y"},
                        Case{"crn", "y1*y3 - y2^2 + 2*k1*y1^3"},
                        Case{"expsum", "y2 - (a + b)*y1 + a*b*y"}}) {
    auto m = load(c.model);
    auto io = io_equations(m);
    ASSERT_EQ(io.equations.size(), 1u) << c.model;
    EXPECT_TRUE(same_up_to_sign(io.equations[0].to_polynomial(), jet_poly(c.expected))) << c.model;
    EXPECT_TRUE(io.non_hypersurface.empty());
  }
}

TEST(IOEquations, LotkaVolterraWithInput) {
  auto m = load("lv_input");
  auto io = io_equations(m);
  Polynomial expected = jet_poly(
      "y*y2 - y1^2 - d*y^2*y1 - y*u*y1 + c*y*y1 + d*u*y^3 + a*d*y^3 - y^2*u1 + y^2*u^2 + a*u*y^2 - c*u*y^2 - a*c*y^2");
  expected = expected.rename({{var("u1"), lie::jet(var("u"), 1)}});
  EXPECT_TRUE(same_up_to_sign(io.equations[0].to_polynomial(), expected));
}

TEST(IOEquations, RenderingIsMonicAndCanonical) {
  auto m = load("lv");
  auto io = io_equations(m);
  EXPECT_EQ(render(io.equations[0], m.params), "y*y'' - y'^2 - d*y^2*y' + c*y*y' + a*d*y^3 - a*c*y^2");
  auto e = load("expsum");
  EXPECT_EQ(render(io_equations(e).equations[0], e.params), "y'' - (a + b)*y' + a*b*y");
}

TEST(IOEquations, VanishOnLieTable) {
  for (const char* name : {"lv", "lv_input", "harmonic", "expsum", "crn", "bilinear", "goodwin"}) {
    auto m = load(name);
    auto io = io_equations(m);
    for (const auto& e : io.equations) {
      EXPECT_TRUE(vanishes_on_lie_table(m, e)) << name;
      EXPECT_EQ(e.terms.front().second, RationalFunction(1)) << name;
    }
  }
}

TEST(IOEquations, OrderMatchesJacobianRank) {
  for (const char* name : {"lv", "lv_input", "harmonic", "expsum", "crn", "bilinear", "goodwin"}) {
    auto m = load(name);
    auto io = io_equations(m);
    auto t = lie::lie_table(m, static_cast<unsigned>(m.states.size()));
    auto cert = lie::rank_probabilistic(lie::jacobian(m, t), 3, 1);
    unsigned total = 0;
    for (const auto& e : io.equations) total += e.order;
    EXPECT_EQ(total, cert.rank) << name;
  }
}

// Linear presolve and plain Groebner elimination must agree.
TEST(IOEquations, PresolveMatchesPlainElimination) {
  for (const char* name : {"lv", "lv_input", "harmonic", "expsum", "crn", "bilinear"}) {
    auto m = load(name);
    IOOptions plain;
    plain.solve_linear = false;
    auto a = io_equations(m);
    auto b = io_equations(m, plain);
    ASSERT_EQ(a.equations.size(), b.equations.size());
    EXPECT_TRUE(same_up_to_sign(a.equations[0].to_polynomial(), b.equations[0].to_polynomial())) << name;
  }
}

TEST(FieldGenerators, ExampleModels) {
  EXPECT_EQ(rendered(field_generators(io_equations(load("lv")).equations)),
            (std::vector<std::string>{"a*c", "a*d", "c", "d"}));
  EXPECT_EQ(rendered(field_generators(io_equations(load("harmonic")).equations)),
            (std::vector<std::string>{"a*b"}));
  EXPECT_EQ(rendered(field_generators(io_equations(load("expsum")).equations)),
            (std::vector<std::string>{"a + b", "a*b"}));
}

TEST(FieldMembership, Examples) {
  std::vector<RationalFunction> sum_prod{rf("a + b"), rf("a*b")};
  EXPECT_TRUE(field_membership(rf("a + b"), sum_prod));
  EXPECT_FALSE(field_membership(rf("a"), sum_prod));
  EXPECT_TRUE(field_membership(rf("a^2 + b^2"), sum_prod));
  std::vector<RationalFunction> lv{rf("d"), rf("c"), rf("a*d"), rf("a*c")};
  EXPECT_TRUE(field_membership(rf("a*d/(a*c)*c"), lv));
  EXPECT_TRUE(field_membership(rf("a"), lv));
  EXPECT_FALSE(field_membership(rf("b"), lv));
  EXPECT_FALSE(field_membership(rf("a"), {rf("a*b")}));
  EXPECT_TRUE(field_membership(rf("1/(a*b + 1)"), {rf("a*b")}));
  EXPECT_TRUE(field_membership(rf("7"), {}));
  EXPECT_FALSE(field_membership(rf("a"), {}));
}

// Random rational expressions in the generators are members.
TEST(FieldMembership, RandomCombinations) {
  std::mt19937_64 rng(3);
  std::vector<RationalFunction> gens{rf("p + q"), rf("p*q"), rf("r/s")};
  FieldOracle oracle(gens, {var("p"), var("q"), var("r"), var("s")});
  std::vector<VarId> g{var("g0"), var("g1"), var("g2")};
  for (int trial = 0; trial < 20; ++trial) {
    RationalFunction h = RationalFunction::make(random_poly(rng, g, 3, 2), random_nonzero(rng, g, 2, 1));
    RationalFunction value = h.substitute({{g[0], gens[0]}, {g[1], gens[1]}, {g[2], gens[2]}});
    EXPECT_TRUE(oracle.contains(value)) << render(value);
  }
  EXPECT_FALSE(oracle.contains(rf("p")));
  EXPECT_FALSE(oracle.contains(rf("r")));
  EXPECT_FALSE(oracle.contains(rf("p - q")));
}

TEST(SimplifyGenerators, ExampleModels) {
  auto check = [](const char* name, std::vector<std::string> expected) {
    auto m = load(name);
    auto raw = field_generators(io_equations(m).equations);
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(rendered(simplify_generators(raw, m.params)), expected) << name;
  };
  check("lv", {"a", "c", "d"});
  check("goodwin", {"b", "c", "sigma", "beta*delta", "beta + delta"});
  check("bilinear", {"p1*p3", "p2*p4", "p1 + p3"});
  check("harmonic", {"a*b"});
  check("crn", {"k1"});
}

TEST(SimplifyGenerators, MutualMembershipAndIrredundance) {
  for (const char* name : {"lv", "lv_input", "expsum", "bilinear", "goodwin"}) {
    auto m = load(name);
    auto io = io_equations(m);
    auto raw = field_generators(io.equations);
    auto simp = simplify_generators(raw, m.params);
    FieldOracle from_raw(raw, m.params), from_simp(simp, m.params);
    for (const auto& g : raw) EXPECT_TRUE(from_simp.contains(g)) << name;
    for (const auto& g : simp) EXPECT_TRUE(from_raw.contains(g)) << name;
    for (const auto& e : io.equations)
      for (const auto& c : e.coefficients()) EXPECT_TRUE(from_simp.contains(c)) << name;
    for (std::size_t i = 0; i < simp.size(); ++i) {
      auto rest = simp;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      EXPECT_FALSE(FieldOracle(rest, m.params).contains(simp[i])) << name;
    }
  }
}

TEST(Observability, Examples) {
  for (auto [name, expected] : {std::pair{"lv", true}, {"crn", false}, {"harmonic", true}, {"goodwin", true}}) {
    auto m = load(name);
    EXPECT_EQ(observability_condition(io_equations(m), m), expected) << name;
  }
}

}  // namespace
