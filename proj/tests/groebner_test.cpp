#include <gtest/gtest.h>

#include <random>

#include "idspec/algebra/text.hpp"
#include "idspec/groebner/groebner.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::groebner;
using namespace idspec::testing;

namespace {

GroebnerBasis gb(std::vector<std::string> gens, MonomialOrder order, std::vector<std::string> params = {}) {
  Ideal I;
  for (const auto& g : gens) I.generators.push_back(primitive_part(rf(g).num()));
  for (const auto& p : params) I.parameters.push_back(var(p));
  return buchberger(I, order);
}

TEST(NormalForm, Examples) {
  VarId x = var("x"), y = var("y");
  auto g1 = gb({"x"}, MonomialOrder::grevlex({x, y}));
  EXPECT_TRUE(normal_form(poly("x^2"), g1).is_zero());
  EXPECT_EQ(normal_form(poly("y"), g1), rf("y"));
  auto g2 = gb({"x-y^2"}, MonomialOrder::lex({x, y}));
  // by hand: x -> y^2, so x^2 + y -> y^4 + y
  EXPECT_EQ(normal_form(poly("x^2+y"), g2), rf("y^4+y"));
}

TEST(NormalForm, IdempotentAndMembership) {
  VarId x = var("x"), y = var("y"), z = var("z");
  auto g = gb({"x^2*y-z", "x*y^2-x", "y*z-x^2"}, MonomialOrder::grevlex({x, y, z}));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) {
    Polynomial p = random_poly(rng, {x, y, z}, 5, 3);
    RationalFunction r = normal_form(p, g);
    EXPECT_EQ(normal_form(r.num(), g), r);
  }
  for (const auto& f : {"x^2*y-z", "x*y^2-x", "y*z-x^2"}) EXPECT_TRUE(reduces_to_zero(poly(f), g));
}

TEST(Buchberger, HandComputedLex) {
  VarId x = var("x"), y = var("y");
  auto g = gb({"x^2-y", "y^2-x"}, MonomialOrder::lex({x, y}));
  ASSERT_EQ(g.size(), 2u);
  // oracle: x = y^2 substituted into x^2 - y gives y^4 - y
  EXPECT_EQ(g.elements()[0], poly("y^4-y"));
  EXPECT_EQ(g.elements()[1], poly("x-y^2"));
  EXPECT_TRUE(s_polynomials_reduce_to_zero(g));
}

TEST(Buchberger, Trivial) {
  VarId x = var("x");
  auto g = gb({"x-1"}, MonomialOrder::grevlex({x}));
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.elements()[0], poly("x-1"));
  VarId y = var("y");
  auto u = gb({"x^3*y+y^2", "1"}, MonomialOrder::grevlex({x, y}));
  EXPECT_TRUE(u.is_unit());
}

TEST(Buchberger, OverParameterField) {
  VarId x = var("x"), y = var("y");
  // a*x - b, x*y - 1 over Q(a, b): y = a/b
  auto g = gb({"a*x-b", "x*y-1"}, MonomialOrder::lex({x, y}), {"a", "b"});
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(normal_form(poly("y"), g), rf("a/b"));
  EXPECT_EQ(normal_form(poly("x"), g), rf("b/a"));
  EXPECT_TRUE(s_polynomials_reduce_to_zero(g));
  auto m = g.monic(0);
  EXPECT_EQ(m.front().second, RationalFunction(1));
}

TEST(Saturate, Examples) {
  VarId x = var("x"), y = var("y");
  (void)y;
  Ideal I{{poly("x*y")}, {}};
  Ideal s = saturate(I, Polynomial::variable(x));
  ASSERT_EQ(s.generators.size(), 1u);
  EXPECT_EQ(s.generators[0], poly("y"));
  Ideal J{{poly("x^2")}, {}};
  Ideal s2 = saturate(J, Polynomial::variable(x));
  ASSERT_EQ(s2.generators.size(), 1u);
  EXPECT_TRUE(s2.generators[0].is_one());
  Ideal K{{poly("x1p - a*x1")}, {var("a")}};
  Ideal s3 = saturate(K, Polynomial(1));
  ASSERT_EQ(s3.generators.size(), 1u);
  EXPECT_EQ(s3.generators[0], poly("x1p - a*x1"));
}

TEST(Eliminate, Examples) {
  VarId x = var("x");
  Ideal I{{poly("x-y"), poly("x-z")}, {}};
  std::vector<VarId> ex{x};
  Ideal e = eliminate(I, ex);
  ASSERT_EQ(e.generators.size(), 1u);
  EXPECT_EQ(e.generators[0], primitive_part(poly("y-z")));
  Ideal J{{poly("x^2-y")}, {}};
  EXPECT_TRUE(eliminate(J, ex).generators.empty());
}

TEST(Properties, RandomIdealsSpolyAndOrderIndependentMembership) {
  VarId x = var("x"), y = var("y"), z = var("z");
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 12; ++trial) {
    Ideal I;
    for (int k = 0; k < 3; ++k) I.generators.push_back(random_nonzero(rng, {x, y, z}, 3, 2));
    auto lex = buchberger(I, MonomialOrder::lex({x, y, z}));
    auto grl = buchberger(I, MonomialOrder::grevlex({x, y, z}));
    EXPECT_TRUE(s_polynomials_reduce_to_zero(lex));
    EXPECT_TRUE(s_polynomials_reduce_to_zero(grl));
    for (const auto& f : I.generators) {
      EXPECT_TRUE(reduces_to_zero(f, lex));
      EXPECT_TRUE(reduces_to_zero(f, grl));
    }
    for (int k = 0; k < 5; ++k) {
      Polynomial member = random_poly(rng, {x, y, z}, 2, 1) * I.generators[k % 3];
      Polynomial other = random_poly(rng, {x, y, z}, 3, 2);
      EXPECT_TRUE(reduces_to_zero(member, lex));
      EXPECT_EQ(reduces_to_zero(other, lex), reduces_to_zero(other, grl));
    }
  }
}

}  // namespace
