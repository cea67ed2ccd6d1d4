#include <gtest/gtest.h>

#include <random>

#include "idspec/algebra/deadline.hpp"
#include "idspec/algebra/gcd.hpp"
#include "idspec/algebra/modular.hpp"
#include "idspec/algebra/text.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::testing;

namespace {

std::vector<VarId> xyz() { return {var("x"), var("y"), var("z")}; }

TEST(PolyArith, Cancellation) { EXPECT_EQ(poly("x+1") + poly("x-1"), poly("2*x")); }

TEST(PolyArith, DifferenceOfSquares) { EXPECT_EQ(poly("x+y") * poly("x-y"), poly("x^2-y^2")); }

TEST(PolyArith, ZeroAbsorbs) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) EXPECT_TRUE((random_poly(rng, xyz(), 6, 3) * Polynomial()).is_zero());
}

TEST(PolyArith, RingAxiomsOnRandomInputs) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 50; ++i) {
    Polynomial a = random_poly(rng, xyz(), 5, 3);
    Polynomial b = random_poly(rng, xyz(), 5, 3);
    Polynomial c = random_poly(rng, xyz(), 5, 3);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(Gcd, UnivariateSimple) { EXPECT_EQ(gcd(poly("x^2-1"), poly("x-1")), poly("x-1")); }

TEST(Gcd, WithZeroGivesNormalizedInput) {
  EXPECT_EQ(gcd(poly("-4*x^2+6"), Polynomial()), poly("2*x^2-3"));
  EXPECT_EQ(gcd(Polynomial(), poly("x/2+1")), poly("x+2"));
}

TEST(Gcd, MultivariateDividesBothInputs) {
  Polynomial a = poly("(x+y)^2*z");
  Polynomial b = poly("(x+y)*w");
  Polynomial g = gcd(a, b);
  // oracle: exact division of both inputs, and the cofactors are coprime
  auto qa = divide_exact(a, g);
  auto qb = divide_exact(b, g);
  ASSERT_TRUE(qa && qb);
  EXPECT_TRUE(gcd(*qa, *qb).is_one());
  EXPECT_EQ(g, poly("x+y"));
}

TEST(Gcd, RandomProductsRecoverCommonFactor) {
  std::mt19937_64 rng(3);
  auto vars = xyz();
  vars.push_back(var("w"));
  for (int i = 0; i < 30; ++i) {
    Polynomial g = random_nonzero(rng, vars, 3, 2);
    Polynomial a = random_nonzero(rng, vars, 3, 2) * g;
    Polynomial b = random_nonzero(rng, vars, 3, 2) * g;
    Polynomial h = gcd(a, b);
    ASSERT_TRUE(divide_exact(a, h));
    ASSERT_TRUE(divide_exact(b, h));
    EXPECT_TRUE(divide_exact(h, primitive_part(g))) << render(h) << " vs " << render(g);
    EXPECT_TRUE(gcd(*divide_exact(a, h), *divide_exact(b, h)).is_one());
  }
}

TEST(Gcd, SquarefreePart) {
  Polynomial p = poly("(x+y)^3*(x-2)^2*z");
  EXPECT_EQ(squarefree_part(p), primitive_part(poly("(x+y)*(x-2)*z")));
  EXPECT_EQ(squarefree_part(poly("(y^2+1)^2*x")), poly("(y^2+1)*x"));
}

TEST(RationalFunction, Normalize) {
  EXPECT_EQ(RationalFunction::make(poly("x^2-1"), poly("x-1")), rf("x+1"));
  EXPECT_EQ(RationalFunction::make(poly("2*x"), poly("4")), rf("x/2"));
  EXPECT_EQ(RationalFunction::make(poly("a*b*x"), poly("b")), rf("a*x"));
  EXPECT_THROW(RationalFunction::make(poly("x"), Polynomial()), ZeroDenominator);
}

TEST(RationalFunction, DenominatorCanonicalSign) {
  RationalFunction f = RationalFunction::make(poly("x"), poly("-2*y+4*z"));
  EXPECT_GT(sgn(f.den().leading_coefficient()), 0);
  EXPECT_EQ(rational_content(f.den()), 1);
  EXPECT_EQ(f, rf("-x/(2*y-4*z)"));
}

TEST(RationalFunction, NormalizeIsIdempotentAndCancelsCommonFactors) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    Polynomial a = random_poly(rng, xyz(), 4, 2);
    Polynomial b = random_nonzero(rng, xyz(), 4, 2);
    Polynomial c = random_nonzero(rng, xyz(), 3, 2);
    RationalFunction f = RationalFunction::make(a, b);
    EXPECT_EQ(RationalFunction::make(f.num(), f.den()), f);
    EXPECT_EQ(RationalFunction::make(a * c, b * c), f);
  }
}

TEST(Differentiate, Examples) {
  EXPECT_EQ(poly("a*x1^2").derivative(var("x1")), poly("2*a*x1"));
  EXPECT_TRUE(poly("c").derivative(var("x")).is_zero());
}

TEST(Differentiate, LinearityAndProductRule) {
  std::mt19937_64 rng(5);
  VarId x = var("x");
  for (int i = 0; i < 30; ++i) {
    Polynomial p = random_poly(rng, xyz(), 5, 3);
    Polynomial q = random_poly(rng, xyz(), 5, 3);
    EXPECT_TRUE(((p * q).derivative(x) - (p * q.derivative(x) + q * p.derivative(x))).is_zero());
    EXPECT_EQ((p.scaled(3) + q).derivative(x), p.derivative(x).scaled(3) + q.derivative(x));
  }
}

TEST(Differentiate, QuotientRule) {
  RationalFunction f = rf("x/(x+y)");
  EXPECT_EQ(f.derivative(var("x")), rf("y/(x+y)^2"));
}

TEST(Evaluate, Examples) {
  std::unordered_map<VarId, BigRational> pt{{var("x"), 1}, {var("y"), 2}};
  EXPECT_EQ(evaluate(rf("(x+y)/y"), pt), BigRational(3, 2));
  EXPECT_THROW(evaluate(rf("x/(x-1)"), {{var("x"), 1}}), EvalDenominatorZero);
}

TEST(Evaluate, HomomorphismAndDefinition) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> val(-20, 20);
  for (int i = 0; i < 30; ++i) {
    Polynomial p = random_poly(rng, xyz(), 5, 3);
    Polynomial q = random_nonzero(rng, xyz(), 5, 3);
    std::unordered_map<VarId, BigRational> pt;
    for (VarId v : xyz()) pt[v] = BigRational(val(rng), 7);
    EXPECT_EQ(evaluate(p * q, pt), evaluate(p, pt) * evaluate(q, pt));
    BigRational dq = evaluate(q, pt);
    if (dq != 0) EXPECT_EQ(evaluate(RationalFunction::make(p, q), pt), evaluate(p, pt) / dq);
  }
}

TEST(Evaluate, ModularAgreesWithExact) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> val(1, 1000);
  for (int i = 0; i < 20; ++i) {
    Polynomial p = random_poly(rng, xyz(), 5, 3);
    Polynomial q = random_nonzero(rng, xyz(), 5, 3);
    std::unordered_map<VarId, BigRational> pt;
    ModPoint mp;
    for (VarId v : xyz()) {
      int k = val(rng);
      pt[v] = k;
      mp[v] = static_cast<std::uint64_t>(k);
    }
    RationalFunction f = RationalFunction::make(p, q);
    if (evaluate(q, pt) == 0) continue;
    EXPECT_EQ(evaluate_mod(f, mp), Fp61::from(evaluate(f, pt)));
  }
}

TEST(Modular, RankAndMinor) {
  const std::uint64_t m1 = Fp61::kPrime - 1;  // -1
  std::vector<std::vector<std::uint64_t>> rows{{1, 2, 3}, {2, 4, 6}, {0, 1, m1}};
  std::vector<std::pair<std::size_t, std::size_t>> piv;
  EXPECT_EQ(rank_mod(rows, &piv), 2u);
  ASSERT_EQ(piv.size(), 2u);
  EXPECT_EQ(piv[0].first, 0u);
  EXPECT_EQ(piv[1].first, 2u);
  EXPECT_EQ(rank_mod({{0, 0}, {0, 0}}), 0u);
}

TEST(Text, CanonicalRendering) {
  EXPECT_EQ(render(poly("x-y^2+3/2")), "-y^2 + x + 3/2");
  EXPECT_EQ(render(rf("a/(b*c)")), "a/(b*c)");
  EXPECT_EQ(render(rf("(a+1)/b^2")), "(a + 1)/b^2");
  EXPECT_EQ(parse_expression(render(rf("-(x+2*y)/(3*z-w)"))), rf("-(x+2*y)/(3*z-w)"));
}

TEST(Expression, Errors) {
  EXPECT_THROW(parse_expression("1.5*x"), ParseError);
  EXPECT_THROW(parse_expression("x^-1"), ParseError);
  EXPECT_THROW(parse_expression("(x+1"), ParseError);
  EXPECT_THROW(parse_expression("x/0"), ParseError);
  try {
    parse_expression("x + * y");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Expression, PrecedenceAndPowers) {
  EXPECT_EQ(rf("-x^2"), RationalFunction(-poly("x*x")));
  EXPECT_EQ(rf("2*(x+1)^(2)"), rf("2*x^2+4*x+2"));
  EXPECT_EQ(rf("x/y*y"), rf("x"));
  EXPECT_EQ(rf("1/(1/x)"), rf("x"));
}

TEST(Deadline, ScopesNestAndRestore) {
  EXPECT_NO_THROW(check_deadline("test"));
  {
    DeadlineScope outer(3600);
    EXPECT_NO_THROW(check_deadline("test"));
    {
      DeadlineScope inner(-1);
      EXPECT_THROW(check_deadline("test"), BudgetExceeded);
      DeadlineScope later(3600);  // cannot extend an earlier deadline
      EXPECT_THROW(check_deadline("test"), BudgetExceeded);
    }
    EXPECT_NO_THROW(check_deadline("test"));
  }
  EXPECT_NO_THROW(check_deadline("test"));
}

TEST(Deadline, InterruptsArithmetic) {
  DeadlineScope expired(-1);
  EXPECT_THROW(gcd(poly("x^2 - 1"), poly("x^2 + 2*x + 1")), BudgetExceeded);
}

}  // namespace
