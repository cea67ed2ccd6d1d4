#include <gtest/gtest.h>

#include <random>

#include "idspec/algebra/text.hpp"
#include "idspec/model/model.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::algebra;
using namespace idspec::model;
using namespace idspec::testing;

namespace {

std::string path(const std::string& name) { return std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode"; }

TEST(ParseModel, LotkaVolterra) {
  Model m = parse_model(
      "model lv\nstates x1, x2\nparams a, b, c, d\noutputs y1\n"
      "x1' = a*x1 - b*x1*x2; x2' = -c*x2 + d*x1*x2; y1 = x1\n");
  ASSERT_EQ(m.states.size(), 2u);
  EXPECT_EQ(m.params.size(), 4u);
  EXPECT_TRUE(m.inputs.empty());
  EXPECT_EQ(m.rhs[0], rf("a*x1 - b*x1*x2"));
  EXPECT_EQ(m.rhs[1], rf("-c*x2 + d*x1*x2"));
  EXPECT_EQ(m.obs[0], rf("x1"));
  EXPECT_EQ(load_model(path("lv")).rhs, m.rhs);
}

TEST(ParseModel, Harmonic) {
  Model m = load_model(path("harmonic"));
  EXPECT_EQ(m.rhs[0], rf("a*x2"));
  EXPECT_EQ(m.rhs[1], rf("b*x1"));
  EXPECT_EQ(m.obs[0], rf("x1"));
}

TEST(ParseModel, UnknownIdentifier) {
  try {
    parse_model("states x1\nparams a\noutputs y\nx1' = a*z\ny = x1\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(e.column(), 9u);
  }
}

TEST(ParseModel, ValidationErrors) {
  const char* dup = "states x1\nparams x1\noutputs y\nx1' = x1\ny = x1\n";
  EXPECT_THROW(parse_model(dup), ValidationError);
  const char* input_derivative = "states x1\ninputs u\noutputs y\nx1' = u'\ny = x1\n";
  EXPECT_THROW(parse_model(input_derivative), ValidationError);
  const char* input_lhs = "states x1\ninputs u\noutputs y\nx1' = u\nu' = x1\ny = x1\n";
  EXPECT_THROW(parse_model(input_lhs), ValidationError);
  const char* missing = "states x1, x2\noutputs y\nx1' = x2\ny = x1\n";
  EXPECT_THROW(parse_model(missing), ValidationError);
  const char* twice = "states x1\noutputs y\nx1' = x1\nx1' = 2*x1\ny = x1\n";
  EXPECT_THROW(parse_model(twice), ValidationError);
  const char* output_in_rhs = "states x1\noutputs y\nx1' = y\ny = x1\n";
  EXPECT_THROW(parse_model(output_in_rhs), ValidationError);
}

TEST(ParseModel, SyntaxErrorsArePositioned) {
  try {
    parse_model("states x1\noutputs y\nx1' = 2*x1 +\ny = x1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_model("states x1\noutputs y\nx1' = 0.5*x1\ny = x1\n"), ParseError);
  EXPECT_THROW(parse_model("states x1\noutputs y\nx1' = x1^(-1)\ny = x1\n"), ParseError);
  EXPECT_THROW(parse_model("states x1\noutputs y\nx1 x1\ny = x1\n"), ParseError);
}

TEST(ParseModel, CrlfAndComments) {
  Model a = parse_model("model t\r\nstates x # the state\r\nparams k\r\noutputs y\r\nx' = -k*x\r\ny = x\r\n");
  Model b = parse_model("model t\nstates x\nparams k\noutputs y\nx' = -k*x\ny = x\n");
  EXPECT_EQ(a, b);
}

TEST(ParseModel, ConstraintComment) {
  Model m = parse_model(
      "model c\nstates x\nparams p, s\noutputs y\nx' = p*x\ny = x\n# constraint: p^2 - s*p + 1 = 0\n");
  ASSERT_EQ(m.constraints.size(), 1u);
  EXPECT_EQ(m.constraints[0], poly("p^2 - s*p + 1"));
  EXPECT_EQ(parse_model(render_model(m)), m);
}

TEST(CommonDenominator, Examples) {
  EXPECT_TRUE(common_denominator(load_model(path("lv"))).is_one());
  Model gw = load_model(path("goodwin"));
  // independent check: each rational rhs has a denominator whose leading
  // coefficient in the states is a nonzero constant
  for (const auto& f : gw.rhs) {
    auto coeffs = f.den().collect(gw.states);
    EXPECT_TRUE(coeffs.front().second.is_constant());
  }
  EXPECT_TRUE(common_denominator(gw).is_one());
  Model m = parse_model("states x\nparams beta\noutputs y\nx' = (1/beta)*x\ny = x\n");
  EXPECT_EQ(common_denominator(m), poly("beta"));
  Model n = parse_model("states x\nparams p, q\noutputs y\nx' = x/(p*x + q)\ny = x/q\n");
  EXPECT_EQ(common_denominator(n), poly("p*q"));
}

TEST(RenderModel, RoundTripAllShippedModels) {
  for (const char* name : {"lv", "lv_input", "harmonic", "expsum", "crn", "bilinear", "goodwin", "coagulation", "akt"}) {
    Model m = load_model(path(name));
    EXPECT_EQ(parse_model(render_model(m)), m) << name;
  }
}

TEST(RenderModel, NestedFractions) {
  Model m = parse_model("states x, z\nparams a, b\noutputs y\nx' = 1/(1 + 1/(a + x/z))\nz' = (x - 3/7)/(b*z^2)\ny = x/(2*z)\n");
  EXPECT_EQ(parse_model(render_model(m)), m);
  EXPECT_EQ(model_digest(m), model_digest(parse_model(render_model(m))));
}

TEST(ParseModel, FuzzedInputNeverCrashes) {
  const std::string base = load_model(path("goodwin")).name.empty() ? "" : render_model(load_model(path("goodwin")));
  std::mt19937_64 rng(99);
  const std::string alphabet = "xyab12+-*/^()'=,;#\n :constraint";
  int parsed = 0, rejected = 0;
  for (int i = 0; i < 2000; ++i) {
    std::string s = base;
    std::uniform_int_distribution<int> edits(1, 4);
    for (int e = edits(rng); e > 0; --e) {
      std::size_t pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
      char c = alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      switch (rng() % 3) {
        case 0: s[pos] = c; break;
        case 1: s.insert(s.begin() + pos, c); break;
        default: s.erase(pos, 1); break;
      }
    }
    try {
      parse_model(s);
      ++parsed;
    } catch (const ParseError&) {
      ++rejected;
    } catch (const ValidationError&) {
      ++rejected;
    }
  }
  EXPECT_EQ(parsed + rejected, 2000);
}

}  // namespace
