#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "idspec/verify/verify.hpp"
#include "test_util.hpp"

using namespace idspec;
using namespace idspec::verify;
using namespace idspec::testing;

namespace {

model::Model load(const std::string& name) {
  return model::load_model(std::string(IDSPEC_MODELS_DIR) + "/" + name + ".ode");
}

struct Run {
  model::Model m, mt;
  transform::StateTransform t;
  ioeq::IOEquations io;
  std::vector<Polynomial> avoid;
};

Run run(const std::string& name) {
  Run r;
  r.m = load(name);
  r.io = ioeq::io_equations(r.m);
  auto simp = ioeq::simplify_generators(ioeq::field_generators(r.io.equations), r.m.params);
  const auto n = static_cast<unsigned>(r.m.states.size());
  auto lt = lie::lie_table(r.m, n);
  auto J = lie::jacobian(r.m, lt);
  auto minor = lie::minor_and_coefficient(r.m, J, lie::rank_probabilistic(J, 3, 1));
  auto betas = specialize::name_generators(r.m, simp);
  auto C = model::common_denominator(r.m);
  auto spec = specialize::solve_specialization(specialize::build_system(r.m, betas, minor.D0, C));
  r.mt = specialize::apply_specialization(r.m, spec);
  r.t = transform::solve_state_transform(r.m, r.mt, lt, lie::lie_table(r.mt, n), &spec);
  r.avoid = {minor.D0 * C};
  return r;
}

Values values(const std::vector<std::pair<std::string, double>>& kv) {
  Values out;
  for (const auto& [k, v] : kv) out[var(k)] = v;
  return out;
}

TEST(Integrate, ExponentialDecay) {
  auto m = model::parse_model("states x\noutputs y\nx' = -x\ny = x\n");
  SimConfig cfg;
  cfg.t_end = 1;
  auto tr = integrate(m, {}, values({{"x", 1}}), cfg);
  ASSERT_EQ(tr.times.size(), 1001u);
  EXPECT_NEAR(tr.times.back(), 1.0, 1e-12);
  EXPECT_NEAR(tr.outputs.back()[0], std::exp(-1.0), 1e-8);
}

TEST(Integrate, ConstantTrajectory) {
  auto m = model::parse_model("states x\nparams c\noutputs y\nx' = 0\ny = x\n");
  SimConfig cfg;
  cfg.t_end = 2;
  cfg.step = 0.25;
  auto tr = integrate(m, values({{"c", 3}}), values({{"x", 3}}), cfg);
  for (const auto& s : tr.states) EXPECT_EQ(s[0], 3.0);
}

TEST(Integrate, HarmonicCosine) {
  auto m = load("harmonic");
  SimConfig cfg;
  auto tr = integrate(m, values({{"a", 1}, {"b", -1}}), values({{"x1", 1}, {"x2", 0}}), cfg);
  double worst = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k) worst = std::max(worst, std::abs(tr.outputs[k][0] - std::cos(tr.times[k])));
  EXPECT_LT(worst, 1e-6);
}

TEST(Integrate, FourthOrderStepHalving) {
  auto m = model::parse_model("states x\noutputs y\nx' = -x\ny = x\n");
  SimConfig cfg;
  cfg.t_end = 1;
  cfg.step = 0.1;
  auto err = [&](double h) {
    cfg.step = h;
    return std::abs(integrate(m, {}, values({{"x", 1}}), cfg).outputs.back()[0] - std::exp(-1.0));
  };
  for (double h : {0.2, 0.1, 0.05}) {
    double ratio = err(h) / err(h / 2);
    EXPECT_GE(ratio, 8.0) << h;
    EXPECT_LE(ratio, 32.0) << h;
  }
}

TEST(Integrate, DenominatorHit) {
  auto m = model::parse_model("states x\noutputs y\nx' = 1/x\ny = x\n");
  EXPECT_THROW(integrate(m, {}, values({{"x", 0}}), SimConfig{}), DenominatorHit);
}

TEST(Integrate, Divergence) {
  auto m = model::parse_model("states x\noutputs y\nx' = x^2\ny = x\n");
  SimConfig cfg;
  cfg.t_end = 3;
  cfg.step = 0.01;
  EXPECT_THROW(integrate(m, {}, values({{"x", 1}}), cfg), NonFinite);
}

TEST(Signal, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    Signal s = Signal::random(rng);
    s.terms.push_back({0.5, 2, -0.25, 1.5, true});
    Signal d = s.derivative();
    for (double t : {0.0, 0.7, 2.3}) {
      double h = 1e-5;
      EXPECT_NEAR(d(t), (s(t + h) - s(t - h)) / (2 * h), 1e-6);
    }
  }
}

TEST(RealRoots, Examples) {
  auto r = real_roots({2, -3, 1});  // (x-1)(x-2)
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], 1, 1e-12);
  EXPECT_NEAR(r[1], 2, 1e-12);
  EXPECT_TRUE(real_roots({1, 0, 1}).empty());
  auto c = real_roots({6, -11, 6, -1});  // -(x-1)(x-2)(x-3)
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(c[2], 3, 1e-12);
  auto l = real_roots({3, 2});
  ASSERT_EQ(l.size(), 1u);
  EXPECT_DOUBLE_EQ(l[0], -1.5);
}

TEST(RealRoots, RandomProducts) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> roots{U(rng), U(rng), U(rng)};
    std::sort(roots.begin(), roots.end());
    if (roots[1] - roots[0] < 1e-3 || roots[2] - roots[1] < 1e-3) continue;
    std::vector<double> c{1};
    for (double r : roots) {
      std::vector<double> next(c.size() + 1, 0.0);
      for (std::size_t i = 0; i < c.size(); ++i) {
        next[i + 1] += c[i];
        next[i] -= r * c[i];
      }
      c = next;
    }
    auto got = real_roots(c);
    ASSERT_EQ(got.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], roots[i], 1e-8);
  }
}

TEST(CrossValidate, LotkaVolterra) {
  auto r = run("lv");
  SimConfig cfg;
  cfg.avoid = r.avoid;
  auto cv = cross_validate(r.m, r.mt, r.t, cfg);
  EXPECT_EQ(cv.samples.size(), 10u);
  EXPECT_LT(cv.max(), 1e-6);
}

TEST(CrossValidate, Harmonic) {
  auto r = run("harmonic");
  SimConfig cfg;
  auto cv = cross_validate(r.m, r.mt, r.t, cfg);
  EXPECT_LT(cv.max(), 1e-6);
}

TEST(CrossValidate, CorruptedLotkaVolterra) {
  auto r = run("lv");
  auto bad = r.t;
  bad.states[1].solved = rf("x2");
  auto cv = cross_validate(r.m, r.mt, bad, SimConfig{});
  EXPECT_GT(cv.max(), 1e-2);
}

TEST(CrossValidate, FormalRootsAndInputs) {
  for (const char* name : {"expsum", "bilinear", "lv_input"}) {
    auto r = run(name);
    SimConfig cfg;
    cfg.samples = 3;
    cfg.t_end = 2;
    auto cv = cross_validate(r.m, r.mt, r.t, cfg);
    EXPECT_LT(cv.max(), 1e-6) << name;
    if (!r.t.roots.empty()) {
      for (const auto& s : cv.samples) EXPECT_EQ(s.roots.size(), r.t.roots.size()) << name;
    }
  }
}

TEST(CrossValidate, Deterministic) {
  auto r = run("lv");
  SimConfig cfg;
  cfg.samples = 2;
  cfg.t_end = 1;
  EXPECT_EQ(to_json(cross_validate(r.m, r.mt, r.t, cfg)).dump(), to_json(cross_validate(r.m, r.mt, r.t, cfg)).dump());
}

TEST(CrossValidate, StepHalvingDoesNotGrowBeyondRounding) {
  auto r = run("lv");
  SimConfig cfg;
  auto dev = step_halving(r.m, r.mt, r.t, cfg, 3);
  ASSERT_EQ(dev.size(), 4u);
  for (double d : dev) EXPECT_LT(d, 1e-9);
}

TEST(IOResidual, LotkaVolterraAndHarmonic) {
  for (const char* name : {"lv", "harmonic", "lv_input", "goodwin"}) {
    auto m = load(name);
    auto io = ioeq::io_equations(m);
    SimConfig cfg;
    cfg.t_end = 2;
    EXPECT_LT(io_residual(m, io.equations, cfg).max(), 1e-9) << name;
  }
}

TEST(IOResidual, FlippedSignIsDetected) {
  auto m = load("lv");
  auto io = ioeq::io_equations(m);
  auto wrong = io.equations;
  wrong[0].terms.back().second = -wrong[0].terms.back().second;
  SimConfig cfg;
  cfg.t_end = 2;
  EXPECT_GT(io_residual(m, wrong, cfg).max(), 1e-3);
}

TEST(IOResidual, InvariantUnderScaling) {
  auto m = load("harmonic");
  auto io = ioeq::io_equations(m);
  auto scaled = io.equations;
  for (auto& [mono, c] : scaled[0].terms) c = c * rf("-7/3");
  SimConfig cfg;
  cfg.t_end = 2;
  EXPECT_NEAR(io_residual(m, io.equations, cfg).max(), io_residual(m, scaled, cfg).max(), 1e-15);
}

TEST(Csv, HeaderAndRows) {
  auto m = model::parse_model("states x\noutputs y\nx' = -x\ny = 2*x\n");
  SimConfig cfg;
  cfg.t_end = 0.5;
  cfg.step = 0.25;
  std::ostringstream out;
  write_csv(out, m, integrate(m, {}, values({{"x", 1}}), cfg));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,y");
  std::getline(in, line);
  EXPECT_EQ(line, "0,1,2");
}

}  // namespace
