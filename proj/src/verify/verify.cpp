#include "idspec/verify/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "idspec/lie/jets.hpp"
#include "idspec/lie/lie.hpp"

namespace idspec::verify {

NumericFunction::NumericFunction(const RationalFunction& f) {
  auto compile = [](const Polynomial& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
      Term c{t.coeff.get_d(), {}};
      for (const auto& vp : t.mono.powers()) c.powers.emplace_back(vp.var, vp.exp);
      out.push_back(std::move(c));
    }
    return out;
  };
  num_ = compile(f.num());
  den_ = compile(f.den());
}

double NumericFunction::eval(const std::vector<Term>& terms, const Values& at) {
  double sum = 0;
  for (const auto& t : terms) {
    double v = t.coeff;
    for (const auto& [var, e] : t.powers) {
      auto it = at.find(var);
      if (it == at.end()) throw std::out_of_range("no value for " + algebra::variable_name(var));
      double x = it->second;
      for (std::uint32_t k = 0; k < e; ++k) v *= x;
    }
    sum += v;
  }
  return sum;
}

double NumericFunction::operator()(const Values& at) const {
  const double d = eval(den_, at);
  if (d == 0.0) throw DenominatorHit("denominator evaluates to zero");
  return eval(num_, at) / d;
}

double Signal::operator()(double t) const {
  double sum = 0;
  for (const auto& s : terms) {
    double v = s.coeff * std::pow(t, s.power) * std::exp(s.rate * t);
    sum += v * (s.sine ? std::sin(s.freq * t) : std::cos(s.freq * t));
  }
  return sum;
}

Signal Signal::derivative() const {
  Signal out;
  for (const auto& s : terms) {
    if (s.power > 0) out.terms.push_back({s.coeff * s.power, s.power - 1, s.rate, s.freq, s.sine});
    if (s.rate != 0) out.terms.push_back({s.coeff * s.rate, s.power, s.rate, s.freq, s.sine});
    if (s.freq != 0) out.terms.push_back({s.sine ? s.coeff * s.freq : -s.coeff * s.freq, s.power, s.rate, s.freq, !s.sine});
  }
  return out;
}

Signal Signal::random(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> k(1, 4);
  auto q = [&](double den) { return k(rng) / den; };
  Signal s;
  s.terms.push_back({q(4), 0, 0, 0, false});
  s.terms.push_back({q(4), 0, 0, q(2), true});
  s.terms.push_back({q(4), 0, -q(8), q(2), false});
  return s;
}

std::unordered_map<VarId, Signal> input_signals(const Model& m, const SimConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995ULL);
  std::unordered_map<VarId, Signal> out;
  for (VarId u : m.inputs) {
    auto it = cfg.inputs.find(u);
    out[u] = it != cfg.inputs.end() ? it->second : Signal::random(rng);
  }
  return out;
}

Trajectory integrate(const Model& m, const Values& params, const Values& x0, const SimConfig& cfg) {
  if (!(cfg.step > 0) || cfg.t_end < cfg.step) throw std::invalid_argument("integrate: need 0 < step <= t_end");
  std::vector<NumericFunction> f, g;
  for (const auto& r : m.rhs) f.emplace_back(r);
  for (const auto& o : m.obs) g.emplace_back(o);
  const auto signals = input_signals(m, cfg);
  const std::size_t n = m.states.size();
  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.step));
  const double h = cfg.step;

  Values at = params;
  auto set = [&](double t, const std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) at[m.states[i]] = x[i];
    for (const auto& [u, s] : signals) at[u] = s(t);
  };
  auto field = [&](double t, const std::vector<double>& x) {
    set(t, x);
    std::vector<double> dx(n);
    for (std::size_t i = 0; i < n; ++i) dx[i] = f[i](at);
    return dx;
  };
  auto record = [&](Trajectory& tr, double t, const std::vector<double>& x) {
    for (double v : x)
      if (!std::isfinite(v)) throw NonFinite("state not finite at t = " + std::to_string(t));
    set(t, x);
    std::vector<double> y;
    for (const auto& o : g) y.push_back(o(at));
    tr.times.push_back(t);
    tr.states.push_back(x);
    tr.outputs.push_back(std::move(y));
  };

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = x0.at(m.states[i]);
  Trajectory tr;
  record(tr, 0.0, x);
  std::vector<double> tmp(n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * h;
    auto k1 = field(t, x);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    auto k2 = field(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    auto k3 = field(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    auto k4 = field(t + h, tmp);
    for (std::size_t i = 0; i < n; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    record(tr, static_cast<double>(k + 1) * h, x);
  }
  return tr;
}

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

}  // namespace

std::vector<double> real_roots(const std::vector<double>& coeffs) {
  std::vector<double> c = coeffs;
  double scale = 0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  if (c.size() < 2) return {};
  if (c.size() == 2) return {-c[0] / c[1]};

  std::vector<double> dc;
  for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(c[i] * static_cast<double>(i));
  double bound = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i) bound = std::max(bound, std::abs(c[i] / c.back()));
  bound += 1;
  std::vector<double> marks{-bound};
  for (double d : real_roots(dc))
    if (d > -bound && d < bound) marks.push_back(d);
  marks.push_back(bound);

  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    double lo = marks[i], hi = marks[i + 1];
    double flo = horner(c, lo), fhi = horner(c, hi);
    if (std::abs(flo) <= 1e-12 * scale * std::max(1.0, std::pow(std::abs(lo), c.size() - 1))) {
      if (out.empty() || std::abs(out.back() - lo) > 1e-9 * std::max(1.0, std::abs(lo))) out.push_back(lo);
      continue;
    }
    if ((flo < 0) == (fhi < 0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
      double mid = 0.5 * (lo + hi);
      double fm = horner(c, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      double d = horner(dc, r);
      if (d == 0) break;
      double next = r - horner(c, r) / d;
      if (next < marks[i] || next > marks[i + 1]) break;
      r = next;
    }
    if (out.empty() || std::abs(out.back() - r) > 1e-9 * std::max(1.0, std::abs(r))) out.push_back(r);
  }
  return out;
}

namespace {

struct RootSolver {
  std::vector<VarId> roots;
  std::optional<groebner::GroebnerBasis> gb;

  RootSolver(const transform::StateTransform& t, const Model& m) : roots(t.roots) {
    if (!roots.empty())
      gb = groebner::buchberger(groebner::Ideal{t.relations, m.params}, groebner::MonomialOrder::lex(roots));
  }

  // Fills `at` with the roots, last in the lex order first; index 0 is the smallest real root.
  std::vector<std::size_t> solve(Values& at) const {
    std::vector<std::size_t> idx(roots.size(), 0);
    for (std::size_t k = roots.size(); k-- > 0;) {
      std::optional<Polynomial> best;
      for (const auto& e : gb->elements()) {
        if (!e.depends_on(roots[k])) continue;
        bool earlier = false;
        for (std::size_t j = 0; j < k; ++j) earlier = earlier || e.depends_on(roots[j]);
        if (earlier) continue;
        if (!best || e.degree(roots[k]) < best->degree(roots[k])) best = e;
      }
      if (!best) throw NoRealRoot("no relation determines " + algebra::variable_name(roots[k]));
      std::vector<double> c(best->degree(roots[k]) + 1, 0.0);
      for (const auto& [d, coeff] : best->coefficients_in(roots[k])) c[d] = NumericFunction(RationalFunction(coeff))(at);
      auto rs = real_roots(c);
      if (rs.empty()) throw NoRealRoot("no real root for " + algebra::variable_name(roots[k]));
      at[roots[k]] = rs.front();
    }
    for (const auto& e : gb->elements()) {
      double scale = 0;
      for (const auto& t : e.terms()) {
        Polynomial single = Polynomial::from_terms({t});
        scale = std::max(scale, std::abs(NumericFunction(RationalFunction(single))(at)));
      }
      if (std::abs(NumericFunction(RationalFunction(e))(at)) > 1e-8 * std::max(1.0, scale))
        throw NoRealRoot("numeric roots violate the relations");
    }
    return idx;
  }
};

double uniform(std::mt19937_64& rng, std::pair<double, double> box) {
  return std::uniform_real_distribution<double>(box.first, box.second)(rng);
}

std::map<std::string, double> named(const Values& v) {
  std::map<std::string, double> out;
  for (const auto& [k, x] : v) out[algebra::variable_name(k)] = x;
  return out;
}

}  // namespace

double CrossValidation::max() const {
  double m = 0;
  for (double d : max_deviation) m = std::max(m, d);
  return m;
}

CrossValidation cross_validate(const Model& m, const Model& mt, const transform::StateTransform& t,
                               const SimConfig& cfg) {
  if (!t.solved()) throw std::invalid_argument("cross_validate: transform has unsolved states");
  SimConfig shared = cfg;
  shared.inputs = input_signals(m, cfg);
  const RootSolver roots(t, m);
  std::vector<NumericFunction> avoid;
  for (const auto& p : cfg.avoid) avoid.emplace_back(RationalFunction(p));
  std::unordered_map<VarId, NumericFunction> new_param, solved;
  for (const auto& [p, e] : t.parameters) new_param.emplace(p, NumericFunction(e));
  for (const auto& sm : t.states) solved.emplace(sm.state, NumericFunction(*sm.solved));

  std::mt19937_64 rng(cfg.seed);
  CrossValidation cv;
  cv.max_deviation.assign(m.outputs.size(), 0.0);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    bool done = false;
    for (int attempt = 0; attempt < 50 && !done; ++attempt) {
      SampleResult r;
      for (VarId p : m.params) r.params[p] = uniform(rng, cfg.param_box);
      for (VarId x : m.states) r.x0[x] = uniform(rng, cfg.state_box);
      try {
        Values at = r.params;
        for (const auto& [x, v] : r.x0) at[x] = v;
        bool degenerate = false;
        for (const auto& a : avoid) degenerate = degenerate || std::abs(a(at)) < 1e-9;
        if (degenerate) {
          ++cv.resamples;
          continue;
        }
        if (!t.roots.empty()) r.root_indices = roots.solve(at);
        for (VarId rt : t.roots) r.roots[rt] = at.at(rt);
        for (VarId p : mt.params) {
          auto it = new_param.find(p);
          r.new_params[p] = it != new_param.end() ? it->second(at) : r.params.at(p);
        }
        for (VarId w : mt.states) r.w0[w] = solved.at(w)(at);
        auto a = integrate(m, r.params, r.x0, shared);
        auto b = integrate(mt, r.new_params, r.w0, shared);
        r.deviation.assign(m.outputs.size(), 0.0);
        for (std::size_t k = 0; k < a.times.size(); ++k)
          for (std::size_t j = 0; j < m.outputs.size(); ++j)
            r.deviation[j] = std::max(r.deviation[j], std::abs(a.outputs[k][j] - b.outputs[k][j]));
        for (std::size_t j = 0; j < m.outputs.size(); ++j)
          cv.max_deviation[j] = std::max(cv.max_deviation[j], r.deviation[j]);
        cv.samples.push_back(std::move(r));
        done = true;
      } catch (const DenominatorHit&) {
        ++cv.resamples;
      } catch (const NonFinite&) {
        ++cv.resamples;
      } catch (const NoRealRoot&) {
        ++cv.resamples;
      }
    }
    if (!done) throw SamplingFailed("no admissible parameter sample after 50 attempts");
  }
  return cv;
}

std::vector<double> step_halving(const Model& m, const Model& mt, const transform::StateTransform& t,
                                 const SimConfig& cfg, unsigned levels) {
  std::vector<double> out;
  SimConfig c = cfg;
  c.samples = 1;
  for (unsigned k = 0; k <= levels; ++k) {
    c.step = cfg.step / std::pow(2.0, k);
    out.push_back(cross_validate(m, mt, t, c).max());
  }
  return out;
}

double Residual::max() const {
  double m = 0;
  for (double d : max_normalized) m = std::max(m, d);
  return m;
}

Residual io_residual(const Model& m, const std::vector<ioeq::DiffPolynomial>& eqs, const SimConfig& cfg,
                     std::size_t stride) {
  unsigned top = 0;
  for (const auto& e : eqs)
    for (const auto& [mono, c] : e.terms)
      for (const auto& vp : mono.powers())
        if (auto info = lie::jet_info(vp.var); info && std::find(m.outputs.begin(), m.outputs.end(), info->first) != m.outputs.end())
          top = std::max(top, info->second);
  const auto table = lie::lie_table(m, top);
  SimConfig shared = cfg;
  shared.inputs = input_signals(m, cfg);

  // Output jets from the table, input jets from the signals.
  std::unordered_map<VarId, NumericFunction> output_jets;
  std::unordered_map<VarId, Signal> input_jets;
  for (std::size_t j = 0; j < m.outputs.size(); ++j)
    for (unsigned i = 0; i <= top; ++i) output_jets.emplace(lie::jet(m.outputs[j], i), NumericFunction(table.entries[j][i]));
  std::vector<std::vector<std::pair<std::vector<std::pair<VarId, std::uint32_t>>, NumericFunction>>> compiled;
  for (const auto& e : eqs) {
    compiled.emplace_back();
    for (const auto& [mono, c] : e.terms) {
      std::vector<std::pair<VarId, std::uint32_t>> ps;
      for (const auto& vp : mono.powers()) {
        ps.emplace_back(vp.var, vp.exp);
        auto info = lie::jet_info(vp.var);
        VarId base = info ? info->first : vp.var;
        unsigned order = info ? info->second : 0;
        if (m.is_input(base) && !input_jets.count(vp.var)) {
          Signal s = shared.inputs.at(base);
          for (unsigned k = 0; k < order; ++k) s = s.derivative();
          input_jets.emplace(vp.var, s);
        }
      }
      compiled.back().emplace_back(std::move(ps), NumericFunction(c));
    }
  }

  std::mt19937_64 rng(cfg.seed);
  for (int attempt = 0; attempt < 50; ++attempt) {
    Values params, x0;
    for (VarId p : m.params) params[p] = uniform(rng, cfg.param_box);
    for (VarId x : m.states) x0[x] = uniform(rng, cfg.state_box);
    try {
      auto tr = integrate(m, params, x0, shared);
      Residual res;
      res.max_normalized.assign(eqs.size(), 0.0);
      for (std::size_t k = 0; k < tr.times.size(); k += stride) {
        Values at = params;
        for (std::size_t i = 0; i < m.states.size(); ++i) at[m.states[i]] = tr.states[k][i];
        for (const auto& [u, s] : input_jets) at[u] = s(tr.times[k]);
        for (const auto& [u, s] : shared.inputs) at[u] = s(tr.times[k]);
        Values jets = at;
        for (const auto& [y, f] : output_jets) jets[y] = f(at);
        for (std::size_t q = 0; q < compiled.size(); ++q) {
          double sum = 0, biggest = 0;
          for (const auto& [ps, c] : compiled[q]) {
            double v = c(params);
            for (const auto& [var, e] : ps)
              for (std::uint32_t i = 0; i < e; ++i) v *= jets.at(var);
            sum += v;
            biggest = std::max(biggest, std::abs(v));
          }
          if (biggest > 0) res.max_normalized[q] = std::max(res.max_normalized[q], std::abs(sum) / biggest);
        }
      }
      return res;
    } catch (const DenominatorHit&) {
    } catch (const NonFinite&) {
    }
  }
  throw SamplingFailed("io_residual: no admissible sample after 50 attempts");
}

void write_csv(std::ostream& out, const Model& m, const Trajectory& traj) {
  out << "t";
  for (VarId x : m.states) out << ',' << algebra::variable_name(x);
  for (VarId y : m.outputs) out << ',' << algebra::variable_name(y);
  out << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    out << traj.times[k];
    for (double v : traj.states[k]) out << ',' << v;
    for (double v : traj.outputs[k]) out << ',' << v;
    out << '\n';
  }
}

nlohmann::json to_json(const CrossValidation& cv) {
  nlohmann::json j;
  j["max_deviation"] = cv.max_deviation;
  j["resamples"] = cv.resamples;
  j["samples"] = nlohmann::json::array();
  for (const auto& s : cv.samples) {
    nlohmann::json e;
    e["params"] = named(s.params);
    e["new_params"] = named(s.new_params);
    e["roots"] = named(s.roots);
    e["root_indices"] = s.root_indices;
    e["x0"] = named(s.x0);
    e["w0"] = named(s.w0);
    e["deviation"] = s.deviation;
    j["samples"].push_back(std::move(e));
  }
  return j;
}

}  // namespace idspec::verify
