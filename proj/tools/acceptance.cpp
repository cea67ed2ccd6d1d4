// Prints one PASS/FAIL line per acceptance criterion. Exit status is the
// number of failing criteria.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "idspec/algebra/text.hpp"
#include "idspec/lie/jets.hpp"
#include "idspec/pipeline/pipeline.hpp"

using namespace idspec;
using algebra::Polynomial;
using algebra::RationalFunction;
using algebra::VarId;

namespace {

std::string models_dir = IDSPEC_MODELS_DIR;

model::Model load(const std::string& name) { return model::load_model(models_dir + "/" + name + ".ode"); }
RationalFunction rf(const std::string& s) { return algebra::parse_expression(s); }
VarId var(const std::string& s) { return algebra::intern_variable(s); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failed;
  std::vector<std::string> notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failed.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

// The expected equation written with y1, y2, ... for derivatives of the
// output, made monic under the computed equation's ranking, rendered.
std::string expected_io(const model::Model& m, const ioeq::DiffPolynomial& computed, const std::string& text) {
  const VarId y = m.outputs[computed.output];
  const std::string base = algebra::variable_name(y);
  std::unordered_map<VarId, VarId> ren;
  for (unsigned i = 1; i <= 6; ++i) ren[var(base + std::to_string(i))] = lie::jet(y, i);
  Polynomial p = rf(text).num().rename(ren);
  return ioeq::render(ioeq::make_monic(p, computed.ranking, computed.output), m.params);
}

bool io_matches(const model::Model& m, const ioeq::IOEquations& io, const std::string& text) {
  if (io.equations.size() != 1) return false;
  return ioeq::render(io.equations[0], m.params) == expected_io(m, io.equations[0], text);
}

std::vector<std::string> sorted_text(const std::vector<RationalFunction>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(algebra::render(f));
  std::sort(out.begin(), out.end());
  return out;
}

bool same_field(const std::vector<RationalFunction>& a, const std::vector<RationalFunction>& b,
                const std::vector<VarId>& params) {
  ioeq::FieldOracle fa(a, params), fb(b, params);
  return std::all_of(a.begin(), a.end(), [&](const auto& g) { return fb.contains(g); }) &&
         std::all_of(b.begin(), b.end(), [&](const auto& g) { return fa.contains(g); });
}

// Minimal polynomial with the root renamed to Z and betas replaced by their
// generators.
Polynomial minpoly_in_params(const specialize::Specialization& s, const specialize::AlgebraicValue& v) {
  Polynomial p = v.minimal_polynomial.rename({{v.root, var("Z")}});
  std::unordered_map<VarId, RationalFunction> gens;
  for (const auto& b : s.betas) gens[b.symbol] = b.generator;
  RationalFunction r = algebra::substitute(p, gens);
  return algebra::primitive_part(r.num());
}

bool same_up_to_sign(const Polynomial& a, const Polynomial& b) {
  Polynomial pa = algebra::primitive_part(a), pb = algebra::primitive_part(b);
  return pa == pb || pa == -pb;
}

std::vector<const specialize::AlgebraicValue*> formal_roots(const specialize::Specialization& s) {
  std::vector<const specialize::AlgebraicValue*> out;
  for (const auto& v : s.values)
    if (v.kind == specialize::AlgebraicValue::Kind::FormalRoot) out.push_back(&v);
  return out;
}

bool has_solved(const transform::StateTransform& t, const RationalFunction& f) {
  return std::any_of(t.states.begin(), t.states.end(), [&](const auto& sm) { return sm.solved && *sm.solved == f; });
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Everything the property suites need from the pipeline runs.
struct Audit {
  std::vector<groebner::GroebnerBasis> bases;
  std::vector<std::pair<model::Model, ioeq::IOEquations>> io;
  std::vector<model::Model> models;
  struct Emitted {
    std::string name;
    model::Model m, mt;
    transform::StateTransform t;
  };
  std::vector<Emitted> transforms;

  void record(const std::string& name, const pipeline::Report& r) {
    io.emplace_back(r.model, r.io);
    models.push_back(r.model);
    if (r.reduced) {
      io.emplace_back(r.reduced->model, ioeq::io_equations(r.reduced->model));
      models.push_back(r.reduced->model);
      transforms.push_back({name + " (reduction)", r.model, r.reduced->model, r.reduced->transform});
    }
    if (r.reparametrized) models.push_back(*r.reparametrized);
    if (r.transform && r.transform->solved()) transforms.push_back({name, r.model, *r.reparametrized, *r.transform});
  }
};

pipeline::Report run(Audit& audit, const std::string& name, pipeline::Options opts = {}) {
  auto r = pipeline::run_reparametrize(load(name), opts);
  audit.record(name, r);
  return r;
}

void lotka_volterra(Audit& a, Checks& c) {
  auto r = run(a, "lv");
  c.expect(io_matches(r.model, r.io, "y*y2 - y1^2 - d*y^2*y1 + c*y*y1 + a*d*y^3 - a*c*y^2"), "IO-equation");
  c.expect(sorted_text(r.simplified_field) == std::vector<std::string>{"a", "c", "d"}, "field {a, c, d}");
  const auto& s = *r.specialization;
  c.expect(s.value_of(var("a")) == rf("a") && s.value_of(var("b")) == rf("1") && s.value_of(var("c")) == rf("c") &&
               s.value_of(var("d")) == rf("d"),
           "specialization (a, 1, c, d)");
  c.expect(r.transform && r.transform->solved() && r.transform->states.size() == 2 &&
               *r.transform->states[0].solved == rf("x1") && *r.transform->states[1].solved == rf("b*x2"),
           "transform w1 = x1, w2 = b*x2");
}

void harmonic(Audit& a, Checks& c) {
  auto r = run(a, "harmonic");
  c.expect(io_matches(r.model, r.io, "y2 - a*b*y"), "IO-equation");
  c.expect(sorted_text(r.simplified_field) == std::vector<std::string>{"a*b"}, "field {ab}");
  c.expect(r.same_io.value_or(false), "emitted model IO re-verified");
  c.expect(specialize::verify_same_io(r.model, model::parse_model(model::render_model(*r.reparametrized)),
                                      &*r.specialization),
           "re-parsed emitted model IO re-verified");
}

void expsum(Audit& a, Checks& c) {
  auto r = run(a, "expsum");
  c.expect(io_matches(r.model, r.io, "y2 - (a + b)*y1 + a*b*y"), "IO-equation");
  auto roots = formal_roots(*r.specialization);
  c.expect(!roots.empty(), "formal roots present");
  Polynomial expected = rf("Z^2 - (a + b)*Z + a*b").num();
  for (const auto* v : roots) {
    c.expect(v->minimal_polynomial.degree(v->root) == 2, "degree-2 minimal polynomial");
    c.expect(same_up_to_sign(minpoly_in_params(*r.specialization, *v), expected), "Z^2 - (a+b)Z + ab");
  }
  c.expect(r.local_not_global() && pipeline::to_json(r)["specialization"]["local_but_not_global"] == true,
           "report flags local-but-not-global");
  c.note(std::to_string(roots.size()) + " formal roots");
}

void crn(Audit& a, Checks& c) {
  const std::string io = "y1*y3 - y2^2 + 2*k1*y1^3";
  pipeline::Options plain;
  plain.numeric = false;
  auto r = run(a, "crn", plain);
  c.expect(io_matches(r.model, r.io, io), "IO-equation");
  c.expect(!r.observable && r.io.orders == std::vector<unsigned>{3} && r.model.states.size() == 5,
           "observability condition false (order 3 < 5)");
  pipeline::Options reduce;
  reduce.reduce = true;
  auto rr = run(a, "crn", reduce);
  c.expect(rr.reduced && rr.reduced->model.states.size() == 3, "reduced model is 3-dimensional");
  if (rr.reduced) c.expect(io_matches(rr.reduced->model, ioeq::io_equations(rr.reduced->model), io), "reduced IO-equation");
  c.expect(rr.transform && rr.transform->solved() && rr.closure.value_or(false), "composed transform closes");
}

void goodwin(Audit& a, Checks& c) {
  auto r = run(a, "goodwin");
  std::vector<RationalFunction> expected{rf("b"), rf("c"), rf("sigma"), rf("beta*delta"), rf("beta + delta")};
  c.expect(same_field(r.simplified_field, expected, r.model.params), "field = Q(b, c, sigma, beta*delta, beta + delta)");
  c.expect(r.io.orders.size() == 1 && r.io.orders[0] == 4, "IO order 4");
  c.expect(r.transform && r.transform->solved(), "degree-1 solved forms");
  c.expect(r.transform && has_solved(*r.transform, rf("x3/(alpha*gamma)")), "w3 = x3/(alpha*gamma)");
}

void bilinear(Audit& a, Checks& c) {
  auto r = run(a, "bilinear");
  std::vector<RationalFunction> expected{rf("p1*p3"), rf("p2*p4"), rf("p1 + p3")};
  c.expect(same_field(r.simplified_field, expected, r.model.params), "field = Q(p1*p3, p2*p4, p1 + p3)");
  auto roots = formal_roots(*r.specialization);
  c.expect(roots.size() == 2, "exactly two formal roots");
  Polynomial expected_mp = rf("Z^2 - (p1 + p3)*Z + p1*p3").num();
  for (const auto* v : roots)
    c.expect(same_up_to_sign(minpoly_in_params(*r.specialization, *v), expected_mp), "Z^2 - (p1+p3)Z + p1p3");
}

void numeric(Audit& a, Checks& c) {
  for (const char* name : {"lv", "harmonic"}) {
    pipeline::Options opts;
    opts.numeric = false;
    auto r = run(a, name, opts);
    if (!r.transform || !r.transform->solved()) {
      c.expect(false, std::string(name) + ": solved transform");
      continue;
    }
    verify::SimConfig cfg;
    cfg.samples = 10;
    cfg.param_box = {1, 2};
    cfg.t_end = 5;
    cfg.step = 1e-3;
    cfg.seed = 1;
    auto cv = verify::cross_validate(r.model, *r.reparametrized, *r.transform, cfg);
    c.expect(cv.samples.size() == 10 && cv.passed(1e-6), std::string(name) + ": max deviation < 1e-6");
    auto h = verify::step_halving(r.model, *r.reparametrized, *r.transform, cfg, 3);
    bool monotone = true;
    for (std::size_t i = 1; i < h.size(); ++i) monotone = monotone && h[i] < h[i - 1];
    c.expect(monotone, std::string(name) + ": step halving monotone");
    std::string seq;
    for (double d : h) seq += (seq.empty() ? "" : ", ") + fmt(d);
    c.note(std::string(name) + " max " + fmt(cv.max()) + ", halving " + seq);
  }
}

void properties(Audit& a, Checks& c) {
  // (a) Buchberger bases
  std::size_t bad = 0;
  for (const auto& g : a.bases) bad += !groebner::s_polynomials_reduce_to_zero(g);
  c.expect(!a.bases.empty() && bad == 0, "(a) S-polynomials reduce to zero");
  c.note("(a) " + std::to_string(a.bases.size()) + " bases");

  // (b) randomized vs symbolic rank
  std::size_t ranked = 0;
  for (const auto& m : a.models) {
    if (m.states.size() > 3) continue;
    auto J = lie::jacobian(m, lie::lie_table(m, static_cast<unsigned>(m.states.size())));
    bool ok = lie::rank_probabilistic(J, 3, 1).rank == lie::rank_symbolic(J);
    c.expect(ok, "(b) rank of " + m.name);
    ++ranked;
  }
  c.note("(b) " + std::to_string(ranked) + " models");

  // (c) IO-equations under the Lie table
  std::size_t eqs = 0;
  for (const auto& [m, io] : a.io) {
    unsigned order = 0;
    for (unsigned o : io.orders) order = std::max(order, o);
    auto t = lie::lie_table(m, std::max<unsigned>(order, static_cast<unsigned>(m.states.size())));
    std::unordered_map<VarId, RationalFunction> values;
    for (std::size_t j = 0; j < m.outputs.size(); ++j)
      for (unsigned i = 0; i < t.entries[j].size(); ++i) values[lie::jet(m.outputs[j], i)] = t.entries[j][i];
    for (const auto& e : io.equations) {
      c.expect(algebra::substitute(e.to_polynomial(), values).is_zero(), "(c) IO-equation of " + m.name);
      ++eqs;
    }
  }
  c.note("(c) " + std::to_string(eqs) + " equations");

  // (d) closure and input independence
  for (const auto& e : a.transforms) {
    c.expect(transform::check_closure(e.t, e.m, e.mt), "(d) closure of " + e.name);
    for (const auto& sm : e.t.states)
      for (VarId v : sm.solved->variables()) {
        auto info = lie::jet_info(v);
        VarId base = info ? info->first : v;
        bool input = std::find(e.m.inputs.begin(), e.m.inputs.end(), base) != e.m.inputs.end();
        c.expect(!input, "(d) input-free transform of " + e.name);
      }
  }
  c.note("(d) " + std::to_string(a.transforms.size()) + " transforms");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  app.add_option("--models", models_dir, "Directory with the .ode models");
  CLI11_PARSE(app, argc, argv);

  Audit audit;
  groebner::set_basis_observer([&](const groebner::GroebnerBasis& g) { audit.bases.push_back(g); });

  struct Criterion {
    const char* name;
    double limit;  // seconds; 0 = none
    std::function<void(Audit&, Checks&)> run;
  };
  const std::vector<Criterion> criteria{
      {"lotka-volterra", 30, lotka_volterra}, {"harmonic", 5, harmonic}, {"expsum", 0, expsum},
      {"crn", 120, crn},                      {"goodwin", 600, goodwin}, {"bilinear", 0, bilinear},
      {"numeric", 0, numeric},                {"properties", 0, properties},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& k = criteria[i];
    if (k.name == std::string("properties")) groebner::set_basis_observer({});
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      k.run(audit, c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    if (k.limit > 0) c.expect(secs < k.limit, "runtime < " + fmt(k.limit) + " s");
    std::string detail;
    for (const auto& f : c.failed) detail += (detail.empty() ? "failed: " : "; ") + f;
    for (const auto& n : c.notes) detail += (detail.empty() ? "" : "; ") + n;
    const bool pass = c.failed.empty();
    failures += !pass;
    std::printf("%s %zu %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", i + 1, k.name, secs, detail.empty() ? "" : ": ",
                detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
