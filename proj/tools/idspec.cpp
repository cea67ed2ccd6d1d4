#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "idspec/algebra/text.hpp"
#include "idspec/pipeline/pipeline.hpp"

using namespace idspec;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBudget = 2, kNoSolution = 3, kNoTransform = 4, kVerification = 5 };

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

model::Model load(const std::string& path) {
  try {
    return model::parse_model(slurp(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void print_io(const pipeline::Report& r) {
  for (const auto& e : r.io.equations) std::cout << ioeq::render(e, r.model.params) << " = 0\n";
  std::cout << "identifiable field: {";
  for (std::size_t i = 0; i < r.simplified_field.size(); ++i)
    std::cout << (i ? ", " : "") << algebra::render(r.simplified_field[i]);
  std::cout << "}\n";
}

int cmd_io(const std::string& file, const pipeline::Options& opts, bool json) {
  auto r = pipeline::run_io(load(file), opts);
  if (json)
    std::cout << pipeline::to_json(r).dump(2) << "\n";
  else
    print_io(r);
  return kOk;
}

int cmd_reparametrize(const std::string& file, const pipeline::Options& opts, bool json, const std::string& out) {
  auto r = pipeline::run_reparametrize(load(file), opts);
  const auto report = pipeline::to_json(r);
  const std::string text = model::render_model(*r.reparametrized);
  if (!out.empty()) {
    std::filesystem::path p(out);
    write_file(p, text);
    auto stem = p.parent_path() / p.stem();
    write_file(stem.string() + ".report.json", report.dump(2) + "\n");
    if (report.contains("transform")) write_file(stem.string() + ".transform.json", report["transform"].dump(2) + "\n");
  }
  if (json) {
    std::cout << report.dump(2) << "\n";
  } else {
    print_io(r);
    std::cout << "\n" << text;
    if (r.transform)
      for (const auto& sm : r.transform->states)
        std::cout << "# " << algebra::variable_name(sm.state) << " = "
                  << (sm.solved ? algebra::render(*sm.solved) : "root of " + algebra::render(sm.defining)) << "\n";
    if (r.local_not_global()) std::cout << "# note: formal roots; locally but not globally identifiable\n";
    for (const auto& [stage, reason] : r.skipped) std::cerr << "skipped " << stage << ": " << reason << "\n";
  }
  if (!r.transform || !r.transform->solved()) return kNoTransform;
  bool ok = r.same_io.value_or(false) && r.closure.value_or(false);
  if (r.numeric) ok = ok && r.numeric->passed(opts.tol);
  return ok ? kOk : kVerification;
}

int cmd_verify(const std::string& old_file, const std::string& new_file, const std::string& transform_file,
               const pipeline::Options& opts, bool json) {
  auto m = load(old_file);
  auto mt = load(new_file);
  auto t = pipeline::transform_from_json(nlohmann::json::parse(slurp(transform_file)), m, mt);
  verify::SimConfig cfg;
  cfg.seed = opts.seed;
  cfg.samples = opts.samples;
  cfg.t_end = opts.t_end;
  cfg.step = opts.step;
  auto cv = verify::cross_validate(m, mt, t, cfg);
  const bool pass = cv.passed(opts.tol);
  if (json) {
    auto j = verify::to_json(cv);
    j["tolerance"] = opts.tol;
    j["max"] = cv.max();
    j["passed"] = pass;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (pass ? "PASS" : "FAIL") << " max output deviation " << cv.max() << " (tolerance " << opts.tol
              << ", " << cv.samples.size() << " samples)\n";
  }
  return pass ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiable reparametrization of rational ODE models"};
  app.require_subcommand(1);
  pipeline::Options opts;
  bool json = false;
  std::string out;
  auto common = [&](CLI::App* sub) {
    sub->add_flag("--json", json, "Emit the JSON report");
    sub->add_option("--seed", opts.seed, "Seed for every randomized step");
    sub->add_option("--budget", opts.budget_seconds, "Wall-clock budget in seconds");
    sub->add_option("--trials", opts.trials, "Random points for rank probes");
    sub->add_option("--tol", opts.tol, "Numeric deviation tolerance");
  };

  std::string file, old_file, new_file, transform_file;
  auto* io = app.add_subcommand("io", "IO-equations and identifiable field");
  io->add_option("model", file, "Model file (.ode)")->required();
  common(io);

  auto* rep = app.add_subcommand("reparametrize", "Locally identifiable reparametrization");
  rep->add_option("model", file, "Model file (.ode)")->required();
  rep->add_option("--out", out, "Write the new model here, plus .transform.json and .report.json");
  rep->add_flag("--reduce", opts.reduce, "Linear-ansatz dimension reduction when the observability condition fails");
  common(rep);

  auto* ver = app.add_subcommand("verify", "Numeric cross-validation of a reparametrization");
  ver->add_option("old", old_file, "Original model")->required();
  ver->add_option("new", new_file, "Reparametrized model")->required();
  ver->add_option("transform", transform_file, "Transform JSON")->required();
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (*io) return cmd_io(file, opts, json);
    if (*rep) return cmd_reparametrize(file, opts, json, out);
    return cmd_verify(old_file, new_file, transform_file, opts, json);
  } catch (const groebner::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const specialize::NoSolutionFound& e) {
    std::cerr << "no specialization found: " << e.what() << "\n";
    return kNoSolution;
  } catch (const pipeline::DigestMismatch& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
