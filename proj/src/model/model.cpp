#include "idspec/model/model.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "idspec/algebra/gcd.hpp"
#include "idspec/algebra/text.hpp"

namespace idspec::model {
namespace {

const std::set<std::string, std::less<>> kKeywords{"model", "states", "params", "inputs", "outputs"};

enum class Kind { State, Param, Input, Output };

struct Line {
  std::size_t number;
  std::string text;  // without comment and line ending
  std::string comment;
};

std::vector<Line> split_lines(std::string_view src) {
  std::vector<Line> out;
  std::size_t start = 0, number = 1;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    if (end == std::string_view::npos) end = src.size();
    std::string_view raw = src.substr(start, end - start);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    Line line{number, std::string(raw), ""};
    auto hash = line.text.find('#');
    if (hash != std::string::npos) {
      line.comment = line.text.substr(hash + 1);
      line.text.resize(hash);
    }
    out.push_back(std::move(line));
    if (end == src.size()) break;
    start = end + 1;
    ++number;
  }
  return out;
}

std::size_t skip_ws(const std::string& s, std::size_t i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return i;
}

std::size_t read_identifier(const std::string& s, std::size_t i) {
  if (i >= s.size() || !algebra::is_identifier_start(static_cast<unsigned char>(s[i]))) return i;
  while (i < s.size() && algebra::is_identifier_char(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

class ModelParser {
 public:
  explicit ModelParser(std::string_view src) : lines_(split_lines(src)) {}

  Model parse() {
    std::vector<std::pair<const Line*, std::size_t>> statements;  // (line, column offset)
    // pass 1: declarations
    for (const auto& line : lines_) {
      std::size_t i = skip_ws(line.text, 0);
      if (i == line.text.size()) {
        constraint_comment(line);
        continue;
      }
      std::size_t j = read_identifier(line.text, i);
      std::string word = line.text.substr(i, j - i);
      bool is_decl = kKeywords.count(word) && (j == line.text.size() || line.text[j] == ' ' || line.text[j] == '\t');
      if (is_decl) {
        declaration(line, word, j);
      } else {
        statements.emplace_back(&line, i);
      }
      constraint_comment(line);
    }
    if (m_.states.empty()) throw ParseError(1, 1, "model declares no states", {"states"});
    if (m_.outputs.empty()) throw ParseError(1, 1, "model declares no outputs", {"outputs"});
    m_.rhs.assign(m_.states.size(), {});
    m_.obs.assign(m_.outputs.size(), {});
    std::vector<bool> have_rhs(m_.states.size()), have_obs(m_.outputs.size());
    // pass 2: equations, possibly several per line separated by ';'
    for (auto [line, col] : statements) {
      std::size_t pos = col;
      while (pos < line->text.size()) {
        std::size_t semi = line->text.find(';', pos);
        if (semi == std::string::npos) semi = line->text.size();
        std::size_t s = skip_ws(line->text, pos);
        if (s < semi) equation(*line, s, semi, have_rhs, have_obs);
        pos = semi + 1;
      }
    }
    for (std::size_t k = 0; k < m_.states.size(); ++k) {
      if (!have_rhs[k]) {
        throw ValidationError(decl_line_.at(m_.states[k]), 1,
                              "state '" + algebra::variable_name(m_.states[k]) + "' has no equation");
      }
    }
    for (std::size_t k = 0; k < m_.outputs.size(); ++k) {
      if (!have_obs[k]) {
        throw ValidationError(decl_line_.at(m_.outputs[k]), 1,
                              "output '" + algebra::variable_name(m_.outputs[k]) + "' has no equation");
      }
    }
    for (auto& [line, col, text] : pending_constraints_) m_.constraints.push_back(parse_constraint(line, col, text));
    return m_;
  }

 private:
  void declaration(const Line& line, const std::string& word, std::size_t pos) {
    if (word == "model") {
      std::size_t s = skip_ws(line.text, pos);
      std::string name = line.text.substr(s);
      while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
      if (name.empty()) throw ParseError(line.number, s + 1, "missing model name", {"name"});
      if (!m_.name.empty()) throw ValidationError(line.number, 1, "duplicate 'model' line");
      m_.name = name;
      return;
    }
    Kind kind = word == "states" ? Kind::State : word == "params" ? Kind::Param : word == "inputs" ? Kind::Input : Kind::Output;
    if (!seen_sections_.insert(word).second) throw ValidationError(line.number, 1, "duplicate '" + word + "' section");
    std::size_t i = pos;
    bool expect_ident = true;
    for (;;) {
      i = skip_ws(line.text, i);
      if (i >= line.text.size()) break;
      if (line.text[i] == ',') {
        if (expect_ident) throw ParseError(line.number, i + 1, "unexpected ','", {"identifier"});
        expect_ident = true;
        ++i;
        continue;
      }
      std::size_t j = read_identifier(line.text, i);
      if (j == i) throw ParseError(line.number, i + 1, std::string("unexpected '") + line.text[i] + "'", {"identifier", ","});
      std::string name = line.text.substr(i, j - i);
      if (kKeywords.count(name)) throw ValidationError(line.number, i + 1, "'" + name + "' is a reserved word");
      if (names_.count(name)) throw ValidationError(line.number, i + 1, "duplicate identifier '" + name + "'");
      VarId v = algebra::intern_variable(name);
      names_.emplace(name, kind);
      decl_line_.emplace(v, line.number);
      switch (kind) {
        case Kind::State: m_.states.push_back(v); break;
        case Kind::Param: m_.params.push_back(v); break;
        case Kind::Input: m_.inputs.push_back(v); break;
        case Kind::Output: m_.outputs.push_back(v); break;
      }
      expect_ident = false;
      i = j;
    }
    if (expect_ident && kind != Kind::Input && kind != Kind::Param) {
      throw ParseError(line.number, i + 1, "empty '" + word + "' list", {"identifier"});
    }
  }

  void equation(const Line& line, std::size_t s, std::size_t end, std::vector<bool>& have_rhs, std::vector<bool>& have_obs) {
    std::size_t j = read_identifier(line.text, s);
    if (j == s) throw ParseError(line.number, s + 1, "expected an equation", {"declaration", "equation"});
    std::string name = line.text.substr(s, j - s);
    bool derivative = j < end && line.text[j] == '\'';
    if (derivative) ++j;
    std::size_t k = skip_ws(line.text, j);
    if (k >= end || line.text[k] != '=') throw ParseError(line.number, k + 1, "expected '='", {"="});
    auto it = names_.find(name);
    if (it == names_.end()) throw ValidationError(line.number, s + 1, "unknown identifier '" + name + "'");
    std::string_view expr(line.text.data() + k + 1, end - k - 1);
    algebra::NameResolver resolve = [this](std::string_view n) -> std::optional<VarId> {
      auto f = names_.find(n);
      if (f == names_.end() || f->second == Kind::Output) return std::nullopt;
      return algebra::intern_variable(n);
    };
    VarId v = algebra::intern_variable(name);
    if (derivative) {
      if (it->second == Kind::Input) throw ValidationError(line.number, s + 1, "derivative of input '" + name + "' is not allowed");
      if (it->second != Kind::State) throw ValidationError(line.number, s + 1, "'" + name + "' is not a state");
      std::size_t idx = m_.state_index(v);
      if (have_rhs[idx]) throw ValidationError(line.number, s + 1, "duplicate equation for " + name + "'");
      m_.rhs[idx] = algebra::parse_expression(expr, resolve, line.number, k + 2);
      have_rhs[idx] = true;
    } else {
      if (it->second != Kind::Output) {
        throw ValidationError(line.number, s + 1, "left-hand side '" + name + "' must be an output or a state derivative");
      }
      std::size_t idx = std::find(m_.outputs.begin(), m_.outputs.end(), v) - m_.outputs.begin();
      if (have_obs[idx]) throw ValidationError(line.number, s + 1, "duplicate equation for " + name);
      m_.obs[idx] = algebra::parse_expression(expr, resolve, line.number, k + 2);
      have_obs[idx] = true;
    }
  }

  void constraint_comment(const Line& line) {
    static const std::string tag = "constraint:";
    auto pos = line.comment.find_first_not_of(" \t");
    if (pos == std::string::npos || line.comment.compare(pos, tag.size(), tag) != 0) return;
    std::size_t col = line.text.size() + 1 + pos + tag.size() + 1;
    pending_constraints_.push_back({line.number, col, line.comment.substr(pos + tag.size())});
  }

  Polynomial parse_constraint(std::size_t line, std::size_t col, const std::string& text) {
    algebra::NameResolver resolve = [this](std::string_view n) -> std::optional<VarId> {
      auto f = names_.find(n);
      if (f == names_.end() || f->second != Kind::Param) return std::nullopt;
      return algebra::intern_variable(n);
    };
    auto eq = text.find('=');
    RationalFunction lhs = algebra::parse_expression(std::string_view(text).substr(0, eq), resolve, line, col);
    RationalFunction rhs = eq == std::string::npos ? RationalFunction()
                                                   : algebra::parse_expression(std::string_view(text).substr(eq + 1), resolve, line, col + eq + 1);
    RationalFunction diff = lhs - rhs;
    if (diff.is_zero()) throw ValidationError(line, col, "trivial constraint");
    return algebra::primitive_part(diff.num());
  }

  struct PendingConstraint {
    std::size_t line, col;
    std::string text;
  };

  std::vector<Line> lines_;
  Model m_;
  std::map<std::string, Kind, std::less<>> names_;
  std::unordered_map<VarId, std::size_t> decl_line_;
  std::set<std::string> seen_sections_;
  std::vector<PendingConstraint> pending_constraints_;
};

}  // namespace

std::size_t Model::state_index(VarId v) const {
  auto it = std::find(states.begin(), states.end(), v);
  if (it == states.end()) throw std::out_of_range("not a state: " + algebra::variable_name(v));
  return it - states.begin();
}

bool Model::is_state(VarId v) const { return std::find(states.begin(), states.end(), v) != states.end(); }
bool Model::is_param(VarId v) const { return std::find(params.begin(), params.end(), v) != params.end(); }
bool Model::is_input(VarId v) const { return std::find(inputs.begin(), inputs.end(), v) != inputs.end(); }

Model parse_model(std::string_view source) {
  Model m = ModelParser(source).parse();
  if (m.name.empty()) m.name = "model";
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string render_model(const Model& m) {
  auto list = [](const std::vector<VarId>& vs) {
    std::string out;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) out += ", ";
      out += algebra::variable_name(vs[i]);
    }
    return out;
  };
  algebra::RenderOptions opts;
  opts.precedence = m.states;
  opts.precedence.insert(opts.precedence.end(), m.inputs.begin(), m.inputs.end());
  opts.precedence.insert(opts.precedence.end(), m.params.begin(), m.params.end());
  std::string out = "model " + m.name + "\n";
  out += "states " + list(m.states) + "\n";
  if (!m.params.empty()) out += "params " + list(m.params) + "\n";
  if (!m.inputs.empty()) out += "inputs " + list(m.inputs) + "\n";
  out += "outputs " + list(m.outputs) + "\n";
  for (std::size_t k = 0; k < m.states.size(); ++k)
    out += algebra::variable_name(m.states[k]) + "' = " + algebra::render(m.rhs[k], opts) + "\n";
  for (std::size_t k = 0; k < m.outputs.size(); ++k)
    out += algebra::variable_name(m.outputs[k]) + " = " + algebra::render(m.obs[k], opts) + "\n";
  for (const auto& c : m.constraints) out += "# constraint: " + algebra::render(c, opts) + " = 0\n";
  return out;
}

std::string model_digest(const Model& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : render_model(m)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Polynomial common_denominator(const Model& m) {
  std::vector<VarId> dyn = m.states;
  dyn.insert(dyn.end(), m.inputs.begin(), m.inputs.end());
  std::sort(dyn.begin(), dyn.end());
  Polynomial acc(1);
  auto absorb = [&](const RationalFunction& f) {
    // f = (N/l) / (D/l) with D/l monic in the dynamic variables
    auto dcoeffs = f.den().collect(dyn);
    Polynomial l = dcoeffs.front().second;
    auto visit = [&](const Polynomial& p) {
      for (const auto& [mono, c] : p.collect(dyn)) {
        Polynomial g = algebra::gcd(l, c);
        Polynomial d = *algebra::divide_exact(algebra::primitive_part(l), g);
        if (!d.is_constant()) acc = algebra::lcm(acc, d);
      }
    };
    visit(f.num());
    visit(f.den());
  };
  for (const auto& f : m.rhs) absorb(f);
  for (const auto& g : m.obs) absorb(g);
  return algebra::primitive_part(acc);
}

void validate(const Model& m) {
  std::set<VarId> seen;
  for (const auto* list : {&m.states, &m.params, &m.inputs, &m.outputs})
    for (VarId v : *list)
      if (!seen.insert(v).second) throw ValidationError(0, 0, "duplicate identifier '" + algebra::variable_name(v) + "'");
  if (m.rhs.size() != m.states.size() || m.obs.size() != m.outputs.size()) {
    throw ValidationError(0, 0, "equation count does not match declarations");
  }
  auto check = [&](const RationalFunction& f) {
    for (VarId v : f.variables())
      if (!m.is_state(v) && !m.is_param(v) && !m.is_input(v))
        throw ValidationError(0, 0, "unknown identifier '" + algebra::variable_name(v) + "'");
  };
  for (const auto& f : m.rhs) check(f);
  for (const auto& g : m.obs) check(g);
  for (const auto& c : m.constraints)
    for (VarId v : c.variables())
      if (!m.is_param(v)) throw ValidationError(0, 0, "constraint mentions non-parameter '" + algebra::variable_name(v) + "'");
}

}  // namespace idspec::model
