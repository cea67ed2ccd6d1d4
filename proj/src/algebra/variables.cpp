#include "idspec/algebra/variables.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace idspec::algebra {
namespace {

struct Registry {
  std::mutex mutex;
  std::deque<std::string> names;  // deque keeps references stable
  std::unordered_map<std::string, VarId> ids;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

VarId intern_variable(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.ids.find(std::string(name));
  if (it != r.ids.end()) return it->second;
  auto id = static_cast<VarId>(r.names.size());
  r.names.emplace_back(name);
  r.ids.emplace(r.names.back(), id);
  return id;
}

std::optional<VarId> find_variable(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  auto it = r.ids.find(std::string(name));
  if (it == r.ids.end()) return std::nullopt;
  return it->second;
}

const std::string& variable_name(VarId id) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  if (id >= r.names.size()) throw std::out_of_range("unknown variable id");
  return r.names[id];
}

VarId fresh_variable(std::string_view stem) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  for (std::size_t k = 0;; ++k) {
    std::string candidate = std::string(stem) + "#" + std::to_string(k);
    if (r.ids.count(candidate)) continue;
    auto id = static_cast<VarId>(r.names.size());
    r.names.push_back(candidate);
    r.ids.emplace(r.names.back(), id);
    return id;
  }
}

std::vector<VarId> intern_variables(const std::vector<std::string>& names) {
  std::vector<VarId> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(intern_variable(n));
  return out;
}

}  // namespace idspec::algebra
