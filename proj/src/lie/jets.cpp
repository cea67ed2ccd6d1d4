#include "idspec/lie/jets.hpp"

#include <mutex>
#include <string>
#include <unordered_map>

namespace idspec::lie {
namespace {

std::mutex g_mutex;
std::unordered_map<VarId, std::pair<VarId, unsigned>> g_info;

}  // namespace

VarId jet(VarId base, unsigned order) {
  if (order == 0) return base;
  std::string name = algebra::variable_name(base) + std::string(order, '\'');
  VarId v = algebra::intern_variable(name);
  std::lock_guard<std::mutex> lock(g_mutex);
  g_info.emplace(v, std::make_pair(base, order));
  return v;
}

std::optional<std::pair<VarId, unsigned>> jet_info(VarId v) {
  std::lock_guard<std::mutex> lock(g_mutex);
  auto it = g_info.find(v);
  if (it == g_info.end()) return std::nullopt;
  return it->second;
}

}  // namespace idspec::lie
