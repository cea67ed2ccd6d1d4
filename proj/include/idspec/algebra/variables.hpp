#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace idspec::algebra {

/// Process-wide handle for a named indeterminate. Ids are handed out in
/// registration order and never reused.
using VarId = std::uint32_t;

VarId intern_variable(std::string_view name);
std::optional<VarId> find_variable(std::string_view name);
const std::string& variable_name(VarId id);

/// Returns a variable whose name starts with `stem` and is not yet registered.
VarId fresh_variable(std::string_view stem);

std::vector<VarId> intern_variables(const std::vector<std::string>& names);

}  // namespace idspec::algebra
