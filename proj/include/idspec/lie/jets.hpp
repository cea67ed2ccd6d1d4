#pragma once

#include <optional>
#include <utility>

#include "idspec/algebra/variables.hpp"

namespace idspec::lie {

using algebra::VarId;

/// Jet variable for the order-th derivative of `base`: order 0 is `base`
/// itself, order k is named base followed by k primes.
VarId jet(VarId base, unsigned order);
/// (base, order) for a variable created by jet(); nullopt otherwise.
std::optional<std::pair<VarId, unsigned>> jet_info(VarId v);

}  // namespace idspec::lie
