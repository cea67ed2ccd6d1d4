#pragma once

#include <string>
#include <vector>

#include "idspec/algebra/rational_function.hpp"

namespace idspec::algebra {

/// Canonical text: terms by total degree descending, ties broken
/// lexicographically with variables ranked by `precedence` first, then by
/// name. Output is deterministic for a fixed precedence.
struct RenderOptions {
  std::vector<VarId> precedence;
};

std::string render(const Monomial& m);
std::string render(const Polynomial& p, const RenderOptions& opts = {});
std::string render(const RationalFunction& f, const RenderOptions& opts = {});
std::string render(const BigRational& c);

/// Term order used by render, exposed for callers that group terms.
std::vector<Term> canonical_terms(const Polynomial& p, const RenderOptions& opts = {});

}  // namespace idspec::algebra
