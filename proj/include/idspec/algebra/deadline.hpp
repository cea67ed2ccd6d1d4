#pragma once

#include <chrono>

#include "idspec/errors.hpp"

namespace idspec::algebra {

IDSPEC_ERROR_TYPE(BudgetExceeded);

/// Wall-clock deadline for the current thread while in scope. Scopes nest;
/// the earliest deadline wins.
class DeadlineScope {
 public:
  explicit DeadlineScope(double seconds);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::chrono::steady_clock::time_point saved_;
};

/// Throws BudgetExceeded once the innermost deadline has passed.
void check_deadline(const char* where);

}  // namespace idspec::algebra
