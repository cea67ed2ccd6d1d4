#include "idspec/algebra/deadline.hpp"

#include <algorithm>

namespace idspec::algebra {

namespace {
using Clock = std::chrono::steady_clock;
thread_local Clock::time_point deadline = Clock::time_point::max();
}  // namespace

DeadlineScope::DeadlineScope(double seconds) : saved_(deadline) {
  auto d = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  deadline = std::min(deadline, d);
}

DeadlineScope::~DeadlineScope() { deadline = saved_; }

void check_deadline(const char* where) {
  if (deadline != Clock::time_point::max() && Clock::now() > deadline)
    throw BudgetExceeded(std::string("deadline passed in ") + where);
}

}  // namespace idspec::algebra
