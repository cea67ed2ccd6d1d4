#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace idspec {

/// Root of every error the pipeline raises. `kind()` is the stable error name
/// that reports and exit-code mapping key on.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define IDSPEC_ERROR_TYPE(Name)                                   \
  class Name : public ::idspec::Error {                           \
   public:                                                        \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

}  // namespace idspec
