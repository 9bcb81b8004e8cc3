#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evodd {

enum class ErrorKind {
  configuration,
  geometry_degeneracy,
  input,
  transmission_violation,
  numerical_failure,
  misuse,
  unsupported,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Structured diagnostic: every failure names the module that raised it and
/// the precondition that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace evodd
