#include "evodd/error.hpp"

namespace evodd {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::geometry_degeneracy: return "geometry-degeneracy";
    case ErrorKind::input: return "input";
    case ErrorKind::transmission_violation: return "transmission-violation";
    case ErrorKind::numerical_failure: return "numerical-failure";
    case ErrorKind::misuse: return "misuse";
    case ErrorKind::unsupported: return "unsupported-configuration";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& what)
    : std::runtime_error("[" + module + "] " + std::string(to_string(kind)) + " error: " + what),
      kind_(kind),
      module_(std::move(module)) {}

}  // namespace evodd
