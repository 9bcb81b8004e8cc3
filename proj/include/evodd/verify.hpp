#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace evodd {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Called as soon as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

/// Runs the structural checks of the solver: transmission equivalence, Robin-Robin
/// convergence, Steklov-Poincare coercivity, the discrete d-form bound, Jacobi's
/// formula, bi-Lipschitz sampling, manufactured-solution orders, RR/PR equivalence,
/// monotone error pairing and DN/NN well-definedness.
std::vector<CriterionResult> run_verification_suite(const VerifyOptions& options = {});

}  // namespace evodd
