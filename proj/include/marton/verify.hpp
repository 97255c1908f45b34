#pragma once

// Randomized property suites shared by the CLI and the acceptance tests.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace marton {

struct SuiteReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t passed = 0;
  /// Worst observed value per checked quantity.
  std::map<std::string, double> worst;
  /// Tolerance applied to each quantity in `worst`.
  std::map<std::string, double> tolerance;
  std::vector<std::string> failures;

  bool ok() const { return trials > 0 && passed == trials; }
};

/// Entropy decomposition residual (<= 1e-10) and first/second derivative
/// agreement with centered differences at step 1e-4 (<= 1e-5).
SuiteReport verify_entropy_identity(std::size_t trials, std::uint64_t seed);

/// Marginals of X, Y, Z fixed across an 11-point eps grid (<= 1e-12) and the
/// Markov chain UV -> X -> YZ kept (conditional information <= 1e-10).
SuiteReport verify_invariance(std::size_t trials, std::uint64_t seed);

/// At maximizers of the auxiliary objective: |first derivative| <= 1e-5 and
/// the second-order combination <= 1e-6 along a random admissible direction.
SuiteReport verify_stationarity(std::size_t trials, std::uint64_t seed);

/// Binary U, V, X with X = U xor V or X = U and V, nondegenerate inputs and
/// a full-support Y kernel with positive capacity: I(U;V|Y) > 1e-9.
SuiteReport verify_xor_and_dependence(std::size_t trials, std::uint64_t seed);

}  // namespace marton
