#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace marton {

/// Seeded generator whose draws are reproducible across standard libraries:
/// only the raw 64-bit engine output is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(seed ^ mix(stream + 1))) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }
  double exponential() { return -std::log1p(-uniform()); }
  double normal() {
    // Box-Muller; one value per call is enough here.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Symmetric Dirichlet(1) sample of length n.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> v(n);
    double total = 0.0;
    for (auto& x : v) total += (x = exponential());
    for (auto& x : v) x /= total;
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace marton
