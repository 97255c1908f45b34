#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace marton {

/// Row-stochastic matrix stored as rows[input][output].
using Kernel = std::vector<std::vector<double>>;

/// Two-receiver broadcast channel q(y, z | x), stored as an |X| x |Y| x |Z|
/// tensor. Construction checks shape, finiteness and nonnegativity only;
/// row sums are checked by validate() so malformed kernels can be reported.
class BroadcastChannel {
 public:
  BroadcastChannel(std::size_t nx, std::size_t ny, std::size_t nz, std::vector<double> kernel);

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t nz() const noexcept { return nz_; }

  double q(std::size_t x, std::size_t y, std::size_t z) const {
    return kernel_[(x * ny_ + y) * nz_ + z];
  }
  const std::vector<double>& kernel() const noexcept { return kernel_; }

  /// Marginal kernels q(y|x) and q(z|x).
  const Kernel& y_kernel() const noexcept { return y_kernel_; }
  const Kernel& z_kernel() const noexcept { return z_kernel_; }

  /// True when every entry of q(y|x) and q(z|x) is strictly positive.
  bool strictly_positive() const noexcept { return strictly_positive_; }

 private:
  std::size_t nx_, ny_, nz_;
  std::vector<double> kernel_;
  Kernel y_kernel_;
  Kernel z_kernel_;
  bool strictly_positive_ = false;
};

struct ChannelReport {
  bool valid = false;
  bool strictly_positive = false;
  double max_row_residual = 0.0;
  std::vector<double> row_residuals;
};

inline constexpr double kRowSumTolerance = 1e-9;

ChannelReport validate(const BroadcastChannel& channel);

/// Throws std::invalid_argument when validate() reports an invalid kernel.
void require_valid(const BroadcastChannel& channel);

/// q(Y=0|X=0)=alpha, q(Y=0|X=1)=beta, q(Z=0|X=0)=1-beta, q(Z=0|X=1)=1-alpha,
/// with Y and Z conditionally independent given X.
BroadcastChannel binary_example(double alpha, double beta);

/// q(y, z | x) = q_y(y | x) q_z(z | x).
BroadcastChannel product_channel(const Kernel& qy, const Kernel& qz);

/// Each row of q(y, z | x) drawn from a symmetric Dirichlet(1).
BroadcastChannel random_channel(std::uint64_t seed, std::size_t nx, std::size_t ny,
                                std::size_t nz);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Text format: first non-comment line holds `|X| |Y| |Z|`, then |X| rows of
// |Y|*|Z| probabilities (y-major, z-minor). Lines starting with '#' are ignored.
BroadcastChannel parse_channel(std::istream& in, const std::string& source = "<stream>");
BroadcastChannel load_channel(const std::filesystem::path& path);
void write_channel(std::ostream& out, const BroadcastChannel& channel);
void save_channel(const BroadcastChannel& channel, const std::filesystem::path& path);

}  // namespace marton
