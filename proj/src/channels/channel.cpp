#include "marton/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "marton/random.hpp"

namespace marton {

BroadcastChannel::BroadcastChannel(std::size_t nx, std::size_t ny, std::size_t nz,
                                   std::vector<double> kernel)
    : nx_(nx), ny_(ny), nz_(nz), kernel_(std::move(kernel)) {
  if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("channel sizes must be >= 1");
  if (kernel_.size() != nx * ny * nz)
    throw std::invalid_argument("kernel has " + std::to_string(kernel_.size()) +
                                " entries, expected " + std::to_string(nx * ny * nz));
  for (double v : kernel_)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("kernel entries must be finite and nonnegative");

  y_kernel_.assign(nx, std::vector<double>(ny, 0.0));
  z_kernel_.assign(nx, std::vector<double>(nz, 0.0));
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) {
        y_kernel_[x][y] += q(x, y, z);
        z_kernel_[x][z] += q(x, y, z);
      }
  strictly_positive_ = true;
  for (const auto& row : y_kernel_)
    for (double v : row) strictly_positive_ = strictly_positive_ && v > 0.0;
  for (const auto& row : z_kernel_)
    for (double v : row) strictly_positive_ = strictly_positive_ && v > 0.0;
}

ChannelReport validate(const BroadcastChannel& channel) {
  ChannelReport report;
  report.strictly_positive = channel.strictly_positive();
  for (std::size_t x = 0; x < channel.nx(); ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < channel.ny(); ++y)
      for (std::size_t z = 0; z < channel.nz(); ++z) sum += channel.q(x, y, z);
    report.row_residuals.push_back(std::abs(sum - 1.0));
  }
  report.max_row_residual =
      *std::max_element(report.row_residuals.begin(), report.row_residuals.end());
  report.valid = report.max_row_residual <= kRowSumTolerance;
  return report;
}

void require_valid(const BroadcastChannel& channel) {
  const auto report = validate(channel);
  if (!report.valid)
    throw std::invalid_argument("channel row sums deviate from 1 by " +
                                std::to_string(report.max_row_residual));
}

BroadcastChannel binary_example(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("alpha and beta must lie strictly inside (0, 1)");
  const Kernel qy = {{alpha, 1.0 - alpha}, {beta, 1.0 - beta}};
  const Kernel qz = {{1.0 - beta, beta}, {1.0 - alpha, alpha}};
  return product_channel(qy, qz);
}

BroadcastChannel product_channel(const Kernel& qy, const Kernel& qz) {
  if (qy.empty() || qy.size() != qz.size())
    throw std::invalid_argument("marginal kernels must have the same nonzero number of rows");
  const std::size_t nx = qy.size(), ny = qy[0].size(), nz = qz[0].size();
  std::vector<double> kernel(nx * ny * nz);
  for (std::size_t x = 0; x < nx; ++x) {
    if (qy[x].size() != ny || qz[x].size() != nz)
      throw std::invalid_argument("ragged marginal kernel");
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z) kernel[(x * ny + y) * nz + z] = qy[x][y] * qz[x][z];
  }
  return BroadcastChannel(nx, ny, nz, std::move(kernel));
}

BroadcastChannel random_channel(std::uint64_t seed, std::size_t nx, std::size_t ny,
                                std::size_t nz) {
  if (nx == 0 || ny == 0 || nz == 0) throw std::invalid_argument("channel sizes must be >= 1");
  Rng rng(seed);
  std::vector<double> kernel;
  kernel.reserve(nx * ny * nz);
  for (std::size_t x = 0; x < nx; ++x) {
    const auto row = rng.dirichlet(ny * nz);
    kernel.insert(kernel.end(), row.begin(), row.end());
  }
  return BroadcastChannel(nx, ny, nz, std::move(kernel));
}

}  // namespace marton
