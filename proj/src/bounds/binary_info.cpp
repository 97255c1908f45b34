#include "binary_info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace marton::detail {

double entropy_bits(std::span<const double> p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

BinaryView::BinaryView(const BroadcastChannel& channel)
    : qy_(channel.y_kernel()), qz_(channel.z_kernel()) {
  if (channel.nx() != 2) throw std::invalid_argument("operation requires a binary-input channel");
  hy0_ = entropy_bits(qy_[0]);
  hy1_ = entropy_bits(qy_[1]);
  hz0_ = entropy_bits(qz_[0]);
  hz1_ = entropy_bits(qz_[1]);
}

double BinaryView::t(double p) const { return std::max(iy(p), iz(p)); }

double BinaryView::output_entropy(const std::vector<double>& r0, const std::vector<double>& r1,
                                  double p) {
  double h = 0.0;
  for (std::size_t y = 0; y < r0.size(); ++y) {
    const double v = (1.0 - p) * r0[y] + p * r1[y];
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

}  // namespace marton::detail
