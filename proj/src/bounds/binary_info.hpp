#pragma once

#include <span>

#include "marton/channel.hpp"

namespace marton::detail {

double entropy_bits(std::span<const double> p);

/// Output entropies and single-user informations of a binary-input channel
/// as functions of p = P(X = 1).
class BinaryView {
 public:
  explicit BinaryView(const BroadcastChannel& channel);

  double hy(double p) const { return output_entropy(qy_[0], qy_[1], p); }
  double hz(double p) const { return output_entropy(qz_[0], qz_[1], p); }
  double iy(double p) const { return hy(p) - ((1.0 - p) * hy0_ + p * hy1_); }
  double iz(double p) const { return hz(p) - ((1.0 - p) * hz0_ + p * hz1_); }
  double t(double p) const;

 private:
  static double output_entropy(const std::vector<double>& r0, const std::vector<double>& r1,
                               double p);

  Kernel qy_, qz_;
  double hy0_, hy1_, hz0_, hz1_;
};

}  // namespace marton::detail
