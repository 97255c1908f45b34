#pragma once

#include <vector>

#include "marton/bounds.hpp"

namespace marton::detail {

/// Weighted six-tuple of a joint over (U, V, W, X) written as a combination
/// of marginal entropies, evaluated on the mass table m[cell * nx + x] with
/// cell = (u * nv + v) * nw + w.
class HyperplaneEvaluator {
 public:
  HyperplaneEvaluator(const BroadcastChannel& channel, const HyperplaneWeights& weights,
                      std::size_t nu, std::size_t nv, std::size_t nw);

  std::size_t cells() const { return nu_ * nv_ * nw_; }
  std::size_t nx() const { return nx_; }

  double value(const std::vector<double>& m) const;
  /// Gradient with respect to every entry of m.
  double value_and_gradient(const std::vector<double>& m, std::vector<double>& grad) const;

 private:
  struct Term {
    double coef;
    std::vector<std::size_t> key;  // per cell
    std::size_t keys;
    int output;  // 0 none, 1 Y, 2 Z
  };
  double evaluate(const std::vector<double>& m, std::vector<double>* grad) const;

  std::size_t nu_, nv_, nw_, nx_, ny_, nz_;
  Kernel qy_, qz_;
  std::vector<Term> terms_;
};

}  // namespace marton::detail
