#pragma once

// Constructive support reductions for auxiliary random variables.

#include <map>
#include <string>
#include <utility>

#include "marton/bounds.hpp"
#include "marton/channel.hpp"
#include "marton/joint_distribution.hpp"

namespace marton {

enum class ReductionStatus { reduced, already_small, not_at_extreme };

const char* to_string(ReductionStatus status);

struct ReductionOutcome {
  JointDistribution result;
  /// Quantity name -> (before, after), in bits.
  std::map<std::string, std::pair<double, double>> preserved;
  /// Axis name -> number of positive-probability values after the reduction.
  std::map<std::string, std::size_t> support_sizes;
  ReductionStatus status = ReductionStatus::already_small;
  /// Certificate residual of the U reduction (0 for the other reductions).
  double residual = 0.0;
  std::size_t steps = 0;
};

/// Number of values of `axis` with positive marginal probability.
std::size_t support_size(const JointDistribution& dist, const std::string& axis);

/// Shrinks the W support of a joint over (U, V, W, X) to at most |X| + 4
/// atoms while keeping p(u,v,x|w), p(x), H(Y|W), H(Z|W), I(U;Y|W) and
/// I(V;Z|W), and not increasing I(U;V|W). The W alphabet keeps its size.
ReductionOutcome reduce_w(const JointDistribution& joint, const BroadcastChannel& channel);

/// Removes one U value from a joint over (U, V, X, Y, Z) along a direction
/// L'(U) with E[L'|X] = 0, provided E[L'|V,Z] = 0 within `certificate_tol`.
ReductionOutcome reduce_u_support(const JointDistribution& joint, double lambda, double gamma,
                                  double certificate_tol = 1e-7);

/// reduce_u_support with the roles of (U, Y, lambda) and (V, Z, gamma) swapped.
ReductionOutcome reduce_v_support(const JointDistribution& joint, double lambda, double gamma,
                                  double certificate_tol = 1e-7);

/// Makes p(x|u,v,w) deterministic on a joint over (U, V, W, X) without
/// lowering the weighted six-tuple.
ReductionOutcome extremize_x(const JointDistribution& joint, const BroadcastChannel& channel,
                             const HyperplaneWeights& weights);

}  // namespace marton
