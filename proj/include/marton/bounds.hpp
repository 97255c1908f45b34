#pragma once

// Computable sum-rate bounds and the supporting-hyperplane maximizer.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "marton/channel.hpp"
#include "marton/information.hpp"
#include "marton/joint_distribution.hpp"

namespace marton {

struct OptimizationConfig {
  std::size_t grid_points = 201;
  std::size_t starts = 64;
  std::uint64_t seed = 1;
  double tol = 1e-7;
  std::size_t max_iters = 2000;

  /// Throws std::invalid_argument unless grid_points is odd and >= 33,
  /// starts >= 1, tol > 0 and max_iters >= 1.
  void validate() const;
};

struct Diagnostics {
  std::size_t starts_used = 0;
  std::size_t starts_converged = 0;
  /// Operation-specific first-order residual at the witness (0 when unused).
  double stationarity_residual = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> notes;
};

struct OptimizationResult {
  double value = 0.0;
  /// Axes depend on the operation; see each function.
  std::optional<JointDistribution> witness;
  /// Structured witness data (gamma*, mixture weights, map index, ...).
  std::map<std::string, double> parameters;
  Diagnostics diagnostics;
};

struct HyperplaneWeights {
  std::array<double, 6> lambda{};
};

/// max(I(X;Y), I(X;Z)) at X ~ Bernoulli(p). Requires |X| = 2.
double t_function(double p, const BroadcastChannel& channel);

/// gamma I(W;Y) + (1-gamma) I(W;Z) + sum_w p(w) T(p(X=1|W=w)) for a joint
/// over (W, X).
double term_a_objective(const JointDistribution& wx, const BroadcastChannel& channel,
                        double gamma);

/// Inner maximum over |W| = 2 at a fixed gamma. `witness` receives the
/// optimal joint over (W, X) when given.
double term_a_inner(const BroadcastChannel& channel, double gamma,
                    const OptimizationConfig& config,
                    std::optional<JointDistribution>* witness = nullptr);

/// min over gamma of the inner maximum. Witness axes (W, X); parameters
/// gamma, p_w0, p_x1_w0, p_x1_w1.
OptimizationResult term_a(const BroadcastChannel& channel, const OptimizationConfig& config);

/// I(U;Y) + I(V;Z) for a joint over (U, V, X).
double term_b_objective(const JointDistribution& uvx, const BroadcastChannel& channel);

/// Maximum of I(U;Y) + I(V;Z) over independent binary U, V and the sixteen
/// maps x(u, v). Witness axes (U, V, X); parameters map, a, b.
OptimizationResult term_b(const BroadcastChannel& channel, const OptimizationConfig& config);

/// max(term_a, term_b). With `strict`, channels whose marginal kernels have
/// a zero entry are rejected; otherwise a warning is noted.
OptimizationResult marton_sum_rate(const BroadcastChannel& channel,
                                   const OptimizationConfig& config, bool strict = true);

/// min(I(U;Y)+I(V;Z), I(U;Y)+I(X;Z|U), I(V;Z)+I(X;Y|V)) for a joint over
/// (U, V, X) with U and V conditionally independent given X.
double ne_outer_objective(const JointDistribution& uvx, const BroadcastChannel& channel);

/// Maximum of ne_outer_objective over p(x) p(u|x) p(v|x) with |U| = |V| = 3.
/// Witness axes (U, V, X).
OptimizationResult ne_outer_sum_rate(const BroadcastChannel& channel,
                                     const OptimizationConfig& config);

/// sum_i lambda_i * six_tuple_i for a joint over (U, V, W, X).
double hyperplane_objective(const JointDistribution& uvwx, const BroadcastChannel& channel,
                            const HyperplaneWeights& weights);

/// Maximum of the weighted six-tuple over p(u,v,w) with |U| = |V| = |X|,
/// |W| = |X| + 4 and a deterministic map x(u,v,w). Witness axes
/// (U, V, W, X); parameters hold the six coordinates as t1..t6.
OptimizationResult hyperplane_max(const BroadcastChannel& channel,
                                  const HyperplaneWeights& weights,
                                  const OptimizationConfig& config);

std::vector<std::pair<HyperplaneWeights, SixTuple>> region_sample(
    const BroadcastChannel& channel, const std::vector<HyperplaneWeights>& weights,
    const OptimizationConfig& config);

/// Maximizes I(U;Y)+I(V;Z)-I(U;V)+lambda I(U;Y)+gamma I(V;Z) over p(u,v|x)
/// at the fixed input distribution `px`. Witness axes (U, V, X, Y, Z);
/// stationarity_residual is the largest per-x spread of the gradient over
/// the support.
OptimizationResult auxiliary_max(const BroadcastChannel& channel, const std::vector<double>& px,
                                 std::size_t nu, std::size_t nv, double lambda, double gamma,
                                 const OptimizationConfig& config);

}  // namespace marton
