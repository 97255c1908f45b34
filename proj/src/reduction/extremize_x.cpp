#include <cmath>
#include <stdexcept>

#include "../bounds/hyper_eval.hpp"
#include "marton/information.hpp"
#include "marton/reduction.hpp"

namespace marton {

ReductionOutcome extremize_x(const JointDistribution& joint, const BroadcastChannel& channel,
                             const HyperplaneWeights& weights) {
  for (const char* name : {"U", "V", "W", "X"})
    if (!joint.has_axis(name)) throw std::invalid_argument(std::string("joint lacks axis ") + name);
  const auto uvwx = marginalize(joint, {"U", "V", "W", "X"});
  const std::size_t nu = uvwx.axis_size("U"), nv = uvwx.axis_size("V"),
                    nw = uvwx.axis_size("W"), nx = uvwx.axis_size("X");
  const detail::HyperplaneEvaluator eval(channel, weights, nu, nv, nw);
  const std::size_t cells = eval.cells();

  std::vector<double> m(uvwx.probs().begin(), uvwx.probs().end());
  std::vector<double> p(cells, 0.0);
  bool deterministic = true;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t positive = 0;
    for (std::size_t x = 0; x < nx; ++x) {
      p[c] += m[c * nx + x];
      positive += m[c * nx + x] > 0.0;
    }
    deterministic = deterministic && positive <= 1;
  }

  const double before = hyperplane_objective(uvwx, channel, weights);
  ReductionOutcome out{uvwx, {}, {}, ReductionStatus::already_small, 0.0, 0};
  out.preserved["objective"] = {before, before};
  if (deterministic) return out;

  // The objective is convex in each cell's conditional, so its best vertex
  // is never worse than the current point.
  auto set_vertex = [&](std::size_t c, std::size_t x) {
    for (std::size_t k = 0; k < nx; ++k) m[c * nx + k] = k == x ? p[c] : 0.0;
  };
  std::vector<std::size_t> map(cells, 0);
  auto best_vertex = [&](std::size_t c, double floor) {
    double best = floor;
    for (std::size_t x = 0; x < nx; ++x) {
      set_vertex(c, x);
      const double v = eval.value(m);
      if (v > best) best = v, map[c] = x;
    }
    set_vertex(c, map[c]);
    ++out.steps;
    return best;
  };
  for (std::size_t c = 0; c < cells; ++c)
    if (p[c] > 0.0) best_vertex(c, -INFINITY);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < cells; ++c) {
      if (!(p[c] > 0.0)) continue;
      const std::size_t old = map[c];
      best_vertex(c, eval.value(m) + 1e-14);
      changed = changed || map[c] != old;
    }
  }
  out.result = JointDistribution::from_weights(uvwx.axes(), m);
  out.preserved["objective"].second = hyperplane_objective(out.result, channel, weights);
  out.status = ReductionStatus::reduced;
  return out;
}

}  // namespace marton
