#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hyper_eval.hpp"
#include "marton/optimize.hpp"
#include "marton/parallel.hpp"
#include "marton/random.hpp"
#include "marton/reduction.hpp"

namespace marton {

namespace detail {

HyperplaneEvaluator::HyperplaneEvaluator(const BroadcastChannel& channel,
                                         const HyperplaneWeights& weights, std::size_t nu,
                                         std::size_t nv, std::size_t nw)
    : nu_(nu), nv_(nv), nw_(nw), nx_(channel.nx()), ny_(channel.ny()), nz_(channel.nz()),
      qy_(channel.y_kernel()), qz_(channel.z_kernel()) {
  const auto& l = weights.lambda;
  const std::size_t n = cells();
  auto key = [&](bool use_u, bool use_v) {
    std::vector<std::size_t> k(n);
    for (std::size_t u = 0; u < nu; ++u)
      for (std::size_t v = 0; v < nv; ++v)
        for (std::size_t w = 0; w < nw; ++w)
          k[(u * nv + v) * nw + w] = ((use_u ? u : 0) * (use_v ? nv : 1) + (use_v ? v : 0)) * nw + w;
    return k;
  };
  const std::vector<std::size_t> none(n, 0);
  const std::size_t kw = nw, kuw = nu * nw, kvw = nv * nw, kuvw = nu * nv * nw;
  const std::vector<Term> all = {
      {l[0] + l[2] + l[4], none, 1, 1},      // H(Y)
      {l[1] + l[3] + l[5], none, 1, 2},      // H(Z)
      {l[0] + l[1], key(false, false), kw, 0},  // H(W)
      {l[5] - l[0], key(false, false), kw, 1},  // H(WY)
      {l[4] - l[1], key(false, false), kw, 2},  // H(WZ)
      {l[2], key(true, false), kuw, 0},         // H(UW)
      {l[3], key(false, true), kvw, 0},         // H(VW)
      {-(l[2] + l[4] + l[5]), key(true, false), kuw, 1},  // H(UWY)
      {-(l[3] + l[4] + l[5]), key(false, true), kvw, 2},  // H(VWZ)
      {l[4] + l[5], key(true, true), kuvw, 0},            // H(UVW)
  };
  for (const auto& t : all)
    if (t.coef != 0.0) terms_.push_back(t);
}

double HyperplaneEvaluator::value(const std::vector<double>& m) const {
  return evaluate(m, nullptr);
}

double HyperplaneEvaluator::value_and_gradient(const std::vector<double>& m,
                                               std::vector<double>& grad) const {
  grad.assign(m.size(), 0.0);
  return evaluate(m, &grad);
}

double HyperplaneEvaluator::evaluate(const std::vector<double>& m,
                                     std::vector<double>* grad) const {
  const std::size_t n = cells();
  double total = 0.0;
  std::vector<double> marg;
  for (const auto& t : terms_) {
    const Kernel* q = t.output == 1 ? &qy_ : t.output == 2 ? &qz_ : nullptr;
    const std::size_t nb = q ? (t.output == 1 ? ny_ : nz_) : 1;
    marg.assign(t.keys * nb, 0.0);
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t x = 0; x < nx_; ++x) {
        const double mass = m[c * nx_ + x];
        if (mass == 0.0) continue;
        if (q)
          for (std::size_t b = 0; b < nb; ++b) marg[t.key[c] * nb + b] += mass * (*q)[x][b];
        else
          marg[t.key[c]] += mass;
      }
    double h = 0.0;
    for (double p : marg)
      if (p > 0.0) h -= p * std::log2(p);
    total += t.coef * h;
    if (!grad) continue;
    // dH/dm = -sum_b q(b|x) (log2 p(key, b) + log2 e); zero masses get the
    // one-sided value with log of a tiny floor.
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t x = 0; x < nx_; ++x) {
        double d = 0.0;
        if (q) {
          for (std::size_t b = 0; b < nb; ++b) {
            const double qb = (*q)[x][b];
            if (qb > 0.0)
              d -= qb * (std::log2(std::max(marg[t.key[c] * nb + b], 1e-300)) +
                         std::numbers::log2e);
          }
        } else {
          d = -(std::log2(std::max(marg[t.key[c]], 1e-300)) + std::numbers::log2e);
        }
        (*grad)[c * nx_ + x] += t.coef * d;
      }
  }
  return total;
}

}  // namespace detail

namespace {

using detail::HyperplaneEvaluator;

void check_weights(const HyperplaneWeights& weights) {
  for (double l : weights.lambda)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw std::invalid_argument("hyperplane weights must be finite and nonnegative");
}

std::vector<double> masses(const std::vector<double>& p, const std::vector<std::size_t>& map,
                           std::size_t nx) {
  std::vector<double> m(p.size() * nx, 0.0);
  for (std::size_t c = 0; c < p.size(); ++c) m[c * nx + map[c]] = p[c];
  return m;
}

// Best deterministic symbol per cell, cycling until no cell changes. Cells
// without mass take the symbol with the largest marginal gain.
double improve_map(const HyperplaneEvaluator& eval, const std::vector<double>& p,
                   std::vector<std::size_t>& map) {
  const std::size_t nx = eval.nx();
  auto m = masses(p, map, nx);
  double best = eval.value(m);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (!(p[c] > 0.0)) continue;
      for (std::size_t x = 0; x < nx; ++x) {
        if (x == map[c]) continue;
        m[c * nx + map[c]] = 0.0;
        m[c * nx + x] = p[c];
        const double v = eval.value(m);
        if (v > best + 1e-14) {
          best = v;
          map[c] = x;
          changed = true;
        } else {
          m[c * nx + x] = 0.0;
          m[c * nx + map[c]] = p[c];
        }
      }
    }
  }
  std::vector<double> grad;
  eval.value_and_gradient(m, grad);
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] > 0.0) continue;
    std::size_t arg = 0;
    for (std::size_t x = 1; x < nx; ++x)
      if (grad[c * nx + x] > grad[c * nx + arg]) arg = x;
    map[c] = arg;
  }
  return best;
}

// Projected-gradient ascent on p(u,v,w) with the map held fixed.
double improve_weights(const HyperplaneEvaluator& eval, std::vector<double>& p,
                       const std::vector<std::size_t>& map, const OptimizationConfig& config,
                       bool& converged) {
  const std::size_t nx = eval.nx();
  std::vector<double> grad, gp(p.size());
  double f = eval.value_and_gradient(masses(p, map, nx), grad);
  double step = 1.0;
  converged = false;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    for (std::size_t c = 0; c < p.size(); ++c) gp[c] = grad[c * nx + map[c]];
    bool moved = false;
    for (double t = std::min(step * 4.0, 1e3); t > 1e-14; t *= 0.5) {
      std::vector<double> y(p.size());
      for (std::size_t c = 0; c < p.size(); ++c) y[c] = p[c] + t * gp[c];
      y = project_simplex(y);
      double progress = 0.0;
      for (std::size_t c = 0; c < p.size(); ++c) progress += gp[c] * (y[c] - p[c]);
      if (progress <= 0.0) break;
      std::vector<double> g2;
      const double f2 = eval.value_and_gradient(masses(y, map, nx), g2);
      if (f2 > f && f2 >= f + 1e-4 * progress) {
        const double gain = f2 - f;
        p = std::move(y);
        f = f2;
        grad = std::move(g2);
        step = t;
        moved = gain > 1e-15;
        break;
      }
    }
    if (!moved) {
      converged = true;
      break;
    }
  }
  return f;
}

struct HyperStart {
  std::vector<double> p;
  std::vector<std::size_t> map;
  double value = -1e300;
  bool converged = false;
};

JointDistribution hyper_joint(const HyperStart& s, std::size_t n, std::size_t nw) {
  const auto m = masses(s.p, s.map, n);
  return JointDistribution::from_weights({{"U", n}, {"V", n}, {"W", nw}, {"X", n}}, m);
}

}  // namespace

double hyperplane_objective(const JointDistribution& uvwx, const BroadcastChannel& channel,
                            const HyperplaneWeights& weights) {
  check_weights(weights);
  const auto t = six_tuple(push_through_channel(uvwx, channel)).as_array();
  double v = 0.0;
  for (std::size_t i = 0; i < 6; ++i) v += weights.lambda[i] * t[i];
  return v;
}

OptimizationResult hyperplane_max(const BroadcastChannel& channel,
                                  const HyperplaneWeights& weights,
                                  const OptimizationConfig& config) {
  check_weights(weights);
  config.validate();
  require_valid(channel);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = channel.nx(), nw = n + 4;
  const HyperplaneEvaluator eval(channel, weights, n, n, nw);
  const std::size_t cells = eval.cells();
  const std::size_t structured = 2;
  const std::size_t starts = std::max(config.starts, structured + 1);

  std::vector<HyperStart> outcomes(starts);
  parallel_for(starts, [&](std::size_t k) {
    HyperStart s;
    s.map.assign(cells, 0);
    if (k < structured) {
      // X = U or X = V with uniform auxiliaries.
      s.p.assign(cells, 1.0 / static_cast<double>(cells));
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
          for (std::size_t w = 0; w < nw; ++w) s.map[(u * n + v) * nw + w] = k == 0 ? u : v;
    } else {
      Rng rng(config.seed, k);
      s.p = rng.dirichlet(cells);
      for (auto& x : s.map) x = rng.index(n);
    }
    double f = -1e300;
    bool converged = false;
    for (std::size_t round = 0; round < 50; ++round) {
      improve_map(eval, s.p, s.map);
      const double g = improve_weights(eval, s.p, s.map, config, converged);
      if (g <= f + 1e-13) {
        f = std::max(f, g);
        break;
      }
      f = g;
    }
    s.value = f;
    s.converged = converged;
    outcomes[k] = std::move(s);
  });

  std::size_t best = 0, converged = 0;
  for (std::size_t k = 0; k < starts; ++k) {
    converged += outcomes[k].converged;
    const auto& o = outcomes[k];
    const auto& b = outcomes[best];
    if (o.value > b.value ||
        (o.value == b.value && std::tie(o.p, o.map) < std::tie(b.p, b.map)))
      best = k;
  }
  OptimizationResult result;
  result.witness = hyper_joint(outcomes[best], n, nw);
  const auto t = six_tuple(push_through_channel(*result.witness, channel)).as_array();
  result.value = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    result.value += weights.lambda[i] * t[i];
    result.parameters["t" + std::to_string(i + 1)] = t[i];
  }
  result.diagnostics.starts_used = starts;
  result.diagnostics.starts_converged = converged;
  result.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<std::pair<HyperplaneWeights, SixTuple>> region_sample(
    const BroadcastChannel& channel, const std::vector<HyperplaneWeights>& weights,
    const OptimizationConfig& config) {
  std::vector<std::pair<HyperplaneWeights, SixTuple>> out;
  out.reserve(weights.size());
  for (const auto& w : weights) {
    const auto r = hyperplane_max(channel, w, config);
    SixTuple t;
    t.w_y = r.parameters.at("t1");
    t.w_z = r.parameters.at("t2");
    t.uw_y = r.parameters.at("t3");
    t.vw_z = r.parameters.at("t4");
    t.sum_y = r.parameters.at("t5");
    t.sum_z = r.parameters.at("t6");
    out.emplace_back(w, t);
  }
  return out;
}

}  // namespace marton
