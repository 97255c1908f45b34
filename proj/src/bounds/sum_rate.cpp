#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "binary_info.hpp"
#include "marton/bounds.hpp"
#include "marton/optimize.hpp"

namespace marton {

void OptimizationConfig::validate() const {
  if (grid_points < 33 || grid_points % 2 == 0)
    throw std::invalid_argument("grid_points must be odd and at least 33");
  if (starts < 1) throw std::invalid_argument("starts must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
}

double t_function(double p, const BroadcastChannel& channel) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  return detail::BinaryView(channel).t(p);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Two-point mixture objective of the inner problem.
struct Mixture {
  double w0 = 1.0, p0 = 0.0, p1 = 0.0;
};

double mixture_value(const detail::BinaryView& view, double gamma, const Mixture& m) {
  const double w1 = 1.0 - m.w0;
  const double q = m.w0 * m.p0 + w1 * m.p1;
  auto g = [&](double p) {
    return view.t(p) - gamma * view.hy(p) - (1.0 - gamma) * view.hz(p);
  };
  return gamma * view.hy(q) + (1.0 - gamma) * view.hz(q) + m.w0 * g(m.p0) + w1 * g(m.p1);
}

Mixture refine_mixture(const detail::BinaryView& view, double gamma, Mixture m, double radius) {
  double best = mixture_value(view, gamma, m);
  for (int cycle = 0; cycle < 60; ++cycle) {
    const double before = best;
    auto step = [&](double& coord, double lo, double hi) {
      const double saved = coord;
      const auto opt = golden_section_max(
          [&](double v) {
            coord = v;
            return mixture_value(view, gamma, m);
          },
          std::max(0.0, lo), std::min(1.0, hi), 1e-12);
      if (opt.value > best) {
        best = opt.value;
        coord = opt.x;
      } else {
        coord = saved;
      }
    };
    step(m.w0, 0.0, 1.0);
    step(m.p0, m.p0 - radius, m.p0 + radius);
    step(m.p1, m.p1 - radius, m.p1 + radius);
    if (best - before <= 1e-15) break;
  }
  return m;
}

JointDistribution mixture_joint(const Mixture& m) {
  const double w1 = 1.0 - m.w0;
  return JointDistribution::from_weights(
      {{"W", 2}, {"X", 2}},
      {m.w0 * (1.0 - m.p0), m.w0 * m.p0, w1 * (1.0 - m.p1), w1 * m.p1});
}

}  // namespace

double term_a_objective(const JointDistribution& wx, const BroadcastChannel& channel,
                        double gamma) {
  const detail::BinaryView view(channel);
  const std::size_t nw = wx.axis_size("W");
  const auto pw = marginalize(wx, {"W"});
  const auto pwx = marginalize(wx, {"W", "X"});
  double q = 0.0, value = 0.0;
  for (std::size_t w = 0; w < nw; ++w) {
    const double mass = pw.probs()[w];
    if (!(mass > 0.0)) continue;
    const double p = pwx.probs()[2 * w + 1] / mass;
    q += pwx.probs()[2 * w + 1];
    value += mass * (view.t(p) - gamma * view.hy(p) - (1.0 - gamma) * view.hz(p));
  }
  return value + gamma * view.hy(q) + (1.0 - gamma) * view.hz(q);
}

double term_a_inner(const BroadcastChannel& channel, double gamma,
                    const OptimizationConfig& config,
                    std::optional<JointDistribution>* witness) {
  config.validate();
  const detail::BinaryView view(channel);
  const std::size_t n = config.grid_points;
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> p(n), g(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = static_cast<double>(i) * h;
    g[i] = view.t(p[i]) - gamma * view.hy(p[i]) - (1.0 - gamma) * view.hz(p[i]);
  }
  const auto hull = upper_hull(p, g);

  // Score every grid node with the envelope read off the hull, keeping the
  // best node per hull segment.
  struct Candidate {
    double score;
    Mixture mix;
  };
  std::vector<Candidate> per_segment(hull.size(), {-1e300, {}});
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (seg + 1 < hull.size() && hull[seg + 1] < i) ++seg;
    Mixture m;
    std::size_t slot = seg;
    double env;
    if (hull[seg] == i || seg + 1 == hull.size()) {
      m = {1.0, p[i], p[i]};
      env = g[i];
      slot = seg;
    } else {
      const std::size_t a = hull[seg], b = hull[seg + 1];
      if (b == i) {
        m = {1.0, p[i], p[i]};
        env = g[i];
      } else {
        m.w0 = (p[b] - p[i]) / (p[b] - p[a]);
        m.p0 = p[a];
        m.p1 = p[b];
        env = m.w0 * g[a] + (1.0 - m.w0) * g[b];
      }
    }
    const double score = gamma * view.hy(p[i]) + (1.0 - gamma) * view.hz(p[i]) + env;
    if (score > per_segment[slot].score) per_segment[slot] = {score, m};
  }
  std::sort(per_segment.begin(), per_segment.end(),
            [](const Candidate& x, const Candidate& y) { return x.score > y.score; });

  Mixture best_mix;
  double best = -1e300;
  const std::size_t tries = std::min<std::size_t>(3, per_segment.size());
  for (std::size_t k = 0; k < tries; ++k) {
    if (per_segment[k].score <= -1e300) continue;
    const Mixture m = refine_mixture(view, gamma, per_segment[k].mix, 2.0 * h);
    const double v = mixture_value(view, gamma, m);
    if (v > best) {
      best = v;
      best_mix = m;
    }
  }
  if (best_mix.p0 > best_mix.p1) {
    std::swap(best_mix.p0, best_mix.p1);
    best_mix.w0 = 1.0 - best_mix.w0;
  }
  if (witness) witness->emplace(mixture_joint(best_mix));
  return best;
}

OptimizationResult term_a(const BroadcastChannel& channel, const OptimizationConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const auto opt = golden_section_min(
      [&](double gamma) { return term_a_inner(channel, gamma, config); }, 0.0, 1.0, config.tol);
  OptimizationResult result;
  std::optional<JointDistribution> witness;
  term_a_inner(channel, opt.x, config, &witness);
  result.value = term_a_objective(*witness, channel, opt.x);
  const auto pw = witness->probs();
  result.parameters["gamma"] = opt.x;
  result.parameters["p_w0"] = pw[0] + pw[1];
  result.parameters["p_x1_w0"] = pw[0] + pw[1] > 0.0 ? pw[1] / (pw[0] + pw[1]) : 0.0;
  result.parameters["p_x1_w1"] = pw[2] + pw[3] > 0.0 ? pw[3] / (pw[2] + pw[3]) : 0.0;
  result.witness = std::move(witness);
  result.diagnostics.starts_used = 1;
  result.diagnostics.starts_converged = 1;
  result.diagnostics.wall_seconds = seconds_since(start);
  return result;
}

namespace {

struct MapEvaluator {
  const detail::BinaryView& view;
  unsigned map;

  int x(int u, int v) const { return static_cast<int>(map >> (2 * u + v) & 1u); }

  double operator()(double a, double b) const {
    const double pu0 = (1.0 - b) * x(0, 0) + b * x(0, 1);
    const double pu1 = (1.0 - b) * x(1, 0) + b * x(1, 1);
    const double pv0 = (1.0 - a) * x(0, 0) + a * x(1, 0);
    const double pv1 = (1.0 - a) * x(0, 1) + a * x(1, 1);
    const double q = (1.0 - a) * pu0 + a * pu1;
    const double iuy = view.hy(q) - (1.0 - a) * view.hy(pu0) - a * view.hy(pu1);
    const double ivz = view.hz(q) - (1.0 - b) * view.hz(pv0) - b * view.hz(pv1);
    return iuy + ivz;
  }
};

JointDistribution map_joint(unsigned map, double a, double b) {
  std::vector<double> probs(8, 0.0);
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v) {
      const int x = static_cast<int>(map >> (2 * u + v) & 1u);
      probs[(u * 2 + v) * 2 + x] = (u ? a : 1.0 - a) * (v ? b : 1.0 - b);
    }
  return JointDistribution::from_weights({{"U", 2}, {"V", 2}, {"X", 2}}, std::move(probs));
}

}  // namespace

double term_b_objective(const JointDistribution& uvx, const BroadcastChannel& channel) {
  const auto full = push_through_channel(uvx, channel);
  return mutual_information(full, {"U"}, {"Y"}) + mutual_information(full, {"V"}, {"Z"});
}

OptimizationResult term_b(const BroadcastChannel& channel, const OptimizationConfig& config) {
  config.validate();
  const auto start = Clock::now();
  const detail::BinaryView view(channel);
  const std::size_t n = config.grid_points;
  const double h = 1.0 / static_cast<double>(n - 1);

  double best = -1.0, best_a = 0.0, best_b = 0.0;
  unsigned best_map = 0;
  std::size_t converged = 0;
  for (unsigned map = 0; map < 16; ++map) {
    const MapEvaluator f{view, map};
    double a = 0.0, b = 0.0, fab = -1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double v = f(i * h, j * h);
        if (v > fab) {
          fab = v;
          a = i * h;
          b = j * h;
        }
      }
    bool done = false;
    for (std::size_t it = 0; it < config.max_iters && !done; ++it) {
      const double a0 = a, b0 = b;
      const auto oa = golden_section_max([&](double t) { return f(t, b); }, std::max(0.0, a - h),
                                         std::min(1.0, a + h), 1e-12);
      if (oa.value > fab) fab = oa.value, a = oa.x;
      const auto ob = golden_section_max([&](double t) { return f(a, t); }, std::max(0.0, b - h),
                                         std::min(1.0, b + h), 1e-12);
      if (ob.value > fab) fab = ob.value, b = ob.x;
      done = std::abs(a - a0) + std::abs(b - b0) <= config.tol;
    }
    converged += done;
    if (fab > best + 1e-15) {
      best = fab;
      best_map = map;
      best_a = a;
      best_b = b;
    }
  }

  OptimizationResult result;
  result.witness = map_joint(best_map, best_a, best_b);
  result.value = term_b_objective(*result.witness, channel);
  result.parameters["map"] = best_map;
  result.parameters["a"] = best_a;
  result.parameters["b"] = best_b;
  result.diagnostics.starts_used = 16;
  result.diagnostics.starts_converged = converged;
  result.diagnostics.wall_seconds = seconds_since(start);
  return result;
}

OptimizationResult marton_sum_rate(const BroadcastChannel& channel,
                                   const OptimizationConfig& config, bool strict) {
  require_valid(channel);
  if (channel.nx() != 2) throw std::invalid_argument("operation requires a binary-input channel");
  std::vector<std::string> notes;
  if (!channel.strictly_positive()) {
    if (strict)
      throw std::invalid_argument("marginal kernels q(y|x), q(z|x) must be strictly positive");
    notes.push_back("warning: marginal kernels have zero entries; positivity hypothesis fails");
  }
  const auto start = Clock::now();
  auto a = term_a(channel, config);
  auto b = term_b(channel, config);
  const bool b_wins = b.value > a.value;
  OptimizationResult result = b_wins ? b : a;
  result.parameters["term_a"] = a.value;
  result.parameters["term_b"] = b.value;
  result.parameters["winner_is_term_b"] = b_wins ? 1.0 : 0.0;
  result.diagnostics.starts_used = a.diagnostics.starts_used + b.diagnostics.starts_used;
  result.diagnostics.starts_converged =
      a.diagnostics.starts_converged + b.diagnostics.starts_converged;
  result.diagnostics.notes = std::move(notes);
  result.diagnostics.notes.push_back(
      "equals the Marton sum rate only if C_M = C_NE; otherwise a lower bound on it");
  result.diagnostics.wall_seconds = seconds_since(start);
  return result;
}

}  // namespace marton
