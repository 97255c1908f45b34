#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>

#include "binary_info.hpp"
#include "marton/bounds.hpp"
#include "marton/optimize.hpp"
#include "marton/parallel.hpp"
#include "marton/random.hpp"

namespace marton {

namespace {

constexpr std::size_t kAux = 3;
constexpr double kLog2e = std::numbers::log2e;

double safe_log2(double v) { return std::log2(std::max(v, 1e-300)); }

// Parameters: p(x), then p(u|x) for each x, then p(v|x) for each x.
class OuterProblem {
 public:
  explicit OuterProblem(const BroadcastChannel& channel)
      : nx_(channel.nx()), ny_(channel.ny()), nz_(channel.nz()),
        qy_(channel.y_kernel()), qz_(channel.z_kernel()) {
    for (std::size_t x = 0; x < nx_; ++x) {
      hy_.push_back(detail::entropy_bits(qy_[x]));
      hz_.push_back(detail::entropy_bits(qz_[x]));
    }
  }

  std::size_t nx() const { return nx_; }
  std::size_t size() const { return nx_ * (1 + 2 * kAux); }
  std::size_t block_count() const { return 1 + 2 * nx_; }
  std::size_t block_begin(std::size_t b) const { return b == 0 ? 0 : nx_ + (b - 1) * kAux; }
  std::size_t block_size(std::size_t b) const { return b == 0 ? nx_ : kAux; }

  double px(const std::vector<double>& t, std::size_t x) const { return t[x]; }
  double pu(const std::vector<double>& t, std::size_t x, std::size_t u) const {
    return t[nx_ + x * kAux + u];
  }
  double pv(const std::vector<double>& t, std::size_t x, std::size_t v) const {
    return t[nx_ + (nx_ + x) * kAux + v];
  }

  /// Values of the three terms; gradients (w.r.t. the parameters) if asked.
  std::array<double, 3> evaluate(const std::vector<double>& t,
                                 std::array<std::vector<double>, 3>* grads = nullptr) const {
    std::vector<double> r(kAux * nx_), s(kAux * nx_);
    for (std::size_t x = 0; x < nx_; ++x)
      for (std::size_t a = 0; a < kAux; ++a) {
        r[a * nx_ + x] = px(t, x) * pu(t, x, a);
        s[a * nx_ + x] = px(t, x) * pv(t, x, a);
      }
    // d I(A;B)/d m(a,x) and d I(X;B|A)/d m(a,x) for A in {U, V}.
    std::vector<double> d_uy(kAux * nx_), d_xz_u(kAux * nx_), d_vz(kAux * nx_),
        d_xy_v(kAux * nx_);
    const double i_uy = aux_terms(r, qy_, ny_, hy_, d_uy, nullptr);
    double x_z_u = 0.0;
    aux_terms(r, qz_, nz_, hz_, d_xz_u, &x_z_u);
    const double i_vz = aux_terms(s, qz_, nz_, hz_, d_vz, nullptr);
    double x_y_v = 0.0;
    aux_terms(s, qy_, ny_, hy_, d_xy_v, &x_y_v);

    std::array<double, 3> f{i_uy + i_vz, i_uy + x_z_u, i_vz + x_y_v};
    if (grads) {
      auto chain = [&](const std::vector<double>* dr1, const std::vector<double>* dr2,
                       const std::vector<double>* ds1, const std::vector<double>* ds2,
                       std::vector<double>& g) {
        g.assign(size(), 0.0);
        for (std::size_t x = 0; x < nx_; ++x)
          for (std::size_t a = 0; a < kAux; ++a) {
            const std::size_t k = a * nx_ + x;
            const double dr = (dr1 ? (*dr1)[k] : 0.0) + (dr2 ? (*dr2)[k] : 0.0);
            const double ds = (ds1 ? (*ds1)[k] : 0.0) + (ds2 ? (*ds2)[k] : 0.0);
            g[nx_ + x * kAux + a] = px(t, x) * dr;
            g[nx_ + (nx_ + x) * kAux + a] = px(t, x) * ds;
            g[x] += pu(t, x, a) * dr + pv(t, x, a) * ds;
          }
      };
      chain(&d_uy, nullptr, &d_vz, nullptr, (*grads)[0]);
      chain(&d_uy, &d_xz_u, nullptr, nullptr, (*grads)[1]);
      chain(nullptr, nullptr, &d_vz, &d_xy_v, (*grads)[2]);
    }
    return f;
  }

  JointDistribution joint(const std::vector<double>& t) const {
    std::vector<double> probs(kAux * kAux * nx_);
    for (std::size_t u = 0; u < kAux; ++u)
      for (std::size_t v = 0; v < kAux; ++v)
        for (std::size_t x = 0; x < nx_; ++x)
          probs[(u * kAux + v) * nx_ + x] = px(t, x) * pu(t, x, u) * pv(t, x, v);
    return JointDistribution::from_weights({{"U", kAux}, {"V", kAux}, {"X", nx_}},
                                           std::move(probs));
  }

  void project(std::vector<double>& t) const {
    for (std::size_t b = 0; b < block_count(); ++b) {
      const std::size_t begin = block_begin(b), n = block_size(b);
      std::vector<double> block(t.begin() + begin, t.begin() + begin + n);
      block = project_simplex(block);
      std::copy(block.begin(), block.end(), t.begin() + begin);
    }
  }

  /// Removes the per-block mean, restricted to the free coordinates when
  /// `face_only` is set (coordinates at zero are then frozen).
  void tangent(const std::vector<double>& t, std::vector<double>& g, bool face_only) const {
    for (std::size_t b = 0; b < block_count(); ++b) {
      const std::size_t begin = block_begin(b), n = block_size(b);
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t i = begin; i < begin + n; ++i)
        if (!face_only || t[i] > 0.0) sum += g[i], ++count;
      const double mean = count ? sum / static_cast<double>(count) : 0.0;
      for (std::size_t i = begin; i < begin + n; ++i)
        g[i] = (!face_only || t[i] > 0.0) ? g[i] - mean : 0.0;
    }
  }

 private:
  // Mutual information I(A;B) of the mass m(a,x) pushed through kernel q, its
  // gradient, and optionally I(X;B|A) = H(AB) - H(A) - H(B|X) with gradient.
  double aux_terms(const std::vector<double>& m, const Kernel& q, std::size_t nb,
                   const std::vector<double>& hb, std::vector<double>& grad,
                   double* cond_value) const {
    std::vector<double> pa(kAux, 0.0), pb(nb, 0.0), pab(kAux * nb, 0.0);
    double h_b_given_x = 0.0;
    for (std::size_t a = 0; a < kAux; ++a)
      for (std::size_t x = 0; x < nx_; ++x) {
        const double mass = m[a * nx_ + x];
        pa[a] += mass;
        h_b_given_x += mass * hb[x];
        for (std::size_t b = 0; b < nb; ++b) {
          pab[a * nb + b] += mass * q[x][b];
          pb[b] += mass * q[x][b];
        }
      }
    double info = 0.0, h_ab = 0.0, h_a = 0.0;
    for (std::size_t a = 0; a < kAux; ++a) {
      if (pa[a] > 0.0) h_a -= pa[a] * std::log2(pa[a]);
      for (std::size_t b = 0; b < nb; ++b) {
        const double p = pab[a * nb + b];
        if (p > 0.0) {
          info += p * std::log2(p / (pa[a] * pb[b]));
          h_ab -= p * std::log2(p);
        }
      }
    }
    for (std::size_t a = 0; a < kAux; ++a)
      for (std::size_t x = 0; x < nx_; ++x) {
        double d = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
          if (!(q[x][b] > 0.0)) continue;
          // With p(a) = 0 the one-sided limit has p(b|a) = q(b|x).
          const double cond = pa[a] > 0.0 ? pab[a * nb + b] / pa[a] : q[x][b];
          if (cond_value)
            d += q[x][b] * (std::log2(q[x][b]) - safe_log2(cond));
          else
            d += q[x][b] * (safe_log2(cond) - safe_log2(pb[b]));
        }
        grad[a * nx_ + x] = cond_value ? d : d - kLog2e;
      }
    if (cond_value) *cond_value = h_ab - h_a - h_b_given_x;
    return info;
  }

  std::size_t nx_, ny_, nz_;
  Kernel qy_, qz_;
  std::vector<double> hy_, hz_;
};

struct StartOutcome {
  std::vector<double> params;
  double value = -1.0;
  bool converged = false;
};

double min3(const std::array<double, 3>& f) { return std::min({f[0], f[1], f[2]}); }

StartOutcome ascend(const OuterProblem& prob, std::vector<double> t,
                    const OptimizationConfig& config) {
  prob.project(t);
  std::array<std::vector<double>, 3> grads;
  auto f = prob.evaluate(t, &grads);
  double delta = 1e-3;
  double step = 1.0;
  StartOutcome out;
  for (std::size_t it = 0; it < config.max_iters; ++it) {
    const double m = min3(f);
    bool moved = false;
    for (bool face_only : {false, true}) {
      std::vector<std::vector<double>> active;
      for (int i = 0; i < 3; ++i) {
        if (f[i] > m + delta) continue;
        auto g = grads[i];
        prob.tangent(t, g, face_only);
        active.push_back(std::move(g));
      }
      const auto d = min_norm_hull_point(active).point;
      double norm2 = 0.0;
      for (double v : d) norm2 += v * v;
      if (norm2 < 1e-24) continue;
      for (double trial = std::min(step * 4.0, 1e3); trial > 1e-14; trial *= 0.5) {
        auto y = t;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += trial * d[i];
        prob.project(y);
        double progress = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) progress += d[i] * (y[i] - t[i]);
        std::array<std::vector<double>, 3> g2;
        const auto f2 = prob.evaluate(y, &g2);
        if (min3(f2) > m && min3(f2) >= m + 1e-4 * progress) {
          t = std::move(y);
          f = f2;
          grads = std::move(g2);
          step = trial;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) {
      if (delta <= 1e-10) {
        out.converged = true;
        break;
      }
      delta *= 0.1;
    }
  }
  out.value = min3(f);
  out.params = std::move(t);
  return out;
}

std::vector<double> structured_seed(const OuterProblem& prob, int kind) {
  const std::size_t nx = prob.nx();
  std::vector<double> t(prob.size(), 0.0);
  for (std::size_t x = 0; x < nx; ++x) t[x] = 1.0 / static_cast<double>(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t ux = nx + x * kAux, vx = nx + (nx + x) * kAux;
    const std::size_t copy = x % kAux;
    switch (kind) {
      case 0:  // U = X, V constant
        t[ux + copy] = 1.0;
        t[vx] = 1.0;
        break;
      case 1:  // V = X, U constant
        t[ux] = 1.0;
        t[vx + copy] = 1.0;
        break;
      case 2:  // U = V = X
        t[ux + copy] = 1.0;
        t[vx + copy] = 1.0;
        break;
      default:  // uniform auxiliaries
        for (std::size_t a = 0; a < kAux; ++a) t[ux + a] = t[vx + a] = 1.0 / kAux;
    }
  }
  return t;
}

}  // namespace

double ne_outer_objective(const JointDistribution& uvx, const BroadcastChannel& channel) {
  const auto full = push_through_channel(uvx, channel);
  const double i_uy = mutual_information(full, {"U"}, {"Y"});
  const double i_vz = mutual_information(full, {"V"}, {"Z"});
  const double x_z_u = conditional_mutual_information(full, {"X"}, {"Z"}, {"U"});
  const double x_y_v = conditional_mutual_information(full, {"X"}, {"Y"}, {"V"});
  return std::min({i_uy + i_vz, i_uy + x_z_u, i_vz + x_y_v});
}

OptimizationResult ne_outer_sum_rate(const BroadcastChannel& channel,
                                     const OptimizationConfig& config) {
  config.validate();
  require_valid(channel);
  const auto start = std::chrono::steady_clock::now();
  const OuterProblem prob(channel);
  const std::size_t structured = 4;
  const std::size_t starts = std::max(config.starts, structured);
  std::vector<StartOutcome> outcomes(starts);
  parallel_for(starts, [&](std::size_t k) {
    std::vector<double> seed;
    if (k < structured) {
      seed = structured_seed(prob, static_cast<int>(k));
    } else {
      Rng rng(config.seed, k);
      for (std::size_t b = 0; b < prob.block_count(); ++b) {
        const auto block = rng.dirichlet(prob.block_size(b));
        seed.insert(seed.end(), block.begin(), block.end());
      }
    }
    outcomes[k] = ascend(prob, std::move(seed), config);
  });

  std::size_t best = 0, converged = 0;
  for (std::size_t k = 0; k < starts; ++k) {
    converged += outcomes[k].converged;
    const auto& o = outcomes[k];
    const auto& b = outcomes[best];
    if (o.value > b.value || (o.value == b.value && o.params < b.params)) best = k;
  }
  OptimizationResult result;
  result.witness = prob.joint(outcomes[best].params);
  result.value = ne_outer_objective(*result.witness, channel);
  const auto f = prob.evaluate(outcomes[best].params);
  result.parameters["f1"] = f[0];
  result.parameters["f2"] = f[1];
  result.parameters["f3"] = f[2];
  result.diagnostics.starts_used = starts;
  result.diagnostics.starts_converged = converged;
  result.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace marton
