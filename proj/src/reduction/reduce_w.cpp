#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "marton/information.hpp"
#include "marton/reduction.hpp"

namespace marton {

const char* to_string(ReductionStatus status) {
  switch (status) {
    case ReductionStatus::reduced:
      return "reduced";
    case ReductionStatus::already_small:
      return "already-small";
    case ReductionStatus::not_at_extreme:
      return "not-at-extreme";
  }
  return "unknown";
}

std::size_t support_size(const JointDistribution& dist, const std::string& axis) {
  std::size_t n = 0;
  const auto marginal = marginalize(dist, {axis});
  for (double p : marginal.probs()) n += p > 0.0;
  return n;
}

namespace {

struct WStatistics {
  std::vector<double> px_given_w;  // |X| entries
  double h_y = 0.0, h_z = 0.0, i_uy = 0.0, i_vz = 0.0, i_uv = 0.0;
};

using Preserved = std::map<std::string, std::pair<double, double>>;

void record(Preserved& table, const JointDistribution& full, bool before) {
  const std::pair<std::string, double> values[] = {
      {"I(W;Y)", mutual_information(full, {"W"}, {"Y"})},
      {"I(W;Z)", mutual_information(full, {"W"}, {"Z"})},
      {"I(U;Y|W)", conditional_mutual_information(full, {"U"}, {"Y"}, {"W"})},
      {"I(V;Z|W)", conditional_mutual_information(full, {"V"}, {"Z"}, {"W"})},
      {"I(U;V|W)", conditional_mutual_information(full, {"U"}, {"V"}, {"W"})},
      {"H(Y|W)", entropy(full, {"W", "Y"}) - entropy(full, {"W"})},
      {"H(Z|W)", entropy(full, {"W", "Z"}) - entropy(full, {"W"})},
  };
  for (const auto& [name, v] : values) (before ? table[name].first : table[name].second) = v;
}

}  // namespace

ReductionOutcome reduce_w(const JointDistribution& joint, const BroadcastChannel& channel) {
  for (const char* name : {"U", "V", "W", "X"})
    if (!joint.has_axis(name)) throw std::invalid_argument(std::string("joint lacks axis ") + name);
  const auto uvwx = marginalize(joint, {"U", "V", "W", "X"});
  const auto full = push_through_channel(uvwx, channel);
  const std::size_t nw = uvwx.axis_size("W"), nx = uvwx.axis_size("X");
  const std::size_t limit = nx + 4;

  std::vector<double> q(nw);
  const auto pw = marginalize(uvwx, {"W"});
  for (std::size_t w = 0; w < nw; ++w) q[w] = pw.probs()[w];

  std::vector<WStatistics> stats(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    if (!(q[w] > 0.0)) continue;
    const auto slice = condition(full, "W", w);
    auto& s = stats[w];
    const auto px = marginalize(slice, {"X"});
    s.px_given_w.assign(px.probs().begin(), px.probs().end());
    s.h_y = entropy(slice, {"Y"});
    s.h_z = entropy(slice, {"Z"});
    s.i_uy = mutual_information(slice, {"U"}, {"Y"});
    s.i_vz = mutual_information(slice, {"V"}, {"Z"});
    s.i_uv = mutual_information(slice, {"U"}, {"V"});
  }

  ReductionOutcome out{uvwx, {}, {}, ReductionStatus::already_small, 0.0, 0};
  record(out.preserved, full, true);

  auto support = [&] {
    std::vector<std::size_t> s;
    for (std::size_t w = 0; w < nw; ++w)
      if (q[w] > 0.0) s.push_back(w);
    return s;
  };

  for (auto active = support(); active.size() > limit; active = support()) {
    const std::size_t m = active.size();
    Eigen::MatrixXd a(limit, m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& s = stats[active[j]];
      std::size_t r = 0;
      for (std::size_t x = 0; x + 1 < nx; ++x) a(r++, j) = s.px_given_w[x];
      a(r++, j) = 1.0;
      a(r++, j) = s.h_y;
      a(r++, j) = s.h_z;
      a(r++, j) = s.i_uy;
      a(r++, j) = s.i_vz;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::VectorXd d = svd.matrixV().col(static_cast<Eigen::Index>(m - 1));

    double slope = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      slope += d(j) * stats[active[j]].i_uv;
      scale += std::abs(d(j)) * stats[active[j]].i_uv;
    }
    // First coordinate to reach zero when moving along `dir`.
    auto hit = [&](const Eigen::VectorXd& dir, double& t) {
      std::size_t arg = m;
      t = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (!(dir(j) < 0.0)) continue;
        const double tj = q[active[j]] / -dir(j);
        if (arg == m || tj < t) t = tj, arg = j;
      }
      return arg;
    };
    double t = 0.0;
    if (std::abs(slope) <= 1e-12 * std::max(1.0, scale)) {
      double t_minus = 0.0;
      const Eigen::VectorXd neg = -d;
      if (hit(neg, t_minus) < hit(d, t)) d = neg;
    } else if (slope > 0.0) {
      d = -d;
    }
    const std::size_t j_hit = hit(d, t);
    if (j_hit == m) throw std::logic_error("null direction without a negative entry");
    for (std::size_t j = 0; j < m; ++j) {
      double& v = q[active[j]];
      v += t * d(j);
      if (j == j_hit || v < 1e-300) v = 0.0;
    }
    ++out.steps;
  }

  if (out.steps > 0) {
    std::vector<double> probs(uvwx.atom_count(), 0.0);
    const auto w_of = atom_map(uvwx, {"W"});
    const auto src = uvwx.probs();
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const std::size_t w = w_of[i];
      if (q[w] > 0.0) probs[i] = src[i] / pw.probs()[w] * q[w];
    }
    out.result = JointDistribution::from_weights(uvwx.axes(), std::move(probs));
    out.status = ReductionStatus::reduced;
  }
  record(out.preserved, push_through_channel(out.result, channel), false);
  out.support_sizes["W"] = support_size(out.result, "W");
  return out;
}

}  // namespace marton
