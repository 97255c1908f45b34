#pragma once

// Reference computations written independently of the library's internals.
// Everything works on plain arrays so a bug in the tensor code cannot hide
// behind the same bug here.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "marton/channel.hpp"

namespace oracle {

inline double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

inline double binary_entropy(double p) { return plogp(p) + plogp(1.0 - p); }

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h += plogp(v);
  return h;
}

/// Binary-input view: output distributions and entropies at P(X=1) = p.
struct BinaryChannel {
  std::array<std::vector<double>, 2> qy, qz;

  explicit BinaryChannel(const marton::BroadcastChannel& c) {
    for (std::size_t x = 0; x < 2; ++x) {
      qy[x].assign(c.ny(), 0.0);
      qz[x].assign(c.nz(), 0.0);
      for (std::size_t y = 0; y < c.ny(); ++y)
        for (std::size_t z = 0; z < c.nz(); ++z) {
          qy[x][y] += c.q(x, y, z);
          qz[x][z] += c.q(x, y, z);
        }
    }
  }

  static double out_entropy(const std::array<std::vector<double>, 2>& q, double p) {
    double h = 0.0;
    for (std::size_t k = 0; k < q[0].size(); ++k) h += plogp((1 - p) * q[0][k] + p * q[1][k]);
    return h;
  }
  double hy(double p) const { return out_entropy(qy, p); }
  double hz(double p) const { return out_entropy(qz, p); }
  double iy(double p) const { return hy(p) - (1 - p) * entropy(qy[0]) - p * entropy(qy[1]); }
  double iz(double p) const { return hz(p) - (1 - p) * entropy(qz[0]) - p * entropy(qz[1]); }
  double t(double p) const { return std::max(iy(p), iz(p)); }

  /// gamma I(W;Y) + (1-gamma) I(W;Z) + sum_w p(w) T(p(X=1|w)), binary W.
  double term_a_value(double gamma, double w0, double a, double b) const {
    const double p = w0 * a + (1 - w0) * b;
    const double iwy = hy(p) - w0 * hy(a) - (1 - w0) * hy(b);
    const double iwz = hz(p) - w0 * hz(a) - (1 - w0) * hz(b);
    return gamma * iwy + (1 - gamma) * iwz + w0 * t(a) + (1 - w0) * t(b);
  }
};

/// Max over the unit cube by a coarse grid followed by repeated zooming
/// around the best few cells. Each zoom halves the box; after `levels`
/// rounds the effective resolution is far below the coarse spacing.
inline double nested_grid_max(const std::function<double(double, double, double)>& f,
                              int coarse = 41, int levels = 8, int keep = 6) {
  struct Cand {
    double v, x, y, z;
  };
  std::vector<Cand> cands;
  const double h0 = 1.0 / (coarse - 1);
  for (int i = 0; i < coarse; ++i)
    for (int j = 0; j < coarse; ++j)
      for (int k = 0; k < coarse; ++k)
        cands.push_back({f(i * h0, j * h0, k * h0), i * h0, j * h0, k * h0});
  auto by_value = [](const Cand& a, const Cand& b) { return a.v > b.v; };
  double h = h0;
  double best = -std::numeric_limits<double>::infinity();
  for (int level = 0; level <= levels; ++level) {
    const std::size_t n = std::min<std::size_t>(keep, cands.size());
    std::partial_sort(cands.begin(), cands.begin() + n, cands.end(), by_value);
    best = std::max(best, cands[0].v);
    if (level == levels) break;
    std::vector<Cand> next;
    const double step = h / 4;
    for (std::size_t c = 0; c < n; ++c)
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j)
          for (int k = -4; k <= 4; ++k) {
            const double x = std::clamp(cands[c].x + i * step, 0.0, 1.0);
            const double y = std::clamp(cands[c].y + j * step, 0.0, 1.0);
            const double z = std::clamp(cands[c].z + k * step, 0.0, 1.0);
            next.push_back({f(x, y, z), x, y, z});
          }
    cands.swap(next);
    h = step;
  }
  return best;
}

/// min over gamma of the |W| = 2 inner maximum, brute force. The inner
/// maximum is a supremum of affine functions of gamma, hence convex.
inline double term_a_brute(const marton::BroadcastChannel& channel) {
  const BinaryChannel bc(channel);
  auto inner = [&](double gamma) {
    return nested_grid_max(
        [&](double w0, double a, double b) { return bc.term_a_value(gamma, w0, a, b); }, 21, 7,
        4);
  };
  double lo = 0.0, hi = 1.0;
  const double r = (std::sqrt(5.0) - 1) / 2;
  double c = hi - r * (hi - lo), d = lo + r * (hi - lo);
  double fc = inner(c), fd = inner(d);
  for (int it = 0; it < 30; ++it) {
    if (fc < fd) {
      hi = d, d = c, fd = fc;
      c = hi - r * (hi - lo), fc = inner(c);
    } else {
      lo = c, c = d, fc = fd;
      d = lo + r * (hi - lo), fd = inner(d);
    }
  }
  return std::min({fc, fd, inner(0.0), inner(1.0)});
}

/// Weighted six-tuple of a joint m[((u*nv + v)*nw + w)*nx + x], computed
/// from the explicit joint over (U, V, W, Y, Z) marginals.
struct SixTupleOracle {
  const marton::BroadcastChannel& ch;
  std::size_t nu, nv, nw;

  std::array<double, 6> operator()(const std::vector<double>& m) const {
    const std::size_t nx = ch.nx(), ny = ch.ny(), nz = ch.nz();
    // p(u,v,w,y) and p(u,v,w,z)
    std::vector<double> uvwy(nu * nv * nw * ny, 0.0), uvwz(nu * nv * nw * nz, 0.0);
    for (std::size_t c = 0; c < nu * nv * nw; ++c)
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y)
          for (std::size_t z = 0; z < nz; ++z) {
            const double p = m[c * nx + x] * ch.q(x, y, z);
            uvwy[c * ny + y] += p;
            uvwz[c * nz + z] += p;
          }
    auto H = [&](const std::vector<double>& table, std::size_t n_out, bool keep_u, bool keep_v,
                 bool keep_w, bool keep_out) {
      const std::size_t su = keep_u ? nu : 1, sv = keep_v ? nv : 1, sw = keep_w ? nw : 1,
                        so = keep_out ? n_out : 1;
      std::vector<double> marg(su * sv * sw * so, 0.0);
      for (std::size_t u = 0; u < nu; ++u)
        for (std::size_t v = 0; v < nv; ++v)
          for (std::size_t w = 0; w < nw; ++w)
            for (std::size_t o = 0; o < n_out; ++o) {
              const std::size_t idx = ((((keep_u ? u : 0) * sv + (keep_v ? v : 0)) * sw +
                                        (keep_w ? w : 0)) *
                                           so +
                                       (keep_out ? o : 0));
              marg[idx] += table[((u * nv + v) * nw + w) * n_out + o];
            }
      return entropy(marg);
    };
    const double hy = H(uvwy, ny, 0, 0, 0, 1), hz = H(uvwz, nz, 0, 0, 0, 1);
    const double hw = H(uvwy, ny, 0, 0, 1, 0), hwy = H(uvwy, ny, 0, 0, 1, 1);
    const double hwz = H(uvwz, nz, 0, 0, 1, 1);
    const double huw = H(uvwy, ny, 1, 0, 1, 0), huwy = H(uvwy, ny, 1, 0, 1, 1);
    const double hvw = H(uvwz, nz, 0, 1, 1, 0), hvwz = H(uvwz, nz, 0, 1, 1, 1);
    const double huvw = H(uvwy, ny, 1, 1, 1, 0);
    const double i_wy = hw + hy - hwy, i_wz = hw + hz - hwz;
    const double i_uwy = huw + hy - huwy, i_vwz = hvw + hz - hvwz;
    const double i_uy_w = huw + hwy - huwy - hw;
    const double i_vz_w = hvw + hwz - hvwz - hw;
    const double i_uv_w = huw + hvw - huvw - hw;
    const double s = i_uy_w + i_vz_w - i_uv_w;
    return {i_wy, i_wz, i_uwy, i_vwz, s + i_wy, s + i_wz};
  }

  double weighted(const std::vector<double>& m, const std::array<double, 6>& lambda) const {
    const auto t = (*this)(m);
    double v = 0.0;
    for (std::size_t i = 0; i < 6; ++i) v += lambda[i] * t[i];
    return v;
  }
};

/// Hyperplane maximum for a binary-input channel over |U| = |V| = 2 with a
/// deterministic map, by exhaustive lattice search.
///
/// The weighted six-tuple splits as a H(Y) + b H(Z) + sum_w p(w) psi(p(u,v,x|w)),
/// so its maximum is max_p [a H_Y(p) + b H_Z(p) + env psi(p)], where env is
/// the upper concave envelope over P(X=1) = p of psi. psi is sampled on all
/// lattice points of p(u,v) with denominator `n` and all sixteen maps.
inline double hyperplane_lattice(const marton::BroadcastChannel& ch,
                                 const std::array<double, 6>& l, int n = 48) {
  const BinaryChannel bc(ch);
  const double a = l[0] + l[2] + l[4], b = l[1] + l[3] + l[5];
  const SixTupleOracle six{ch, 2, 2, 1};
  std::vector<std::pair<double, double>> cloud;  // (p, psi)
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j)
      for (int k = 0; i + j + k <= n; ++k) {
        const double puv[4] = {double(i) / n, double(j) / n, double(k) / n,
                               double(n - i - j - k) / n};
        for (int map = 0; map < 16; ++map) {
          std::vector<double> m(8, 0.0);
          double p1 = 0.0;
          for (int c = 0; c < 4; ++c) {
            const int x = (map >> c) & 1;
            m[c * 2 + x] = puv[c];
            if (x) p1 += puv[c];
          }
          // With one W value, the weighted tuple is a H_Y + b H_Z + psi.
          const double psi = six.weighted(m, l) - a * bc.hy(p1) - b * bc.hz(p1);
          cloud.push_back({p1, psi});
        }
      }
  std::sort(cloud.begin(), cloud.end());
  // Best psi per distinct p, then the upper hull.
  std::vector<std::pair<double, double>> pts;
  for (const auto& [p, v] : cloud) {
    if (!pts.empty() && std::fabs(pts.back().first - p) < 1e-15)
      pts.back().second = std::max(pts.back().second, v);
    else
      pts.push_back({p, v});
  }
  std::vector<std::pair<double, double>> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& q = hull.back();
      const double cross =
          (q.first - o.first) * (pt.second - o.second) - (q.second - o.second) * (pt.first - o.first);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < hull.size(); ++s) {
    if (s + 1 == hull.size()) {
      best = std::max(best, a * bc.hy(hull[s].first) + b * bc.hz(hull[s].first) + hull[s].second);
      break;
    }
    const auto [p0, v0] = hull[s];
    const auto [p1, v1] = hull[s + 1];
    for (int t = 0; t <= 400; ++t) {
      const double p = p0 + (p1 - p0) * t / 400.0;
      const double env = v0 + (v1 - v0) * (p - p0) / (p1 - p0);
      best = std::max(best, a * bc.hy(p) + b * bc.hz(p) + env);
    }
  }
  return best;
}

}  // namespace oracle
