#include "marton/optimize.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "marton/parallel.hpp"

namespace marton {

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol, int max_iters) {
  if (!(hi >= lo)) throw std::invalid_argument("golden section needs lo <= hi");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iters && b - a > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  ScalarOptimum best = fc >= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};
  for (double x : {lo, hi}) {
    const double fx = f(x);
    if (fx > best.value) best = {x, fx};
  }
  return best;
}

ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double tol, int max_iters) {
  auto r = golden_section_max([&](double x) { return -f(x); }, lo, hi, tol, max_iters);
  r.value = -r.value;
  return r;
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  if (v.empty()) return {};
  std::vector<double> s = v;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0.0) theta = t;
  }
  std::vector<double> out(v.size());
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) total += (out[i] = std::max(0.0, v[i] - theta));
  for (auto& x : out) x /= total;
  return out;
}

HullPoint min_norm_hull_point(const std::vector<std::vector<double>>& vectors) {
  const std::size_t k = vectors.size();
  if (k == 0) throw std::invalid_argument("empty vector set");
  if (k > 8) throw std::invalid_argument("min-norm hull point supports at most 8 vectors");
  const std::size_t dim = vectors[0].size();
  Eigen::MatrixXd g(dim, k);
  for (std::size_t j = 0; j < k; ++j) {
    if (vectors[j].size() != dim) throw std::invalid_argument("vectors differ in length");
    for (std::size_t i = 0; i < dim; ++i) g(i, j) = vectors[j][i];
  }
  const Eigen::MatrixXd gram = g.transpose() * g;

  HullPoint best;
  double best_norm = std::numeric_limits<double>::infinity();
  // Each subset's affine-hull minimizer solves [G 1; 1' 0][w; mu] = [0; 1].
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1) idx.push_back(j);
    const std::size_t m = idx.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + 1, m + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a(r, c) = gram(idx[r], idx[c]);
      a(r, m) = 1.0;
      a(m, r) = 1.0;
    }
    rhs(m) = 1.0;
    const Eigen::VectorXd sol = a.completeOrthogonalDecomposition().solve(rhs);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    bool feasible = true;
    for (std::size_t r = 0; r < m; ++r) {
      if (sol(r) < -1e-12) feasible = false;
      w(idx[r]) = std::max(0.0, sol(r));
    }
    if (!feasible || w.sum() <= 0.0) continue;
    w /= w.sum();
    const double norm = w.dot(gram * w);
    if (norm < best_norm - 1e-15) {
      best_norm = norm;
      best.weights.assign(w.data(), w.data() + k);
      const Eigen::VectorXd p = g * w;
      best.point.assign(p.data(), p.data() + dim);
    }
  }
  return best;
}

std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < x.size(); ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // Drop b when it lies on or below the chord from a to i.
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  return hull;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("MB_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {
thread_local bool inside_worker = false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  // Nested calls run inline on the calling worker.
  const std::size_t workers = inside_worker ? 1 : std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    inside_worker = true;
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace marton
