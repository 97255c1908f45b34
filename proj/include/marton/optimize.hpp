#pragma once

// Small numerical building blocks shared by the bound optimizers.

#include <cstddef>
#include <functional>
#include <vector>

namespace marton {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]. The
/// endpoints are evaluated too, so monotone functions return their boundary.
ScalarOptimum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-10, int max_iters = 200);

/// Minimum of a unimodal (e.g. convex) function, same conventions.
ScalarOptimum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-10, int max_iters = 200);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(const std::vector<double>& v);

/// Minimum-norm point of the convex hull of up to a handful of vectors,
/// together with its convex weights.
struct HullPoint {
  std::vector<double> point;
  std::vector<double> weights;
};
HullPoint min_norm_hull_point(const std::vector<std::vector<double>>& vectors);

/// Indices of the upper concave hull of points sorted by strictly increasing x.
std::vector<std::size_t> upper_hull(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace marton
