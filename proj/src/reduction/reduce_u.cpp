#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "marton/information.hpp"
#include "marton/perturbation.hpp"
#include "marton/reduction.hpp"

namespace marton {

namespace {

// Orthonormal basis of the null space of `a` (singular values below
// 1e-10 times the largest count as zero).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * (sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace

ReductionOutcome reduce_u_support(const JointDistribution& joint, double lambda, double gamma,
                                  double certificate_tol) {
  for (const char* name : {"U", "V", "X", "Y", "Z"})
    if (!joint.has_axis(name)) throw std::invalid_argument(std::string("joint lacks axis ") + name);
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("lambda and gamma must be >= 0");
  const std::size_t nu = joint.axis_size("U"), nx = joint.axis_size("X");

  ReductionOutcome out{joint, {}, {}, ReductionStatus::already_small, 0.0, 0};
  const double before = auxiliary_objective(joint, lambda, gamma);
  const auto pu = marginalize(joint, {"U"});
  std::vector<std::size_t> support;
  for (std::size_t u = 0; u < nu; ++u)
    if (pu.probs()[u] > 0.0) support.push_back(u);
  out.support_sizes["U"] = support.size();
  out.preserved["objective"] = {before, before};
  if (support.size() <= nx) return out;

  // E[L'(U) | X = x] = 0  <=>  sum_u p(u, x) L'(u) = 0.
  const std::size_t m = support.size();
  const auto pux = marginalize(joint, {"U", "X"});
  Eigen::MatrixXd a(nx, m);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t j = 0; j < m; ++j) a(x, j) = pux.probs()[support[j] * nx + x];
  const Eigen::MatrixXd basis = null_space(a);

  // Certificate rows: p(u | v, z) for every (v, z) with positive mass.
  const auto uvz = marginalize(joint, {"V", "Z", "U"});
  const auto pvz = marginalize(joint, {"V", "Z"});
  std::vector<Eigen::Index> rows;
  for (std::size_t k = 0; k < pvz.atom_count(); ++k)
    if (pvz.probs()[k] > 0.0) rows.push_back(static_cast<Eigen::Index>(k));
  Eigen::MatrixXd b(static_cast<Eigen::Index>(rows.size()), m);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t j = 0; j < m; ++j)
      b(static_cast<Eigen::Index>(r), j) =
          uvz.probs()[static_cast<std::size_t>(rows[r]) * nu + support[j]] /
          pvz.probs()[static_cast<std::size_t>(rows[r])];

  // Direction in the null space with the smallest certificate residual.
  const Eigen::MatrixXd bn = b * basis;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(bn, Eigen::ComputeFullV);
  Eigen::VectorXd l = basis * svd.matrixV().col(bn.cols() - 1);
  l /= l.cwiseAbs().maxCoeff();
  out.residual = (b * l).cwiseAbs().maxCoeff();
  if (out.residual > certificate_tol) {
    out.status = ReductionStatus::not_at_extreme;
    return out;
  }

  AtomFunction field{{"U"}, std::vector<double>(nu, 0.0)};
  for (std::size_t j = 0; j < m; ++j) field.values[support[j]] = l(static_cast<Eigen::Index>(j));
  const auto dir = make_direction(joint, field);
  const double slope = stationarity_check(joint, dir, lambda, gamma).first_derivative;
  const double eps = slope >= 0.0 ? *dir.range.hi : *dir.range.lo;
  out.result = perturb(joint, dir, eps);
  out.preserved["objective"] = {before, auxiliary_objective(out.result, lambda, gamma)};
  out.preserved["slope"] = {slope, slope};
  out.support_sizes["U"] = support_size(out.result, "U");
  out.status = ReductionStatus::reduced;
  out.steps = 1;
  return out;
}

ReductionOutcome reduce_v_support(const JointDistribution& joint, double lambda, double gamma,
                                  double certificate_tol) {
  const std::vector<std::pair<std::string, std::string>> swap = {
      {"U", "V"}, {"V", "U"}, {"Y", "Z"}, {"Z", "Y"}};
  auto out = reduce_u_support(rename_axes(joint, swap), gamma, lambda, certificate_tol);
  out.result = rename_axes(out.result, swap);
  std::map<std::string, std::size_t> sizes;
  for (const auto& [axis, n] : out.support_sizes) sizes[axis == "U" ? "V" : axis] = n;
  out.support_sizes = std::move(sizes);
  return out;
}

}  // namespace marton
