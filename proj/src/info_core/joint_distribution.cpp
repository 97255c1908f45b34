#include "marton/joint_distribution.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace marton {

std::size_t atom_count(std::span<const Axis> axes) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size;
  return n;
}

namespace {

void check_axes(const std::vector<Axis>& axes) {
  std::unordered_set<std::string> seen;
  for (const auto& a : axes) {
    if (a.name.empty()) throw std::invalid_argument("axis name must be non-empty");
    if (a.size == 0) throw std::invalid_argument("axis '" + a.name + "' has size 0");
    if (!seen.insert(a.name).second)
      throw std::invalid_argument("duplicate axis name '" + a.name + "'");
  }
}

}  // namespace

JointDistribution::JointDistribution(std::vector<Axis> axes, std::vector<double> probs)
    : axes_(std::move(axes)), probs_(std::move(probs)) {
  check_axes(axes_);
  if (probs_.size() != marton::atom_count(axes_))
    throw std::invalid_argument("tensor size " + std::to_string(probs_.size()) +
                                " does not match axis sizes (" +
                                std::to_string(marton::atom_count(axes_)) + ")");
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw std::invalid_argument("probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
}

JointDistribution JointDistribution::from_weights(std::vector<Axis> axes,
                                                  std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::invalid_argument("weights must be finite and nonnegative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("weights sum to zero");
  for (double& w : weights) w /= total;
  return JointDistribution(std::move(axes), std::move(weights));
}

bool JointDistribution::has_axis(std::string_view name) const noexcept {
  for (const auto& a : axes_)
    if (a.name == name) return true;
  return false;
}

std::size_t JointDistribution::axis_position(std::string_view name) const {
  for (std::size_t i = 0; i < axes_.size(); ++i)
    if (axes_[i].name == name) return i;
  throw std::invalid_argument("unknown axis '" + std::string(name) + "'");
}

std::size_t JointDistribution::axis_size(std::string_view name) const {
  return axes_[axis_position(name)].size;
}

AxisNames JointDistribution::axis_names() const {
  AxisNames names;
  names.reserve(axes_.size());
  for (const auto& a : axes_) names.push_back(a.name);
  return names;
}

std::size_t JointDistribution::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != axes_.size()) throw std::invalid_argument("index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (index[i] >= axes_[i].size) throw std::out_of_range("index out of range");
    flat = flat * axes_[i].size + index[i];
  }
  return flat;
}

std::vector<std::size_t> JointDistribution::unflatten(std::size_t flat) const {
  std::vector<std::size_t> index(axes_.size());
  for (std::size_t i = axes_.size(); i-- > 0;) {
    index[i] = flat % axes_[i].size;
    flat /= axes_[i].size;
  }
  return index;
}

}  // namespace marton
