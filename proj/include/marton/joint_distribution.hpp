#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace marton {

struct Axis {
  std::string name;
  std::size_t size = 0;

  friend bool operator==(const Axis&, const Axis&) = default;
};

using AxisNames = std::vector<std::string>;

/// Dense probability tensor over named finite axes.
///
/// Storage is row-major: the last axis varies fastest. Entries are
/// nonnegative and sum to one within kSumTolerance; axis names are unique.
/// Instances are immutable once constructed.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  JointDistribution(std::vector<Axis> axes, std::vector<double> probs);

  /// Normalizes nonnegative weights into a distribution.
  static JointDistribution from_weights(std::vector<Axis> axes, std::vector<double> weights);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t rank() const noexcept { return axes_.size(); }
  std::size_t atom_count() const noexcept { return probs_.size(); }

  bool has_axis(std::string_view name) const noexcept;
  std::size_t axis_position(std::string_view name) const;
  std::size_t axis_size(std::string_view name) const;
  AxisNames axis_names() const;

  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  double at(std::span<const std::size_t> index) const { return probs_[flat_index(index)]; }

 private:
  std::vector<Axis> axes_;
  std::vector<double> probs_;
};

std::size_t atom_count(std::span<const Axis> axes);

}  // namespace marton
