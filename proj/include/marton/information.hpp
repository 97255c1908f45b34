#pragma once

// Shannon quantities on dense joint distributions. All values are in bits.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "marton/joint_distribution.hpp"

namespace marton {

class BroadcastChannel;

/// For each atom of `dist`, its flat index in the marginal over `keep`
/// (row-major in the order listed). `kept_count` receives the marginal size.
std::vector<std::size_t> atom_map(const JointDistribution& dist, const AxisNames& keep,
                                  std::size_t* kept_count = nullptr);

std::vector<Axis> select_axes(const JointDistribution& dist, const AxisNames& keep);

/// Sums a per-atom quantity onto the atoms of the named axes. The result is
/// indexed row-major in the order the names are given.
std::vector<double> sum_onto(const JointDistribution& dist, const AxisNames& keep,
                             std::span<const double> per_atom);

/// Marginal over `keep`, with axes ordered as listed.
JointDistribution marginalize(const JointDistribution& dist, const AxisNames& keep);

/// Renormalized slice at `axis == value`; the axis is dropped.
/// Throws std::domain_error when the slice has zero probability.
JointDistribution condition(const JointDistribution& dist, std::string_view axis,
                            std::size_t value);

/// Renames axes; names not present in `mapping` are kept.
JointDistribution rename_axes(const JointDistribution& dist,
                              const std::vector<std::pair<std::string, std::string>>& mapping);

double entropy(const JointDistribution& dist, const AxisNames& axes);
double mutual_information(const JointDistribution& dist, const AxisNames& a, const AxisNames& b);
double conditional_mutual_information(const JointDistribution& dist, const AxisNames& a,
                                      const AxisNames& b, const AxisNames& c);

/// Appends axes Y and Z with p(..., x, y, z) = p(..., x) q(y, z | x).
JointDistribution push_through_channel(const JointDistribution& input,
                                       const BroadcastChannel& channel);

/// Coordinates of one auxiliary choice in the six-dimensional Marton region:
/// (I(W;Y), I(W;Z), I(UW;Y), I(VW;Z), s + I(W;Y), s + I(W;Z)) with
/// s = I(U;Y|W) + I(V;Z|W) - I(U;V|W).
struct SixTuple {
  double w_y = 0.0;
  double w_z = 0.0;
  double uw_y = 0.0;
  double vw_z = 0.0;
  double sum_y = 0.0;
  double sum_z = 0.0;

  std::array<double, 6> as_array() const { return {w_y, w_z, uw_y, vw_z, sum_y, sum_z}; }
  double operator[](std::size_t i) const { return as_array()[i]; }
};

/// Requires axes U, V, W, Y, Z.
SixTuple six_tuple(const JointDistribution& dist);

}  // namespace marton
