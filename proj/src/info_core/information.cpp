#include "marton/information.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "marton/channel.hpp"

namespace marton {

std::vector<std::size_t> atom_map(const JointDistribution& dist, const AxisNames& keep,
                                  std::size_t* kept_count) {
  const auto& axes = dist.axes();
  const std::size_t rank = axes.size();
  std::vector<std::size_t> stride(rank, 0);
  std::size_t out_size = 1;
  std::vector<bool> used(rank, false);
  for (std::size_t k = keep.size(); k-- > 0;) {
    const std::size_t pos = dist.axis_position(keep[k]);
    if (used[pos]) throw std::invalid_argument("axis '" + keep[k] + "' listed twice");
    used[pos] = true;
    stride[pos] = out_size;
    out_size *= axes[pos].size;
  }
  if (kept_count) *kept_count = out_size;

  const std::size_t n = dist.atom_count();
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> idx(rank, 0);
  std::size_t o = 0;
  for (std::size_t i = 0; i < n; ++i) {
    map[i] = o;
    for (std::size_t d = rank; d-- > 0;) {
      ++idx[d];
      o += stride[d];
      if (idx[d] < axes[d].size) break;
      o -= stride[d] * axes[d].size;
      idx[d] = 0;
    }
  }
  return map;
}

std::vector<Axis> select_axes(const JointDistribution& dist, const AxisNames& keep) {
  std::vector<Axis> out;
  out.reserve(keep.size());
  for (const auto& name : keep) out.push_back(dist.axes()[dist.axis_position(name)]);
  return out;
}

std::vector<double> sum_onto(const JointDistribution& dist, const AxisNames& keep,
                             std::span<const double> per_atom) {
  if (per_atom.size() != dist.atom_count())
    throw std::invalid_argument("per-atom vector does not match the distribution");
  std::size_t count = 0;
  const auto map = atom_map(dist, keep, &count);
  std::vector<double> out(count, 0.0);
  for (std::size_t i = 0; i < map.size(); ++i) out[map[i]] += per_atom[i];
  return out;
}

JointDistribution marginalize(const JointDistribution& dist, const AxisNames& keep) {
  auto probs = sum_onto(dist, keep, dist.probs());
  return JointDistribution(select_axes(dist, keep), std::move(probs));
}

JointDistribution condition(const JointDistribution& dist, std::string_view axis,
                            std::size_t value) {
  const std::size_t pos = dist.axis_position(axis);
  if (value >= dist.axes()[pos].size) throw std::out_of_range("conditioning value out of range");
  AxisNames rest;
  std::vector<Axis> rest_axes;
  for (const auto& a : dist.axes()) {
    if (a.name == axis) continue;
    rest.push_back(a.name);
    rest_axes.push_back(a);
  }
  const auto rest_map = atom_map(dist, rest);
  const auto axis_map = atom_map(dist, {std::string(axis)});
  std::vector<double> slice(atom_count(rest_axes), 0.0);
  double mass = 0.0;
  for (std::size_t i = 0; i < rest_map.size(); ++i) {
    if (axis_map[i] != value) continue;
    slice[rest_map[i]] = dist.probs()[i];
    mass += dist.probs()[i];
  }
  if (!(mass > 0.0))
    throw std::domain_error("conditioning on zero-probability atom " + std::string(axis) + "=" +
                            std::to_string(value));
  for (auto& p : slice) p /= mass;
  return JointDistribution(std::move(rest_axes), std::move(slice));
}

JointDistribution rename_axes(const JointDistribution& dist,
                              const std::vector<std::pair<std::string, std::string>>& mapping) {
  auto axes = dist.axes();
  for (auto& a : axes) {
    for (const auto& [from, to] : mapping) {
      if (a.name == from) {
        a.name = to;
        break;
      }
    }
  }
  return JointDistribution(std::move(axes),
                           std::vector<double>(dist.probs().begin(), dist.probs().end()));
}

double entropy(const JointDistribution& dist, const AxisNames& axes) {
  const auto m = sum_onto(dist, axes, dist.probs());
  double h = 0.0;
  for (double p : m)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

namespace {

void require_disjoint(const AxisNames& a, const AxisNames& b) {
  for (const auto& x : a)
    for (const auto& y : b)
      if (x == y) throw std::invalid_argument("axis sets overlap on '" + x + "'");
}

AxisNames concat(const AxisNames& a, const AxisNames& b) {
  AxisNames out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double conditional_mutual_information(const JointDistribution& dist, const AxisNames& a,
                                      const AxisNames& b, const AxisNames& c) {
  require_disjoint(a, b);
  require_disjoint(a, c);
  require_disjoint(b, c);
  const auto abc = marginalize(dist, concat(concat(a, b), c));
  const auto ac_names = concat(a, c);
  const auto bc_names = concat(b, c);
  std::size_t n_ac = 0, n_bc = 0, n_c = 0;
  const auto ac_map = atom_map(abc, ac_names, &n_ac);
  const auto bc_map = atom_map(abc, bc_names, &n_bc);
  const auto c_map = atom_map(abc, c, &n_c);
  std::vector<double> p_ac(n_ac, 0.0), p_bc(n_bc, 0.0), p_c(n_c, 0.0);
  const auto p = abc.probs();
  for (std::size_t i = 0; i < p.size(); ++i) {
    p_ac[ac_map[i]] += p[i];
    p_bc[bc_map[i]] += p[i];
    p_c[c_map[i]] += p[i];
  }
  double info = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    info += p[i] * std::log2(p[i] * p_c[c_map[i]] / (p_ac[ac_map[i]] * p_bc[bc_map[i]]));
  }
  return info;
}

double mutual_information(const JointDistribution& dist, const AxisNames& a, const AxisNames& b) {
  return conditional_mutual_information(dist, a, b, {});
}

JointDistribution push_through_channel(const JointDistribution& input,
                                       const BroadcastChannel& channel) {
  if (input.has_axis("Y") || input.has_axis("Z"))
    throw std::invalid_argument("input already has a Y or Z axis");
  if (input.axis_size("X") != channel.nx())
    throw std::invalid_argument("X axis has size " + std::to_string(input.axis_size("X")) +
                                " but the channel has |X| = " + std::to_string(channel.nx()));
  const auto x_of = atom_map(input, {"X"});
  const std::size_t ny = channel.ny(), nz = channel.nz();
  std::vector<double> probs(input.atom_count() * ny * nz);
  const auto p = input.probs();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t y = 0; y < ny; ++y)
      for (std::size_t z = 0; z < nz; ++z)
        probs[(i * ny + y) * nz + z] = p[i] * channel.q(x_of[i], y, z);
  auto axes = input.axes();
  axes.push_back({"Y", ny});
  axes.push_back({"Z", nz});
  return JointDistribution(std::move(axes), std::move(probs));
}

SixTuple six_tuple(const JointDistribution& dist) {
  SixTuple t;
  t.w_y = mutual_information(dist, {"W"}, {"Y"});
  t.w_z = mutual_information(dist, {"W"}, {"Z"});
  t.uw_y = mutual_information(dist, {"U", "W"}, {"Y"});
  t.vw_z = mutual_information(dist, {"V", "W"}, {"Z"});
  const double s = conditional_mutual_information(dist, {"U"}, {"Y"}, {"W"}) +
                   conditional_mutual_information(dist, {"V"}, {"Z"}, {"W"}) -
                   conditional_mutual_information(dist, {"U"}, {"V"}, {"W"});
  t.sum_y = s + t.w_y;
  t.sum_z = s + t.w_z;
  return t;
}

}  // namespace marton
