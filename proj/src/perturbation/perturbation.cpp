#include "marton/perturbation.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "marton/information.hpp"

namespace marton {

namespace {

constexpr double kLog2e = std::numbers::log2e;

void require_shape(const AtomFunction& f, const JointDistribution& base) {
  std::size_t n = 1;
  for (const auto& name : f.axes) n *= base.axis_size(name);
  if (f.values.size() != n)
    throw std::invalid_argument("function has " + std::to_string(f.values.size()) +
                                " values, expected " + std::to_string(n));
  for (double v : f.values)
    if (!std::isfinite(v)) throw std::invalid_argument("function values must be finite");
}

AxisNames join(const AxisNames& a, const AxisNames& b) {
  AxisNames out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// m(a) = sum of p * L over the atoms with value a, together with p(a).
void weighted_marginals(const JointDistribution& base, const AtomFunction& L,
                        const AxisNames& axes, std::vector<double>& mass,
                        std::vector<double>& weight) {
  const auto l = lift(base, L);
  const auto p = base.probs();
  std::vector<double> pl(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) pl[i] = p[i] * l[i];
  mass = sum_onto(base, axes, p);
  weight = sum_onto(base, axes, pl);
}

}  // namespace

std::vector<double> lift(const JointDistribution& base, const AtomFunction& f) {
  require_shape(f, base);
  const auto map = atom_map(base, f.axes);
  std::vector<double> out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = f.values[map[i]];
  return out;
}

std::vector<double> conditional_mean(const JointDistribution& base, const AtomFunction& f,
                                     const AxisNames& axes) {
  std::vector<double> mass, weight;
  weighted_marginals(base, f, axes, mass, weight);
  for (std::size_t a = 0; a < mass.size(); ++a) weight[a] = mass[a] > 0.0 ? weight[a] / mass[a] : 0.0;
  return weight;
}

PerturbationDirection center_direction(const AtomFunction& raw, const JointDistribution& base,
                                       const AxisNames& given) {
  require_shape(raw, base);
  const auto field_base = marginalize(base, raw.axes);
  for (const auto& g : given)
    if (std::find(raw.axes.begin(), raw.axes.end(), g) == raw.axes.end())
      throw std::invalid_argument("direction must be defined over the conditioning axis " + g);

  const AtomFunction on_field{raw.axes, raw.values};
  const auto mean = conditional_mean(field_base, on_field, given);
  const auto given_of = atom_map(field_base, given);
  const auto p = field_base.probs();
  double scale = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) scale = std::max(scale, std::abs(raw.values[i]));

  PerturbationDirection dir{{raw.axes, std::vector<double>(raw.values.size(), 0.0)}, {}};
  bool nonzero = false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    double v = raw.values[i] - mean[given_of[i]];
    // Cancellation residue of a constant-in-`given` input is not a direction.
    if (std::abs(v) <= 64.0 * DBL_EPSILON * scale) v = 0.0;
    dir.field.values[i] = v;
    nonzero = nonzero || v != 0.0;
  }
  if (nonzero) dir.range = epsilon_range(field_base, dir.field);
  return dir;
}

EpsInterval epsilon_range(const JointDistribution& base, const AtomFunction& field) {
  require_shape(field, base);
  const auto field_base = marginalize(base, field.axes);
  const auto p = field_base.probs();
  double lo_val = 0.0, hi_val = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    lo_val = std::min(lo_val, field.values[i]);
    hi_val = std::max(hi_val, field.values[i]);
  }
  if (lo_val == 0.0 && hi_val == 0.0) throw std::domain_error("zero direction");
  EpsInterval range;
  if (lo_val < 0.0) range.hi = 1.0 / -lo_val;
  if (hi_val > 0.0) range.lo = -1.0 / hi_val;
  return range;
}

PerturbationDirection make_direction(const JointDistribution& base, AtomFunction field,
                                     const AxisNames& given) {
  require_shape(field, base);
  const auto mean = conditional_mean(base, field, given);
  double scale = 0.0;
  for (double v : field.values) scale = std::max(scale, std::abs(v));
  for (double m : mean)
    if (std::abs(m) > 1e-9 * std::max(1.0, scale))
      throw std::invalid_argument("direction is not centered given the conditioning axes");
  auto range = epsilon_range(base, field);
  return {std::move(field), range};
}

JointDistribution perturb(const JointDistribution& base, const PerturbationDirection& dir,
                          double eps) {
  if (eps == 0.0)
    return JointDistribution(base.axes(), {base.probs().begin(), base.probs().end()});
  if (!dir.range.contains(eps, 1e-12 * std::abs(eps)))
    throw std::domain_error("eps = " + std::to_string(eps) + " is outside the feasible interval");
  const auto l = lift(base, dir.field);
  const auto p = base.probs();
  std::vector<double> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    double factor = 1.0 + eps * l[i];
    if (std::abs(factor) <= 4.0 * DBL_EPSILON) factor = 0.0;
    double v = p[i] * factor;
    if (v < 0.0) {
      if (v < -1e-12) throw std::domain_error("perturbed probability is negative");
      v = 0.0;
    }
    out[i] = v;
  }
  return JointDistribution(base.axes(), std::move(out));
}

double h_L(const JointDistribution& base, const AtomFunction& L, const AxisNames& axes) {
  std::vector<double> mass, weight;
  weighted_marginals(base, L, axes, mass, weight);
  double h = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a)
    if (mass[a] > 0.0) h -= weight[a] * std::log2(mass[a]);
  return h;
}

double h_L_conditional(const JointDistribution& base, const AtomFunction& L, const AxisNames& a,
                       const AxisNames& b) {
  return h_L(base, L, join(a, b)) - h_L(base, L, b);
}

double i_L(const JointDistribution& base, const AtomFunction& L, const AxisNames& a,
           const AxisNames& b) {
  return h_L(base, L, a) - h_L_conditional(base, L, a, b);
}

double r_function(double x) {
  if (x < -1.0 - 1e-12) throw std::domain_error("r(x) requires x >= -1");
  if (x <= -1.0) return 0.0;
  return (1.0 + x) * std::log2(1.0 + x);
}

double fisher_information(const JointDistribution& base, const PerturbationDirection& dir,
                          double eps, const AxisNames& axes) {
  if (!dir.range.interior(eps))
    throw std::domain_error("Fisher information needs eps strictly inside the feasible interval");
  std::vector<double> mass, weight;
  weighted_marginals(base, dir.field, axes, mass, weight);
  double info = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a) {
    if (!(mass[a] > 0.0)) continue;
    const double l = weight[a] / mass[a];
    info += mass[a] * l * l / (1.0 + eps * l);
  }
  return info;
}

double conditional_energy(const JointDistribution& base, const AtomFunction& L,
                          const AxisNames& axes) {
  std::vector<double> mass, weight;
  weighted_marginals(base, L, axes, mass, weight);
  double e = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a)
    if (mass[a] > 0.0) e += weight[a] * weight[a] / mass[a];
  return e;
}

DecompositionCheck entropy_decomposition_check(const JointDistribution& base,
                                               const PerturbationDirection& dir, double eps,
                                               const AxisNames& axes) {
  DecompositionCheck check;
  check.lhs = entropy(perturb(base, dir, eps), axes);
  std::vector<double> mass, weight;
  weighted_marginals(base, dir.field, axes, mass, weight);
  double r_mean = 0.0;
  for (std::size_t a = 0; a < mass.size(); ++a)
    if (mass[a] > 0.0) r_mean += mass[a] * r_function(eps * weight[a] / mass[a]);
  check.rhs = entropy(base, axes) + eps * h_L(base, dir.field, axes) - r_mean;
  check.residual = std::abs(check.lhs - check.rhs);
  return check;
}

StationarityReport stationarity_check(const JointDistribution& base,
                                      const PerturbationDirection& dir, double lambda,
                                      double gamma) {
  if (lambda < 0.0 || gamma < 0.0) throw std::invalid_argument("lambda and gamma must be >= 0");
  for (const char* name : {"U", "V", "X", "Y", "Z"})
    if (!base.has_axis(name)) throw std::invalid_argument(std::string("base lacks axis ") + name);
  const auto& L = dir.field;
  double scale = 0.0;
  for (double v : L.values) scale = std::max(scale, std::abs(v));
  for (double m : conditional_mean(base, L, {"X"}))
    if (std::abs(m) > 1e-9 * std::max(1.0, scale))
      throw std::invalid_argument("inadmissible direction: E[L|X] != 0");

  StationarityReport rep;
  const double iuy = i_L(base, L, {"U"}, {"Y"});
  const double ivz = i_L(base, L, {"V"}, {"Z"});
  const double iuv = i_L(base, L, {"U"}, {"V"});
  rep.first_derivative = (1.0 + lambda) * iuy + (1.0 + gamma) * ivz - iuv;

  rep.e_uy = conditional_energy(base, L, {"U", "Y"});
  rep.e_vz = conditional_energy(base, L, {"V", "Z"});
  rep.e_uv = conditional_energy(base, L, {"U", "V"});
  const double e_u = conditional_energy(base, L, {"U"});
  const double e_v = conditional_energy(base, L, {"V"});
  const double e_y = conditional_energy(base, L, {"Y"});
  const double e_z = conditional_energy(base, L, {"Z"});
  // I(A;B)'' = log2(e) (E_AB - E_A - E_B).
  const double d2_uy = rep.e_uy - e_u - e_y;
  const double d2_vz = rep.e_vz - e_v - e_z;
  const double d2_uv = rep.e_uv - e_u - e_v;
  rep.second_derivative = kLog2e * ((1.0 + lambda) * d2_uy + (1.0 + gamma) * d2_vz - d2_uv);
  rep.combination = kLog2e * (rep.e_uy + rep.e_vz - rep.e_uv);
  return rep;
}

double auxiliary_objective(const JointDistribution& joint, double lambda, double gamma) {
  const double iuy = mutual_information(joint, {"U"}, {"Y"});
  const double ivz = mutual_information(joint, {"V"}, {"Z"});
  const double iuv = mutual_information(joint, {"U"}, {"V"});
  return (1.0 + lambda) * iuy + (1.0 + gamma) * ivz - iuv;
}

}  // namespace marton
