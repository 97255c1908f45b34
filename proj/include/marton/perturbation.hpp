#pragma once

// Perturbation calculus on joint distributions: p_eps = p0 * (1 + eps * L).

#include <optional>
#include <vector>

#include "marton/joint_distribution.hpp"

namespace marton {

/// Real function on the atoms of the named axes, row-major in listed order.
struct AtomFunction {
  AxisNames axes;
  std::vector<double> values;
};

/// Closed interval of feasible eps. An empty bound means that side never binds.
struct EpsInterval {
  std::optional<double> lo;
  std::optional<double> hi;

  bool contains(double eps, double slack = 0.0) const {
    return (!lo || eps >= *lo - slack) && (!hi || eps <= *hi + slack);
  }
  bool interior(double eps) const { return (!lo || eps > *lo) && (!hi || eps < *hi); }
};

struct PerturbationDirection {
  AtomFunction field;
  EpsInterval range;
};

/// Values of `f` at every atom of `base` (f.axes must be axes of base).
std::vector<double> lift(const JointDistribution& base, const AtomFunction& f);

/// E[f | axes] as a table over the named axes; zero where p = 0.
std::vector<double> conditional_mean(const JointDistribution& base, const AtomFunction& f,
                                     const AxisNames& axes);

/// Removes the conditional mean given `given` (X by default) on positive atoms
/// and zeroes off-support values. A direction that centers to zero gets an
/// unbounded range instead of an error.
PerturbationDirection center_direction(const AtomFunction& raw, const JointDistribution& base,
                                       const AxisNames& given = {"X"});

/// Throws std::domain_error("zero direction") when L vanishes on the support.
EpsInterval epsilon_range(const JointDistribution& base, const AtomFunction& field);

/// Builds a direction from an already centered field, checking E[L|X] = 0.
PerturbationDirection make_direction(const JointDistribution& base, AtomFunction field,
                                     const AxisNames& given = {"X"});

JointDistribution perturb(const JointDistribution& base, const PerturbationDirection& dir,
                          double eps);

double h_L(const JointDistribution& base, const AtomFunction& L, const AxisNames& axes);
double h_L_conditional(const JointDistribution& base, const AtomFunction& L, const AxisNames& a,
                       const AxisNames& b);
double i_L(const JointDistribution& base, const AtomFunction& L, const AxisNames& a,
           const AxisNames& b);

/// (1 + x) log2(1 + x), with r(-1) = 0.
double r_function(double x);

/// sum_a p(a) l(a)^2 / (1 + eps l(a)) with l = E[L | axes]. Natural units:
/// the entropy's second derivative in bits is -log2(e) times this value.
double fisher_information(const JointDistribution& base, const PerturbationDirection& dir,
                          double eps, const AxisNames& axes);

/// E[E[L | axes]^2], the eps = 0 Fisher information.
double conditional_energy(const JointDistribution& base, const AtomFunction& L,
                          const AxisNames& axes);

struct DecompositionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

DecompositionCheck entropy_decomposition_check(const JointDistribution& base,
                                               const PerturbationDirection& dir, double eps,
                                               const AxisNames& axes);

struct StationarityReport {
  /// d/deps of I(U;Y)+I(V;Z)-I(U;V)+lambda I(U;Y)+gamma I(V;Z) at 0, bits.
  double first_derivative = 0.0;
  /// Second derivative of the same objective at 0, bits.
  double second_derivative = 0.0;
  /// log2(e) (E_UY + E_VZ - E_UV), which must be <= 0 at maximizers.
  double combination = 0.0;
  double e_uy = 0.0;
  double e_vz = 0.0;
  double e_uv = 0.0;
};

/// Requires axes U, V, X, Y, Z and E[L | X] = 0 within 1e-9.
StationarityReport stationarity_check(const JointDistribution& base,
                                      const PerturbationDirection& dir, double lambda,
                                      double gamma);

/// I(U;Y) + I(V;Z) - I(U;V) + lambda I(U;Y) + gamma I(V;Z).
double auxiliary_objective(const JointDistribution& joint, double lambda, double gamma);

}  // namespace marton
