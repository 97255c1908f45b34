#pragma once

#include <vector>

#include "marton/joint_distribution.hpp"
#include "marton/random.hpp"

namespace fixtures {

/// Dirichlet(1) joint over the given axes.
inline marton::JointDistribution random_joint(marton::Rng& rng, std::vector<marton::Axis> axes) {
  return marton::JointDistribution(axes, rng.dirichlet(marton::atom_count(axes)));
}

}  // namespace fixtures
