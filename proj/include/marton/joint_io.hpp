#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "marton/joint_distribution.hpp"

namespace marton {

// Text format: the first non-comment line lists the axes as `NAME:SIZE`
// tokens (e.g. `U:2 V:2 W:10 X:2`); each following line holds the entries
// of the last axis for one index of the leading axes, in row-major order.
// Lines starting with '#' are ignored. Entries must be nonnegative and sum
// to 1 within 1e-9; tables off by more than 1e-12 are renormalized on load.
JointDistribution parse_joint(std::istream& in, const std::string& source = "<stream>");
JointDistribution load_joint(const std::filesystem::path& path);
void write_joint(std::ostream& out, const JointDistribution& dist);
void save_joint(const JointDistribution& dist, const std::filesystem::path& path);

}  // namespace marton
