#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "marton/bounds.hpp"

namespace marton {

struct SweepRow {
  double beta = 0.0;
  double inner = 0.0;  // marton_sum_rate
  double outer = 0.0;  // ne_outer_sum_rate
  double gap = 0.0;    // outer - inner
};

/// Rows for beta evenly spaced over [beta_min, beta_max] on the binary
/// example family with the given alpha, ascending in beta.
std::vector<SweepRow> sweep(double alpha, double beta_min, double beta_max, std::size_t steps,
                            const OptimizationConfig& config);

/// Header `beta,inner,outer,gap`, 12 significant digits, LF line endings.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// printf("%.12g").
std::string format_number(double v);

/// Runs the command line (without the program name). Exit codes: 0 success,
/// 1 validation or file error, 2 bad arguments.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace marton
