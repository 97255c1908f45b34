#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "marton/cli.hpp"
#include "marton/joint_io.hpp"
#include "marton/parallel.hpp"
#include "marton/reduction.hpp"
#include "marton/verify.hpp"

namespace marton {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<SweepRow> sweep(double alpha, double beta_min, double beta_max, std::size_t steps,
                            const OptimizationConfig& config) {
  if (steps == 0) throw std::invalid_argument("steps must be positive");
  if (!(beta_min <= beta_max)) throw std::invalid_argument("beta-min exceeds beta-max");
  std::vector<SweepRow> rows(steps);
  // Nested parallel_for calls inside a row run inline, so the pool is spent
  // across rows.
  parallel_for(steps, [&](std::size_t k) {
    const double beta = steps == 1 ? beta_min
                                   : beta_min + (beta_max - beta_min) * static_cast<double>(k) /
                                                    static_cast<double>(steps - 1);
    const auto channel = binary_example(alpha, beta);
    SweepRow row;
    row.beta = beta;
    row.inner = marton_sum_rate(channel, config).value;
    row.outer = ne_outer_sum_rate(channel, config).value;
    row.gap = row.outer - row.inner;
    rows[k] = row;
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "beta,inner,outer,gap\n";
  for (const auto& r : rows)
    out << format_number(r.beta) << ',' << format_number(r.inner) << ','
        << format_number(r.outer) << ',' << format_number(r.gap) << '\n';
}

namespace {

// Thrown for argument combinations CLI11 cannot express; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CLI::Validator open_unit_interval() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        double v = 0.0;
        try {
          v = std::stod(s);
        } catch (const std::exception&) {
          return "not a number: " + s;
        }
        return v > 0.0 && v < 1.0 ? std::string() : "value must lie strictly inside (0, 1)";
      },
      "(0,1)");
}

struct CommonOptions {
  OptimizationConfig config;

  void attach(CLI::App* app) {
    app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app->add_option("--starts", config.starts, "Multi-start count")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--grid-points", config.grid_points, "Grid size (odd, >= 33)")
        ->capture_default_str();
  }
};

void print_witness(std::ostream& out, const std::string& label, const OptimizationResult& r) {
  out << label << " witness:";
  for (const auto& [k, v] : r.parameters)
    if (k != "term_a" && k != "term_b" && k != "winner_is_term_b")
      out << ' ' << k << '=' << format_number(v);
  out << '\n';
  if (r.witness) {
    std::ostringstream tensor;
    write_joint(tensor, *r.witness);
    std::istringstream lines(tensor.str());
    for (std::string line; std::getline(lines, line);) out << "  " << line << '\n';
  }
}

int cmd_sum_rate(const std::optional<std::string>& channel_path, std::optional<double> alpha,
                 std::optional<double> beta, const std::string& format, bool permissive,
                 const OptimizationConfig& config, std::ostream& out) {
  if (channel_path && (alpha || beta))
    throw UsageError("give either --channel or --alpha/--beta, not both");
  if (!channel_path && !(alpha && beta))
    throw UsageError("a channel is required: --channel PATH or --alpha A --beta B");
  const BroadcastChannel channel =
      channel_path ? load_channel(*channel_path) : binary_example(*alpha, *beta);
  const auto inner = marton_sum_rate(channel, config, !permissive);
  const auto outer = ne_outer_sum_rate(channel, config);
  const double gap = outer.value - inner.value;
  if (format == "csv") {
    out << "inner,outer,gap\n"
        << format_number(inner.value) << ',' << format_number(outer.value) << ','
        << format_number(gap) << '\n';
    return 0;
  }
  out << "inner (Marton sum-rate expression): " << format_number(inner.value) << '\n'
      << "  term_a: " << format_number(inner.parameters.at("term_a")) << '\n'
      << "  term_b: " << format_number(inner.parameters.at("term_b")) << '\n'
      << "outer (Nair-El Gamal sum rate):     " << format_number(outer.value) << '\n'
      << "gap (outer - inner):                " << format_number(gap) << '\n';
  print_witness(out, inner.parameters.at("winner_is_term_b") > 0.5 ? "term_b" : "term_a", inner);
  print_witness(out, "outer", outer);
  for (const auto& n : inner.diagnostics.notes) out << "note: " << n << '\n';
  return 0;
}

int cmd_sweep(double alpha, double beta_min, double beta_max, std::size_t steps,
              const std::string& path, const OptimizationConfig& config, std::ostream& out) {
  if (steps == 0) throw UsageError("--steps must be positive");
  if (beta_min > beta_max) throw UsageError("--beta-min exceeds --beta-max");
  config.validate();
  const auto rows = sweep(alpha, beta_min, beta_max, steps, config);
  if (path == "-") {
    write_sweep_csv(out, rows);
  } else {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + path);
    write_sweep_csv(file, rows);
  }
  return 0;
}

int cmd_verify(const std::string& suite, std::size_t trials, std::uint64_t seed,
               std::ostream& out) {
  if (trials == 0) throw UsageError("--trials must be positive");
  SuiteReport report;
  if (suite == "lemma3")
    report = verify_entropy_identity(trials, seed);
  else if (suite == "stationarity")
    report = verify_stationarity(trials, seed);
  else
    report = verify_xor_and_dependence(trials, seed);
  out << report.name << ": " << report.passed << '/' << report.trials << " passed\n";
  for (const auto& [key, value] : report.worst)
    out << "  worst " << key << ": " << format_number(value)
        << " (tolerance " << format_number(report.tolerance.at(key)) << ")\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(report.failures.size(), 10); ++i)
    out << "  " << report.failures[i] << '\n';
  return report.ok() ? 0 : 1;
}

int cmd_reduce_w(const std::string& in_path, const std::string& channel_path,
                 const std::string& out_path, std::ostream& out) {
  const auto joint = load_joint(in_path);
  const auto channel = load_channel(channel_path);
  const auto outcome = reduce_w(joint, channel);
  save_joint(outcome.result, out_path);
  out << "status: " << to_string(outcome.status) << '\n'
      << "W support: " << support_size(joint, "W") << " -> " << outcome.support_sizes.at("W")
      << " (limit " << joint.axis_size("X") + 4 << ")\n"
      << "quantity,before,after\n";
  for (const auto& [name, values] : outcome.preserved)
    out << name << ',' << format_number(values.first) << ',' << format_number(values.second)
        << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Marton inner and Nair-El Gamal outer bounds for two-receiver broadcast channels",
               "marton"};
  app.require_subcommand(1);

  auto* sum_rate = app.add_subcommand("sum-rate", "Inner and outer sum rates of one channel");
  std::optional<std::string> channel_path;
  std::optional<double> alpha, beta;
  std::string format = "text";
  bool permissive = false;
  CommonOptions sum_opts;
  sum_rate->add_option("--channel", channel_path, "Channel file");
  sum_rate->add_option("--alpha", alpha, "q(Y=0|X=0) of the binary example")
      ->check(open_unit_interval());
  sum_rate->add_option("--beta", beta, "q(Y=0|X=1) of the binary example")
      ->check(open_unit_interval());
  sum_rate->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  sum_rate->add_flag("--permissive", permissive,
                     "Warn instead of failing when a marginal kernel has a zero entry");
  sum_opts.attach(sum_rate);

  auto* sweep_cmd = app.add_subcommand("sweep", "Sum-rate sweep over beta (CSV)");
  double sweep_alpha = 0.01, beta_min = 0.05, beta_max = 0.95;
  std::size_t steps = 19;
  std::string out_path = "-";
  CommonOptions sweep_opts;
  sweep_cmd->add_option("--alpha", sweep_alpha)->check(open_unit_interval())->capture_default_str();
  sweep_cmd->add_option("--beta-min", beta_min)->check(open_unit_interval())->capture_default_str();
  sweep_cmd->add_option("--beta-max", beta_max)->check(open_unit_interval())->capture_default_str();
  sweep_cmd->add_option("--steps", steps, "Number of rows")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "Output path or - for stdout")->capture_default_str();
  sweep_opts.attach(sweep_cmd);

  auto* verify = app.add_subcommand("verify", "Randomized property suites");
  verify->require_subcommand(1);
  std::size_t trials = 100;
  std::uint64_t verify_seed = 1;
  std::string suite;
  for (const char* name : {"lemma3", "stationarity", "appendix-vi"}) {
    auto* sub = verify->add_subcommand(name);
    sub->add_option("--trials", trials)->capture_default_str();
    sub->add_option("--seed", verify_seed)->capture_default_str();
    sub->callback([&suite, name] { suite = name; });
  }

  auto* reduce = app.add_subcommand("reduce", "Support reductions");
  reduce->require_subcommand(1);
  auto* reduce_w_cmd = reduce->add_subcommand("w", "Reduce the W support to |X|+4 atoms");
  std::string in_path, reduce_channel, reduce_out;
  reduce_w_cmd->add_option("--in", in_path, "Joint file over U,V,W,X")->required();
  reduce_w_cmd->add_option("--channel", reduce_channel, "Channel file")->required();
  reduce_w_cmd->add_option("--out", reduce_out, "Output joint file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help(app.get_subcommands().empty() ? "" : "", CLI::AppFormatMode::Normal);
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*sum_rate)
      return cmd_sum_rate(channel_path, alpha, beta, format, permissive, sum_opts.config, out);
    if (*sweep_cmd)
      return cmd_sweep(sweep_alpha, beta_min, beta_max, steps, out_path, sweep_opts.config, out);
    if (*verify) return cmd_verify(suite, trials, verify_seed, out);
    if (*reduce) return cmd_reduce_w(in_path, reduce_channel, reduce_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace marton
