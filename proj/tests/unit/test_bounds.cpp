#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "marton/bounds.hpp"
#include "marton/information.hpp"
#include "marton/perturbation.hpp"

using namespace marton;

namespace {

const BroadcastChannel kUseless = binary_example(0.5, 0.5);

double capacity_y(const BroadcastChannel& ch) {
  const oracle::BinaryChannel bc(ch);
  double best = 0.0;
  for (int i = 0; i <= 100000; ++i) best = std::max(best, bc.iy(i / 100000.0));
  return best;
}

}  // namespace

TEST_CASE("optimization config validation") {
  OptimizationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.grid_points = 200;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.grid_points = 31;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.starts = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("t_function") {
  const auto ch = binary_example(0.01, 0.99);
  CHECK(t_function(0.0, ch) == doctest::Approx(0.0));
  CHECK(t_function(1.0, ch) == doctest::Approx(0.0));
  CHECK(t_function(0.5, ch) == doctest::Approx(1 - oracle::binary_entropy(0.01)).epsilon(1e-12));
  const auto asym = binary_example(0.1, 0.35);
  const oracle::BinaryChannel bc(asym);
  for (double p : {0.1, 0.4, 0.75}) CHECK(t_function(p, asym) == doctest::Approx(bc.t(p)));
  CHECK_THROWS(t_function(0.5, random_channel(1, 3, 2, 2)));
}

TEST_CASE("term_a") {
  const OptimizationConfig cfg;
  CHECK(term_a(kUseless, cfg).value == doctest::Approx(0.0).epsilon(1e-12));
  const double cap = 1 - oracle::binary_entropy(0.01);
  CHECK(std::fabs(term_a(binary_example(0.01, 0.99), cfg).value - cap) <= 2e-3);

  const auto ch = binary_example(0.01, 0.5);
  const oracle::BinaryChannel bc(ch);
  for (double gamma : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    std::optional<JointDistribution> witness;
    const double envelope = term_a_inner(ch, gamma, cfg, &witness);
    const double brute = oracle::nested_grid_max(
        [&](double w0, double a, double b) { return bc.term_a_value(gamma, w0, a, b); });
    CHECK(std::fabs(envelope - brute) <= 1e-3);
    REQUIRE(witness);
    CHECK(term_a_objective(*witness, ch, gamma) == doctest::Approx(envelope).epsilon(1e-9));
  }

  const auto result = term_a(ch, cfg);
  REQUIRE(result.witness);
  CHECK(result.witness->axis_names() == AxisNames{"W", "X"});
  const double gamma = result.parameters.at("gamma");
  CHECK(gamma >= 0.0);
  CHECK(gamma <= 1.0);
  CHECK(term_a_objective(*result.witness, ch, gamma) == doctest::Approx(result.value).epsilon(1e-9));
}

TEST_CASE("term_b") {
  const OptimizationConfig cfg;
  const auto ch = binary_example(0.05, 0.4);
  const auto r = term_b(ch, cfg);
  CHECK(r.value >= capacity_y(ch) - 1e-9);
  REQUIRE(r.witness);
  CHECK(term_b_objective(*r.witness, ch) == doctest::Approx(r.value).epsilon(1e-12));
  CHECK(std::fabs(mutual_information(*r.witness, {"U"}, {"V"})) <= 1e-12);
  CHECK(std::fabs(entropy(*r.witness, {"U", "V", "X"}) - entropy(*r.witness, {"U", "V"})) <= 1e-12);
  for (double alpha : {0.01, 0.1, 0.3}) {
    const double cap = 1 - oracle::binary_entropy(alpha);
    CHECK(term_b(binary_example(alpha, 1 - alpha), cfg).value <= cap + 1e-6);
  }
  CHECK(term_b(kUseless, cfg).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("marton_sum_rate") {
  const OptimizationConfig cfg;
  CHECK(marton_sum_rate(kUseless, cfg).value == doctest::Approx(0.0).epsilon(1e-12));
  const auto identical = marton_sum_rate(binary_example(0.01, 0.99), cfg);
  CHECK(std::fabs(identical.value - (1 - oracle::binary_entropy(0.01))) <= 2e-3);
  const auto ch = binary_example(0.01, 0.5);
  const auto inner = marton_sum_rate(ch, cfg);
  CHECK(inner.value ==
        doctest::Approx(std::max(inner.parameters.at("term_a"), inner.parameters.at("term_b"))));
  CHECK(inner.value <= ne_outer_sum_rate(ch, cfg).value + 1e-6);
  CHECK_FALSE(inner.diagnostics.notes.empty());

  const auto zero = product_channel({{1.0, 0.0}, {0.3, 0.7}}, {{0.6, 0.4}, {0.2, 0.8}});
  CHECK_THROWS_AS(marton_sum_rate(zero, cfg), std::invalid_argument);
  const auto permissive = marton_sum_rate(zero, cfg, false);
  CHECK(permissive.diagnostics.notes.size() >= 2);
}

TEST_CASE("ne_outer_sum_rate") {
  const OptimizationConfig cfg;
  CHECK(ne_outer_sum_rate(kUseless, cfg).value == doctest::Approx(0.0).epsilon(1e-12));
  for (double alpha : {0.01, 0.2}) {
    const double cap = 1 - oracle::binary_entropy(alpha);
    CHECK(std::fabs(ne_outer_sum_rate(binary_example(alpha, 1 - alpha), cfg).value - cap) <= 2e-3);
  }
  const auto ch = binary_example(0.01, 0.7);
  const auto r = ne_outer_sum_rate(ch, cfg);
  REQUIRE(r.witness);
  CHECK(r.witness->axis_names() == AxisNames{"U", "V", "X"});
  CHECK(ne_outer_objective(*r.witness, ch) == doctest::Approx(r.value).epsilon(1e-12));
  CHECK(conditional_mutual_information(*r.witness, {"U"}, {"V"}, {"X"}) <= 1e-12);
  CHECK(r.value >= marton_sum_rate(ch, cfg).value - 1e-6);
  CHECK(r.diagnostics.starts_used == cfg.starts);
}

TEST_CASE("bounds are invariant under output relabeling") {
  OptimizationConfig cfg;
  cfg.starts = 16;
  const auto a = binary_example(0.1, 0.35), b = binary_example(0.9, 0.65);
  CHECK(term_a(a, cfg).value == doctest::Approx(term_a(b, cfg).value).epsilon(1e-6));
  CHECK(term_b(a, cfg).value == doctest::Approx(term_b(b, cfg).value).epsilon(1e-6));
  CHECK(std::fabs(ne_outer_sum_rate(a, cfg).value - ne_outer_sum_rate(b, cfg).value) <= 1e-6);
}

TEST_CASE("hyperplane_max") {
  OptimizationConfig cfg;
  cfg.starts = 16;
  const auto identical = binary_example(0.01, 0.99);
  const auto uw_y = hyperplane_max(identical, {{0, 0, 1, 0, 0, 0}}, cfg);
  CHECK(std::fabs(uw_y.value - (1 - oracle::binary_entropy(0.01))) <= 2e-3);

  const auto zero = hyperplane_max(identical, {{0, 0, 0, 0, 0, 0}}, cfg);
  CHECK(zero.value == 0.0);
  CHECK_THROWS_AS(hyperplane_max(identical, {{0, -1, 0, 0, 0, 0}}, cfg), std::invalid_argument);

  const auto ch = random_channel(3, 2, 2, 2);
  const std::array<double, 6> sum_y{0, 0, 0, 0, 1, 0};
  const auto r = hyperplane_max(ch, {sum_y}, cfg);
  CHECK(std::fabs(r.value - oracle::hyperplane_lattice(ch, sum_y)) <= 2e-3);

  REQUIRE(r.witness);
  CHECK(r.witness->axis_names() == AxisNames{"U", "V", "W", "X"});
  CHECK(r.witness->axis_size("W") == 6);
  const auto t = six_tuple(push_through_channel(*r.witness, ch));
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(r.parameters.at("t" + std::to_string(i + 1)) == doctest::Approx(t[i]).epsilon(1e-9));
  CHECK(hyperplane_objective(*r.witness, ch, {sum_y}) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("region_sample") {
  OptimizationConfig cfg;
  cfg.starts = 8;
  const auto ch = random_channel(8, 2, 2, 2);
  CHECK(region_sample(ch, {}, cfg).empty());

  const HyperplaneWeights one{{0.2, 0.1, 0.5, 0.3, 0.7, 0.4}};
  const auto single = region_sample(ch, {one}, cfg);
  REQUIRE(single.size() == 1);
  const auto direct = hyperplane_max(ch, one, cfg);
  CHECK(single[0].second[3] == doctest::Approx(direct.parameters.at("t4")));

  std::vector<HyperplaneWeights> axes;
  for (std::size_t i = 0; i < 6; ++i) {
    HyperplaneWeights w;
    w.lambda[i] = 1.0;
    axes.push_back(w);
  }
  const auto corners = region_sample(ch, axes, cfg);
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto j = fixtures::random_joint(rng, {{"U", 2}, {"V", 2}, {"W", 3}, {"X", 2}});
    const auto t = six_tuple(push_through_channel(j, ch));
    for (std::size_t i = 0; i < 6; ++i) CHECK(t[i] <= corners[i].second[i] + 1e-9);
  }
}

TEST_CASE("auxiliary_max") {
  OptimizationConfig cfg;
  cfg.starts = 4;
  const auto ch = random_channel(14, 2, 2, 2);
  const auto r = auxiliary_max(ch, {0.3, 0.7}, 2, 2, 0.5, 0.2, cfg);
  REQUIRE(r.witness);
  CHECK(r.witness->axis_names() == AxisNames{"U", "V", "X", "Y", "Z"});
  CHECK(auxiliary_objective(*r.witness, 0.5, 0.2) == doctest::Approx(r.value).epsilon(1e-12));
  const auto px = marginalize(*r.witness, {"X"});
  CHECK(px.probs()[0] == doctest::Approx(0.3).epsilon(1e-12));
  // U = X, V constant is feasible, so the maximum is at least (1 + lambda) I(X;Y).
  const auto bare = push_through_channel(JointDistribution({{"X", 2}}, {0.3, 0.7}), ch);
  CHECK(r.value >= 1.5 * mutual_information(bare, {"X"}, {"Y"}) - 1e-9);
  CHECK_THROWS(auxiliary_max(ch, {0.3, 0.6}, 2, 2, 0.5, 0.2, cfg));
}
