#include <doctest.h>

#include <cmath>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "marton/channel.hpp"
#include "marton/information.hpp"

using namespace marton;

TEST_CASE("joint distribution rejects malformed tensors") {
  CHECK_THROWS_AS(JointDistribution({{"X", 2}}, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({{"X", 2}}, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({{"X", 2}}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({{"X", 2}, {"X", 2}}, {0.25, 0.25, 0.25, 0.25}),
                  std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({{"X", 0}}, {}), std::invalid_argument);
}

TEST_CASE("flat indexing is row-major with the last axis fastest") {
  const JointDistribution d({{"A", 2}, {"B", 3}}, {0.1, 0.2, 0.3, 0.05, 0.15, 0.2});
  const std::size_t idx[] = {1, 2};
  CHECK(d.flat_index(idx) == 5);
  CHECK(d.at(idx) == doctest::Approx(0.2));
  CHECK(d.unflatten(4) == std::vector<std::size_t>{1, 1});
}

TEST_CASE("entropy") {
  const JointDistribution uniform({{"X", 4}}, {0.25, 0.25, 0.25, 0.25});
  CHECK(entropy(uniform, {"X"}) == doctest::Approx(2.0).epsilon(1e-15));
  const JointDistribution point({{"X", 3}}, {0.0, 1.0, 0.0});
  CHECK(entropy(point, {"X"}) == 0.0);
  const JointDistribution bern({{"X", 2}}, {0.89, 0.11});
  CHECK(std::fabs(entropy(bern, {"X"}) - 0.4999) <= 1e-3);
  CHECK(entropy(bern, {"X"}) == doctest::Approx(oracle::binary_entropy(0.11)).epsilon(1e-14));
  CHECK(entropy(bern, {}) == 0.0);
}

TEST_CASE("mutual information") {
  const JointDistribution product({{"X", 2}, {"Y", 2}}, {0.12, 0.28, 0.18, 0.42});
  CHECK(std::fabs(mutual_information(product, {"X"}, {"Y"})) < 1e-15);
  const JointDistribution copy({{"X", 2}, {"Y", 2}}, {0.5, 0.0, 0.0, 0.5});
  CHECK(mutual_information(copy, {"X"}, {"Y"}) == doctest::Approx(1.0));
  const JointDistribution bsc({{"X", 2}, {"Y", 2}}, {0.4, 0.1, 0.1, 0.4});
  const double direct = 2 * 0.4 * std::log2(0.4 / 0.25) + 2 * 0.1 * std::log2(0.1 / 0.25);
  CHECK(mutual_information(bsc, {"X"}, {"Y"}) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(mutual_information(bsc, {"X"}, {"Y"}) ==
        doctest::Approx(1 - oracle::binary_entropy(0.2)).epsilon(1e-14));
}

TEST_CASE("conditional mutual information") {
  Rng rng(11);
  SUBCASE("conditionally independent by construction") {
    // p(a,b,c) = p(c) p(a|c) p(b|c)
    const auto pc = rng.dirichlet(2);
    std::vector<double> p(8);
    for (int c = 0; c < 2; ++c) {
      const auto pa = rng.dirichlet(2), pb = rng.dirichlet(2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) p[(a * 2 + b) * 2 + c] = pc[c] * pa[a] * pb[b];
    }
    const JointDistribution d({{"A", 2}, {"B", 2}, {"C", 2}}, p);
    CHECK(std::fabs(conditional_mutual_information(d, {"A"}, {"B"}, {"C"})) < 1e-14);
  }
  SUBCASE("constant conditioning") {
    const auto d = fixtures::random_joint(rng, {{"A", 3}, {"B", 2}, {"C", 1}});
    CHECK(conditional_mutual_information(d, {"A"}, {"B"}, {"C"}) ==
          doctest::Approx(mutual_information(d, {"A"}, {"B"})).epsilon(1e-13));
  }
  SUBCASE("matches atomwise summation") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto d = fixtures::random_joint(rng, {{"A", 2}, {"B", 2}, {"C", 2}});
      const auto p = d.probs();
      double expect = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            const double pabc = p[(a * 2 + b) * 2 + c];
            double pc = 0, pac = 0, pbc = 0;
            for (int i = 0; i < 2; ++i) {
              pac += p[(a * 2 + i) * 2 + c];
              pbc += p[(i * 2 + b) * 2 + c];
              for (int j = 0; j < 2; ++j) pc += p[(i * 2 + j) * 2 + c];
            }
            expect += pabc * std::log2(pabc * pc / (pac * pbc));
          }
      CHECK(conditional_mutual_information(d, {"A"}, {"B"}, {"C"}) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("marginalize and condition") {
  Rng rng(5);
  const auto d = fixtures::random_joint(rng, {{"U", 2}, {"W", 3}, {"X", 2}});
  const auto same = marginalize(d, {"U", "W", "X"});
  CHECK(same.axes() == d.axes());
  for (std::size_t i = 0; i < d.atom_count(); ++i) CHECK(same.probs()[i] == d.probs()[i]);

  const auto reordered = marginalize(d, {"X", "U"});
  CHECK(reordered.axis_names() == AxisNames{"X", "U"});
  const std::size_t xu[] = {1, 0};
  double direct = 0.0;
  for (std::size_t w = 0; w < 3; ++w) {
    const std::size_t uwx[] = {0, w, 1};
    direct += d.at(uwx);
  }
  CHECK(reordered.at(xu) == doctest::Approx(direct).epsilon(1e-15));

  // sum_w p(w) p(.|w) reassembles d
  const auto pw = marginalize(d, {"W"});
  for (std::size_t w = 0; w < 3; ++w) {
    const auto slice = condition(d, "W", w);
    CHECK(slice.axis_names() == AxisNames{"U", "X"});
    for (std::size_t u = 0; u < 2; ++u)
      for (std::size_t x = 0; x < 2; ++x) {
        const std::size_t ux[] = {u, x}, uwx[] = {u, w, x};
        CHECK(pw.probs()[w] * slice.at(ux) == doctest::Approx(d.at(uwx)).epsilon(1e-14));
      }
  }

  const JointDistribution uniform({{"A", 2}, {"B", 2}}, {0.25, 0.25, 0.25, 0.25});
  const auto cond = condition(uniform, "A", 1);
  CHECK(cond.probs()[0] == doctest::Approx(0.5));
  const JointDistribution gap({{"A", 2}, {"B", 2}}, {0.5, 0.5, 0.0, 0.0});
  CHECK_THROWS_AS(condition(gap, "A", 1), std::domain_error);
  CHECK_THROWS(marginalize(d, {"Q"}));
}

TEST_CASE("rename_axes") {
  const JointDistribution d({{"U", 2}, {"Y", 2}}, {0.1, 0.2, 0.3, 0.4});
  const auto r = rename_axes(d, {{"U", "V"}, {"Y", "Z"}});
  CHECK(r.axis_names() == AxisNames{"V", "Z"});
  CHECK(r.probs()[2] == 0.3);
}

TEST_CASE("push_through_channel") {
  SUBCASE("identity channel") {
    // q(y,z|x) = 1{y = z = x}
    const BroadcastChannel id(2, 2, 2, {1, 0, 0, 0, 0, 0, 0, 1});
    const JointDistribution px({{"X", 2}}, {0.3, 0.7});
    const auto out = push_through_channel(px, id);
    CHECK(out.axis_names() == AxisNames{"X", "Y", "Z"});
    const std::size_t a[] = {0, 0, 0}, b[] = {1, 1, 1};
    CHECK(out.at(a) + out.at(b) == doctest::Approx(1.0));
  }
  SUBCASE("total probability") {
    const auto ch = random_channel(3, 2, 3, 2);
    const JointDistribution px({{"X", 2}}, {0.35, 0.65});
    const auto yz = marginalize(push_through_channel(px, ch), {"Y", "Z"});
    for (std::size_t y = 0; y < 3; ++y)
      for (std::size_t z = 0; z < 2; ++z) {
        const std::size_t idx[] = {y, z};
        CHECK(yz.at(idx) ==
              doctest::Approx(0.35 * ch.q(0, y, z) + 0.65 * ch.q(1, y, z)).epsilon(1e-15));
      }
  }
  SUBCASE("Markov chain") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
      const auto ch = random_channel(100 + trial, 3, 2, 2);
      const auto in = fixtures::random_joint(rng, {{"U", 2}, {"V", 2}, {"W", 2}, {"X", 3}});
      const auto out = push_through_channel(in, ch);
      CHECK(std::fabs(conditional_mutual_information(out, {"U", "V", "W"}, {"Y", "Z"}, {"X"})) <=
            1e-12);
    }
  }
}

TEST_CASE("six_tuple matches an independent expansion") {
  Rng rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ch = random_channel(40 + trial, 2, 2, 3);
    const auto in = fixtures::random_joint(rng, {{"U", 2}, {"V", 3}, {"W", 2}, {"X", 2}});
    const auto t = six_tuple(push_through_channel(in, ch));
    const oracle::SixTupleOracle six{ch, 2, 3, 2};
    const auto expect = six(std::vector<double>(in.probs().begin(), in.probs().end()));
    for (std::size_t i = 0; i < 6; ++i) CHECK(t[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }
}
