#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "govsim/metrics.hpp"
#include "govsim/rng.hpp"

using namespace govsim;
using namespace govsim::metrics;

TEST_CASE("toxicity") {
  CHECK(*toxicity(std::vector<double>{1.0}) == 0.0);
  CHECK(*toxicity(std::vector<double>{0.7, 0.9}) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(*toxicity(std::vector<double>{0.5, 0.5, 0.5}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(toxicity({}).has_value());
}

TEST_CASE("toxicity stays in [0, 1]") {
  rng::Stream s(3, "toxicity", 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> labels;
    const std::size_t n = 1 + s.next_index(40);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(s.next_unit());
    const double t = *toxicity(labels);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
  }
}

TEST_CASE("quality gap") {
  CHECK(*quality_gap(std::vector<double>{0.8}, std::vector<double>{0.8}) == 0.0);
  CHECK(*quality_gap(std::vector<double>{0.9, 0.7}, std::vector<double>{0.3}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*quality_gap(std::vector<double>{0.2}, std::vector<double>{0.9}) ==
        doctest::Approx(-0.7).epsilon(1e-12));
  CHECK_FALSE(quality_gap({}, std::vector<double>{0.5}).has_value());
  CHECK_FALSE(quality_gap(std::vector<double>{0.5}, {}).has_value());
}

TEST_CASE("adverse selection shows up as a negative quality gap") {
  // Acceptance rigged to prefer labels below the median.
  rng::Stream s(4, "gap-sign", 0, 0);
  std::vector<double> all;
  for (int i = 0; i < 1001; ++i) all.push_back(s.next_unit());
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  std::vector<double> accepted, rejected;
  for (double p : all) (p < median ? accepted : rejected).push_back(p);
  CHECK(*quality_gap(accepted, rejected) < 0.0);
}

TEST_CASE("conditional loss") {
  CHECK(*conditional_loss(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0}) ==
        0.0);
  CHECK(*conditional_loss(std::vector<double>{0.0, 2.0}, std::vector<double>{2.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*conditional_loss(std::vector<double>{2.0, 0.0}, std::vector<double>{0.0}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(conditional_loss({}, std::vector<double>{1.0}).has_value());
}

TEST_CASE("spread") {
  PayoffConfig cfg;
  cfg.surplus_pos = 2.0;
  cfg.surplus_neg = 1.0;
  CHECK(*spread(std::vector<double>{0.6, 0.6}, std::vector<double>{0.6}, cfg) == 0.0);
  CHECK(*spread(std::vector<double>{0.4, 0.8}, std::vector<double>{0.8}, cfg) ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(*spread(std::vector<double>{0.5, 0.9}, std::vector<double>{0.5}, cfg) < 0.0);
  CHECK_FALSE(spread({}, {}, cfg).has_value());
}

TEST_CASE("seed aggregation uses the population standard deviation") {
  const auto constant = aggregate_seeds(std::vector<double>{5, 5, 5, 5, 5});
  CHECK(constant.mean == 5.0);
  CHECK(constant.std_dev == 0.0);

  const auto three = aggregate_seeds(std::vector<double>{1, 2, 3});
  CHECK(three.mean == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(three.std_dev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));

  const auto single = aggregate_seeds(std::vector<double>{7});
  CHECK(single.mean == 7.0);
  CHECK(single.std_dev == 0.0);

  CHECK_THROWS_AS(aggregate_seeds({}), std::invalid_argument);
}
