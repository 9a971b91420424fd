#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"
#include "qrmab/bandit.hpp"
#include "stats.hpp"

using namespace qrmab;

TEST_CASE("env_new draws reproducible means in [0,1]") {
  const auto a = BanditEnv::draw(5, 42);
  const auto b = BanditEnv::draw(5, 42);
  REQUIRE(a.arms() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.theta(i) >= 0.0);
    CHECK(a.theta(i) <= 1.0);
    CHECK(a.theta(i) == b.theta(i));
  }
  CHECK(BanditEnv::draw(5, 43).theta(0) != a.theta(0));
}

TEST_CASE("env_new explicit means and errors") {
  const BanditEnv env({0.0, 1.0}, 7);
  CHECK(env.best_mean() == 1.0);
  CHECK_THROWS_AS(BanditEnv({0.5, 1.5}, 1), std::invalid_argument);
  CHECK_THROWS_AS(BanditEnv({0.5}, 1), std::invalid_argument);
  CHECK_THROWS_AS(BanditEnv::draw(1, 1), std::invalid_argument);
  CHECK_THROWS_AS(BanditEnv({-0.1, 0.5}, 1), std::invalid_argument);
}

TEST_CASE("env_pull degenerate and Monte Carlo means") {
  BanditEnv env({0.0, 1.0, 0.5}, 11);
  for (int i = 0; i < 1000; ++i) {
    CHECK(env.pull(0) == 0);
    CHECK(env.pull(1) == 1);
  }
  long sum = 0;
  for (int i = 0; i < 100000; ++i) sum += env.pull(2);
  CHECK(std::abs(sum / 1e5 - 0.5) < 0.01);
  CHECK_THROWS_AS(env.pull(3), std::out_of_range);
}

TEST_CASE("identically seeded environments are bit-identical") {
  BanditEnv a = BanditEnv::draw(4, 99);
  BanditEnv b = BanditEnv::draw(4, 99);
  for (int i = 0; i < 5000; ++i) {
    const ArmId arm = static_cast<ArmId>(i % 4);
    REQUIRE(a.pull(arm) == b.pull(arm));
  }
}

TEST_CASE("ucb_index values") {
  UcbState state(3);
  CHECK(ucb_index(state, 0) == std::numeric_limits<double>::infinity());
  ucb_update(state, 0, 0);
  CHECK(ucb_index(state, 0) == 0.0);  // ln 1 = 0
  CHECK(ucb_bound(0.5, 2, 2.0) == doctest::Approx(0.5 + std::sqrt(2.0)).epsilon(1e-15));
  CHECK(ucb_bound(0.5, 2, 2.0) == doctest::Approx(1.9142).epsilon(1e-4));
}

TEST_CASE("ucb_select tie-breaks by lowest index") {
  UcbState fresh(4);
  for (int i = 0; i < 10; ++i) CHECK(ucb_select(fresh) == 0);

  // indices [+inf, finite, +inf] -> arm 0
  UcbState state(3);
  ucb_update(state, 1, 0);
  CHECK(ucb_select(state) == 0);

  // indices ordered with arm 1 largest
  UcbState ordered(3);
  for (int i = 0; i < 10; ++i) ucb_update(ordered, 0, i < 2 ? 1 : 0);  // 0.2
  for (int i = 0; i < 10; ++i) ucb_update(ordered, 1, i < 9 ? 1 : 0);  // 0.9
  for (int i = 0; i < 10; ++i) ucb_update(ordered, 2, i < 5 ? 1 : 0);  // 0.5
  CHECK(ucb_select(ordered) == 1);
}

TEST_CASE("ucb_update running mean") {
  UcbState state(3);
  ucb_update(state, 2, 1);
  CHECK(state.stats.count(2) == 1);
  CHECK(state.stats.mean(2) == 1.0);
  ucb_update(state, 2, 0);
  CHECK(state.stats.count(2) == 2);
  CHECK(state.stats.mean(2) == 0.5);
  ucb_update(state, 2, 1);
  CHECK(state.stats.mean(2) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(ucb_update(state, 3, 1), std::out_of_range);
  CHECK_THROWS_AS(ucb_update(state, 0, 2), std::invalid_argument);
}

TEST_CASE("property: counts and means match a recomputation oracle") {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t arms = 2 + gen() % 6;
    UcbState state(arms);
    std::vector<std::vector<int>> seen(arms);
    const int updates = static_cast<int>(gen() % 300);
    for (int i = 0; i < updates; ++i) {
      const ArmId arm = gen() % arms;
      const Reward r = static_cast<Reward>(gen() % 2);
      const auto before = state.stats.count(arm);
      ucb_update(state, arm, r);
      REQUIRE(state.stats.count(arm) == before + 1);
      seen[arm].push_back(r);
    }
    std::uint64_t total = 0;
    for (ArmId a = 0; a < arms; ++a) {
      total += seen[a].size();
      REQUIRE(state.stats.count(a) == seen[a].size());
      if (!seen[a].empty()) {
        const double mean = std::accumulate(seen[a].begin(), seen[a].end(), 0.0) /
                            static_cast<double>(seen[a].size());
        REQUIRE(state.stats.mean(a) == mean);
      }
    }
    REQUIRE(state.stats.total() == total);
    // select is pure
    const ArmId first = ucb_select(state);
    REQUIRE(ucb_select(state) == first);
  }
}

TEST_CASE("property: ucb_index monotone in N and N_a") {
  for (double mean : {0.0, 0.3, 1.0}) {
    for (std::uint64_t n_arm = 1; n_arm < 20; ++n_arm) {
      for (std::uint64_t n = std::max<std::uint64_t>(n_arm, 1); n < 200; ++n) {
        CHECK(ucb_bound(mean, n_arm, std::log(double(n + 1))) >
              ucb_bound(mean, n_arm, std::log(double(n))));
        if (n >= 3) {
          CHECK(ucb_bound(mean, n_arm + 1, std::log(double(n))) <
                ucb_bound(mean, n_arm, std::log(double(n))));
        }
      }
    }
  }
}

TEST_CASE("ts_update conjugacy") {
  TsState state(2);
  ts_update(state, 0, 1);
  CHECK(state.stats.successes(0) + 1 == 2);
  CHECK(state.stats.failures(0) + 1 == 1);
  ts_update(state, 1, 0);
  CHECK(state.stats.successes(1) + 1 == 1);
  CHECK(state.stats.failures(1) + 1 == 2);
  TsState two(1);
  ts_update(two, 0, 1);
  ts_update(two, 0, 1);
  const double a = double(two.stats.successes(0) + 1), b = double(two.stats.failures(0) + 1);
  CHECK(a / (a + b) == 0.75);
  CHECK_THROWS_AS(ts_update(two, 0, -1), std::invalid_argument);
}

TEST_CASE("ts_select concentrated posteriors") {
  TsState state(2);
  for (int i = 0; i < 1000000; ++i) {
    state.stats.add(0, 1);
    state.stats.add(1, 0);
  }
  Engine rng(5);
  int zero = 0;
  for (int i = 0; i < 10000; ++i) zero += ts_select(state, rng) == 0;
  CHECK(zero / 1e4 > 0.999);
}

TEST_CASE("ts_select uniform under equal posteriors") {
  const std::size_t arms = 5;
  TsState state(arms);
  Engine rng(17);
  std::vector<double> counts(arms, 0.0);
  for (int i = 0; i < 10000; ++i) counts[ts_select(state, rng)] += 1.0;
  for (double c : counts) CHECK(std::abs(c / 1e4 - 0.2) < 0.02);
  const std::vector<double> expected(arms, 2000.0);
  CHECK(qrmab::testing::chi_square_p(counts, expected) > 0.001);

  TsState single(1);
  CHECK(ts_select(single, rng) == 0);
}

TEST_CASE("beta sampler matches analytic moments") {
  Engine rng(3);
  const double a = 3.0, b = 1.0;
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = sample_beta(a, b, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.75).epsilon(0.005));
  CHECK(var == doctest::Approx(a * b / ((a + b) * (a + b) * (a + b + 1))).epsilon(0.03));
}

TEST_CASE("learner dispatch") {
  Learner ucb(Algorithm::ucb, 3);
  Engine rng(1);
  CHECK(ucb.select(rng) == 0);
  ucb.update(0, 1);
  CHECK(ucb.select(rng) == 1);
  ArmStats stats(3);
  stats.add(2, 1);
  ucb.assign(stats);
  CHECK(ucb.stats() == stats);
  CHECK_THROWS_AS(ucb.assign(ArmStats(4)), std::invalid_argument);
  CHECK(parse_algorithm("ts") == Algorithm::ts);
  CHECK_THROWS(parse_algorithm("eps-greedy"));
}
