#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qrmab/queue.hpp"

using namespace qrmab;

namespace {

Packet packet(std::uint64_t id) { return {static_cast<ArmId>(id % 3), 1, id}; }

GeoGeoQueue filled(std::size_t n, double mu = 1.0) {
  GeoGeoQueue queue(1.0, mu);
  Engine rng(0);
  for (std::uint64_t i = 1; i <= n; ++i) queue.admit(packet(i), rng);
  return queue;
}

}  // namespace

TEST_CASE("admit extremes and Monte Carlo rate") {
  Engine rng(1);
  GeoGeoQueue always(1.0, 0.0);
  GeoGeoQueue never(0.0, 0.0);
  for (std::uint64_t i = 0; i < 100; ++i) {
    CHECK(always.admit(packet(i), rng));
    CHECK_FALSE(never.admit(packet(i), rng));
  }
  CHECK(always.length() == 100);
  CHECK(never.length() == 0);

  GeoGeoQueue half(0.5, 0.0);
  int admitted = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) admitted += half.admit(packet(i), rng);
  CHECK(std::abs(admitted / 1e5 - 0.5) < 0.01);
  CHECK_THROWS_AS(GeoGeoQueue(1.3, 0.5), std::invalid_argument);
}

TEST_CASE("sampling_pmf examples") {
  CHECK(sampling_pmf(SamplingPolicy::fifo(), 5) == std::vector<double>{1, 0, 0, 0, 0});
  CHECK(sampling_pmf(SamplingPolicy::lifo(), 3) == std::vector<double>{0, 0, 1});

  const auto biased = sampling_pmf(SamplingPolicy::delta_uniform(0.5, 1.0), 10);
  for (int i = 0; i < 9; ++i) CHECK(biased[i] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(biased[9] == doctest::Approx(0.55).epsilon(1e-12));

  CHECK(sampling_pmf(SamplingPolicy::delta_uniform(0.0, 0.37), 4) ==
        std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK(sampling_pmf(SamplingPolicy::uniform(), 4) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  CHECK_THROWS_AS(sampling_pmf(SamplingPolicy::fifo(), 0), std::invalid_argument);
  CHECK_THROWS_AS(SamplingPolicy::delta_uniform(1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SamplingPolicy::delta_uniform(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("dirac position rounds half up and clamps") {
  CHECK(dirac_position(SamplingPolicy::delta_uniform(1, 0.0), 7) == 1);
  CHECK(dirac_position(SamplingPolicy::delta_uniform(1, 1.0), 7) == 7);
  CHECK(dirac_position(SamplingPolicy::delta_uniform(1, 0.5), 5) == 3);  // 2.5 -> 3
  CHECK(dirac_position(SamplingPolicy::delta_uniform(1, 0.5), 4) == 2);
  CHECK(dirac_position(SamplingPolicy::delta_uniform(1, 0.1), 3) == 1);  // 0.3 -> 0 -> 1
}

TEST_CASE("property: pmf sums to one for every policy and length") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<SamplingPolicy> policies{SamplingPolicy::fifo(), SamplingPolicy::lifo(),
                                       SamplingPolicy::uniform()};
  for (int i = 0; i < 6; ++i) policies.push_back(SamplingPolicy::delta_uniform(unit(gen), unit(gen)));
  policies.push_back(SamplingPolicy::delta_uniform(1.0, 1.0));
  policies.push_back(SamplingPolicy::delta_uniform(0.0, 0.0));
  for (const auto& policy : policies) {
    for (std::size_t length = 1; length <= 10000; length += (length < 100 ? 1 : 97)) {
      const auto pmf = sampling_pmf(policy, length);
      const double sum = std::accumulate(pmf.begin(), pmf.end(), 0.0);
      REQUIRE(std::abs(sum - 1.0) < 1e-12);
    }
    const auto pmf = sampling_pmf(policy, 10000);
    REQUIRE(std::abs(std::accumulate(pmf.begin(), pmf.end(), 0.0) - 1.0) < 1e-12);
  }
}

TEST_CASE("try_serve examples") {
  Engine service(2), sampling(3);
  auto lifo = filled(3);
  const auto top = lifo.try_serve(SamplingPolicy::lifo(), service, sampling);
  REQUIRE(top);
  CHECK(top->birth_slot == 3);
  CHECK(lifo.buffer() == std::vector<Packet>{packet(1), packet(2)});

  auto fifo = filled(3);
  const auto head = fifo.try_serve(SamplingPolicy::fifo(), service, sampling);
  REQUIRE(head);
  CHECK(head->birth_slot == 1);
  CHECK(fifo.buffer() == std::vector<Packet>{packet(2), packet(3)});

  auto closed = filled(3, 0.0);
  for (int i = 0; i < 100; ++i) CHECK_FALSE(closed.try_serve(SamplingPolicy::fifo(), service, sampling));
  CHECK(closed.length() == 3);

  GeoGeoQueue empty(1.0, 1.0);
  CHECK_FALSE(empty.try_serve(SamplingPolicy::uniform(), service, sampling));
}

TEST_CASE("removal from the middle shifts later positions down") {
  auto queue = filled(5);
  CHECK(queue.remove_at(3).birth_slot == 3);
  CHECK(queue.buffer() == std::vector<Packet>{packet(1), packet(2), packet(4), packet(5)});
  CHECK_THROWS_AS(queue.remove_at(0), std::out_of_range);
  CHECK_THROWS_AS(queue.remove_at(5), std::out_of_range);
}

TEST_CASE("queue_length examples") {
  GeoGeoQueue empty(0.5, 0.5);
  CHECK(queue_length(empty) == 0);
  auto queue = filled(3);
  queue.remove_at(1);
  CHECK(queue_length(queue) == 2);

  GeoGeoQueue growing(1.0, 0.0);
  Engine a(1), s(2), p(3);
  for (std::uint64_t t = 1; t <= 250; ++t) {
    growing.admit(packet(t), a);
    growing.try_serve(SamplingPolicy::fifo(), s, p);
  }
  CHECK(queue_length(growing) == 250);
}

TEST_CASE("property: conservation admitted = served + length every slot") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    GeoGeoQueue queue(unit(gen), unit(gen));
    const auto policy = SamplingPolicy::delta_uniform(unit(gen), unit(gen));
    Engine a(gen()), s(gen()), p(gen());
    for (std::uint64_t t = 1; t <= 2000; ++t) {
      queue.admit(packet(t), a);
      queue.try_serve(policy, s, p);
      REQUIRE(queue.admitted() == queue.served() + queue.length());
      if (!queue.empty()) REQUIRE(queue.buffer().back().birth_slot <= t);
    }
  }
}

TEST_CASE("property: delta-uniform corners reproduce FIFO, LIFO and UNIFORM exactly") {
  const std::pair<SamplingPolicy, SamplingPolicy> pairs[] = {
      {SamplingPolicy::delta_uniform(1.0, 1.0), SamplingPolicy::lifo()},
      {SamplingPolicy::delta_uniform(1.0, 0.0), SamplingPolicy::fifo()},
      {SamplingPolicy::delta_uniform(0.0, 0.0), SamplingPolicy::uniform()},
      {SamplingPolicy::delta_uniform(0.0, 0.8), SamplingPolicy::uniform()},
  };
  for (const auto& [biased, reference] : pairs) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      GeoGeoQueue q1(0.7, 0.4), q2(0.7, 0.4);
      Engine a1(seed), s1(seed + 100), p1(seed + 200);
      Engine a2(seed), s2(seed + 100), p2(seed + 200);
      for (std::uint64_t t = 1; t <= 3000; ++t) {
        q1.admit(packet(t), a1);
        q2.admit(packet(t), a2);
        REQUIRE(q1.try_serve(biased, s1, p1) == q2.try_serve(reference, s2, p2));
      }
    }
  }
}

TEST_CASE("service draw frequencies match the pmf") {
  const std::size_t length = 10;
  for (const auto& policy : {SamplingPolicy::delta_uniform(0.5, 1.0),
                             SamplingPolicy::delta_uniform(0.3, 0.45), SamplingPolicy::uniform(),
                             SamplingPolicy::lifo()}) {
    Engine rng(31);
    std::vector<double> freq(length, 0.0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) freq[sample_position(policy, length, rng) - 1] += 1.0 / draws;
    const auto pmf = sampling_pmf(policy, length);
    for (std::size_t i = 0; i < length; ++i) CHECK(std::abs(freq[i] - pmf[i]) < 0.01);
  }
}

// Independent oracle for the stable regime: with admission before service, the
// end-of-slot length is a birth-death chain with up-rate lambda(1-mu) and
// down-rate mu(1-lambda), whose stationary mean is lambda(1-mu)/(mu-lambda).
TEST_CASE("stability statistics") {
  const std::uint64_t horizon = 100000;
  SUBCASE("lambda < mu: bounded time-average length") {
    for (auto [lambda, mu] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.7}, std::pair{0.1, 0.9}}) {
      GeoGeoQueue queue(lambda, mu);
      Engine a(1), s(2), p(3);
      double area = 0.0;
      for (std::uint64_t t = 1; t <= horizon; ++t) {
        queue.admit(packet(t), a);
        queue.try_serve(SamplingPolicy::uniform(), s, p);
        area += static_cast<double>(queue.length());
      }
      const double mean = area / horizon;
      CHECK(mean < 3.0 * lambda * (1.0 - lambda) / (mu - lambda));
      CHECK(mean == doctest::Approx(lambda * (1.0 - mu) / (mu - lambda)).epsilon(0.15));
    }
  }
  SUBCASE("lambda > mu: linear growth at lambda - mu") {
    for (auto [lambda, mu] : {std::pair{0.6, 0.3}, std::pair{0.9, 0.8}, std::pair{0.8, 0.6}}) {
      GeoGeoQueue queue(lambda, mu);
      Engine a(4), s(5), p(6);
      for (std::uint64_t t = 1; t <= horizon; ++t) {
        queue.admit(packet(t), a);
        queue.try_serve(SamplingPolicy::fifo(), s, p);
      }
      CHECK(std::abs(static_cast<double>(queue.length()) / horizon - (lambda - mu)) < 0.02);
    }
  }
}

TEST_CASE("policy names round-trip") {
  for (auto kind : {SamplingKind::fifo, SamplingKind::lifo, SamplingKind::uniform,
                    SamplingKind::delta_uniform}) {
    CHECK(parse_sampling_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS(parse_sampling_kind("aoi"));
  CHECK(SamplingPolicy::delta_uniform(0.5, 1).label() == "delta-uniform(alpha=0.5;bias=1)");
}
