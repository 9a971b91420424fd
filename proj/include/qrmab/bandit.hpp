#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "qrmab/random.hpp"

namespace qrmab {

using ArmId = std::size_t;
using Reward = int;  // always 0 or 1

/// Stationary K-armed Bernoulli bandit. The means are fixed for the lifetime
/// of the object; rewards come from a private engine seeded at construction.
class BanditEnv {
 public:
  BanditEnv(std::vector<double> thetas, std::uint64_t seed);

  /// K means drawn i.i.d. from U(0,1) out of the seed's theta stream.
  static BanditEnv draw(std::size_t arms, std::uint64_t seed);

  Reward pull(ArmId arm);

  std::size_t arms() const noexcept { return thetas_.size(); }
  std::span<const double> thetas() const noexcept { return thetas_; }
  double theta(ArmId arm) const;
  double best_mean() const noexcept { return best_; }

 private:
  std::vector<double> thetas_;
  double best_ = 0.0;
  Engine rewards_;
};

/// Per-arm Bernoulli sufficient statistics: observation count and number of
/// unit rewards. Shared by UCB (mean = successes / count) and Thompson
/// Sampling (posterior Beta(successes + 1, count - successes + 1)).
class ArmStats {
 public:
  explicit ArmStats(std::size_t arms);

  void add(ArmId arm, Reward reward);
  void clear();

  std::size_t arms() const noexcept { return counts_.size(); }
  std::uint64_t count(ArmId arm) const { return counts_.at(arm); }
  std::uint64_t successes(ArmId arm) const { return successes_.at(arm); }
  std::uint64_t failures(ArmId arm) const { return count(arm) - successes(arm); }
  std::uint64_t total() const noexcept { return total_; }
  double mean(ArmId arm) const;

  bool operator==(const ArmStats&) const = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> successes_;
  std::uint64_t total_ = 0;
};

struct UcbState {
  ArmStats stats;
  explicit UcbState(std::size_t arms) : stats(arms) {}
  bool operator==(const UcbState&) const = default;
};

struct TsState {
  ArmStats stats;
  explicit TsState(std::size_t arms) : stats(arms) {}
  bool operator==(const TsState&) const = default;
};

/// mean + sqrt(2 * log_total / arm_count). `log_total` is ln N.
double ucb_bound(double mean, std::uint64_t arm_count, double log_total);

/// Upper confidence index of `arm`; +inf while the arm is unobserved.
double ucb_index(const UcbState& state, ArmId arm);

/// Arm with the largest index, lowest id on ties.
ArmId ucb_select(const UcbState& state);

void ucb_update(UcbState& state, ArmId arm, Reward reward);

/// One posterior sample per arm, returns the argmax (lowest id on ties).
ArmId ts_select(const TsState& state, Engine& rng);

void ts_update(TsState& state, ArmId arm, Reward reward);

/// Draw from Beta(a, b) as X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
double sample_beta(double a, double b, Engine& rng);

enum class Algorithm { ucb, ts };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);

/// The BASE decision rule driven by the controllers.
class Learner {
 public:
  Learner(Algorithm algorithm, std::size_t arms);

  /// `rng` is only consumed by Thompson Sampling.
  ArmId select(Engine& rng) const;
  void update(ArmId arm, Reward reward);

  /// Replace the sufficient statistics wholesale.
  void assign(const ArmStats& stats);

  Algorithm algorithm() const noexcept { return algorithm_; }
  const ArmStats& stats() const noexcept;

 private:
  Algorithm algorithm_;
  std::variant<UcbState, TsState> state_;
};

}  // namespace qrmab
