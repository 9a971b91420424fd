#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrmab/controllers.hpp"
#include "qrmab/energy.hpp"

namespace qrmab {

/// Cumulative pseudo-regret after each slot: t * theta_star - sum of played means.
/// Built from the non-negative per-slot gaps, so it never decreases.
std::vector<double> pseudo_regret(std::span<const SlotRecord> records,
                                  std::span<const double> thetas);
std::vector<double> pseudo_regret(const RunTrace& trace);

/// min(lambda, mu) * T, the expected number of served packets.
double expected_observations(double lambda, double mu, std::uint64_t horizon);

/// Reward loss indicator. Not clamped; throws std::domain_error when
/// reward_max == reward_min.
double rli(double reward, double reward_min, double reward_max);

/// Energy saving indicator. Not clamped; throws std::domain_error when
/// energy_max == energy_min.
double esi(double energy, double energy_min, double energy_max);

/// Scalar results of one run, all that aggregation needs.
struct RunOutcome {
  RunDescriptor descriptor;
  double total_reward = 0.0;
  double final_regret = 0.0;
  double observations = 0.0;
  EnergyCounters counters;
};

RunOutcome outcome_of(const RunTrace& trace);

/// Random-play (min) and full-feedback (max) reward and energy means.
struct ReferencePoints {
  double reward_min = 0.0;
  double reward_max = 0.0;
  double energy_min = 0.0;
  double energy_max = 0.0;
};

ReferencePoints make_references(std::span<const RunOutcome> random_runs,
                                 std::span<const RunOutcome> full_feedback_runs,
                                 const EnergyModel& model);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

struct SummaryRow {
  std::string policy;
  Controller controller = Controller::qr_mab;
  Algorithm algorithm = Algorithm::ucb;
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double bias_fraction = 0.0;
  std::uint64_t horizon = 0;
  std::uint64_t reps = 0;
  MeanStd reward;
  MeanStd regret;
  MeanStd observations;
  MeanStd energy;
  std::optional<double> rli;
  std::optional<double> esi;
  double alg_updates_mean = 0.0;
  double packet_touches_mean = 0.0;
  double queue_ops_mean = 0.0;
  double storage_integral_mean = 0.0;
  std::optional<double> wallclock_s;
};

/// Label used in the `policy` column, e.g. "qr-mab/lifo" or "base-ufrb/lifo".
std::string policy_label(const RunDescriptor& descriptor);

/// Aggregates runs of one configuration (only the seed may differ).
/// Throws std::invalid_argument on an empty or mixed set.
SummaryRow summarize(std::span<const RunOutcome> runs, const EnergyModel& model,
                     const std::optional<ReferencePoints>& references = std::nullopt);
SummaryRow summarize(std::span<const RunTrace> traces, const EnergyModel& model,
                     const std::optional<ReferencePoints>& references = std::nullopt);

}  // namespace qrmab
