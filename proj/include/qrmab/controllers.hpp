#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qrmab/bandit.hpp"
#include "qrmab/energy.hpp"
#include "qrmab/queue.hpp"

namespace qrmab {

enum class Controller { qr_mab, base_ufq, base_ufrb, random, full_feedback };

std::string_view to_string(Controller controller);
Controller parse_controller(std::string_view text);

/// Which arm queue BASE-UpdateFrom-Queue pops when updating.
enum class UfqSource {
  played,  // only the arm played this slot
  any,     // the played arm, else the lowest-id nonempty arm queue
};

/// How BASE-UpdateFrom-ReplayBuffer turns retained packets into updates.
enum class ReplayMode {
  resample,   // each slot, one packet drawn uniformly from the played arm's buffer
  aggregate,  // each slot, statistics recomputed from every retained packet
};

std::string_view to_string(UfqSource source);
UfqSource parse_ufq_source(std::string_view text);
std::string_view to_string(ReplayMode mode);
ReplayMode parse_replay_mode(std::string_view text);

/// Everything that happened in one slot.
struct SlotRecord {
  std::uint64_t t = 0;
  ArmId arm = 0;
  double theta = 0.0;
  Reward reward = 0;
  bool admitted = false;
  std::optional<Packet> served;  // packet removed from the network queue
  std::uint32_t arm_queue_appends = 0;
  std::uint32_t arm_queue_pops = 0;
  std::uint32_t learner_writes = 0;
  std::uint64_t packets_read = 0;
  std::uint64_t queue_length_after = 0;
  std::uint64_t agent_storage_after = 0;
  EnergyCounters counters;  // increment during this slot

  bool operator==(const SlotRecord&) const = default;
};

/// Identity of a single controller run.
struct RunDescriptor {
  Controller controller = Controller::qr_mab;
  Algorithm algorithm = Algorithm::ucb;
  SamplingPolicy policy;  // network-queue policy (baselines: FIFO or LIFO)
  double lambda = 1.0;
  double mu = 1.0;
  std::uint64_t horizon = 1;
  std::uint64_t seed = 0;
  UfqSource ufq_source = UfqSource::played;
  ReplayMode replay_mode = ReplayMode::resample;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct RunTrace {
  RunDescriptor descriptor;
  std::vector<double> thetas;
  std::vector<SlotRecord> records;
  ArmStats final_stats{0};
  EnergyCounters counters;
  std::uint64_t observations = 0;  // packets served from the network queue
  std::uint64_t total_reward = 0;
};

RunTrace run_qr_mab(BanditEnv env, Algorithm algorithm, const SamplingPolicy& policy,
                    double lambda, double mu, std::uint64_t horizon, std::uint64_t seed);

RunTrace run_base_update_from_queue(BanditEnv env, Algorithm algorithm, SamplingKind net_policy,
                                    double lambda, double mu, std::uint64_t horizon,
                                    std::uint64_t seed, UfqSource source = UfqSource::played);

RunTrace run_base_update_from_replay_buffer(BanditEnv env, Algorithm algorithm,
                                            SamplingKind net_policy, double lambda, double mu,
                                            std::uint64_t horizon, std::uint64_t seed,
                                            ReplayMode mode = ReplayMode::resample);

RunTrace run_random(BanditEnv env, std::uint64_t horizon, std::uint64_t seed);

/// QR-MAB with lambda = mu = 1 and FIFO sampling.
RunTrace run_full_feedback(BanditEnv env, Algorithm algorithm, std::uint64_t horizon,
                           std::uint64_t seed);

/// Dispatch on `descriptor.controller`.
RunTrace run_controller(BanditEnv env, const RunDescriptor& descriptor);

}  // namespace qrmab
