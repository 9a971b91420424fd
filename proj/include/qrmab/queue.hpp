#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrmab/bandit.hpp"
#include "qrmab/random.hpp"

namespace qrmab {

/// One feedback unit sent back by the actuator.
struct Packet {
  ArmId arm = 0;
  Reward reward = 0;
  std::uint64_t birth_slot = 0;

  bool operator==(const Packet&) const = default;
};

enum class SamplingKind { fifo, lifo, uniform, delta_uniform };

std::string_view to_string(SamplingKind kind);
SamplingKind parse_sampling_kind(std::string_view text);

/// Rule picking which queued packet is observed at a service opportunity.
/// Positions are 1-based, position 1 being the oldest packet.
///
/// The stochastic biased rule picks position c = clamp(round(bias_fraction * L), 1, L)
/// with probability alpha and a uniformly random occupied position otherwise.
/// FIFO, LIFO and UNIFORM are the (alpha, bias_fraction) corners (1, 0), (1, 1)
/// and (0, *) of that mixture and are drawn through the same code path.
struct SamplingPolicy {
  SamplingKind kind = SamplingKind::fifo;
  double alpha = 0.0;
  double bias_fraction = 0.0;

  static SamplingPolicy fifo() { return {SamplingKind::fifo, 0.0, 0.0}; }
  static SamplingPolicy lifo() { return {SamplingKind::lifo, 0.0, 0.0}; }
  static SamplingPolicy uniform() { return {SamplingKind::uniform, 0.0, 0.0}; }
  static SamplingPolicy delta_uniform(double alpha, double bias_fraction);

  /// Throws std::invalid_argument if alpha or bias_fraction is outside [0, 1].
  void validate() const;
  std::string label() const;
};

/// Dirac position c for a queue of length `length` >= 1.
std::size_t dirac_position(const SamplingPolicy& policy, std::size_t length);

/// Probability of each position 1..L (index 0 holds position 1).
std::vector<double> sampling_pmf(const SamplingPolicy& policy, std::size_t length);

/// Draw a 1-based position. Always consumes one mixture coin and one uniform
/// position draw from `rng`, whatever the policy kind.
std::size_t sample_position(const SamplingPolicy& policy, std::size_t length, Engine& rng);

/// Discrete-time single-server queue with Bernoulli admissions (lambda) and
/// Bernoulli service opportunities (mu). Unbounded, kept in arrival order.
class GeoGeoQueue {
 public:
  GeoGeoQueue(double lambda, double mu);

  /// Appends the packet with probability lambda.
  bool admit(const Packet& packet, Engine& admission_rng);

  /// With probability mu a service opportunity occurs; on a nonempty queue the
  /// packet at a position drawn from `policy` is removed and returned. An
  /// opportunity on an empty queue is consumed without effect.
  std::optional<Packet> try_serve(const SamplingPolicy& policy, Engine& service_rng,
                                  Engine& sampling_rng);

  /// Removes and returns the packet at 1-based `position`.
  Packet remove_at(std::size_t position);

  std::size_t length() const noexcept { return buffer_.size(); }
  bool empty() const noexcept { return buffer_.empty(); }
  const std::vector<Packet>& buffer() const noexcept { return buffer_; }
  double lambda() const noexcept { return lambda_; }
  double mu() const noexcept { return mu_; }

  std::uint64_t admitted() const noexcept { return admitted_; }
  std::uint64_t served() const noexcept { return served_; }

 private:
  std::vector<Packet> buffer_;
  double lambda_;
  double mu_;
  std::uint64_t admitted_ = 0;
  std::uint64_t served_ = 0;
};

inline std::size_t queue_length(const GeoGeoQueue& queue) noexcept { return queue.length(); }

}  // namespace qrmab
