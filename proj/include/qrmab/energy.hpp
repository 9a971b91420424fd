#pragma once

#include <cstdint>

namespace qrmab {

/// Abstract work counters used as a hardware-independent energy proxy.
struct EnergyCounters {
  std::uint64_t alg_updates = 0;       // sufficient-statistic writes
  std::uint64_t packet_touches = 0;    // packets read by updates or recomputes
  std::uint64_t queue_ops = 0;         // admissions and removals, network and agent side
  std::uint64_t storage_integral = 0;  // packet-slots held agent-side

  EnergyCounters& operator+=(const EnergyCounters& other) noexcept {
    alg_updates += other.alg_updates;
    packet_touches += other.packet_touches;
    queue_ops += other.queue_ops;
    storage_integral += other.storage_integral;
    return *this;
  }

  bool operator==(const EnergyCounters&) const = default;
};

/// Linear energy model over the counters.
struct EnergyModel {
  double w_update = 1.0;
  double w_touch = 1.0;
  double w_queue = 0.1;
  double w_storage = 0.01;

  double energy(const EnergyCounters& c) const noexcept {
    return w_update * static_cast<double>(c.alg_updates) +
           w_touch * static_cast<double>(c.packet_touches) +
           w_queue * static_cast<double>(c.queue_ops) +
           w_storage * static_cast<double>(c.storage_integral);
  }

  /// Throws std::invalid_argument on a negative weight.
  void validate() const;
};

}  // namespace qrmab
