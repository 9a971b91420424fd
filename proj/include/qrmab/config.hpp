#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qrmab/bandit.hpp"
#include "qrmab/controllers.hpp"
#include "qrmab/energy.hpp"
#include "qrmab/queue.hpp"

namespace qrmab {

/// Configuration problem tied to one key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// One experiment: a controller swept over the cartesian product of the
/// lambda, mu, alpha and bias_fraction lists, `replications` runs per point.
struct ExperimentConfig {
  std::size_t arms = 5;
  std::uint64_t horizon = 5000;
  std::uint64_t replications = 1000;
  Algorithm algorithm = Algorithm::ucb;
  Controller controller = Controller::qr_mab;
  SamplingKind policy = SamplingKind::fifo;
  std::vector<double> lambda{0.6};
  std::vector<double> mu{0.3};
  std::vector<double> alpha{0.5};
  std::vector<double> bias_fraction{1.0};
  UfqSource ufq_source = UfqSource::played;
  ReplayMode replay_mode = ReplayMode::resample;
  std::vector<double> thetas;  // empty: fresh U(0,1) means every replication
  EnergyModel energy;
  std::uint64_t seed = 1;
  std::string output_dir = "results";
  std::uint64_t trace_thinning = 50;
  bool write_traces = false;
  bool references = true;
  std::uint64_t workers = 0;  // 0: one per hardware thread
  bool record_wallclock = false;
};

/// Every recognised key, in canonical order.
const std::vector<std::string>& config_keys();

/// Sets one key from its textual value. Lists are comma separated; a list
/// entry may be a range `start:stop:step` (inclusive). Throws ConfigError.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError naming the first offending key.
void validate(const ExperimentConfig& config);

/// Canonical `key = value` rendering of every key.
std::string to_config_text(const ExperimentConfig& config);

/// Stable 64-bit FNV-1a hash of the keys that shape individual runs (not the
/// grid, seed, replication count, weights or output settings).
std::uint64_t config_hash(const ExperimentConfig& config);

std::string hex64(std::uint64_t value);

}  // namespace qrmab
