#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qrmab/config.hpp"
#include "qrmab/metrics.hpp"

namespace qrmab {

/// Parameters of one grid point.
struct GridPoint {
  double lambda = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double bias_fraction = 0.0;

  /// Key derived from the values alone, so it does not depend on where the
  /// point sits in the sweep.
  std::uint64_t key() const noexcept;
};

/// Identifies one replication of one grid point of one experiment.
struct RunId {
  std::uint64_t config_hash = 0;
  std::uint64_t point_key = 0;
  std::uint64_t replication = 0;

  bool operator==(const RunId&) const = default;
};

/// Seed of the run's random streams. Depends only on its arguments, never on
/// scheduling. For a fixed (master_seed, config_hash, point_key) it is a
/// bijection of the replication index.
std::uint64_t derive_substream(std::uint64_t master_seed, const RunId& id);

/// Grid points in sweep order (lambda outermost, bias_fraction innermost).
std::vector<GridPoint> expand_grid(const ExperimentConfig& config);

/// Descriptor of the run at `point` for `seed`.
RunDescriptor make_descriptor(const ExperimentConfig& config, const GridPoint& point,
                              std::uint64_t seed);

struct TraceSample {
  std::size_t point = 0;
  std::uint64_t replication = 0;
  std::uint64_t t = 0;
  double regret = 0.0;
  std::uint64_t reward = 0;  // cumulative realized reward up to t
};

/// Slots at which a thinned trajectory is sampled: every `thinning` slots and
/// the final slot.
std::vector<std::uint64_t> thinned_slots(std::uint64_t horizon, std::uint64_t thinning);

struct ExperimentResult {
  ExperimentConfig config;
  std::uint64_t hash = 0;
  std::vector<GridPoint> grid;
  std::vector<SummaryRow> rows;                  // one per grid point
  std::vector<std::vector<RunOutcome>> outcomes;  // [point][replication]
  std::optional<ReferencePoints> references;
  std::vector<TraceSample> traces;  // empty unless write_traces
};

/// Runs every (grid point x replication) plus, when enabled, the random and
/// full-feedback reference batches. Results are identical for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

void write_summary_csv(const ExperimentResult& result, std::ostream& out);
void write_trace_csv(const ExperimentResult& result, std::ostream& out);

/// Writes summary.csv (and traces.csv) under `directory`, creating it.
/// Returns the paths written.
std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& directory);

}  // namespace qrmab
