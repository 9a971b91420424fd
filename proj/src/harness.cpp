#include "qrmab/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace qrmab {

namespace {

struct Job {
  std::size_t point = 0;  // index into the grid, or a reference batch
  RunDescriptor descriptor;
  bool keep_trace = false;
};

struct JobResult {
  RunOutcome outcome;
  std::vector<TraceSample> samples;
  double seconds = 0.0;
};

constexpr std::size_t kRandomBatch = static_cast<std::size_t>(-1);
constexpr std::size_t kFullBatch = static_cast<std::size_t>(-2);

JobResult execute(const ExperimentConfig& config, const Job& job) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = job.descriptor.seed;
  BanditEnv env = config.thetas.empty() ? BanditEnv::draw(config.arms, seed)
                                        : BanditEnv(config.thetas, seed);
  const RunTrace trace = run_controller(std::move(env), job.descriptor);
  JobResult result;
  result.outcome = outcome_of(trace);
  if (job.keep_trace) {
    const auto regret = pseudo_regret(trace);
    std::uint64_t reward = 0;
    std::uint64_t next = 0;
    const auto slots = thinned_slots(config.horizon, config.trace_thinning);
    for (std::size_t i = 0; i < trace.records.size() && next < slots.size(); ++i) {
      reward += static_cast<std::uint64_t>(trace.records[i].reward);
      if (trace.records[i].t == slots[next]) {
        result.samples.push_back({job.point, 0, slots[next], regret[i], reward});
        ++next;
      }
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// Runs fn(i) for i in [0, count) on `workers` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::uint64_t GridPoint::key() const noexcept {
  std::uint64_t h = mix64(std::bit_cast<std::uint64_t>(lambda));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(mu));
  h = mix64(h ^ std::bit_cast<std::uint64_t>(alpha));
  return mix64(h ^ std::bit_cast<std::uint64_t>(bias_fraction));
}

std::uint64_t derive_substream(std::uint64_t master_seed, const RunId& id) {
  std::uint64_t h = mix64(master_seed ^ 0x5155524D41424D53ULL);
  h = mix64(h ^ id.config_hash);
  h = mix64(h ^ id.point_key);
  return mix64(h ^ id.replication);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& config) {
  std::vector<GridPoint> grid;
  for (double lambda : config.lambda)
    for (double mu : config.mu)
      for (double alpha : config.alpha)
        for (double bias : config.bias_fraction) grid.push_back({lambda, mu, alpha, bias});
  return grid;
}

RunDescriptor make_descriptor(const ExperimentConfig& config, const GridPoint& point,
                              std::uint64_t seed) {
  RunDescriptor d;
  d.controller = config.controller;
  d.algorithm = config.algorithm;
  d.horizon = config.horizon;
  d.seed = seed;
  d.ufq_source = config.ufq_source;
  d.replay_mode = config.replay_mode;
  d.lambda = point.lambda;
  d.mu = point.mu;
  d.policy = config.policy == SamplingKind::delta_uniform
                 ? SamplingPolicy::delta_uniform(point.alpha, point.bias_fraction)
                 : SamplingPolicy{config.policy, 0.0, 0.0};
  if (config.controller == Controller::full_feedback) {
    d.lambda = d.mu = 1.0;
    d.policy = SamplingPolicy::fifo();
  } else if (config.controller == Controller::random) {
    d.lambda = d.mu = 0.0;
    d.policy = SamplingPolicy::fifo();
  }
  return d;
}

std::vector<std::uint64_t> thinned_slots(std::uint64_t horizon, std::uint64_t thinning) {
  std::vector<std::uint64_t> slots;
  for (std::uint64_t t = thinning; t <= horizon; t += thinning) slots.push_back(t);
  if (slots.empty() || slots.back() != horizon) slots.push_back(horizon);
  return slots;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  ExperimentResult result;
  result.config = config;
  result.hash = config_hash(config);
  result.grid = expand_grid(config);

  std::vector<Job> jobs;
  jobs.reserve((result.grid.size() + 2) * config.replications);
  for (std::size_t p = 0; p < result.grid.size(); ++p) {
    const GridPoint& point = result.grid[p];
    for (std::uint64_t rep = 0; rep < config.replications; ++rep) {
      const auto seed = derive_substream(config.seed, {result.hash, point.key(), rep});
      jobs.push_back({p, make_descriptor(config, point, seed), config.write_traces});
    }
  }
  if (config.references) {
    for (const auto& [batch, controller] :
         {std::pair{kRandomBatch, Controller::random},
          std::pair{kFullBatch, Controller::full_feedback}}) {
      ExperimentConfig reference = config;
      reference.controller = controller;
      reference.policy = SamplingKind::fifo;
      const std::uint64_t hash = config_hash(reference);
      const GridPoint point{};
      for (std::uint64_t rep = 0; rep < config.replications; ++rep) {
        const auto seed = derive_substream(config.seed, {hash, point.key(), rep});
        jobs.push_back({batch, make_descriptor(reference, point, seed), false});
      }
    }
  }

  std::vector<JobResult> done(jobs.size());
  const std::size_t workers =
      config.workers == 0 ? std::max(1U, std::thread::hardware_concurrency()) : config.workers;
  parallel_for(jobs.size(), workers, [&](std::size_t i) { done[i] = execute(config, jobs[i]); });

  // Ordered reduction: job order is (point, replication), references last.
  result.outcomes.assign(result.grid.size(), {});
  std::vector<double> seconds(result.grid.size(), 0.0);
  std::vector<RunOutcome> random_runs;
  std::vector<RunOutcome> full_runs;
  std::vector<std::uint64_t> rep_counter(result.grid.size(), 0);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::size_t p = jobs[i].point;
    if (p == kRandomBatch) {
      random_runs.push_back(done[i].outcome);
    } else if (p == kFullBatch) {
      full_runs.push_back(done[i].outcome);
    } else {
      const std::uint64_t rep = rep_counter[p]++;
      for (TraceSample sample : done[i].samples) {
        sample.replication = rep;
        result.traces.push_back(sample);
      }
      result.outcomes[p].push_back(done[i].outcome);
      seconds[p] += done[i].seconds;
    }
  }
  if (config.references) {
    result.references = make_references(random_runs, full_runs, config.energy);
  }
  for (std::size_t p = 0; p < result.grid.size(); ++p) {
    std::optional<ReferencePoints> refs = result.references;
    if (refs && (refs->reward_max == refs->reward_min || refs->energy_max == refs->energy_min)) {
      refs.reset();
    }
    SummaryRow row = summarize(result.outcomes[p], config.energy, refs);
    if (config.record_wallclock) row.wallclock_s = seconds[p];
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace qrmab
