#include "qrmab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrmab {

namespace {

bool same_config(const RunDescriptor& a, const RunDescriptor& b) {
  return a.controller == b.controller && a.algorithm == b.algorithm &&
         a.policy.kind == b.policy.kind && a.policy.alpha == b.policy.alpha &&
         a.policy.bias_fraction == b.policy.bias_fraction && a.lambda == b.lambda &&
         a.mu == b.mu && a.horizon == b.horizon && a.ufq_source == b.ufq_source &&
         a.replay_mode == b.replay_mode;
}

double normalized_gap(double value, double low, double high, const char* what) {
  if (high == low) {
    throw std::domain_error(std::string(what) + " references are degenerate (max == min)");
  }
  return 1.0 - (value - low) / (high - low);
}

}  // namespace

std::vector<double> pseudo_regret(std::span<const SlotRecord> records,
                                  std::span<const double> thetas) {
  if (thetas.empty()) {
    throw std::invalid_argument("pseudo_regret needs arm means");
  }
  const double best = *std::max_element(thetas.begin(), thetas.end());
  std::vector<double> regret;
  regret.reserve(records.size());
  double total = 0.0;
  for (const SlotRecord& record : records) {
    if (record.arm >= thetas.size()) {
      throw std::out_of_range("trace plays arm " + std::to_string(record.arm) +
                              " with only " + std::to_string(thetas.size()) + " means");
    }
    total += best - thetas[record.arm];
    regret.push_back(total);
  }
  return regret;
}

std::vector<double> pseudo_regret(const RunTrace& trace) {
  return pseudo_regret(trace.records, trace.thetas);
}

double expected_observations(double lambda, double mu, std::uint64_t horizon) {
  return std::min(lambda, mu) * static_cast<double>(horizon);
}

double rli(double reward, double reward_min, double reward_max) {
  return normalized_gap(reward, reward_min, reward_max, "reward");
}

double esi(double energy, double energy_min, double energy_max) {
  return normalized_gap(energy, energy_min, energy_max, "energy");
}

RunOutcome outcome_of(const RunTrace& trace) {
  RunOutcome outcome;
  outcome.descriptor = trace.descriptor;
  outcome.total_reward = static_cast<double>(trace.total_reward);
  const auto regret = pseudo_regret(trace);
  outcome.final_regret = regret.empty() ? 0.0 : regret.back();
  outcome.observations = static_cast<double>(trace.observations);
  outcome.counters = trace.counters;
  return outcome;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd result;
  if (values.empty()) return result;
  double sum = 0.0;
  for (double v : values) sum += v;
  result.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double squares = 0.0;
    for (double v : values) squares += (v - result.mean) * (v - result.mean);
    result.std = std::sqrt(squares / static_cast<double>(values.size() - 1));
  }
  return result;
}

ReferencePoints make_references(std::span<const RunOutcome> random_runs,
                                std::span<const RunOutcome> full_feedback_runs,
                                const EnergyModel& model) {
  if (random_runs.empty() || full_feedback_runs.empty()) {
    throw std::invalid_argument("references need random and full-feedback runs");
  }
  const SummaryRow low = summarize(random_runs, model);
  const SummaryRow high = summarize(full_feedback_runs, model);
  return {low.reward.mean, high.reward.mean, low.energy.mean, high.energy.mean};
}

std::string policy_label(const RunDescriptor& d) {
  switch (d.controller) {
    case Controller::random:
    case Controller::full_feedback:
      return std::string(to_string(d.controller));
    case Controller::base_ufrb:
      if (d.replay_mode == ReplayMode::aggregate) {
        return "base-ufrb-aggregate/" + d.policy.label();
      }
      [[fallthrough]];
    default:
      return std::string(to_string(d.controller)) + "/" + d.policy.label();
  }
}

SummaryRow summarize(std::span<const RunOutcome> runs, const EnergyModel& model,
                     const std::optional<ReferencePoints>& references) {
  if (runs.empty()) {
    throw std::invalid_argument("summarize needs at least one run");
  }
  const RunDescriptor& head = runs.front().descriptor;
  for (const RunOutcome& run : runs) {
    if (!same_config(run.descriptor, head)) {
      throw std::invalid_argument("summarize got runs from different configurations");
    }
  }

  const std::size_t n = runs.size();
  std::vector<double> rewards(n), regrets(n), observations(n), energies(n);
  SummaryRow row;
  for (std::size_t i = 0; i < n; ++i) {
    rewards[i] = runs[i].total_reward;
    regrets[i] = runs[i].final_regret;
    observations[i] = runs[i].observations;
    energies[i] = model.energy(runs[i].counters);
    row.alg_updates_mean += static_cast<double>(runs[i].counters.alg_updates);
    row.packet_touches_mean += static_cast<double>(runs[i].counters.packet_touches);
    row.queue_ops_mean += static_cast<double>(runs[i].counters.queue_ops);
    row.storage_integral_mean += static_cast<double>(runs[i].counters.storage_integral);
  }
  const double count = static_cast<double>(n);
  row.alg_updates_mean /= count;
  row.packet_touches_mean /= count;
  row.queue_ops_mean /= count;
  row.storage_integral_mean /= count;

  row.policy = policy_label(head);
  row.controller = head.controller;
  row.algorithm = head.algorithm;
  row.lambda = head.lambda;
  row.mu = head.mu;
  row.alpha = head.policy.alpha;
  row.bias_fraction = head.policy.bias_fraction;
  row.horizon = head.horizon;
  row.reps = n;
  row.reward = mean_std(rewards);
  row.regret = mean_std(regrets);
  row.observations = mean_std(observations);
  row.energy = mean_std(energies);
  if (references) {
    row.rli = rli(row.reward.mean, references->reward_min, references->reward_max);
    row.esi = esi(row.energy.mean, references->energy_min, references->energy_max);
  }
  return row;
}

SummaryRow summarize(std::span<const RunTrace> traces, const EnergyModel& model,
                     const std::optional<ReferencePoints>& references) {
  std::vector<RunOutcome> outcomes;
  outcomes.reserve(traces.size());
  for (const RunTrace& trace : traces) outcomes.push_back(outcome_of(trace));
  return summarize(outcomes, model, references);
}

}  // namespace qrmab
