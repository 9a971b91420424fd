#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrmab/harness.hpp"

namespace py = pybind11;
using namespace qrmab;

namespace {

SamplingPolicy make_policy(const std::string& kind, double alpha, double bias_fraction) {
  const SamplingKind k = parse_sampling_kind(kind);
  if (k == SamplingKind::delta_uniform) return SamplingPolicy::delta_uniform(alpha, bias_fraction);
  return SamplingPolicy{k, 0.0, 0.0};
}

py::dict counters_dict(const EnergyCounters& c) {
  py::dict d;
  d["alg_updates"] = c.alg_updates;
  d["packet_touches"] = c.packet_touches;
  d["queue_ops"] = c.queue_ops;
  d["storage_integral"] = c.storage_integral;
  return d;
}

py::dict simulate(const std::string& controller, const std::string& algorithm,
                  const std::string& policy, double lambda, double mu, std::uint64_t horizon,
                  std::uint64_t seed, double alpha, double bias_fraction,
                  std::optional<std::vector<double>> thetas, std::size_t arms,
                  const std::string& ufq_source, const std::string& replay_mode) {
  RunDescriptor d;
  d.controller = parse_controller(controller);
  d.algorithm = parse_algorithm(algorithm);
  d.policy = make_policy(policy, alpha, bias_fraction);
  d.lambda = lambda;
  d.mu = mu;
  d.horizon = horizon;
  d.seed = seed;
  d.ufq_source = parse_ufq_source(ufq_source);
  d.replay_mode = parse_replay_mode(replay_mode);
  d.validate();
  const BanditEnv env = thetas ? BanditEnv(*thetas, seed) : BanditEnv::draw(arms, seed);

  RunTrace trace;
  {
    py::gil_scoped_release release;
    trace = run_controller(env, d);
  }
  std::vector<std::size_t> played;
  std::vector<int> rewards;
  std::vector<std::size_t> queue_length;
  played.reserve(trace.records.size());
  rewards.reserve(trace.records.size());
  for (const SlotRecord& r : trace.records) {
    played.push_back(r.arm);
    rewards.push_back(r.reward);
    queue_length.push_back(r.queue_length_after);
  }
  py::dict out;
  out["thetas"] = trace.thetas;
  out["arms"] = played;
  out["rewards"] = rewards;
  out["queue_length"] = queue_length;
  out["regret"] = pseudo_regret(trace);
  out["observations"] = trace.observations;
  out["total_reward"] = trace.total_reward;
  out["counters"] = counters_dict(trace.counters);
  out["energy"] = EnergyModel{}.energy(trace.counters);
  return out;
}

py::dict row_dict(const SummaryRow& row) {
  py::dict d;
  d["policy"] = row.policy;
  d["controller"] = std::string(to_string(row.controller));
  d["algorithm"] = std::string(to_string(row.algorithm));
  d["lambda"] = row.lambda;
  d["mu"] = row.mu;
  d["alpha"] = row.alpha;
  d["bias_fraction"] = row.bias_fraction;
  d["T"] = row.horizon;
  d["reps"] = row.reps;
  d["reward_mean"] = row.reward.mean;
  d["reward_std"] = row.reward.std;
  d["regret_mean"] = row.regret.mean;
  d["regret_std"] = row.regret.std;
  d["nobs_mean"] = row.observations.mean;
  d["energy_mean"] = row.energy.mean;
  d["energy_std"] = row.energy.std;
  d["rli"] = row.rli;
  d["esi"] = row.esi;
  return d;
}

ExperimentConfig config_from(const std::string& text, std::optional<std::uint64_t> seed,
                             std::optional<std::uint64_t> replications) {
  ExperimentConfig config = parse_config(text);
  if (seed) config.seed = *seed;
  if (replications) config.replications = *replications;
  validate(config);
  return config;
}

py::dict experiment(const std::string& text, std::optional<std::uint64_t> seed,
                    std::optional<std::uint64_t> replications) {
  const ExperimentConfig config = config_from(text, seed, replications);
  ExperimentResult result;
  {
    py::gil_scoped_release release;
    result = run_experiment(config);
  }
  py::list rows;
  for (const SummaryRow& row : result.rows) rows.append(row_dict(row));
  std::ostringstream csv;
  write_summary_csv(result, csv);
  py::dict out;
  out["config_hash"] = hex64(result.hash);
  out["rows"] = rows;
  out["summary_csv"] = csv.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Queue-delayed multi-armed bandit simulator";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  (void)config_error;

  m.def(
      "sampling_pmf",
      [](const std::string& kind, std::size_t length, double alpha, double bias_fraction) {
        return sampling_pmf(make_policy(kind, alpha, bias_fraction), length);
      },
      py::arg("kind"), py::arg("length"), py::arg("alpha") = 0.5, py::arg("bias_fraction") = 1.0,
      "Probability of serving each 1-based queue position (1 = oldest).");

  m.def("draw_thetas", [](std::size_t arms, std::uint64_t seed) {
    return BanditEnv::draw(arms, seed).thetas();
  }, py::arg("arms"), py::arg("seed"));

  m.def("simulate", &simulate, py::arg("controller") = "qr-mab", py::arg("algorithm") = "ucb",
        py::arg("policy") = "fifo", py::arg("lam") = 0.6, py::arg("mu") = 0.3,
        py::arg("horizon") = 5000, py::arg("seed") = 1, py::arg("alpha") = 0.5,
        py::arg("bias_fraction") = 1.0, py::arg("thetas") = std::nullopt, py::arg("arms") = 5,
        py::arg("ufq_source") = "played", py::arg("replay_mode") = "resample",
        "Runs one controller and returns its per-slot trace and counters.");

  m.def(
      "pseudo_regret",
      [](const std::vector<std::size_t>& arms, const std::vector<double>& thetas) {
        std::vector<SlotRecord> records(arms.size());
        for (std::size_t i = 0; i < arms.size(); ++i) {
          if (arms[i] >= thetas.size()) throw std::out_of_range("arm index out of range");
          records[i].t = i + 1;
          records[i].arm = arms[i];
          records[i].theta = thetas[arms[i]];
        }
        return pseudo_regret(records, thetas);
      },
      py::arg("arms"), py::arg("thetas"));

  m.def("expected_observations", &expected_observations, py::arg("lam"), py::arg("mu"),
        py::arg("horizon"));
  m.def("rli", &rli, py::arg("reward"), py::arg("reward_min"), py::arg("reward_max"));
  m.def("esi", &esi, py::arg("energy"), py::arg("energy_min"), py::arg("energy_max"));

  m.def(
      "derive_substream",
      [](std::uint64_t master, std::uint64_t config_hash, std::uint64_t point_key,
         std::uint64_t replication) {
        return derive_substream(master, RunId{config_hash, point_key, replication});
      },
      py::arg("master_seed"), py::arg("config_hash"), py::arg("point_key"),
      py::arg("replication"));

  m.def(
      "validate_config",
      [](const std::string& text) { return to_config_text(config_from(text, {}, {})); },
      py::arg("text"), "Parses and validates config text; returns the canonical form.");

  m.def("run_experiment", &experiment, py::arg("config_text"), py::arg("seed") = std::nullopt,
        py::arg("replications") = std::nullopt,
        "Runs a sweep described by config text and returns summary rows.");
}
