// qrmab: run queue-sampling bandit experiments.
//
//   qrmab run --config exp.cfg [--seed N] [--reps N] [--out DIR] [--<key> VALUE ...]
//   qrmab validate --config exp.cfg
//   qrmab prop1 --lambda 0.6 --mu 0.3 --horizon 5000 --reps 500

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "qrmab/harness.hpp"
#include "qrmab/text.hpp"

namespace {

using namespace qrmab;

// Config keys that already have a dedicated short flag.
const std::map<std::string, std::string> kAliases{
    {"replications", "--reps"}, {"output_dir", "--out"}};

void add_key_flags(CLI::App* cmd, std::map<std::string, std::string>& overrides) {
  for (const std::string& key : config_keys()) {
    std::string names = "--" + key;
    if (key.find('_') != std::string::npos) {
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      names += ",--" + dashed;
    }
    if (const auto alias = kAliases.find(key); alias != kAliases.end()) {
      names += "," + alias->second;
    }
    cmd->add_option_function<std::string>(
           names, [&overrides, key](const std::string& v) { overrides[key] = v; },
           "override config key '" + key + "'")
        ->group("Config overrides");
  }
}

ExperimentConfig resolve(const std::string& path,
                         const std::map<std::string, std::string>& overrides) {
  ExperimentConfig config = load_config(path);
  if (const char* env = std::getenv("QRMAB_OUTPUT_DIR"); env && *env) {
    config.output_dir = env;
  }
  for (const auto& [key, value] : overrides) set_config_value(config, key, value);
  validate(config);
  return config;
}

int run_command(const std::string& path, const std::map<std::string, std::string>& overrides) {
  const ExperimentConfig config = resolve(path, overrides);
  const ExperimentResult result = run_experiment(config);
  for (const std::string& file : write_outputs(result, config.output_dir)) {
    std::cout << "wrote " << file << '\n';
  }
  return 0;
}

int prop1_command(double lambda, double mu, std::uint64_t horizon, std::uint64_t reps,
                  std::uint64_t seed, std::size_t arms) {
  ExperimentConfig config;
  config.arms = arms;
  config.horizon = horizon;
  config.replications = reps;
  config.controller = Controller::qr_mab;
  config.policy = SamplingKind::fifo;
  config.lambda = {lambda};
  config.mu = {mu};
  config.references = false;
  config.seed = seed;
  const ExperimentResult result = run_experiment(config);
  const SummaryRow& row = result.rows.front();
  const double expected = expected_observations(lambda, mu, horizon);
  const double stderr_mean = row.observations.std / std::sqrt(static_cast<double>(reps));
  std::cout << "lambda=" << format_number(lambda) << " mu=" << format_number(mu)
            << " T=" << horizon << " reps=" << reps << '\n'
            << "observed mean N_T = " << format_number(row.observations.mean)
            << " (std error " << format_number(stderr_mean) << ")\n"
            << "min(lambda,mu)*T  = " << format_number(expected) << '\n';
  if (expected > 0.0) {
    std::cout << "relative error    = "
              << format_number(std::abs(row.observations.mean - expected) / expected) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Queue-based remote-controlled bandit experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;
  auto* run = app.add_subcommand("run", "execute an experiment and write CSV results");
  run->add_option("--config", config_path, "experiment config file")->required();
  add_key_flags(run, overrides);

  std::string validate_path;
  auto* check = app.add_subcommand("validate", "parse and check a config file");
  check->add_option("--config", validate_path, "experiment config file")->required();

  double lambda = 0.0;
  double mu = 0.0;
  std::uint64_t horizon = 5000;
  std::uint64_t reps = 500;
  std::uint64_t seed = 1;
  std::size_t arms = 5;
  auto* prop1 = app.add_subcommand("prop1", "compare mean served packets with min(lambda,mu)*T");
  prop1->add_option("--lambda", lambda, "admission probability")->required()->check(CLI::Range(0.0, 1.0));
  prop1->add_option("--mu", mu, "service probability")->required()->check(CLI::Range(0.0, 1.0));
  prop1->add_option("--horizon", horizon, "slots per run")->check(CLI::PositiveNumber);
  prop1->add_option("--reps", reps, "replications")->check(CLI::PositiveNumber);
  prop1->add_option("--seed", seed, "master seed");
  prop1->add_option("--arms", arms, "number of arms")->check(CLI::Range(2, 1 << 20));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, overrides);
    if (*check) {
      const ExperimentConfig config = load_config(validate_path);
      validate(config);
      std::cout << "ok: " << expand_grid(config).size() << " grid points x "
                << config.replications << " replications, config hash "
                << hex64(config_hash(config)) << '\n';
      return 0;
    }
    if (*prop1) return prop1_command(lambda, mu, horizon, reps, seed, arms);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
