#include "qrmab/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qrmab {

namespace {

void check_reward(Reward reward) {
  if (reward != 0 && reward != 1) {
    throw std::invalid_argument("reward must be 0 or 1, got " + std::to_string(reward));
  }
}

void check_arm(ArmId arm, std::size_t arms) {
  if (arm >= arms) {
    throw std::out_of_range("arm " + std::to_string(arm) + " outside [0, " +
                            std::to_string(arms) + ")");
  }
}

}  // namespace

BanditEnv::BanditEnv(std::vector<double> thetas, std::uint64_t seed)
    : thetas_(std::move(thetas)), rewards_(make_engine(seed, Stream::rewards)) {
  if (thetas_.size() < 2) {
    throw std::invalid_argument("bandit needs at least 2 arms");
  }
  for (double theta : thetas_) {
    if (!(theta >= 0.0 && theta <= 1.0)) {
      throw std::invalid_argument("arm mean " + std::to_string(theta) + " outside [0, 1]");
    }
  }
  best_ = *std::max_element(thetas_.begin(), thetas_.end());
}

BanditEnv BanditEnv::draw(std::size_t arms, std::uint64_t seed) {
  if (arms < 2) {
    throw std::invalid_argument("bandit needs at least 2 arms");
  }
  Engine rng = make_engine(seed, Stream::thetas);
  std::uniform_real_distribution<double> unit{0.0, 1.0};
  std::vector<double> thetas(arms);
  for (double& theta : thetas) {
    theta = unit(rng);
  }
  return BanditEnv{std::move(thetas), seed};
}

Reward BanditEnv::pull(ArmId arm) {
  check_arm(arm, thetas_.size());
  return bernoulli(rewards_, thetas_[arm]) ? 1 : 0;
}

double BanditEnv::theta(ArmId arm) const {
  check_arm(arm, thetas_.size());
  return thetas_[arm];
}

ArmStats::ArmStats(std::size_t arms) : counts_(arms, 0), successes_(arms, 0) {}

void ArmStats::add(ArmId arm, Reward reward) {
  check_arm(arm, counts_.size());
  check_reward(reward);
  ++counts_[arm];
  successes_[arm] += static_cast<std::uint64_t>(reward);
  ++total_;
}

void ArmStats::clear() {
  std::fill(counts_.begin(), counts_.end(), 0);
  std::fill(successes_.begin(), successes_.end(), 0);
  total_ = 0;
}

double ArmStats::mean(ArmId arm) const {
  const auto n = count(arm);
  return n == 0 ? 0.0 : static_cast<double>(successes_[arm]) / static_cast<double>(n);
}

double ucb_bound(double mean, std::uint64_t arm_count, double log_total) {
  return mean + std::sqrt(2.0 * log_total / static_cast<double>(arm_count));
}

double ucb_index(const UcbState& state, ArmId arm) {
  const auto n = state.stats.count(arm);
  if (n == 0) {
    return std::numeric_limits<double>::infinity();
  }
  return ucb_bound(state.stats.mean(arm), n,
                   std::log(static_cast<double>(state.stats.total())));
}

ArmId ucb_select(const UcbState& state) {
  ArmId best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (ArmId arm = 0; arm < state.stats.arms(); ++arm) {
    const double index = ucb_index(state, arm);
    if (index > best_index) {
      best_index = index;
      best = arm;
    }
  }
  return best;
}

void ucb_update(UcbState& state, ArmId arm, Reward reward) { state.stats.add(arm, reward); }

double sample_beta(double a, double b, Engine& rng) {
  const double x = std::gamma_distribution<double>{a, 1.0}(rng);
  const double y = std::gamma_distribution<double>{b, 1.0}(rng);
  return x / (x + y);
}

ArmId ts_select(const TsState& state, Engine& rng) {
  ArmId best = 0;
  double best_draw = -1.0;
  for (ArmId arm = 0; arm < state.stats.arms(); ++arm) {
    const double draw = sample_beta(static_cast<double>(state.stats.successes(arm)) + 1.0,
                                    static_cast<double>(state.stats.failures(arm)) + 1.0, rng);
    if (draw > best_draw) {
      best_draw = draw;
      best = arm;
    }
  }
  return best;
}

void ts_update(TsState& state, ArmId arm, Reward reward) { state.stats.add(arm, reward); }

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::ucb ? "ucb" : "ts";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "ucb") return Algorithm::ucb;
  if (text == "ts") return Algorithm::ts;
  throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

Learner::Learner(Algorithm algorithm, std::size_t arms)
    : algorithm_(algorithm),
      state_(algorithm == Algorithm::ucb ? std::variant<UcbState, TsState>{UcbState{arms}}
                                         : std::variant<UcbState, TsState>{TsState{arms}}) {}

ArmId Learner::select(Engine& rng) const {
  if (const auto* ucb = std::get_if<UcbState>(&state_)) {
    return ucb_select(*ucb);
  }
  return ts_select(std::get<TsState>(state_), rng);
}

void Learner::update(ArmId arm, Reward reward) {
  if (auto* ucb = std::get_if<UcbState>(&state_)) {
    ucb_update(*ucb, arm, reward);
  } else {
    ts_update(std::get<TsState>(state_), arm, reward);
  }
}

void Learner::assign(const ArmStats& stats) {
  if (stats.arms() != this->stats().arms()) {
    throw std::invalid_argument("arm count mismatch in Learner::assign");
  }
  std::visit([&](auto& state) { state.stats = stats; }, state_);
}

const ArmStats& Learner::stats() const noexcept {
  return std::visit([](const auto& state) -> const ArmStats& { return state.stats; }, state_);
}

}  // namespace qrmab
