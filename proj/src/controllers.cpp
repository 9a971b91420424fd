#include "qrmab/controllers.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "qrmab/text.hpp"

namespace qrmab {

namespace {

// Engines and bookkeeping shared by every controller.
class RunContext {
 public:
  RunContext(BanditEnv& env, const RunDescriptor& descriptor)
      : env_(env),
        agent(make_engine(descriptor.seed, Stream::agent)),
        admission(make_engine(descriptor.seed, Stream::admission)),
        service(make_engine(descriptor.seed, Stream::service)),
        sampling(make_engine(descriptor.seed, Stream::sampling)),
        replay(make_engine(descriptor.seed, Stream::replay)),
        random_play(make_engine(descriptor.seed, Stream::random_play)) {
    descriptor.validate();
    trace_.descriptor = descriptor;
    trace_.thetas.assign(env.thetas().begin(), env.thetas().end());
    trace_.records.reserve(descriptor.horizon);
  }

  // Plays `arm` at slot t and opens its record.
  SlotRecord& play(std::uint64_t t, ArmId arm) {
    SlotRecord& record = trace_.records.emplace_back();
    record.t = t;
    record.arm = arm;
    record.theta = env_.theta(arm);
    record.reward = env_.pull(arm);
    trace_.total_reward += static_cast<std::uint64_t>(record.reward);
    return record;
  }

  // Derives the counter increment from the slot's events and folds it in.
  void close(SlotRecord& record) {
    EnergyCounters& c = record.counters;
    c.alg_updates = record.learner_writes;
    c.packet_touches = record.packets_read;
    c.queue_ops = (record.admitted ? 1U : 0U) + (record.served ? 1U : 0U) +
                  record.arm_queue_appends + record.arm_queue_pops;
    c.storage_integral = record.agent_storage_after;
    trace_.counters += c;
    if (record.served) ++trace_.observations;
  }

  RunTrace finish(const Learner& learner) {
    trace_.final_stats = learner.stats();
    return std::move(trace_);
  }

  BanditEnv& env_;
  Engine agent;
  Engine admission;
  Engine service;
  Engine sampling;
  Engine replay;
  Engine random_play;

 private:
  RunTrace trace_;
};

RunDescriptor describe(Controller controller, Algorithm algorithm, const SamplingPolicy& policy,
                       double lambda, double mu, std::uint64_t horizon, std::uint64_t seed) {
  RunDescriptor d;
  d.controller = controller;
  d.algorithm = algorithm;
  d.policy = policy;
  d.lambda = lambda;
  d.mu = mu;
  d.horizon = horizon;
  d.seed = seed;
  return d;
}

SamplingPolicy network_policy(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::fifo:
      return SamplingPolicy::fifo();
    case SamplingKind::lifo:
      return SamplingPolicy::lifo();
    default:
      throw std::invalid_argument("baseline network policy must be fifo or lifo, got " +
                                  std::string(to_string(kind)));
  }
}

RunTrace qr_mab_loop(BanditEnv& env, const RunDescriptor& d) {
  RunContext ctx(env, d);
  Learner learner(d.algorithm, env.arms());
  GeoGeoQueue queue(d.lambda, d.mu);
  for (std::uint64_t t = 1; t <= d.horizon; ++t) {
    SlotRecord& record = ctx.play(t, learner.select(ctx.agent));
    record.admitted = queue.admit({record.arm, record.reward, t}, ctx.admission);
    record.served = queue.try_serve(d.policy, ctx.service, ctx.sampling);
    if (record.served) {
      learner.update(record.served->arm, record.served->reward);
      record.learner_writes = 1;
      record.packets_read = 1;
    }
    record.queue_length_after = queue.length();
    ctx.close(record);
  }
  return ctx.finish(learner);
}

RunTrace ufq_loop(BanditEnv& env, const RunDescriptor& d) {
  RunContext ctx(env, d);
  Learner learner(d.algorithm, env.arms());
  GeoGeoQueue queue(d.lambda, d.mu);
  std::vector<std::deque<Packet>> arm_queues(env.arms());
  std::uint64_t held = 0;
  for (std::uint64_t t = 1; t <= d.horizon; ++t) {
    SlotRecord& record = ctx.play(t, learner.select(ctx.agent));
    record.admitted = queue.admit({record.arm, record.reward, t}, ctx.admission);
    record.served = queue.try_serve(d.policy, ctx.service, ctx.sampling);
    if (record.served) {
      arm_queues[record.served->arm].push_back(*record.served);
      record.arm_queue_appends = 1;
      ++held;
    }
    ArmId source = record.arm;
    if (arm_queues[source].empty() && d.ufq_source == UfqSource::any) {
      const auto it = std::find_if(arm_queues.begin(), arm_queues.end(),
                                   [](const auto& q) { return !q.empty(); });
      if (it != arm_queues.end()) source = static_cast<ArmId>(it - arm_queues.begin());
    }
    if (!arm_queues[source].empty()) {
      const Packet packet = arm_queues[source].front();
      arm_queues[source].pop_front();
      --held;
      learner.update(packet.arm, packet.reward);
      record.arm_queue_pops = 1;
      record.learner_writes = 1;
      record.packets_read = 1;
    }
    record.queue_length_after = queue.length();
    record.agent_storage_after = held;
    ctx.close(record);
  }
  return ctx.finish(learner);
}

RunTrace ufrb_loop(BanditEnv& env, const RunDescriptor& d) {
  RunContext ctx(env, d);
  Learner learner(d.algorithm, env.arms());
  GeoGeoQueue queue(d.lambda, d.mu);
  std::vector<std::vector<Packet>> buffers(env.arms());
  ArmStats retained(env.arms());  // aggregate over every buffered packet
  for (std::uint64_t t = 1; t <= d.horizon; ++t) {
    SlotRecord& record = ctx.play(t, learner.select(ctx.agent));
    record.admitted = queue.admit({record.arm, record.reward, t}, ctx.admission);
    record.served = queue.try_serve(d.policy, ctx.service, ctx.sampling);
    if (record.served) {
      buffers[record.served->arm].push_back(*record.served);
      retained.add(record.served->arm, record.served->reward);
      record.arm_queue_appends = 1;
    }
    if (d.replay_mode == ReplayMode::aggregate) {
      // Recompute from scratch over the buffers; `retained` holds the same sums.
      learner.assign(retained);
      for (const auto& buffer : buffers) {
        record.learner_writes += buffer.empty() ? 0U : 1U;
      }
      record.packets_read = retained.total();
    } else {
      const auto& buffer = buffers[record.arm];
      if (!buffer.empty()) {
        const auto pick = std::uniform_int_distribution<std::size_t>{0, buffer.size() - 1}(ctx.replay);
        learner.update(buffer[pick].arm, buffer[pick].reward);
        record.learner_writes = 1;
        record.packets_read = 1;
      }
    }
    record.queue_length_after = queue.length();
    record.agent_storage_after = retained.total();
    ctx.close(record);
  }
  return ctx.finish(learner);
}

RunTrace random_loop(BanditEnv& env, const RunDescriptor& d) {
  RunContext ctx(env, d);
  Learner learner(d.algorithm, env.arms());
  std::uniform_int_distribution<ArmId> pick{0, env.arms() - 1};
  for (std::uint64_t t = 1; t <= d.horizon; ++t) {
    SlotRecord& record = ctx.play(t, pick(ctx.random_play));
    ctx.close(record);
  }
  return ctx.finish(learner);
}

}  // namespace

void EnergyModel::validate() const {
  for (double w : {w_update, w_touch, w_queue, w_storage}) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("energy weight " + format_number(w) + " is negative");
    }
  }
}

std::string_view to_string(Controller controller) {
  switch (controller) {
    case Controller::qr_mab:
      return "qr-mab";
    case Controller::base_ufq:
      return "base-ufq";
    case Controller::base_ufrb:
      return "base-ufrb";
    case Controller::random:
      return "random";
    case Controller::full_feedback:
      return "full-feedback";
  }
  return "?";
}

Controller parse_controller(std::string_view text) {
  if (text == "qr-mab") return Controller::qr_mab;
  if (text == "base-ufq") return Controller::base_ufq;
  if (text == "base-ufrb") return Controller::base_ufrb;
  if (text == "random") return Controller::random;
  if (text == "full-feedback") return Controller::full_feedback;
  throw std::invalid_argument("unknown controller '" + std::string(text) + "'");
}

std::string_view to_string(UfqSource source) {
  return source == UfqSource::played ? "played" : "any";
}

UfqSource parse_ufq_source(std::string_view text) {
  if (text == "played") return UfqSource::played;
  if (text == "any") return UfqSource::any;
  throw std::invalid_argument("unknown ufq source '" + std::string(text) + "'");
}

std::string_view to_string(ReplayMode mode) {
  return mode == ReplayMode::resample ? "resample" : "aggregate";
}

ReplayMode parse_replay_mode(std::string_view text) {
  if (text == "resample") return ReplayMode::resample;
  if (text == "aggregate") return ReplayMode::aggregate;
  throw std::invalid_argument("unknown replay mode '" + std::string(text) + "'");
}

void RunDescriptor::validate() const {
  if (horizon < 1) {
    throw std::invalid_argument("horizon must be >= 1");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda = " + format_number(lambda) + " outside [0, 1]");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::invalid_argument("mu = " + format_number(mu) + " outside [0, 1]");
  }
  policy.validate();
  if ((controller == Controller::base_ufq || controller == Controller::base_ufrb) &&
      policy.kind != SamplingKind::fifo && policy.kind != SamplingKind::lifo) {
    throw std::invalid_argument("baseline network policy must be fifo or lifo");
  }
}

RunTrace run_qr_mab(BanditEnv env, Algorithm algorithm, const SamplingPolicy& policy,
                    double lambda, double mu, std::uint64_t horizon, std::uint64_t seed) {
  return qr_mab_loop(env, describe(Controller::qr_mab, algorithm, policy, lambda, mu, horizon, seed));
}

RunTrace run_base_update_from_queue(BanditEnv env, Algorithm algorithm, SamplingKind net_policy,
                                    double lambda, double mu, std::uint64_t horizon,
                                    std::uint64_t seed, UfqSource source) {
  auto d = describe(Controller::base_ufq, algorithm, network_policy(net_policy), lambda, mu,
                    horizon, seed);
  d.ufq_source = source;
  return ufq_loop(env, d);
}

RunTrace run_base_update_from_replay_buffer(BanditEnv env, Algorithm algorithm,
                                            SamplingKind net_policy, double lambda, double mu,
                                            std::uint64_t horizon, std::uint64_t seed,
                                            ReplayMode mode) {
  auto d = describe(Controller::base_ufrb, algorithm, network_policy(net_policy), lambda, mu,
                    horizon, seed);
  d.replay_mode = mode;
  return ufrb_loop(env, d);
}

RunTrace run_random(BanditEnv env, std::uint64_t horizon, std::uint64_t seed) {
  return random_loop(env, describe(Controller::random, Algorithm::ucb, SamplingPolicy::fifo(), 0.0,
                                   0.0, horizon, seed));
}

RunTrace run_full_feedback(BanditEnv env, Algorithm algorithm, std::uint64_t horizon,
                           std::uint64_t seed) {
  return qr_mab_loop(env, describe(Controller::full_feedback, algorithm, SamplingPolicy::fifo(),
                                   1.0, 1.0, horizon, seed));
}

RunTrace run_controller(BanditEnv env, const RunDescriptor& d) {
  switch (d.controller) {
    case Controller::qr_mab:
      return qr_mab_loop(env, d);
    case Controller::base_ufq:
      return ufq_loop(env, d);
    case Controller::base_ufrb:
      return ufrb_loop(env, d);
    case Controller::random:
      return random_loop(env, d);
    case Controller::full_feedback: {
      RunDescriptor full = d;
      full.policy = SamplingPolicy::fifo();
      full.lambda = 1.0;
      full.mu = 1.0;
      return qr_mab_loop(env, full);
    }
  }
  throw std::logic_error("unhandled controller");
}

}  // namespace qrmab
