#include "qrmab/queue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrmab/text.hpp"

namespace qrmab {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " = " + format_number(p) +
                                " outside [0, 1]");
  }
}

void check_length(std::size_t length) {
  if (length == 0) {
    throw std::invalid_argument("sampling from an empty queue");
  }
}

// Mixture weight of the Dirac component for each kind.
double dirac_weight(const SamplingPolicy& policy) {
  switch (policy.kind) {
    case SamplingKind::fifo:
    case SamplingKind::lifo:
      return 1.0;
    case SamplingKind::uniform:
      return 0.0;
    case SamplingKind::delta_uniform:
      return policy.alpha;
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(SamplingKind kind) {
  switch (kind) {
    case SamplingKind::fifo:
      return "fifo";
    case SamplingKind::lifo:
      return "lifo";
    case SamplingKind::uniform:
      return "uniform";
    case SamplingKind::delta_uniform:
      return "delta-uniform";
  }
  return "?";
}

SamplingKind parse_sampling_kind(std::string_view text) {
  if (text == "fifo") return SamplingKind::fifo;
  if (text == "lifo") return SamplingKind::lifo;
  if (text == "uniform") return SamplingKind::uniform;
  if (text == "delta-uniform" || text == "delta_uniform") return SamplingKind::delta_uniform;
  throw std::invalid_argument("unknown sampling policy '" + std::string(text) + "'");
}

SamplingPolicy SamplingPolicy::delta_uniform(double alpha, double bias_fraction) {
  SamplingPolicy policy{SamplingKind::delta_uniform, alpha, bias_fraction};
  policy.validate();
  return policy;
}

void SamplingPolicy::validate() const {
  check_probability(alpha, "alpha");
  check_probability(bias_fraction, "bias_fraction");
}

std::string SamplingPolicy::label() const {
  if (kind != SamplingKind::delta_uniform) {
    return std::string(to_string(kind));
  }
  return "delta-uniform(alpha=" + format_number(alpha) + ";bias=" + format_number(bias_fraction) +
         ")";
}

std::size_t dirac_position(const SamplingPolicy& policy, std::size_t length) {
  check_length(length);
  switch (policy.kind) {
    case SamplingKind::fifo:
      return 1;
    case SamplingKind::lifo:
      return length;
    case SamplingKind::uniform:
    case SamplingKind::delta_uniform:
      break;
  }
  // Round half up, then clamp to an occupied position.
  const double scaled = std::floor(policy.bias_fraction * static_cast<double>(length) + 0.5);
  const auto rounded = static_cast<std::size_t>(std::max(scaled, 0.0));
  return std::clamp<std::size_t>(rounded, 1, length);
}

std::vector<double> sampling_pmf(const SamplingPolicy& policy, std::size_t length) {
  check_length(length);
  const double weight = dirac_weight(policy);
  const double spread = (1.0 - weight) / static_cast<double>(length);
  std::vector<double> pmf(length, spread);
  pmf[dirac_position(policy, length) - 1] += weight;
  return pmf;
}

std::size_t sample_position(const SamplingPolicy& policy, std::size_t length, Engine& rng) {
  check_length(length);
  const bool take_dirac = bernoulli(rng, dirac_weight(policy));
  const std::size_t spread = std::uniform_int_distribution<std::size_t>{1, length}(rng);
  return take_dirac ? dirac_position(policy, length) : spread;
}

GeoGeoQueue::GeoGeoQueue(double lambda, double mu) : lambda_(lambda), mu_(mu) {
  check_probability(lambda, "lambda");
  check_probability(mu, "mu");
}

bool GeoGeoQueue::admit(const Packet& packet, Engine& admission_rng) {
  if (!bernoulli(admission_rng, lambda_)) {
    return false;
  }
  buffer_.push_back(packet);
  ++admitted_;
  return true;
}

std::optional<Packet> GeoGeoQueue::try_serve(const SamplingPolicy& policy, Engine& service_rng,
                                             Engine& sampling_rng) {
  if (!bernoulli(service_rng, mu_) || buffer_.empty()) {
    return std::nullopt;
  }
  return remove_at(sample_position(policy, buffer_.size(), sampling_rng));
}

Packet GeoGeoQueue::remove_at(std::size_t position) {
  if (position == 0 || position > buffer_.size()) {
    throw std::out_of_range("queue position " + std::to_string(position) + " not occupied");
  }
  const auto it = buffer_.begin() + static_cast<std::ptrdiff_t>(position - 1);
  Packet packet = *it;
  buffer_.erase(it);
  ++served_;
  return packet;
}

}  // namespace qrmab
