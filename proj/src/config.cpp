#include "qrmab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qrmab/text.hpp"

namespace qrmab {

namespace {

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i]);
  }
  return out;
}

// Snaps accumulated range values back onto short decimals (0.30000000000000004 -> 0.3).
double snap(double value) { return std::round(value * 1e12) / 1e12; }

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> values;
  if (trim(text).empty()) return values;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      values.push_back(parse_double(parts[0]));
      continue;
    }
    if (parts.size() != 3) {
      throw std::invalid_argument("range must be start:stop:step, got '" + item + "'");
    }
    const double start = parse_double(parts[0]);
    const double stop = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw std::invalid_argument("range '" + item + "' needs step > 0 and stop >= start");
    }
    const auto steps = static_cast<std::uint64_t>(std::floor((stop - start) / step + 1e-9));
    for (std::uint64_t i = 0; i <= steps; ++i) {
      values.push_back(snap(start + static_cast<double>(i) * step));
    }
  }
  return values;
}

void check_unit(const std::string& key, double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(key, "value " + format_number(value) + " outside [0, 1]");
  }
}

void check_unit_list(const std::string& key, const std::vector<double>& values) {
  if (values.empty()) throw ConfigError(key, "grid list is empty");
  for (double v : values) check_unit(key, v);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "arms",        "horizon",     "replications", "algorithm",     "controller",
      "policy",      "lambda",      "mu",           "alpha",         "bias_fraction",
      "ufq_source",  "replay_mode", "thetas",       "w_update",      "w_touch",
      "w_queue",     "w_storage",   "seed",         "output_dir",    "trace_thinning",
      "write_traces", "references", "workers",      "record_wallclock"};
  return keys;
}

void set_config_value(ExperimentConfig& c, std::string_view key_view, std::string_view value) {
  const std::string key(key_view);
  value = trim(value);
  try {
    if (key == "arms") c.arms = parse_uint(value);
    else if (key == "horizon") c.horizon = parse_uint(value);
    else if (key == "replications") c.replications = parse_uint(value);
    else if (key == "algorithm") c.algorithm = parse_algorithm(value);
    else if (key == "controller") c.controller = parse_controller(value);
    else if (key == "policy") c.policy = parse_sampling_kind(value);
    else if (key == "lambda") c.lambda = parse_list(value);
    else if (key == "mu") c.mu = parse_list(value);
    else if (key == "alpha") c.alpha = parse_list(value);
    else if (key == "bias_fraction") c.bias_fraction = parse_list(value);
    else if (key == "ufq_source") c.ufq_source = parse_ufq_source(value);
    else if (key == "replay_mode") c.replay_mode = parse_replay_mode(value);
    else if (key == "thetas") c.thetas = parse_list(value);
    else if (key == "w_update") c.energy.w_update = parse_double(value);
    else if (key == "w_touch") c.energy.w_touch = parse_double(value);
    else if (key == "w_queue") c.energy.w_queue = parse_double(value);
    else if (key == "w_storage") c.energy.w_storage = parse_double(value);
    else if (key == "seed") c.seed = parse_uint(value);
    else if (key == "output_dir") c.output_dir = std::string(value);
    else if (key == "trace_thinning") c.trace_thinning = parse_uint(value);
    else if (key == "write_traces") c.write_traces = parse_bool(value);
    else if (key == "references") c.references = parse_bool(value);
    else if (key == "workers") c.workers = parse_uint(value);
    else if (key == "record_wallclock") c.record_wallclock = parse_bool(value);
    else throw ConfigError(key, "unknown key");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!seen.insert(key).second) {
      throw ConfigError(key, "duplicate key");
    }
    set_config_value(config, key, line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config", "cannot open '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(const ExperimentConfig& c) {
  if (c.arms < 2) throw ConfigError("arms", "need at least 2 arms");
  if (c.horizon < 1) throw ConfigError("horizon", "must be >= 1");
  if (c.replications < 1) throw ConfigError("replications", "must be >= 1");
  check_unit_list("lambda", c.lambda);
  check_unit_list("mu", c.mu);
  check_unit_list("alpha", c.alpha);
  check_unit_list("bias_fraction", c.bias_fraction);
  if (c.policy != SamplingKind::delta_uniform) {
    if (c.alpha.size() > 1) throw ConfigError("alpha", "sweep requires policy = delta-uniform");
    if (c.bias_fraction.size() > 1) {
      throw ConfigError("bias_fraction", "sweep requires policy = delta-uniform");
    }
  }
  if ((c.controller == Controller::base_ufq || c.controller == Controller::base_ufrb) &&
      c.policy != SamplingKind::fifo && c.policy != SamplingKind::lifo) {
    throw ConfigError("policy", "baseline controllers take fifo or lifo");
  }
  if (!c.thetas.empty()) {
    if (c.thetas.size() != c.arms) {
      throw ConfigError("thetas", "expected " + std::to_string(c.arms) + " values, got " +
                                      std::to_string(c.thetas.size()));
    }
    for (double t : c.thetas) check_unit("thetas", t);
  }
  const std::pair<const char*, double> weights[] = {{"w_update", c.energy.w_update},
                                                    {"w_touch", c.energy.w_touch},
                                                    {"w_queue", c.energy.w_queue},
                                                    {"w_storage", c.energy.w_storage}};
  for (const auto& [key, w] : weights) {
    if (!(w >= 0.0 && std::isfinite(w))) throw ConfigError(key, "weight must be >= 0");
  }
  if (c.trace_thinning < 1) throw ConfigError("trace_thinning", "must be >= 1");
  if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "arms = " << c.arms << '\n'
      << "horizon = " << c.horizon << '\n'
      << "replications = " << c.replications << '\n'
      << "algorithm = " << to_string(c.algorithm) << '\n'
      << "controller = " << to_string(c.controller) << '\n'
      << "policy = " << to_string(c.policy) << '\n'
      << "lambda = " << join(c.lambda) << '\n'
      << "mu = " << join(c.mu) << '\n'
      << "alpha = " << join(c.alpha) << '\n'
      << "bias_fraction = " << join(c.bias_fraction) << '\n'
      << "ufq_source = " << to_string(c.ufq_source) << '\n'
      << "replay_mode = " << to_string(c.replay_mode) << '\n'
      << "thetas = " << join(c.thetas) << '\n'
      << "w_update = " << format_number(c.energy.w_update) << '\n'
      << "w_touch = " << format_number(c.energy.w_touch) << '\n'
      << "w_queue = " << format_number(c.energy.w_queue) << '\n'
      << "w_storage = " << format_number(c.energy.w_storage) << '\n'
      << "seed = " << c.seed << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "trace_thinning = " << c.trace_thinning << '\n'
      << "write_traces = " << (c.write_traces ? "true" : "false") << '\n'
      << "references = " << (c.references ? "true" : "false") << '\n'
      << "workers = " << c.workers << '\n'
      << "record_wallclock = " << (c.record_wallclock ? "true" : "false") << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::ostringstream identity;
  identity << "arms=" << c.arms << ";horizon=" << c.horizon
           << ";algorithm=" << to_string(c.algorithm)
           << ";controller=" << to_string(c.controller) << ";policy=" << to_string(c.policy)
           << ";ufq_source=" << to_string(c.ufq_source)
           << ";replay_mode=" << to_string(c.replay_mode) << ";thetas=" << join(c.thetas);
  return fnv1a(identity.str());
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xF];
    value >>= 4;
  }
  return out;
}

}  // namespace qrmab
