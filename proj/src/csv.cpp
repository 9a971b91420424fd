#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qrmab/harness.hpp"
#include "qrmab/text.hpp"

namespace qrmab {

namespace {

std::string field(const std::optional<double>& value) {
  return value ? format_number(*value) : std::string{};
}

// RFC 4180 quoting for free-text fields.
std::string quoted(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_metadata(const ExperimentResult& result, std::ostream& out, const char* kind) {
  const EnergyModel& w = result.config.energy;
  out << "# qrmab " << kind << " v1\n";
  out << "# config_hash = " << hex64(result.hash) << '\n';
  out << "# energy_model = w_update=" << format_number(w.w_update)
      << " w_touch=" << format_number(w.w_touch) << " w_queue=" << format_number(w.w_queue)
      << " w_storage=" << format_number(w.w_storage) << '\n';
  if (result.references) {
    const ReferencePoints& r = *result.references;
    out << "# references = reward_min=" << format_number(r.reward_min)
        << " reward_max=" << format_number(r.reward_max)
        << " energy_min=" << format_number(r.energy_min)
        << " energy_max=" << format_number(r.energy_max) << '\n';
  } else {
    out << "# references = none\n";
  }
  std::istringstream config(to_config_text(result.config));
  for (std::string line; std::getline(config, line);) {
    out << "# config: " << line << '\n';
  }
}

bool has_queue(Controller controller) { return controller != Controller::random; }

}  // namespace

void write_summary_csv(const ExperimentResult& result, std::ostream& out) {
  write_metadata(result, out, "summary");
  out << "policy,controller,algorithm,lambda,mu,alpha,bias_fraction,T,reps,"
         "reward_mean,reward_std,regret_mean,regret_std,nobs_mean,energy_mean,energy_std,"
         "rli,esi,alg_updates,packet_touches,queue_ops,storage_integral,wallclock_s\n";
  for (const SummaryRow& row : result.rows) {
    const bool queue = has_queue(row.controller);
    const bool biased = row.policy.find("delta-uniform") != std::string::npos;
    out << quoted(row.policy) << ',' << to_string(row.controller) << ','
        << to_string(row.algorithm) << ',' << (queue ? format_number(row.lambda) : "") << ','
        << (queue ? format_number(row.mu) : "") << ','
        << (biased ? format_number(row.alpha) : "") << ','
        << (biased ? format_number(row.bias_fraction) : "") << ',' << row.horizon << ','
        << row.reps << ',' << format_number(row.reward.mean) << ','
        << format_number(row.reward.std) << ',' << format_number(row.regret.mean) << ','
        << format_number(row.regret.std) << ','
        << (queue ? format_number(row.observations.mean) : "") << ','
        << format_number(row.energy.mean) << ',' << format_number(row.energy.std) << ','
        << field(row.rli) << ',' << field(row.esi) << ','
        << format_number(row.alg_updates_mean) << ',' << format_number(row.packet_touches_mean)
        << ',' << format_number(row.queue_ops_mean) << ','
        << format_number(row.storage_integral_mean) << ',' << field(row.wallclock_s) << '\n';
  }
}

void write_trace_csv(const ExperimentResult& result, std::ostream& out) {
  write_metadata(result, out, "traces");
  out << "policy,lambda,mu,alpha,bias_fraction,rep,t,regret,reward\n";
  for (const TraceSample& s : result.traces) {
    const SummaryRow& row = result.rows[s.point];
    const GridPoint& point = result.grid[s.point];
    const bool biased = result.config.policy == SamplingKind::delta_uniform &&
                        row.controller != Controller::random &&
                        row.controller != Controller::full_feedback;
    out << quoted(row.policy) << ',' << format_number(row.lambda) << ','
        << format_number(row.mu) << ',' << (biased ? format_number(point.alpha) : "") << ','
        << (biased ? format_number(point.bias_fraction) : "") << ',' << s.replication << ',' << s.t << ','
        << format_number(s.regret) << ',' << s.reward << '\n';
  }
}

std::vector<std::string> write_outputs(const ExperimentResult& result,
                                       const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::vector<std::string> written;
  auto emit = [&](const char* name, auto writer) {
    const auto path = (std::filesystem::path(directory) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    writer(result, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
    written.push_back(path);
  };
  emit("summary.csv", [](const auto& r, std::ostream& o) { write_summary_csv(r, o); });
  if (result.config.write_traces) {
    emit("traces.csv", [](const auto& r, std::ostream& o) { write_trace_csv(r, o); });
  }
  return written;
}

}  // namespace qrmab
