#include "mrr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "mrr/simulator.hpp"

namespace mrr {
namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

template <typename T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key)) field = j.at(key).get<T>();
}

LengthDist parse_length(const json& j) {
  LengthDist d;
  if (j.is_number_integer()) {
    d.min_bytes = d.max_bytes = j.get<int>();
  } else if (j.contains("constant")) {
    d.min_bytes = d.max_bytes = j.at("constant").get<int>();
  } else if (j.contains("uniform")) {
    const auto& u = j.at("uniform");
    d.kind = LengthDist::Kind::kUniform;
    d.min_bytes = u.at(0).get<int>();
    d.max_bytes = u.at(1).get<int>();
  } else {
    throw ConfigError("length must be an integer, {\"constant\": n} or {\"uniform\": [a, b]}");
  }
  return d;
}

DeadlineDist parse_deadline(const json& j) {
  DeadlineDist d;
  if (j.is_number()) {
    d.seconds = j.get<double>();
  } else if (j.contains("constant")) {
    d.seconds = j.at("constant").get<double>();
  } else if (j.contains("exponential")) {
    d.kind = DeadlineDist::Kind::kExponential;
    d.seconds = j.at("exponential").get<double>();
  } else {
    throw ConfigError("deadline must be a number, {\"constant\": s} or {\"exponential\": s}");
  }
  return d;
}

void apply_channel(const json& j, ChannelConfig& c) {
  take(j, "rb_count", c.rb_count);
  take(j, "rb_bandwidth_hz", c.rb_bandwidth_hz);
  take(j, "carrier_hz", c.carrier_hz);
  take(j, "tx_power_dbm", c.tx_power_dbm);
  take(j, "tower_height_m", c.tower_height_m);
  take(j, "cell_radius_m", c.cell_radius_m);
  take(j, "min_distance_m", c.min_distance_m);
  take(j, "subscribers", c.subscribers);
  take(j, "path_loss_exponent", c.path_loss_exponent);
  take(j, "noise_figure_db", c.noise_figure_db);
  take(j, "noise_density_dbm_hz", c.noise_density_dbm_hz);
}

void apply_traffic(const json& j, TrafficConfig& t) {
  take(j, "total_packets", t.total_packets);
  take(j, "exponential_param_is_rate", t.exponential_param_is_rate);
  take(j, "min_deadline_subframes", t.min_deadline_subframes);
  if (j.contains("mixture")) {
    t.mixture.clear();
    for (const auto& c : j.at("mixture")) {
      TrafficClass tc;
      take(c, "name", tc.name);
      take(c, "share", tc.share);
      take(c, "priority_per_byte", tc.priority_per_byte);
      take(c, "urllc", tc.urllc);
      if (!c.contains("length") || !c.contains("deadline")) {
        throw ConfigError("traffic class needs length and deadline");
      }
      tc.length = parse_length(c.at("length"));
      tc.deadline = parse_deadline(c.at("deadline"));
      t.mixture.push_back(std::move(tc));
    }
  }
}

}  // namespace

void RunConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (policies.empty()) throw ConfigError("policies must not be empty");
  if (lambda_sweep.empty()) throw ConfigError("lambda_sweep must not be empty");
  for (double l : lambda_sweep) {
    if (!(l > 0.0)) throw ConfigError("arrival rates must be positive");
  }
  for (const auto& p : policies) parse_policy(p);
  channel.validate();
  TrafficConfig t = traffic;
  t.arrival_rate = lambda_sweep.front();
  t.validate();
}

RunConfig default_run_config(double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  RunConfig cfg;
  cfg.scale = scale;
  cfg.channel.rb_count = std::max(1, static_cast<int>(std::lround(15.0 * scale)));
  cfg.channel.subscribers = std::max(1, static_cast<int>(std::lround(24.0 * scale)));
  cfg.traffic.mixture = default_mixture();
  const bool full = scale >= 1.0;
  cfg.traffic.total_packets = full ? 5000 : 1000;
  cfg.replications = full ? 50 : 10;
  for (double l = 4000.0; l <= 8000.0; l += 1000.0) cfg.lambda_sweep.push_back(l * scale);
  cfg.policies = {"mrr-lp2", "mrr-ilp:4", "edf", "mxrate", "mud", "mlwdf"};
  return cfg;
}

RunConfig parse_run_config(const std::string& json_text, const RunOverrides& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    double scale = 1.0 / 3.0;
    take(j, "scale", scale);
    if (overrides.scale) scale = *overrides.scale;
    RunConfig cfg = default_run_config(scale);
    if (j.contains("channel")) apply_channel(j.at("channel"), cfg.channel);
    if (j.contains("traffic")) apply_traffic(j.at("traffic"), cfg.traffic);
    if (j.contains("mlwdf")) {
      take(j.at("mlwdf"), "delta", cfg.mlwdf.delta);
      take(j.at("mlwdf"), "smoothing", cfg.mlwdf.smoothing);
    }
    take(j, "policies", cfg.policies);
    take(j, "replications", cfg.replications);
    take(j, "lambda_sweep", cfg.lambda_sweep);
    take(j, "base_seed", cfg.base_seed);
    take(j, "output_dir", cfg.output_dir);
    if (overrides.seed) cfg.base_seed = *overrides.seed;
    if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config field: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path, const RunOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), overrides);
}

int workers_from_env() {
  if (const char* v = std::getenv("MRRSIM_WORKERS")) {
    const int n = std::atoi(v);
    if (n >= 1) return n;
  }
  return 1;
}

std::vector<SimReport> run_experiment(const RunConfig& cfg, int workers) {
  cfg.validate();
  struct Job {
    PolicySpec policy;
    double lambda;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& name : cfg.policies) {
    for (double lambda : cfg.lambda_sweep) {
      for (int i = 0; i < cfg.replications; ++i) {
        jobs.push_back({parse_policy(name), lambda, cfg.base_seed + static_cast<std::uint64_t>(i)});
      }
    }
  }
  std::vector<SimReport> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        TrafficConfig t = cfg.traffic;
        t.arrival_rate = jobs[i].lambda;
        out[i] = run(jobs[i].policy, t, cfg.channel, jobs[i].seed, cfg.mlwdf);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(out.begin(), out.end(), [](const SimReport& a, const SimReport& b) {
    return std::tie(a.policy, a.lambda, a.seed) < std::tie(b.policy, b.lambda, b.seed);
  });
  return out;
}

void write_runs_csv(std::ostream& os, const std::vector<SimReport>& reports,
                    bool include_wall_time) {
  os << "seed,policy,lambda,utility,delivered_bytes_fraction,urllc_missed,"
        "decision_histogram,wall_ms\n";
  for (const auto& r : reports) {
    os << r.seed << ',' << csv_quote(r.policy) << ',' << fmt(r.lambda) << ','
       << (r.utility_defined ? fmt(r.utility) : "") << ',' << fmt(r.delivered_bytes_fraction)
       << ',' << r.urllc_missed << ',' << csv_quote(histogram_to_json(r.added_packets_histogram))
       << ',' << (include_wall_time ? fmt(r.wall_ms) : "") << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "policy,lambda,runs,utility_mean,utility_std,utility_ci95,"
        "delivered_bytes_fraction_mean,delivered_bytes_fraction_std,urllc_missed_mean,"
        "decision_histogram\n";
  for (const auto& r : rows) {
    os << csv_quote(r.policy) << ',' << fmt(r.lambda) << ',' << r.runs << ','
       << fmt(r.utility.mean) << ',' << fmt(r.utility.std) << ',' << fmt(r.utility.ci95) << ','
       << fmt(r.delivered_bytes_fraction.mean) << ',' << fmt(r.delivered_bytes_fraction.std)
       << ',' << fmt(r.urllc_missed.mean) << ','
       << csv_quote(histogram_to_json(r.added_packets_histogram)) << '\n';
  }
}

std::vector<SimReport> read_runs_csv(std::istream& is) {
  std::vector<SimReport> out;
  std::string line;
  if (!std::getline(is, line)) return out;
  const auto header = split_csv_line(line);
  if (header.size() < 8 || header[0] != "seed") throw IoError("not a runs CSV");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 8) throw IoError("short row in runs CSV: " + line);
    SimReport r;
    try {
      r.seed = std::stoull(f[0]);
      r.policy = f[1];
      r.lambda = std::stod(f[2]);
      r.utility_defined = !f[3].empty();
      r.utility = r.utility_defined ? std::stod(f[3]) : 0.0;
      r.delivered_bytes_fraction = std::stod(f[4]);
      r.urllc_missed = std::stoll(f[5]);
      r.added_packets_histogram = histogram_from_json(f[6]);
      r.wall_ms = f[7].empty() ? 0.0 : std::stod(f[7]);
    } catch (const std::exception& e) {
      throw IoError(std::string("bad row in runs CSV: ") + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_outputs(const RunConfig& cfg, const std::vector<SimReport>& reports,
                   bool include_wall_time) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
  const fs::path dir(cfg.output_dir);
  {
    std::ofstream os(dir / kRunsFile, std::ios::binary);
    if (!os) throw IoError("cannot write " + (dir / kRunsFile).string());
    write_runs_csv(os, reports, include_wall_time);
    if (!os) throw IoError("write failed for " + (dir / kRunsFile).string());
  }
  {
    std::ofstream os(dir / kSummaryFile, std::ios::binary);
    if (!os) throw IoError("cannot write " + (dir / kSummaryFile).string());
    write_summary_csv(os, aggregate(reports));
    if (!os) throw IoError("write failed for " + (dir / kSummaryFile).string());
  }
}

std::vector<SimReport> load_runs(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() &&
        (name == kRunsFile || (name.size() > 9 && name.ends_with("_runs.csv")))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<SimReport> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw IoError("cannot read " + f.string());
    auto rows = read_runs_csv(in);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::string format_utility_matrix(const std::vector<SummaryRow>& rows) {
  std::set<double> lambdas;
  std::vector<std::string> policies;
  for (const auto& r : rows) {
    lambdas.insert(r.lambda);
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) {
      policies.push_back(r.policy);
    }
  }
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-12s", "policy");
  os << buf;
  for (double l : lambdas) {
    std::snprintf(buf, sizeof buf, " %10.6g", l);
    os << buf;
  }
  os << '\n';
  for (const auto& p : policies) {
    std::snprintf(buf, sizeof buf, "%-12s", p.c_str());
    os << buf;
    for (double l : lambdas) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& r) {
        return r.policy == p && r.lambda == l;
      });
      if (it == rows.end()) {
        std::snprintf(buf, sizeof buf, " %10s", "-");
      } else {
        std::snprintf(buf, sizeof buf, " %10.4f", it->utility.mean);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mrr
