#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrr/channel.hpp"
#include "mrr/metrics.hpp"
#include "mrr/policies.hpp"
#include "mrr/traffic.hpp"

namespace mrr {

/// Everything one `mrrsim run` needs. Replication i of every (policy,
/// lambda) cell uses seed base_seed + i, so policies see identical packet
/// streams and channels.
struct RunConfig {
  double scale = 1.0 / 3.0;
  ChannelConfig channel;
  TrafficConfig traffic;
  MlwdfParams mlwdf;
  std::vector<std::string> policies;
  int replications = 10;
  std::vector<double> lambda_sweep;
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";

  void validate() const;
};

/// Full-size protocol shrunk by `scale`: RB and subscriber counts and the
/// 4,000-8,000 packet/s sweep scale linearly. Below scale 1 the desk
/// profile (1,000 packets, 10 replications) applies; at 1 and above the
/// full 5,000 packets and 50 replications.
RunConfig default_run_config(double scale = 1.0 / 3.0);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::optional<std::string> output_dir;
};

/// Parses a JSON run configuration. Fields the file leaves out come from
/// default_run_config at the effective scale. Throws ConfigError.
RunConfig parse_run_config(const std::string& json_text, const RunOverrides& overrides = {});
RunConfig load_run_config(const std::filesystem::path& path,
                          const RunOverrides& overrides = {});

/// Runs every (policy, lambda, replication) cell on `workers` threads.
/// Results are sorted by (policy, lambda, seed).
std::vector<SimReport> run_experiment(const RunConfig& cfg, int workers = 1);

/// Worker count from MRRSIM_WORKERS, defaulting to 1.
int workers_from_env();

inline constexpr const char* kRunsFile = "runs.csv";
inline constexpr const char* kSummaryFile = "summary.csv";

void write_runs_csv(std::ostream& os, const std::vector<SimReport>& reports,
                    bool include_wall_time = false);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
std::vector<SimReport> read_runs_csv(std::istream& is);

/// Writes runs.csv and summary.csv into cfg.output_dir. Throws IoError.
void write_outputs(const RunConfig& cfg, const std::vector<SimReport>& reports,
                   bool include_wall_time = false);

/// Loads every runs.csv under `dir` (non-recursive also matches *_runs.csv).
std::vector<SimReport> load_runs(const std::filesystem::path& dir);

/// Mean utility table: one row per policy, one column per lambda.
std::string format_utility_matrix(const std::vector<SummaryRow>& rows);

}  // namespace mrr
