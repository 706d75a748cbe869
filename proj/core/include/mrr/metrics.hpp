#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mrr/policies.hpp"

namespace mrr {

/// Accounting for one simulation run. Reward and byte totals cover
/// non-URLLC packets only; URLLC is measured by misses.
struct SimReport {
  std::string policy;
  std::uint64_t seed = 0;
  double lambda = 0.0;

  bool utility_defined = false;
  double utility = 0.0;
  double delivered_bytes_fraction = 0.0;

  std::int64_t arrived = 0;
  std::int64_t delivered = 0;
  std::int64_t dropped = 0;
  double arrived_reward = 0.0;
  double delivered_reward = 0.0;
  double arrived_bytes = 0.0;
  double delivered_bytes = 0.0;

  std::int64_t urllc_sent = 0;
  std::int64_t urllc_missed = 0;
  std::int64_t urllc_overload_events = 0;
  std::int64_t urllc_victims_dropped = 0;

  std::map<int, std::int64_t> added_packets_histogram;
  std::int64_t decisions = 0;
  std::int64_t claim2_pairs = 0;
  std::int64_t claim2_violations = 0;
  std::int64_t invariant_failures = 0;
  std::int64_t subframes = 0;
  double wall_ms = 0.0;
};

/// Share of arrived non-URLLC reward that was delivered on time. Throws
/// NoTrafficError when nothing with reward arrived.
double utility(std::span<const double> delivered_rewards,
               std::span<const double> arrived_rewards);

std::map<int, std::int64_t> added_packets_histogram(std::span<const ScheduleDecision> decisions);

struct Stat {
  double mean = 0.0;
  double std = 0.0;   // sample standard deviation (n - 1)
  double ci95 = 0.0;  // half-width, Student t
};

Stat describe(std::span<const double> values);

struct SummaryRow {
  std::string policy;
  double lambda = 0.0;
  int runs = 0;
  Stat utility;
  Stat delivered_bytes_fraction;
  Stat urllc_missed;
  std::map<int, std::int64_t> added_packets_histogram;
};

/// Groups by (policy, lambda) and summarises each group. Reports inside a
/// group are ordered by seed first, so the result ignores input order.
std::vector<SummaryRow> aggregate(std::vector<SimReport> reports);

/// Compact JSON object for the per-run CSV, e.g. {"1":12,"2":4}.
std::string histogram_to_json(const std::map<int, std::int64_t>& h);
std::map<int, std::int64_t> histogram_from_json(const std::string& text);

}  // namespace mrr
