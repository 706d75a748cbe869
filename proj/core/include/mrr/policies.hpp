#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

/// Constants of the M-LWDF metric gamma_i * W_i * r_i(k) / rbar_i.
struct MlwdfParams {
  double delta = 0.05;      // target violation probability
  double smoothing = 0.1;   // EWMA weight of the served-rate average
};

/// Snapshot handed to a policy. `eligible` holds the heads of the non-URLLC
/// virtual queues with rates for the current frame.
struct SchedulingContext {
  Tick now = 0;
  int rb_count = 0;
  std::vector<bool> free_rbs;
  std::span<const Packet> eligible;
  std::span<const double> mean_rate;  // per subscriber, M-LWDF only
  MlwdfParams mlwdf;

  std::vector<int> free_indices() const;
};

/// Packets admitted by one scheduler invocation. An empty `chosen` set is
/// the "nothing schedulable" outcome.
struct ScheduleDecision {
  std::vector<PacketId> chosen;
  std::vector<Allocation> allocations;  // parallel to chosen, length-K shares
  double total_rr = 0.0;
  int added_count = 0;

  bool empty() const { return chosen.empty(); }
};

ScheduleDecision mrr_lp2_select(const SchedulingContext& ctx);
ScheduleDecision mrr_ilp_select(const SchedulingContext& ctx, int max_subset);
ScheduleDecision edf_select(const SchedulingContext& ctx);
ScheduleDecision mxrate_select(const SchedulingContext& ctx);
ScheduleDecision mud_select(const SchedulingContext& ctx);
ScheduleDecision mlwdf_select(const SchedulingContext& ctx);

double mlwdf_metric(const Packet& p, int rb, Tick now, double mean_rate,
                    const MlwdfParams& params);

enum class PolicyKind { kMrrLp2, kMrrIlp, kEdf, kMxRate, kMud, kMlwdf };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kMrrLp2;
  int subset_limit = 0;  // p for mrr-ilp:<p>

  std::string name() const;
  ScheduleDecision select(const SchedulingContext& ctx) const;
  bool operator==(const PolicySpec&) const = default;
};

/// Parses "mrr-lp2", "mrr-ilp:<p>", "edf", "mxrate", "mud" or "mlwdf".
/// Throws ConfigError on anything else.
PolicySpec parse_policy(std::string_view name);

/// Sum of shares per RB must not exceed one.
bool respects_rb_exclusivity(const ScheduleDecision& d, double slack = 1e-9);

}  // namespace mrr
