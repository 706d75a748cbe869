#pragma once

#include <span>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

/// An in-flight non-URLLC packet as the preemption step sees it.
struct InflightView {
  PacketId id = 0;
  double reward = 0.0;
  double length_bits = 1.0;
  std::vector<double> share;  // per RB
  std::vector<double> rates;  // snapshot taken at admission
  double remaining_bits = 0.0;
  Tick expiry = 0;
};

struct UrllcAssignment {
  PacketId id = 0;
  std::vector<int> rbs;  // 0/1 per RB
  Tick duration = 1;     // puncture length in subframes
  double rate = 0.0;
};

struct UrllcOverlay {
  std::vector<UrllcAssignment> assignments;
  std::vector<PacketId> victims;     // in-flight packets on punctured RBs
  std::vector<PacketId> dropped;     // victims that can no longer finish in time
  std::vector<PacketId> overloaded;  // URLLC packets that could not reach r_min
  int inflight_count = 0;            // j
  int urllc_count = 0;               // n - j
  double retained_rr = 0.0;          // reward rate of surviving in-flight packets

  bool empty() const { return assignments.empty() && overloaded.empty(); }
  std::vector<bool> punctured_rbs(int rb_count) const;
};

/// Serves URLLC packets in FIFO order. Each takes its best free-of-URLLC
/// RBs in descending rate order until it reaches its minimum rate; victims
/// are then re-checked against their deadlines with the punctured rates.
/// URLLC packets' `rates` must hold the current frame's rates. RBs marked in
/// `busy` already carry a URLLC transmission and are skipped.
UrllcOverlay urllc_preempt(std::span<const Packet> urllc_fifo,
                           std::span<const InflightView> inflight, int rb_count,
                           Tick now, const std::vector<bool>& busy = {});

/// Victim bookkeeping for a fixed set of URLLC assignments; fills victims,
/// dropped and retained_rr.
void evaluate_victims(UrllcOverlay& overlay, std::span<const InflightView> inflight,
                      int rb_count, Tick now);

/// Subframes a URLLC packet needs at `rate`, capped by its deadline.
Tick puncture_duration(const Packet& p, double rate, Tick now);

}  // namespace mrr
