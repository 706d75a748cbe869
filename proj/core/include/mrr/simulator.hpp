#pragma once

#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <utility>
#include <vector>

#include "mrr/channel.hpp"
#include "mrr/metrics.hpp"
#include "mrr/policies.hpp"
#include "mrr/traffic.hpp"
#include "mrr/types.hpp"

namespace mrr {

/// Watches RBs split between two packets by the LP(2) policy. The packet
/// sent first must finish within its own window d1, the other within
/// d2 + 2 subframes of the pair's admission.
class Claim2Monitor {
 public:
  /// Completion offsets from the ceiling construction for a single shared
  /// RB: first finishes after ceil(x d1), second after
  /// ceil((1 - x) d2) + ceil(x d1).
  static std::pair<Tick, Tick> ceiling_bounds(Tick d1, Tick d2, double x);

  void track(PacketId first, PacketId second, Tick start, Tick d1, Tick d2);
  void exempt(PacketId id);  // rates changed under the pair, e.g. puncturing
  void completed(PacketId id, Tick at);
  void dropped(PacketId id, Tick at);

  std::int64_t pairs() const { return pairs_; }
  std::int64_t violations() const { return violations_; }

 private:
  struct Pair {
    PacketId first = 0;
    PacketId second = 0;
    Tick start = 0;
    Tick d1 = 0;
    Tick d2 = 0;
    bool exempt = false;
    int resolved = 0;
  };
  void resolve(PacketId id, Tick at, bool delivered);

  std::map<PacketId, std::size_t> index_;
  std::vector<Pair> pairs_list_;
  std::int64_t pairs_ = 0;
  std::int64_t violations_ = 0;
};

struct SimConfig {
  ChannelConfig channel;
  TrafficConfig traffic;
  PolicySpec policy;
  MlwdfParams mlwdf;
  bool check_invariants = true;
  // Re-run every decision with all rewards doubled and count it as an
  // invariant failure if the chosen set changes. Only the reward-rate
  // policies (mrr-lp2, mrr-ilp, mud) are checked.
  bool check_reward_scaling = false;
  bool trace_packets = false;         // keep per-packet bits and decisions
  std::ostream* event_log = nullptr;  // "tick,event,packet,rbs" lines
};

/// Supplies the rate matrix for a frame; defaults to draw_rates.
using RateProvider = std::function<RateMatrix(Tick frame_index)>;

/// Subframe-resolution downlink scheduler simulation. One instance is one
/// single-threaded run.
class Simulator {
 public:
  Simulator(SimConfig cfg, std::vector<Packet> stream, RateProvider rates);

  /// Builds the packet stream and channel from the configs' seeds.
  static Simulator from_config(const SimConfig& cfg);

  void step();
  bool done() const;
  SimReport run_to_completion();
  SimReport report() const;

  Tick now() const { return clock_.now(); }
  const Claim2Monitor& claim2() const { return claim2_; }
  std::size_t queued() const;
  std::size_t in_flight() const { return inflight_.size(); }
  /// Non-empty decisions so far; recorded only with trace_packets.
  const std::vector<ScheduleDecision>& decisions() const { return decisions_; }
  double bits_sent(PacketId id) const;
  bool delivered(PacketId id) const;

 private:
  struct InFlight {
    Packet packet;
    std::vector<double> share;
    double remaining_bits = 0.0;
    Tick admitted = 0;
  };
  struct Grant {
    PacketId owner = 0;
    Tick until = 0;  // exclusive end of the hold
  };
  struct UrllcTx {
    PacketId id = 0;
    std::vector<int> rbs;
    Tick until = 0;
  };

  void admit_arrivals();
  void serve_urllc();
  void schedule(double tau);
  void admit(const ScheduleDecision& d, const std::vector<Packet>& eligible, Tick now);
  double next_completion(double tau);
  void transmit(double from, double to, std::vector<double>& served);
  int deliver_finished();
  void settle();
  void drop_inflight(PacketId id, const char* why);
  void clean_grants(int rb);
  std::vector<bool> free_rbs();
  void check_invariants();
  void log(const char* event, PacketId id, const std::vector<int>& rbs = {});

  SimConfig cfg_;
  RateProvider rate_provider_;
  Clock clock_;
  int rb_count_;
  int subscribers_;

  std::vector<Packet> stream_;
  std::size_t next_arrival_ = 0;
  std::vector<std::vector<Packet>> queues_;  // per MS, EDF order
  std::deque<Packet> urllc_fifo_;
  std::map<PacketId, InFlight> inflight_;
  std::vector<std::deque<Grant>> grants_;
  std::vector<UrllcTx> urllc_tx_;
  std::vector<bool> punctured_;
  RateMatrix rates_;
  std::vector<double> mean_rate_;
  bool mean_rate_ready_ = false;

  std::map<PacketId, double> sent_bits_;
  std::map<PacketId, bool> delivered_;
  std::vector<ScheduleDecision> decisions_;
  Claim2Monitor claim2_;
  SimReport report_;
  std::int64_t queued_count_ = 0;
};

/// Runs one replication: both traffic and channel use `seed`.
SimReport run(const PolicySpec& policy, TrafficConfig traffic, ChannelConfig channel,
              std::uint64_t seed, const MlwdfParams& mlwdf = {});

}  // namespace mrr
