#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

struct LengthDist {
  enum class Kind { kConstant, kUniform } kind = Kind::kConstant;
  int min_bytes = 64;
  int max_bytes = 64;  // inclusive; equals min_bytes for constants
};

struct DeadlineDist {
  enum class Kind { kConstant, kExponential } kind = Kind::kConstant;
  double seconds = 0.1;  // constant value, or the exponential's parameter
};

struct TrafficClass {
  std::string name;
  double share = 0.0;
  LengthDist length;
  DeadlineDist deadline;
  double priority_per_byte = 1.0;
  bool urllc = false;
};

struct TrafficConfig {
  double arrival_rate = 6000.0;  // packets per second
  std::vector<TrafficClass> mixture;
  int total_packets = 5000;
  std::uint64_t seed = 1;
  // exp(x) in the mixture means mean x seconds; set to read it as a rate.
  bool exponential_param_is_rate = false;
  // Non-URLLC deadlines are floored here so every packet can be scheduled.
  Tick min_deadline_subframes = 2;

  void validate() const;
};

/// URLLC plus five non-URLLC classes with their traffic shares, lengths,
/// deadlines and per-byte priorities.
std::vector<TrafficClass> default_mixture();

/// Poisson arrivals sorted by arrival tick, ids 0..n-1 in arrival order.
/// Packets carry no rates; the simulator fills them in. `traffic_class`
/// indexes cfg.mixture.
std::vector<Packet> generate_stream(const TrafficConfig& cfg, int subscribers);

}  // namespace mrr
