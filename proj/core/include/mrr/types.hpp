#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrr {

/// Simulation time in subframes (1 subframe = 1 ms).
using Tick = std::int64_t;
using PacketId = std::int64_t;

inline constexpr double kSubframeSeconds = 1e-3;

// Error hierarchy. Solver-level "no solution" outcomes are reported in
// return values; these are for contract violations callers can act on.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ExpiredError : Error {
  using Error::Error;
};
struct InstanceTooLargeError : Error {
  using Error::Error;
};
struct OddSumError : Error {
  using Error::Error;
};
struct NoTrafficError : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

class Clock {
 public:
  explicit Clock(Tick now = 0, int subframes_per_frame = 10);

  Tick now() const { return now_; }
  int subframes_per_frame() const { return subframes_per_frame_; }
  Tick frame_index() const { return now_ / subframes_per_frame_; }
  bool at_frame_start() const { return now_ % subframes_per_frame_ == 0; }
  double subframe_seconds() const { return kSubframeSeconds; }

  void advance() { ++now_; }

 private:
  Tick now_;
  int subframes_per_frame_;
};

/// One downlink packet. Lengths are in bits, rates in bits per subframe.
struct Packet {
  PacketId id = 0;
  Tick arrival = 0;
  Tick expiry = 0;
  int subscriber = 0;  // zero-based MS index
  double length_bits = 0.0;
  double reward = 0.0;
  bool urllc = false;
  int traffic_class = -1;     // index into the generating mixture
  std::vector<double> rates;  // length K, refreshed while queued

  /// Subframes left before expiry; <= 0 means the packet is dead.
  Tick time_to_expiry(Tick now) const { return expiry - now; }
  bool expired(Tick now) const { return time_to_expiry(now) <= 0; }
  double length_bytes() const { return length_bits / 8.0; }
};

/// Fraction of each RB's time given to one packet. Values in [0,1];
/// integral solvers only produce 0 or 1.
struct Allocation {
  PacketId owner = 0;
  std::vector<double> share;

  double rate(std::span<const double> rates) const;
  int rb_count() const { return static_cast<int>(share.size()); }
};

/// Per-(subscriber, RB) rates for one frame, row-major.
class RateMatrix {
 public:
  RateMatrix() = default;
  RateMatrix(int subscribers, int rbs, double fill = 0.0);

  int subscribers() const { return subscribers_; }
  int rbs() const { return rbs_; }

  double& at(int m, int k) { return data_[index(m, k)]; }
  double at(int m, int k) const { return data_[index(m, k)]; }
  std::span<const double> row(int m) const {
    return {data_.data() + static_cast<std::size_t>(m) * rbs_,
            static_cast<std::size_t>(rbs_)};
  }
  std::span<const double> data() const { return data_; }

  friend bool operator==(const RateMatrix&, const RateMatrix&) = default;

 private:
  std::size_t index(int m, int k) const;

  int subscribers_ = 0;
  int rbs_ = 0;
  std::vector<double> data_;
};

}  // namespace mrr
