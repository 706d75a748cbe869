#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

/// Average rate that delivers `length_bits` by `expiry` when sending starts
/// at `now`. Throws ExpiredError when expiry <= now.
double min_rate(double length_bits, Tick expiry, Tick now);

/// Minimum rate for a packet sharing an RB with an earlier-deadline packet.
/// With `slack` the two-subframe deduction is redundant and the plain rate
/// applies; otherwise two subframes are reserved. nullopt means no finite
/// rate can meet the deadline.
std::optional<double> adjusted_min_rate(double length_bits, Tick remaining,
                                        bool slack);

/// (w / l) * sum_k x(k) r(k)
double reward_rate(double reward, double length_bits,
                   std::span<const double> share, std::span<const double> rates);

struct Puncture {
  std::vector<int> rbs;  // 0/1 per RB
  Tick duration = 1;     // subframes the URLLC packet occupies
};

/// Rates seen by a packet with `remaining` subframes left after URLLC
/// punctures. Each punctured RB loses the fraction duration / remaining of
/// its time.
std::vector<double> effective_rate_after_puncture(std::span<const double> rates,
                                                  std::span<const Puncture> punctures,
                                                  Tick remaining);

}  // namespace mrr
