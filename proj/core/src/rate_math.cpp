#include "mrr/rate_math.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace mrr {

double min_rate(double length_bits, Tick expiry, Tick now) {
  if (expiry <= now) {
    throw ExpiredError("packet expired at " + std::to_string(expiry) +
                       ", now " + std::to_string(now));
  }
  return length_bits / static_cast<double>(expiry - now);
}

std::optional<double> adjusted_min_rate(double length_bits, Tick remaining,
                                        bool slack) {
  assert(remaining >= 1);
  if (slack) return length_bits / static_cast<double>(remaining);
  if (remaining > 2) return length_bits / static_cast<double>(remaining - 2);
  return std::nullopt;
}

double reward_rate(double reward, double length_bits,
                   std::span<const double> share, std::span<const double> rates) {
  assert(share.size() == rates.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < share.size(); ++k) sum += share[k] * rates[k];
  return reward / length_bits * sum;
}

std::vector<double> effective_rate_after_puncture(std::span<const double> rates,
                                                  std::span<const Puncture> punctures,
                                                  Tick remaining) {
  std::vector<double> out(rates.begin(), rates.end());
  if (punctures.empty()) return out;
  assert(remaining >= 1);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double lost = 0.0;
    for (const auto& p : punctures) {
      assert(p.rbs.size() == out.size());
      if (p.rbs[k] != 0) lost += static_cast<double>(p.duration) / remaining;
    }
    out[k] = std::max(0.0, rates[k] * (1.0 - lost));
  }
  return out;
}

}  // namespace mrr
