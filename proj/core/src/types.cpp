#include "mrr/types.hpp"

#include <cassert>
#include <numeric>

namespace mrr {

Clock::Clock(Tick now, int subframes_per_frame)
    : now_(now), subframes_per_frame_(subframes_per_frame) {
  if (now < 0) throw Error("clock cannot start before tick 0");
  if (subframes_per_frame < 1) throw Error("a frame needs at least one subframe");
}

double Allocation::rate(std::span<const double> rates) const {
  assert(rates.size() == share.size());
  return std::inner_product(share.begin(), share.end(), rates.begin(), 0.0);
}

RateMatrix::RateMatrix(int subscribers, int rbs, double fill)
    : subscribers_(subscribers),
      rbs_(rbs),
      data_(static_cast<std::size_t>(subscribers) * rbs, fill) {
  if (subscribers < 0 || rbs < 0) throw Error("negative rate matrix dimension");
}

std::size_t RateMatrix::index(int m, int k) const {
  assert(m >= 0 && m < subscribers_ && k >= 0 && k < rbs_);
  return static_cast<std::size_t>(m) * rbs_ + k;
}

}  // namespace mrr
