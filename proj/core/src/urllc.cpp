#include "mrr/urllc.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "mrr/rate_math.hpp"

namespace mrr {

std::vector<bool> UrllcOverlay::punctured_rbs(int rb_count) const {
  std::vector<bool> out(rb_count, false);
  for (const auto& a : assignments) {
    for (int k = 0; k < rb_count; ++k) {
      if (a.rbs[k] != 0) out[k] = true;
    }
  }
  return out;
}

Tick puncture_duration(const Packet& p, double rate, Tick now) {
  const Tick window = std::max<Tick>(1, p.expiry - now);
  if (rate <= 0.0) return window;
  const auto needed = static_cast<Tick>(std::ceil(p.length_bits / rate - 1e-9));
  return std::clamp<Tick>(needed, 1, window);
}

void evaluate_victims(UrllcOverlay& overlay, std::span<const InflightView> inflight,
                      int rb_count, Tick now) {
  overlay.victims.clear();
  overlay.dropped.clear();
  overlay.retained_rr = 0.0;
  std::vector<Puncture> punctures;
  for (const auto& a : overlay.assignments) punctures.push_back({a.rbs, a.duration});
  const auto hit = overlay.punctured_rbs(rb_count);

  for (const auto& v : inflight) {
    bool affected = false;
    for (int k = 0; k < rb_count; ++k) {
      if (hit[k] && v.share[k] > 0.0) affected = true;
    }
    const double rr = reward_rate(v.reward, v.length_bits, v.share, v.rates);
    if (!affected) {
      overlay.retained_rr += rr;
      continue;
    }
    overlay.victims.push_back(v.id);
    const Tick left = v.expiry - now;
    bool keeps = false;
    if (left >= 1) {
      const auto eff = effective_rate_after_puncture(v.rates, punctures, left);
      double rate = 0.0;
      for (int k = 0; k < rb_count; ++k) rate += v.share[k] * eff[k];
      const double needed = v.remaining_bits / static_cast<double>(left);
      keeps = rate + 1e-9 * std::max(1.0, needed) >= needed;
    }
    if (keeps) {
      overlay.retained_rr += rr;
    } else {
      overlay.dropped.push_back(v.id);
    }
  }
}

UrllcOverlay urllc_preempt(std::span<const Packet> urllc_fifo,
                           std::span<const InflightView> inflight, int rb_count,
                           Tick now, const std::vector<bool>& busy) {
  UrllcOverlay out;
  out.inflight_count = static_cast<int>(inflight.size());
  out.urllc_count = static_cast<int>(urllc_fifo.size());
  std::vector<bool> taken(rb_count, false);
  for (std::size_t k = 0; k < busy.size() && k < taken.size(); ++k) taken[k] = busy[k];

  for (const Packet& u : urllc_fifo) {
    assert(static_cast<int>(u.rates.size()) == rb_count);
    if (u.expired(now)) {
      out.overloaded.push_back(u.id);
      continue;
    }
    const double needed = min_rate(u.length_bits, u.expiry, now);
    std::vector<int> order(rb_count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return u.rates[a] > u.rates[b]; });
    UrllcAssignment a{u.id, std::vector<int>(rb_count, 0), 1, 0.0};
    for (int k : order) {
      if (a.rate + 1e-9 * std::max(1.0, needed) >= needed) break;
      if (taken[k] || u.rates[k] <= 0.0) continue;
      a.rbs[k] = 1;
      a.rate += u.rates[k];
    }
    if (a.rate + 1e-9 * std::max(1.0, needed) < needed) {
      out.overloaded.push_back(u.id);
      continue;
    }
    for (int k = 0; k < rb_count; ++k) {
      if (a.rbs[k] != 0) taken[k] = true;
    }
    a.duration = puncture_duration(u, a.rate, now);
    out.assignments.push_back(std::move(a));
  }
  evaluate_victims(out, inflight, rb_count, now);
  return out;
}

}  // namespace mrr
