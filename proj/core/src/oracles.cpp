#include "mrr/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace mrr::oracle {
namespace {

double tol_for(double rhs, double tolerance) {
  return tolerance * std::max(1.0, std::abs(rhs));
}

class GridSearch {
 public:
  GridSearch(const Demand& first, const Demand& second, int rb_count, double step,
             double tolerance)
      : first_(first), second_(second), k_(rb_count), step_(step) {
    points_ = static_cast<int>(std::llround(1.0 / step)) + 1;
    a1_ = first.reward_per_bit();
    a2_ = second.reward_per_bit();
    cap2_ = std::accumulate(second.rates.begin(), second.rates.end(), 0.0) -
            second.min_rate;
    need1_ = first.min_rate - tol_for(first.min_rate, tolerance);
    cap2_ += tol_for(second.min_rate, tolerance);
    coeff_.resize(k_);
    for (int k = 0; k < k_; ++k) {
      coeff_[k] = a1_ * first.rates[k] - a2_ * second.rates[k];
    }
    order_.resize(k_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return std::abs(coeff_[a]) > std::abs(coeff_[b]);
    });
    r1_suffix_.assign(k_ + 1, 0.0);
    gain_suffix_.assign(k_ + 1, 0.0);
    for (int d = k_ - 1; d >= 0; --d) {
      const int k = order_[d];
      r1_suffix_[d] = r1_suffix_[d + 1] + first.rates[k];
      gain_suffix_[d] = gain_suffix_[d + 1] + std::max(0.0, coeff_[k]);
    }
    x_.assign(k_, 0.0);
  }

  SolveResult run() {
    if (k_ > 0) descend(0, 0.0, 0.0, 0.0);
    SolveResult out;
    if (!found_) return out;
    std::vector<double> y(k_);
    for (int k = 0; k < k_; ++k) y[k] = 1.0 - best_x_[k];
    out.feasible = true;
    out.allocations = {best_x_, y};
    AllocationProblem pair{{first_, second_}, k_};
    out.total_rr = total_reward_rate(pair, out.allocations);
    return out;
  }

 private:
  double value(int j) const { return j == points_ - 1 ? 1.0 : j * step_; }

  void descend(int depth, double s1, double s2, double obj) {
    if (s1 + r1_suffix_[depth] < need1_) return;
    if (s2 > cap2_) return;
    if (found_ && obj + gain_suffix_[depth] <= best_obj_) return;
    const int k = order_[depth];
    const double r1 = first_.rates[k];
    const double r2 = second_.rates[k];
    const double c = coeff_[k];

    if (depth == k_ - 1) {
      // Last coordinate: scan the grid from the objective's preferred end and
      // stop at the first point meeting both constraints.
      for (int t = 0; t < points_; ++t) {
        const int j = c >= 0.0 ? points_ - 1 - t : t;
        const double v = value(j);
        if (s1 + r1 * v >= need1_ && s2 + r2 * v <= cap2_) {
          const double total = obj + c * v;
          if (!found_ || total > best_obj_) {
            found_ = true;
            best_obj_ = total;
            x_[k] = v;
            best_x_ = x_;
          }
          return;
        }
      }
      return;
    }
    for (int t = 0; t < points_; ++t) {
      const int j = c >= 0.0 ? points_ - 1 - t : t;
      const double v = value(j);
      x_[k] = v;
      descend(depth + 1, s1 + r1 * v, s2 + r2 * v, obj + c * v);
    }
    x_[k] = 0.0;
  }

  const Demand& first_;
  const Demand& second_;
  int k_;
  double step_;
  int points_ = 0;
  double a1_ = 0.0, a2_ = 0.0;
  double cap2_ = 0.0;
  double need1_ = 0.0;
  std::vector<double> coeff_;
  std::vector<int> order_;
  std::vector<double> r1_suffix_;
  std::vector<double> gain_suffix_;
  std::vector<double> x_;
  bool found_ = false;
  double best_obj_ = 0.0;
  std::vector<double> best_x_;
};

}  // namespace

SolveResult ilp_exhaustive(const AllocationProblem& problem) {
  const int n = static_cast<int>(problem.packets.size());
  const int k = problem.rb_count;
  if (n * k > kMaxExhaustiveVariables) {
    throw InstanceTooLargeError("exhaustive oracle limited to " +
                                std::to_string(kMaxExhaustiveVariables) +
                                " variables, got " + std::to_string(n * k));
  }
  const std::uint32_t total = std::uint32_t{1} << (n * k);
  SolveResult best;
  std::vector<std::vector<double>> x(n, std::vector<double>(k, 0.0));
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    bool ok = true;
    for (int rb = 0; rb < k && ok; ++rb) {
      int owners = 0;
      for (int i = 0; i < n; ++i) owners += (mask >> (i * k + rb)) & 1U;
      ok = owners <= 1;
    }
    if (!ok) continue;
    double objective = 0.0;
    for (int i = 0; i < n && ok; ++i) {
      const Demand& d = problem.packets[i];
      double rate = 0.0;
      for (int rb = 0; rb < k; ++rb) {
        if ((mask >> (i * k + rb)) & 1U) rate += d.rates[rb];
      }
      ok = rate + 1e-9 * std::max(1.0, std::abs(d.min_rate)) >= d.min_rate;
      objective += d.reward / d.length_bits * rate;
    }
    if (!ok) continue;
    if (!best.feasible || objective > best.total_rr) {
      for (int i = 0; i < n; ++i) {
        for (int rb = 0; rb < k; ++rb) x[i][rb] = (mask >> (i * k + rb)) & 1U;
      }
      best.feasible = true;
      best.allocations = x;
      best.total_rr = objective;
    }
  }
  return best;
}

SolveResult lp2_grid(const Demand& first, const Demand& second, int rb_count,
                     double step, double tolerance) {
  assert(rb_count <= 5);
  assert(step >= 0.01 - 1e-12);
  return GridSearch(first, second, rb_count, step, tolerance).run();
}

bool subset_sum_partition(std::span<const int> integers) {
  long long sum = 0;
  for (int v : integers) sum += v;
  if (sum % 2 != 0) return false;
  const auto half = static_cast<std::size_t>(sum / 2);
  std::vector<char> reachable(half + 1, 0);
  reachable[0] = 1;
  for (int v : integers) {
    for (std::size_t s = half; s >= static_cast<std::size_t>(v) && s > 0; --s) {
      if (reachable[s - v]) reachable[s] = 1;
    }
  }
  return reachable[half] != 0;
}

SubsetResult enumerate_subsets_unpruned(std::span<const Demand> eligible, int max_size,
                                        int rb_count, const SubsetSolver& solver) {
  const int n = static_cast<int>(eligible.size());
  SubsetResult best;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    AllocationProblem sub;
    sub.rb_count = rb_count;
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1U) {
        members.push_back(i);
        sub.packets.push_back(eligible[i]);
      }
    }
    SolveResult r = solver(sub);
    if (!r.feasible) continue;
    if (best.empty() || r.total_rr > best.solution.total_rr) {
      best = {std::move(members), std::move(r)};
    }
  }
  return best;
}

UrllcOverlay urllc_exhaustive(std::span<const Packet> urllc_fifo,
                              std::span<const InflightView> inflight, int rb_count,
                              Tick now) {
  const int n = static_cast<int>(urllc_fifo.size() + inflight.size());
  if (rb_count * n > 14) {
    throw InstanceTooLargeError("URLLC oracle limited to K*n <= 14");
  }
  const int u = static_cast<int>(urllc_fifo.size());
  UrllcOverlay best;
  bool found = false;
  int best_overlap = 0;

  long long combos = 1;
  for (int k = 0; k < rb_count; ++k) combos *= u + 1;
  std::vector<int> owner(rb_count, 0);
  for (long long code = 0; code < combos; ++code) {
    long long c = code;
    for (int k = 0; k < rb_count; ++k) {
      owner[k] = static_cast<int>(c % (u + 1)) - 1;  // -1: no URLLC packet
      c /= u + 1;
    }
    UrllcOverlay cand;
    cand.inflight_count = static_cast<int>(inflight.size());
    cand.urllc_count = u;
    bool ok = true;
    int overlap = 0;
    for (int i = 0; i < u && ok; ++i) {
      const Packet& p = urllc_fifo[i];
      UrllcAssignment a{p.id, std::vector<int>(rb_count, 0), 1, 0.0};
      for (int k = 0; k < rb_count; ++k) {
        if (owner[k] == i) {
          a.rbs[k] = 1;
          a.rate += p.rates[k];
          ++overlap;
        }
      }
      if (p.expiry <= now) {
        ok = false;
        break;
      }
      const double needed = p.length_bits / static_cast<double>(p.expiry - now);
      ok = a.rate + 1e-9 * std::max(1.0, needed) >= needed;
      a.duration = puncture_duration(p, a.rate, now);
      cand.assignments.push_back(std::move(a));
    }
    if (!ok) continue;
    evaluate_victims(cand, inflight, rb_count, now);
    if (!found || cand.retained_rr > best.retained_rr + 1e-12 ||
        (std::abs(cand.retained_rr - best.retained_rr) <= 1e-12 && overlap < best_overlap)) {
      best = std::move(cand);
      best_overlap = overlap;
      found = true;
    }
  }
  if (!found) {
    best = UrllcOverlay{};
    best.inflight_count = static_cast<int>(inflight.size());
    best.urllc_count = u;
    for (const Packet& p : urllc_fifo) best.overloaded.push_back(p.id);
    evaluate_victims(best, inflight, rb_count, now);
  }
  return best;
}

}  // namespace mrr::oracle
