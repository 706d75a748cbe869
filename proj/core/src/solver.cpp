#include "mrr/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "mrr/simplex.hpp"

namespace mrr {
namespace {

bool meets(double rate, double required) {
  return rate + 1e-9 * std::max(1.0, std::abs(required)) >= required;
}

class BranchAndBound {
 public:
  explicit BranchAndBound(const AllocationProblem& problem)
      : p_(problem),
        n_(static_cast<int>(problem.packets.size())),
        k_(problem.rb_count),
        owner_(k_, -1),
        rate_(n_, 0.0),
        remaining_(n_, 0.0) {
    // Visit RBs with the largest attainable reward rate first; the bound
    // tightens fastest that way.
    best_gain_.assign(k_, 0.0);
    for (int k = 0; k < k_; ++k) {
      for (int i = 0; i < n_; ++i) {
        best_gain_[k] = std::max(best_gain_[k], gain(i, k));
        remaining_[i] += p_.packets[i].rates[k];
      }
    }
    order_.resize(k_);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return best_gain_[a] > best_gain_[b]; });
    suffix_bound_.assign(k_ + 1, 0.0);
    for (int d = k_ - 1; d >= 0; --d) {
      suffix_bound_[d] = suffix_bound_[d + 1] + best_gain_[order_[d]];
    }
    owners_by_gain_.resize(k_);
    for (int k = 0; k < k_; ++k) {
      auto& o = owners_by_gain_[k];
      o.resize(n_);
      std::iota(o.begin(), o.end(), 0);
      std::stable_sort(o.begin(), o.end(),
                       [&](int a, int b) { return gain(a, k) > gain(b, k); });
    }
  }

  SolveResult run() {
    search(0, 0.0);
    SolveResult out;
    out.feasible = found_;
    if (!found_) return out;
    out.allocations.assign(n_, std::vector<double>(k_, 0.0));
    for (int k = 0; k < k_; ++k) {
      if (best_owner_[k] >= 0) out.allocations[best_owner_[k]][k] = 1.0;
    }
    out.total_rr = total_reward_rate(p_, out.allocations);
    return out;
  }

 private:
  double gain(int i, int k) const {
    return p_.packets[i].reward_per_bit() * p_.packets[i].rates[k];
  }

  void search(int depth, double value) {
    for (int i = 0; i < n_; ++i) {
      if (!meets(rate_[i] + remaining_[i], p_.packets[i].min_rate)) return;
    }
    if (found_ && value + suffix_bound_[depth] <= best_value_) return;
    if (depth == k_) {
      found_ = true;
      best_value_ = value;
      best_owner_ = owner_;
      return;
    }
    const int k = order_[depth];
    for (int i = 0; i < n_; ++i) remaining_[i] -= p_.packets[i].rates[k];
    // Every RB goes to someone: with w >= 0 and r >= 0 an extra RB never
    // hurts the objective or a rate constraint.
    for (int i : owners_by_gain_[k]) {
      owner_[k] = i;
      rate_[i] += p_.packets[i].rates[k];
      search(depth + 1, value + gain(i, k));
      rate_[i] -= p_.packets[i].rates[k];
    }
    owner_[k] = -1;
    for (int i = 0; i < n_; ++i) remaining_[i] += p_.packets[i].rates[k];
  }

  const AllocationProblem& p_;
  int n_;
  int k_;
  std::vector<int> order_;
  std::vector<double> best_gain_;
  std::vector<double> suffix_bound_;
  std::vector<std::vector<int>> owners_by_gain_;
  std::vector<int> owner_;
  std::vector<double> rate_;
  std::vector<double> remaining_;
  bool found_ = false;
  double best_value_ = 0.0;
  std::vector<int> best_owner_;
};

bool lexicographically_smaller(std::span<const Demand> eligible,
                               const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<PacketId> ia, ib;
  for (int i : a) ia.push_back(eligible[i].id);
  for (int i : b) ib.push_back(eligible[i].id);
  std::sort(ia.begin(), ia.end());
  std::sort(ib.begin(), ib.end());
  return std::lexicographical_compare(ia.begin(), ia.end(), ib.begin(), ib.end());
}

// Visits every size-`size` combination of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int size, Fn&& fn) {
  if (size > n) return;
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    fn(idx);
    int i = size - 1;
    while (i >= 0 && idx[i] == n - size + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

double total_reward_rate(const AllocationProblem& problem,
                         const std::vector<std::vector<double>>& allocations) {
  double total = 0.0;
  for (std::size_t i = 0; i < allocations.size(); ++i) {
    const auto& d = problem.packets[i];
    double rate = 0.0;
    for (int k = 0; k < problem.rb_count; ++k) rate += allocations[i][k] * d.rates[k];
    total += d.reward_per_bit() * rate;
  }
  return total;
}

bool satisfies_constraints(const AllocationProblem& problem, const SolveResult& result,
                           double slack) {
  if (!result.feasible) return true;
  if (result.allocations.size() != problem.packets.size()) return false;
  std::vector<double> per_rb(problem.rb_count, 0.0);
  for (std::size_t i = 0; i < problem.packets.size(); ++i) {
    const auto& x = result.allocations[i];
    const auto& d = problem.packets[i];
    double rate = 0.0;
    for (int k = 0; k < problem.rb_count; ++k) {
      if (x[k] < -slack || x[k] > 1.0 + slack) return false;
      rate += x[k] * d.rates[k];
      per_rb[k] += x[k];
    }
    if (rate < d.min_rate - slack * std::max(1.0, d.min_rate)) return false;
  }
  return std::all_of(per_rb.begin(), per_rb.end(),
                     [&](double s) { return s <= 1.0 + slack; });
}

SolveResult solve_ilp_subset(const AllocationProblem& problem) {
  assert(!problem.packets.empty());
  for ([[maybe_unused]] const auto& d : problem.packets) {
    assert(static_cast<int>(d.rates.size()) == problem.rb_count);
  }
  return BranchAndBound(problem).run();
}

SubsetResult enumerate_subsets_pruned(std::span<const Demand> eligible, int max_size,
                                      int rb_count, const SubsetSolver& solver,
                                      int* solver_calls) {
  assert(max_size >= 1);
  const int n = static_cast<int>(eligible.size());
  assert(n <= 64);
  std::vector<std::uint64_t> infeasible;
  SubsetResult best;
  int calls = 0;

  for (int size = 1; size <= std::min(max_size, n); ++size) {
    for_each_combination(n, size, [&](const std::vector<int>& idx) {
      std::uint64_t mask = 0;
      for (int i : idx) mask |= std::uint64_t{1} << i;
      for (std::uint64_t bad : infeasible) {
        if ((mask & bad) == bad) return;
      }
      AllocationProblem sub;
      sub.rb_count = rb_count;
      for (int i : idx) sub.packets.push_back(eligible[i]);
      ++calls;
      SolveResult r = solver(sub);
      if (!r.feasible) {
        infeasible.push_back(mask);
        return;
      }
      if (best.empty()) {
        best = {idx, std::move(r)};
        return;
      }
      const double tol = kObjectiveTolerance * std::max(1.0, std::abs(best.solution.total_rr));
      if (r.total_rr > best.solution.total_rr + tol ||
          (r.total_rr >= best.solution.total_rr - tol &&
           lexicographically_smaller(eligible, idx, best.members))) {
        best = {idx, std::move(r)};
      }
    });
  }
  if (solver_calls != nullptr) *solver_calls = calls;
  return best;
}

SolveResult solve_lp2(const Demand& first, const Demand& second, int rb_count) {
  assert(static_cast<int>(first.rates.size()) == rb_count);
  assert(static_cast<int>(second.rates.size()) == rb_count);
  const double a1 = first.reward_per_bit();
  const double a2 = second.reward_per_bit();
  const double second_capacity =
      std::accumulate(second.rates.begin(), second.rates.end(), 0.0);

  // maximize x'(a1 r1 - a2 r2)
  //   s.t.  -r1'x <= -rmin1,   r2'x <= 1'r2 - rmin2,   x <= 1
  std::vector<std::vector<double>> A;
  std::vector<double> b;
  std::vector<double> c(rb_count);
  A.emplace_back(rb_count);
  A.emplace_back(rb_count);
  for (int k = 0; k < rb_count; ++k) {
    c[k] = a1 * first.rates[k] - a2 * second.rates[k];
    A[0][k] = -first.rates[k];
    A[1][k] = second.rates[k];
  }
  b.push_back(-first.min_rate);
  b.push_back(second_capacity - second.min_rate);
  for (int k = 0; k < rb_count; ++k) {
    std::vector<double> row(rb_count, 0.0);
    row[k] = 1.0;
    A.push_back(std::move(row));
    b.push_back(1.0);
  }

  const lp::Solution lp = lp::maximize(A, b, c);
  SolveResult out;
  if (lp.status != lp::Status::kOptimal) return out;

  std::vector<double> x = lp.x;
  for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  std::vector<double> y(rb_count);
  for (int k = 0; k < rb_count; ++k) y[k] = 1.0 - x[k];

  AllocationProblem pair{{first, second}, rb_count};
  out.feasible = true;
  out.allocations = {std::move(x), std::move(y)};
  out.total_rr = total_reward_rate(pair, out.allocations);
  if (!satisfies_constraints(pair, out)) return SolveResult{};
  return out;
}

bool partition_feasibility(std::span<const int> integers, const SubsetSolver& solver) {
  long long sum = 0;
  for (int v : integers) {
    if (v <= 0) throw Error("partition input must be positive integers");
    sum += v;
  }
  if (sum % 2 != 0) throw OddSumError("partition needs an even total");
  if (integers.empty()) return true;

  const int k = static_cast<int>(integers.size());
  Demand d;
  d.reward = 1.0;
  d.length_bits = 1.0;
  d.rates.assign(integers.begin(), integers.end());
  d.min_rate = static_cast<double>(sum) / 2.0;
  AllocationProblem problem{{d, d}, k};
  problem.packets[0].id = 1;
  problem.packets[1].id = 2;
  return solver(problem).feasible;
}

}  // namespace mrr
