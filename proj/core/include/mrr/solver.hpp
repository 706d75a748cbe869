#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

/// One packet as the allocation problem sees it: reward, length, per-RB
/// rates and the rate it must reach to meet its deadline.
struct Demand {
  PacketId id = 0;
  double reward = 0.0;
  double length_bits = 1.0;
  std::vector<double> rates;
  double min_rate = 0.0;

  double reward_per_bit() const { return reward / length_bits; }
};

struct AllocationProblem {
  std::vector<Demand> packets;
  int rb_count = 0;
};

struct SolveResult {
  bool feasible = false;
  std::vector<std::vector<double>> allocations;  // one share vector per packet
  double total_rr = 0.0;
};

/// A subset together with the solution found for it. `members` indexes
/// into the eligible list handed to enumerate_subsets_pruned.
struct SubsetResult {
  std::vector<int> members;
  SolveResult solution;

  bool empty() const { return members.empty(); }
};

using SubsetSolver = std::function<SolveResult(const AllocationProblem&)>;

inline constexpr double kFeasibilitySlack = 1e-6;
inline constexpr double kObjectiveTolerance = 1e-9;

/// Exact 0/1 maximiser of sum_i (w_i/l_i) x_i'r_i subject to every packet
/// reaching its minimum rate and each RB going to at most one packet.
/// Depth-first branch and bound over RB owners.
SolveResult solve_ilp_subset(const AllocationProblem& problem);

/// Searches subsets of `eligible` of size <= max_size in ascending size
/// order. Supersets of an infeasible subset are never handed to `solver`.
/// Ties on total reward rate go to the lexicographically smallest id set.
SubsetResult enumerate_subsets_pruned(std::span<const Demand> eligible, int max_size,
                                      int rb_count, const SubsetSolver& solver,
                                      int* solver_calls = nullptr);

/// Two-packet LP time relaxation: the second packet receives 1 - x of
/// every RB. Exact up to simplex round-off.
SolveResult solve_lp2(const Demand& first, const Demand& second, int rb_count);

/// Reduction of integer partition to two-packet feasibility: both packets
/// see rates equal to the integers and need half their sum.
bool partition_feasibility(std::span<const int> integers,
                           const SubsetSolver& solver = solve_ilp_subset);

/// Checks per-packet rate and per-RB exclusivity constraints within `slack`.
bool satisfies_constraints(const AllocationProblem& problem, const SolveResult& result,
                           double slack = kFeasibilitySlack);

double total_reward_rate(const AllocationProblem& problem,
                         const std::vector<std::vector<double>>& allocations);

}  // namespace mrr
