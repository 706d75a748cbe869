#pragma once

// Brute-force reference solvers. They share no code with the production
// solvers beyond the problem types and are only fit for desk-sized inputs.

#include <span>

#include "mrr/solver.hpp"
#include "mrr/urllc.hpp"

namespace mrr::oracle {

inline constexpr int kMaxExhaustiveVariables = 16;

/// Enumerates all 2^(K*n) 0/1 assignments. Throws InstanceTooLargeError
/// when K*n exceeds kMaxExhaustiveVariables.
SolveResult ilp_exhaustive(const AllocationProblem& problem);

/// Best point of the grid {0, step, 2 step, ..., 1}^K meeting both LP(2)
/// constraints within `tolerance`. K <= 5, step >= 0.01.
SolveResult lp2_grid(const Demand& first, const Demand& second, int rb_count,
                     double step = 0.01, double tolerance = 1e-6);

/// Subset-sum dynamic program: can the integers be split into two halves of
/// equal sum?
bool subset_sum_partition(std::span<const int> integers);

/// Every subset of size <= max_size solved independently; no pruning.
SubsetResult enumerate_subsets_unpruned(std::span<const Demand> eligible, int max_size,
                                        int rb_count, const SubsetSolver& solver);

/// Exact maximiser of the retained in-flight reward rate over every
/// exclusive assignment of RBs to the URLLC packets that meets all their
/// minimum rates. Requires K * (in-flight + URLLC) <= 14. When no such
/// assignment exists every URLLC packet is reported as overloaded.
UrllcOverlay urllc_exhaustive(std::span<const Packet> urllc_fifo,
                              std::span<const InflightView> inflight, int rb_count,
                              Tick now);

}  // namespace mrr::oracle
