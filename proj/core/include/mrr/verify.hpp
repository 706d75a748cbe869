#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mrr/solver.hpp"
#include "mrr/urllc.hpp"

namespace mrr::verify {

using Lp2Solver = std::function<SolveResult(const Demand&, const Demand&, int)>;

/// Solvers under test. Tests swap in perturbed versions to check that the
/// suites notice.
struct VerifyHooks {
  SubsetSolver ilp = solve_ilp_subset;
  Lp2Solver lp2 = solve_lp2;
};

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  double seconds = 0.0;
  std::string first_failure;

  bool ok() const { return total > 0 && passed == total; }
};

// Seeded instance generators shared with the tests.
AllocationProblem random_ilp_instance(std::mt19937_64& rng, int max_rbs, int max_packets);
std::pair<Demand, Demand> random_pair(std::mt19937_64& rng, int max_rbs);
std::vector<int> random_even_sum_set(std::mt19937_64& rng, int max_size, int max_value);

SuiteResult ilp_vs_exhaustive(const VerifyHooks& hooks, int instances = 200,
                              std::uint64_t seed = 101);
SuiteResult lp2_vs_grid(const VerifyHooks& hooks, int instances = 200,
                        std::uint64_t seed = 202);
SuiteResult partition_vs_dp(const VerifyHooks& hooks, int instances = 100,
                            std::uint64_t seed = 303);
SuiteResult pruned_vs_unpruned(const VerifyHooks& hooks, int instances = 100,
                               std::uint64_t seed = 404);
SuiteResult lp2_dominates_ilp(const VerifyHooks& hooks, int instances = 200,
                              std::uint64_t seed = 505);
SuiteResult urllc_vs_oracle(int instances = 200, std::uint64_t seed = 606);
/// Desk-scale mrr-lp2 simulations; each passes with zero two-subframe
/// violations and zero invariant failures.
SuiteResult claim2_simulations(int runs = 3, std::uint64_t seed = 1);

std::vector<SuiteResult> run_all(const VerifyHooks& hooks = {});

}  // namespace mrr::verify
