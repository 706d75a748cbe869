#include "mrr/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mrr/experiment.hpp"
#include "mrr/oracles.hpp"
#include "mrr/simulator.hpp"

namespace mrr::verify {
namespace {

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Demand random_demand(std::mt19937_64& rng, PacketId id, int rbs, double max_need) {
  Demand d;
  d.id = id;
  d.reward = uniform_int(rng, 0, 10);
  d.length_bits = uniform_int(rng, 1, 8);
  d.rates.resize(rbs);
  for (auto& r : d.rates) r = uniform_int(rng, 0, 20);
  const double total = std::accumulate(d.rates.begin(), d.rates.end(), 0.0);
  d.min_rate = std::round(uniform_real(rng, 0.0, max_need) * total * 4.0) / 4.0;
  return d;
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void record(SuiteResult& s, bool ok, int instance, const std::string& what) {
  ++s.total;
  if (ok) {
    ++s.passed;
  } else if (s.first_failure.empty()) {
    std::ostringstream os;
    os << "instance " << instance << ": " << what;
    s.first_failure = os.str();
  }
}

Packet urllc_packet(std::mt19937_64& rng, PacketId id, int rbs, Tick now) {
  Packet p;
  p.id = id;
  p.arrival = now;
  p.expiry = now + 1;
  p.urllc = true;
  p.rates.resize(rbs);
  for (auto& r : p.rates) r = uniform_int(rng, 1, 20);
  const double total = std::accumulate(p.rates.begin(), p.rates.end(), 0.0);
  p.length_bits = std::max(1.0, std::round(uniform_real(rng, 0.05, 1.1) * total));
  return p;
}

InflightView inflight_packet(std::mt19937_64& rng, PacketId id, int rbs,
                             std::vector<bool>& taken, Tick now) {
  InflightView v;
  v.id = id;
  v.reward = uniform_int(rng, 1, 10);
  v.share.assign(rbs, 0.0);
  v.rates.resize(rbs);
  for (auto& r : v.rates) r = uniform_int(rng, 1, 20);
  double rate = 0.0;
  for (int k = 0; k < rbs; ++k) {
    if (!taken[k] && uniform_int(rng, 0, 1) == 1) {
      v.share[k] = 1.0;
      taken[k] = true;
      rate += v.rates[k];
    }
  }
  v.expiry = now + uniform_int(rng, 1, 6);
  const double span = static_cast<double>(v.expiry - now);
  v.remaining_bits = std::round(uniform_real(rng, 0.3, 1.0) * std::max(1.0, rate) * span);
  v.length_bits = v.remaining_bits + uniform_int(rng, 0, 20);
  return v;
}

}  // namespace

AllocationProblem random_ilp_instance(std::mt19937_64& rng, int max_rbs, int max_packets) {
  AllocationProblem p;
  p.rb_count = uniform_int(rng, 1, max_rbs);
  const int n = uniform_int(rng, 1, max_packets);
  for (int i = 0; i < n; ++i) p.packets.push_back(random_demand(rng, i + 1, p.rb_count, 0.7));
  return p;
}

std::pair<Demand, Demand> random_pair(std::mt19937_64& rng, int max_rbs) {
  const int k = uniform_int(rng, 1, max_rbs);
  Demand a = random_demand(rng, 1, k, 0.8);
  Demand b = random_demand(rng, 2, k, 0.8);
  return {std::move(a), std::move(b)};
}

std::vector<int> random_even_sum_set(std::mt19937_64& rng, int max_size, int max_value) {
  std::vector<int> v(uniform_int(rng, 1, max_size));
  for (auto& x : v) x = uniform_int(rng, 1, max_value);
  const int sum = std::accumulate(v.begin(), v.end(), 0);
  if (sum % 2 != 0) {
    // Flip parity on one element while staying inside [1, max_value].
    v.back() += v.back() < max_value ? 1 : -1;
    if (v.back() == 0) v.back() = 2;
  }
  return v;
}

SuiteResult ilp_vs_exhaustive(const VerifyHooks& hooks, int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "ilp-vs-exhaustive";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const AllocationProblem p = random_ilp_instance(rng, 4, 3);
    const SolveResult got = hooks.ilp(p);
    const SolveResult want = oracle::ilp_exhaustive(p);
    bool ok = got.feasible == want.feasible;
    if (ok && want.feasible) {
      ok = close(got.total_rr, want.total_rr, kObjectiveTolerance) &&
           satisfies_constraints(p, got) &&
           close(total_reward_rate(p, got.allocations), got.total_rr, kObjectiveTolerance);
    }
    std::ostringstream os;
    os << "solver " << got.feasible << "/" << got.total_rr << " oracle " << want.feasible
       << "/" << want.total_rr;
    record(s, ok, i, os.str());
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult lp2_vs_grid(const VerifyHooks& hooks, int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "lp2-vs-grid";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const auto [a, b] = random_pair(rng, 5);
    const int k = static_cast<int>(a.rates.size());
    const SolveResult got = hooks.lp2(a, b, k);
    const SolveResult grid = oracle::lp2_grid(a, b, k, 0.01);
    const AllocationProblem pair{{a, b}, k};
    bool ok = true;
    if (grid.feasible && !got.feasible) ok = false;
    if (got.feasible) {
      ok = ok && satisfies_constraints(pair, got, 1e-6) &&
           close(total_reward_rate(pair, got.allocations), got.total_rr, 1e-9);
      if (grid.feasible) {
        ok = ok && got.total_rr >= grid.total_rr - 1e-2 * std::max(1.0, std::abs(grid.total_rr));
      }
    }
    std::ostringstream os;
    os << "lp2 " << got.feasible << "/" << got.total_rr << " grid " << grid.feasible << "/"
       << grid.total_rr;
    record(s, ok, i, os.str());
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult partition_vs_dp(const VerifyHooks& hooks, int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "partition-vs-dp";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const auto set = random_even_sum_set(rng, 12, 50);
    const bool got = partition_feasibility(set, hooks.ilp);
    const bool want = oracle::subset_sum_partition(set);
    record(s, got == want, i, got ? "reduction says yes, DP says no" : "reduction says no, DP says yes");
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult pruned_vs_unpruned(const VerifyHooks& hooks, int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "pruned-vs-unpruned";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const int k = uniform_int(rng, 1, 3);
    const int n = uniform_int(rng, 1, 5);
    std::vector<Demand> eligible;
    for (int j = 0; j < n; ++j) eligible.push_back(random_demand(rng, j + 1, k, 0.6));
    const int p = uniform_int(rng, 1, 3);
    const SubsetResult got = enumerate_subsets_pruned(eligible, p, k, hooks.ilp);
    const SubsetResult want = oracle::enumerate_subsets_unpruned(eligible, p, k, hooks.ilp);
    bool ok = got.empty() == want.empty();
    if (ok && !got.empty()) {
      ok = close(got.solution.total_rr, want.solution.total_rr, kObjectiveTolerance) &&
           static_cast<int>(got.members.size()) <= p;
    }
    record(s, ok, i, "pruned and unpruned enumeration disagree");
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult lp2_dominates_ilp(const VerifyHooks& hooks, int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "lp2-dominates-ilp";
  std::mt19937_64 rng(seed);
  for (int i = 0; i < instances; ++i) {
    const auto [a, b] = random_pair(rng, 4);
    const int k = static_cast<int>(a.rates.size());
    const SolveResult ilp = hooks.ilp(AllocationProblem{{a, b}, k});
    const SolveResult lp = hooks.lp2(a, b, k);
    bool ok = true;
    if (ilp.feasible) {
      ok = lp.feasible &&
           lp.total_rr >= ilp.total_rr - 1e-9 * std::max(1.0, std::abs(ilp.total_rr));
    }
    record(s, ok, i, "relaxation below integral optimum");
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult urllc_vs_oracle(int instances, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "urllc-vs-oracle";
  std::mt19937_64 rng(seed);
  const Tick now = 10;
  for (int i = 0; i < instances; ++i) {
    const int k = uniform_int(rng, 1, 4);
    const int n_inflight = uniform_int(rng, 0, std::min(3, 14 / k - 1));
    std::vector<Packet> fifo{urllc_packet(rng, 1000, k, now)};
    std::vector<bool> taken(k, false);
    std::vector<InflightView> inflight;
    for (int j = 0; j < n_inflight; ++j) {
      inflight.push_back(inflight_packet(rng, j + 1, k, taken, now));
    }
    const UrllcOverlay got = urllc_preempt(fifo, inflight, k, now);
    const UrllcOverlay want = oracle::urllc_exhaustive(fifo, inflight, k, now);
    bool ok = got.overloaded.empty() == want.overloaded.empty();
    ok = ok && got.retained_rr <= want.retained_rr + 1e-9;
    for (const auto& a : got.assignments) {
      double rate = 0.0;
      for (int rb = 0; rb < k; ++rb) rate += a.rbs[rb] * fifo[0].rates[rb];
      ok = ok && close(rate, a.rate, 1e-12);
      if (got.overloaded.empty()) {
        ok = ok && rate + 1e-9 >= fifo[0].length_bits / static_cast<double>(fifo[0].expiry - now);
      }
    }
    record(s, ok, i, "greedy preemption disagrees with exhaustive search");
  }
  s.seconds = t.seconds();
  return s;
}

SuiteResult claim2_simulations(int runs, std::uint64_t seed) {
  Timer t;
  SuiteResult s;
  s.name = "claim2-simulations";
  const RunConfig cfg = default_run_config();
  for (int i = 0; i < runs; ++i) {
    TrafficConfig traffic = cfg.traffic;
    traffic.arrival_rate = cfg.lambda_sweep.back();
    const SimReport r = run(parse_policy("mrr-lp2"), traffic, cfg.channel,
                            seed + static_cast<std::uint64_t>(i), cfg.mlwdf);
    std::ostringstream os;
    os << "seed " << r.seed << ": " << r.claim2_violations << " violations over "
       << r.claim2_pairs << " pairs, " << r.invariant_failures << " invariant failures";
    record(s, r.claim2_violations == 0 && r.invariant_failures == 0, i, os.str());
  }
  s.seconds = t.seconds();
  return s;
}

std::vector<SuiteResult> run_all(const VerifyHooks& hooks) {
  return {ilp_vs_exhaustive(hooks), lp2_vs_grid(hooks),      partition_vs_dp(hooks),
          pruned_vs_unpruned(hooks), lp2_dominates_ilp(hooks), urllc_vs_oracle(),
          claim2_simulations()};
}

}  // namespace mrr::verify
