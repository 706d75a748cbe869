#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mrr/policies.hpp"
#include "mrr/simulator.hpp"
#include "mrr/solver.hpp"
#include "mrr/verify.hpp"

using namespace mrr;

namespace {

std::vector<Packet> random_heads(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rate(0.5, 20.0), bits(50.0, 400.0);
  std::uniform_int_distribution<int> ttl(2, 40);
  std::vector<Packet> out;
  for (int i = 0; i < n; ++i) {
    Packet p;
    p.id = static_cast<PacketId>(i + 1);
    p.subscriber = i;
    p.expiry = ttl(rng);
    p.length_bits = bits(rng);
    p.reward = p.length_bits;
    for (int r = 0; r < k; ++r) p.rates.push_back(rate(rng));
    out.push_back(std::move(p));
  }
  return out;
}

void BM_IlpSubset(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::vector<AllocationProblem> problems;
  for (int i = 0; i < 64; ++i) {
    problems.push_back(verify::random_ilp_instance(rng, static_cast<int>(state.range(0)), 3));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_ilp_subset(problems[i++ % problems.size()]));
  }
}
BENCHMARK(BM_IlpSubset)->Arg(2)->Arg(4)->Arg(6);

void BM_Lp2(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::vector<std::pair<Demand, Demand>> pairs;
  for (int i = 0; i < 64; ++i) pairs.push_back(verify::random_pair(rng, static_cast<int>(state.range(0))));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(solve_lp2(a, b, static_cast<int>(a.rates.size())));
  }
}
BENCHMARK(BM_Lp2)->Arg(5)->Arg(15)->Arg(45);

template <class F>
void run_policy(benchmark::State& state, F select) {
  const int k = 15;
  const auto heads = random_heads(static_cast<int>(state.range(0)), k, 3);
  std::vector<double> mean(heads.size(), 1.0);
  SchedulingContext ctx;
  ctx.rb_count = k;
  ctx.free_rbs.assign(k, true);
  ctx.eligible = heads;
  ctx.mean_rate = mean;
  for (auto _ : state) benchmark::DoNotOptimize(select(ctx));
}

void BM_MrrLp2(benchmark::State& s) { run_policy(s, mrr_lp2_select); }
void BM_MrrIlp4(benchmark::State& s) {
  run_policy(s, [](const SchedulingContext& c) { return mrr_ilp_select(c, 4); });
}
void BM_Edf(benchmark::State& s) { run_policy(s, edf_select); }
void BM_Mud(benchmark::State& s) { run_policy(s, mud_select); }
void BM_Mlwdf(benchmark::State& s) { run_policy(s, mlwdf_select); }
BENCHMARK(BM_MrrLp2)->Arg(8)->Arg(24);
BENCHMARK(BM_MrrIlp4)->Arg(8)->Arg(24);
BENCHMARK(BM_Edf)->Arg(24);
BENCHMARK(BM_Mud)->Arg(24);
BENCHMARK(BM_Mlwdf)->Arg(24);

}  // namespace

BENCHMARK_MAIN();
