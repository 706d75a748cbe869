#include "mrr/policies.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "mrr/rate_math.hpp"
#include "mrr/solver.hpp"

namespace mrr {
namespace {

constexpr double kFractional = 1e-9;

std::vector<double> rates_on(const Packet& p, const std::vector<int>& rbs) {
  std::vector<double> out;
  out.reserve(rbs.size());
  for (int k : rbs) out.push_back(p.rates[k]);
  return out;
}

std::vector<double> expand(const std::vector<double>& compact,
                           const std::vector<int>& rbs, int rb_count) {
  std::vector<double> out(rb_count, 0.0);
  for (std::size_t j = 0; j < rbs.size(); ++j) out[rbs[j]] = compact[j];
  return out;
}

Demand demand_for(const Packet& p, const std::vector<int>& rbs, double required) {
  return Demand{p.id, p.reward, p.length_bits, rates_on(p, rbs), required};
}

ScheduleDecision whole_band(const Packet& p, const SchedulingContext& ctx,
                            const std::vector<int>& rbs) {
  ScheduleDecision d;
  std::vector<double> share(ctx.rb_count, 0.0);
  for (int k : rbs) share[k] = 1.0;
  d.total_rr = reward_rate(p.reward, p.length_bits, share, p.rates);
  d.chosen = {p.id};
  d.allocations = {Allocation{p.id, std::move(share)}};
  d.added_count = 1;
  return d;
}

bool fits(double rate, double required) {
  return rate + 1e-9 * std::max(1.0, required) >= required;
}

// LP(2) for one pair, with the earlier-deadline packet first. The plain
// minimum rates are tried first; that solution is kept only if no RB is
// split, or every split RB leaves the later packet at least two spare
// subframes. Otherwise the later packet (both, on equal deadlines) loses
// two subframes of its window.
std::optional<SolveResult> pair_solution(const Packet& early, const Packet& late,
                                         Tick now, const std::vector<int>& rbs) {
  const Tick d1 = early.time_to_expiry(now);
  const Tick d2 = late.time_to_expiry(now);
  assert(d1 <= d2);
  const int k = static_cast<int>(rbs.size());

  {
    const Demand a = demand_for(early, rbs, *adjusted_min_rate(early.length_bits, d1, true));
    const Demand b = demand_for(late, rbs, *adjusted_min_rate(late.length_bits, d2, true));
    SolveResult r = solve_lp2(a, b, k);
    if (r.feasible) {
      bool ok = true;
      for (double x : r.allocations[0]) {
        if (x > kFractional && x < 1.0 - kFractional &&
            x * static_cast<double>(d2 - d1) < 2.0) {
          ok = false;
        }
      }
      if (ok) return r;
    }
  }

  const auto late_rate = adjusted_min_rate(late.length_bits, d2, false);
  const auto early_rate = d1 == d2 ? adjusted_min_rate(early.length_bits, d1, false)
                                   : adjusted_min_rate(early.length_bits, d1, true);
  if (!late_rate || !early_rate) return std::nullopt;
  SolveResult r = solve_lp2(demand_for(early, rbs, *early_rate),
                            demand_for(late, rbs, *late_rate), k);
  if (!r.feasible) return std::nullopt;
  return r;
}

ScheduleDecision from_subset(std::span<const Packet> packets, const SubsetResult& best,
                             const std::vector<int>& rbs, int rb_count) {
  ScheduleDecision d;
  if (best.empty()) return d;
  for (std::size_t j = 0; j < best.members.size(); ++j) {
    const Packet& p = packets[best.members[j]];
    d.chosen.push_back(p.id);
    d.allocations.push_back({p.id, expand(best.solution.allocations[j], rbs, rb_count)});
  }
  d.total_rr = best.solution.total_rr;
  d.added_count = static_cast<int>(d.chosen.size());
  return d;
}

// Per-RB argmax assignment shared by MxRate and M-LWDF; `better(i, j, k)`
// says packet i beats packet j on RB k.
template <typename Better>
ScheduleDecision per_rb_assignment(const SchedulingContext& ctx, Better&& better) {
  ScheduleDecision d;
  const auto rbs = ctx.free_indices();
  if (ctx.eligible.empty() || rbs.empty()) return d;
  const auto n = ctx.eligible.size();
  std::vector<std::vector<double>> shares(n, std::vector<double>(ctx.rb_count, 0.0));
  for (int k : rbs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (better(i, best, k)) best = i;
    }
    shares[best][k] = 1.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Packet& p = ctx.eligible[i];
    if (std::none_of(shares[i].begin(), shares[i].end(), [](double s) { return s > 0; })) {
      continue;
    }
    d.total_rr += reward_rate(p.reward, p.length_bits, shares[i], p.rates);
    d.chosen.push_back(p.id);
    d.allocations.push_back({p.id, std::move(shares[i])});
  }
  d.added_count = static_cast<int>(d.chosen.size());
  return d;
}

}  // namespace

std::vector<int> SchedulingContext::free_indices() const {
  std::vector<int> out;
  for (int k = 0; k < rb_count; ++k) {
    if (free_rbs[k]) out.push_back(k);
  }
  return out;
}

ScheduleDecision mrr_lp2_select(const SchedulingContext& ctx) {
  const auto rbs = ctx.free_indices();
  ScheduleDecision best;
  if (rbs.empty()) return best;
  const auto& J = ctx.eligible;

  for (std::size_t i = 0; i < J.size(); ++i) {
    const Packet& pi = J[i];
    if (pi.expired(ctx.now)) continue;
    double capacity = 0.0;
    for (int k : rbs) capacity += pi.rates[k];
    if (!fits(capacity, min_rate(pi.length_bits, pi.expiry, ctx.now))) continue;

    ScheduleDecision single = whole_band(pi, ctx, rbs);
    if (best.empty() || single.total_rr > best.total_rr) best = std::move(single);

    for (std::size_t j = i + 1; j < J.size(); ++j) {
      const Packet& pj = J[j];
      if (pj.expired(ctx.now)) continue;
      const bool i_first = pi.expiry <= pj.expiry;
      const Packet& early = i_first ? pi : pj;
      const Packet& late = i_first ? pj : pi;
      const auto sol = pair_solution(early, late, ctx.now, rbs);
      if (!sol || sol->total_rr <= best.total_rr) continue;
      ScheduleDecision pair;
      pair.chosen = {early.id, late.id};
      pair.allocations = {{early.id, expand(sol->allocations[0], rbs, ctx.rb_count)},
                          {late.id, expand(sol->allocations[1], rbs, ctx.rb_count)}};
      pair.total_rr = sol->total_rr;
      pair.added_count = 2;
      best = std::move(pair);
    }
  }
  return best;
}

ScheduleDecision mrr_ilp_select(const SchedulingContext& ctx, int max_subset) {
  if (max_subset < 1) throw Error("mrr-ilp needs a subset bound of at least 1");
  const auto rbs = ctx.free_indices();
  if (rbs.empty()) return {};
  std::vector<Packet> live;
  std::vector<Demand> demands;
  for (const Packet& p : ctx.eligible) {
    if (p.expired(ctx.now)) continue;
    live.push_back(p);
    demands.push_back(demand_for(p, rbs, min_rate(p.length_bits, p.expiry, ctx.now)));
  }
  if (live.empty()) return {};
  const SubsetResult best = enumerate_subsets_pruned(
      demands, max_subset, static_cast<int>(rbs.size()), solve_ilp_subset);
  return from_subset(live, best, rbs, ctx.rb_count);
}

ScheduleDecision mud_select(const SchedulingContext& ctx) { return mrr_ilp_select(ctx, 1); }

ScheduleDecision edf_select(const SchedulingContext& ctx) {
  const auto rbs = ctx.free_indices();
  if (ctx.eligible.empty() || rbs.empty()) return {};
  const Packet* pick = &ctx.eligible.front();
  for (const Packet& p : ctx.eligible) {
    if (p.expiry < pick->expiry || (p.expiry == pick->expiry && p.id < pick->id)) pick = &p;
  }
  return whole_band(*pick, ctx, rbs);
}

ScheduleDecision mxrate_select(const SchedulingContext& ctx) {
  const auto& J = ctx.eligible;
  return per_rb_assignment(ctx, [&](std::size_t a, std::size_t b, int k) {
    if (J[a].rates[k] != J[b].rates[k]) return J[a].rates[k] > J[b].rates[k];
    return J[a].id < J[b].id;
  });
}

double mlwdf_metric(const Packet& p, int rb, Tick now, double mean_rate,
                    const MlwdfParams& params) {
  const double lifetime = static_cast<double>(std::max<Tick>(1, p.expiry - p.arrival));
  const double gamma = -std::log(params.delta) / lifetime;
  const double waiting = static_cast<double>(std::max<Tick>(0, now - p.arrival));
  return gamma * waiting * p.rates[rb] / std::max(mean_rate, 1e-9);
}

ScheduleDecision mlwdf_select(const SchedulingContext& ctx) {
  const auto& J = ctx.eligible;
  std::vector<double> mean(J.size(), 1.0);
  for (std::size_t i = 0; i < J.size(); ++i) {
    const auto m = static_cast<std::size_t>(J[i].subscriber);
    if (m < ctx.mean_rate.size()) mean[i] = ctx.mean_rate[m];
  }
  return per_rb_assignment(ctx, [&](std::size_t a, std::size_t b, int k) {
    const double ma = mlwdf_metric(J[a], k, ctx.now, mean[a], ctx.mlwdf);
    const double mb = mlwdf_metric(J[b], k, ctx.now, mean[b], ctx.mlwdf);
    if (ma != mb) return ma > mb;
    if (J[a].rates[k] != J[b].rates[k]) return J[a].rates[k] > J[b].rates[k];
    return J[a].id < J[b].id;
  });
}

std::string PolicySpec::name() const {
  switch (kind) {
    case PolicyKind::kMrrLp2: return "mrr-lp2";
    case PolicyKind::kMrrIlp: return "mrr-ilp:" + std::to_string(subset_limit);
    case PolicyKind::kEdf: return "edf";
    case PolicyKind::kMxRate: return "mxrate";
    case PolicyKind::kMud: return "mud";
    case PolicyKind::kMlwdf: return "mlwdf";
  }
  return "?";
}

ScheduleDecision PolicySpec::select(const SchedulingContext& ctx) const {
  switch (kind) {
    case PolicyKind::kMrrLp2: return mrr_lp2_select(ctx);
    case PolicyKind::kMrrIlp: return mrr_ilp_select(ctx, subset_limit);
    case PolicyKind::kEdf: return edf_select(ctx);
    case PolicyKind::kMxRate: return mxrate_select(ctx);
    case PolicyKind::kMud: return mud_select(ctx);
    case PolicyKind::kMlwdf: return mlwdf_select(ctx);
  }
  return {};
}

PolicySpec parse_policy(std::string_view name) {
  if (name == "mrr-lp2") return {PolicyKind::kMrrLp2, 0};
  if (name == "edf") return {PolicyKind::kEdf, 0};
  if (name == "mxrate") return {PolicyKind::kMxRate, 0};
  if (name == "mud") return {PolicyKind::kMud, 0};
  if (name == "mlwdf") return {PolicyKind::kMlwdf, 0};
  constexpr std::string_view prefix = "mrr-ilp:";
  if (name.starts_with(prefix)) {
    const auto digits = name.substr(prefix.size());
    int p = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && p >= 1) {
      return {PolicyKind::kMrrIlp, p};
    }
  }
  throw ConfigError("unknown policy '" + std::string(name) + "'");
}

bool respects_rb_exclusivity(const ScheduleDecision& d, double slack) {
  if (d.allocations.empty()) return true;
  std::vector<double> sum(d.allocations.front().share.size(), 0.0);
  for (const auto& a : d.allocations) {
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += a.share[k];
  }
  return std::all_of(sum.begin(), sum.end(), [&](double s) { return s <= 1.0 + slack; });
}

}  // namespace mrr
