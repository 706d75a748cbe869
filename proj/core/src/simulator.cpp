#include "mrr/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include "mrr/rate_math.hpp"
#include "mrr/urllc.hpp"

namespace mrr {
namespace {

constexpr Tick kForever = std::numeric_limits<Tick>::max();
constexpr double kFractional = 1e-9;

bool by_deadline(const Packet& a, const Packet& b) {
  return a.expiry != b.expiry ? a.expiry < b.expiry : a.id < b.id;
}

}  // namespace

// ---------------------------------------------------------------------------
// Claim2Monitor

std::pair<Tick, Tick> Claim2Monitor::ceiling_bounds(Tick d1, Tick d2, double x) {
  const auto first = static_cast<Tick>(std::ceil(x * static_cast<double>(d1) - 1e-9));
  const auto second =
      static_cast<Tick>(std::ceil((1.0 - x) * static_cast<double>(d2) - 1e-9)) + first;
  return {first, second};
}

void Claim2Monitor::track(PacketId first, PacketId second, Tick start, Tick d1, Tick d2) {
  index_[first] = pairs_list_.size();
  index_[second] = pairs_list_.size();
  pairs_list_.push_back({first, second, start, d1, d2, false, 0});
  ++pairs_;
}

void Claim2Monitor::exempt(PacketId id) {
  if (auto it = index_.find(id); it != index_.end()) pairs_list_[it->second].exempt = true;
}

void Claim2Monitor::completed(PacketId id, Tick at) { resolve(id, at, true); }
void Claim2Monitor::dropped(PacketId id, Tick at) { resolve(id, at, false); }

void Claim2Monitor::resolve(PacketId id, Tick at, bool delivered) {
  const auto it = index_.find(id);
  if (it == index_.end()) return;
  Pair& p = pairs_list_[it->second];
  index_.erase(it);
  ++p.resolved;
  if (p.exempt) return;
  const Tick limit = id == p.first ? p.d1 : p.d2 + 2;
  if (!delivered || at - p.start > limit) ++violations_;
}

// ---------------------------------------------------------------------------
// Simulator

Simulator::Simulator(SimConfig cfg, std::vector<Packet> stream, RateProvider rates)
    : cfg_(std::move(cfg)),
      rate_provider_(std::move(rates)),
      rb_count_(cfg_.channel.rb_count),
      subscribers_(cfg_.channel.subscribers),
      stream_(std::move(stream)),
      queues_(subscribers_),
      grants_(rb_count_),
      punctured_(rb_count_, false),
      mean_rate_(subscribers_, 0.0) {
  cfg_.channel.validate();
  if (!std::is_sorted(stream_.begin(), stream_.end(),
                      [](const Packet& a, const Packet& b) { return a.arrival < b.arrival; })) {
    throw Error("packet stream must be sorted by arrival");
  }
  for (const auto& p : stream_) {
    if (p.subscriber < 0 || p.subscriber >= subscribers_) {
      throw Error("packet " + std::to_string(p.id) + " targets an unknown subscriber");
    }
    if (p.expiry <= p.arrival) {
      throw Error("packet " + std::to_string(p.id) + " expires before it arrives");
    }
  }
  report_.policy = cfg_.policy.name();
  report_.seed = cfg_.traffic.seed;
  report_.lambda = cfg_.traffic.arrival_rate;
}

Simulator Simulator::from_config(const SimConfig& cfg) {
  cfg.channel.validate();
  auto stream = generate_stream(cfg.traffic, cfg.channel.subscribers);
  auto distances = place_subscribers(cfg.channel);
  RateProvider provider = [channel = cfg.channel, d = std::move(distances)](Tick frame) {
    return draw_rates(channel, d, frame);
  };
  return Simulator(cfg, std::move(stream), std::move(provider));
}

std::size_t Simulator::queued() const { return static_cast<std::size_t>(queued_count_); }

double Simulator::bits_sent(PacketId id) const {
  const auto it = sent_bits_.find(id);
  return it == sent_bits_.end() ? 0.0 : it->second;
}

bool Simulator::delivered(PacketId id) const { return delivered_.contains(id); }

bool Simulator::done() const {
  return next_arrival_ == stream_.size() && queued_count_ == 0 && inflight_.empty() &&
         urllc_fifo_.empty();
}

void Simulator::log(const char* event, PacketId id, const std::vector<int>& rbs) {
  if (cfg_.event_log == nullptr) return;
  auto& os = *cfg_.event_log;
  os << clock_.now() << ',' << event << ',' << id << ',';
  for (std::size_t i = 0; i < rbs.size(); ++i) os << (i ? " " : "") << rbs[i];
  os << '\n';
}

void Simulator::step() {
  if (clock_.at_frame_start() || rates_.rbs() == 0) {
    rates_ = rate_provider_(clock_.frame_index());
    if (rates_.subscribers() != subscribers_ || rates_.rbs() != rb_count_) {
      throw Error("rate provider returned a matrix of the wrong shape");
    }
    if (!mean_rate_ready_) {
      for (int m = 0; m < subscribers_; ++m) {
        const auto row = rates_.row(m);
        double sum = 0.0;
        for (double r : row) sum += r;
        mean_rate_[m] = sum / rb_count_;
      }
      mean_rate_ready_ = true;
    }
  }
  admit_arrivals();
  serve_urllc();

  // Completions are resolved inside the subframe: RB time a finished packet
  // leaves behind goes straight back to the scheduler.
  std::vector<double> served(subscribers_, 0.0);
  double tau = 0.0;
  while (true) {
    schedule(tau);
    const double next = next_completion(tau);
    transmit(tau, next, served);
    const int finished = deliver_finished();
    if (next >= 1.0) break;
    if (finished == 0) {  // round-off left a sliver; finish the subframe
      transmit(next, 1.0, served);
      deliver_finished();
      break;
    }
    tau = next;
  }
  const double beta = cfg_.mlwdf.smoothing;
  for (int m = 0; m < subscribers_; ++m) {
    mean_rate_[m] = (1.0 - beta) * mean_rate_[m] + beta * served[m];
  }
  settle();
  if (cfg_.check_invariants) check_invariants();
  ++report_.subframes;
  clock_.advance();
}

void Simulator::admit_arrivals() {
  const Tick now = clock_.now();
  while (next_arrival_ < stream_.size() && stream_[next_arrival_].arrival <= now) {
    Packet p = stream_[next_arrival_++];
    log("arrive", p.id);
    if (p.urllc) {
      ++report_.urllc_sent;
      urllc_fifo_.push_back(std::move(p));
      continue;
    }
    ++report_.arrived;
    report_.arrived_reward += p.reward;
    report_.arrived_bytes += p.length_bytes();
    auto& q = queues_[p.subscriber];
    q.insert(std::upper_bound(q.begin(), q.end(), p, by_deadline), std::move(p));
    ++queued_count_;
  }
}

void Simulator::serve_urllc() {
  const Tick now = clock_.now();
  std::erase_if(urllc_tx_, [&](const UrllcTx& t) { return t.until <= now; });
  std::vector<bool> busy(rb_count_, false);
  for (const auto& t : urllc_tx_) {
    for (int k = 0; k < rb_count_; ++k) {
      if (t.rbs[k] != 0) busy[k] = true;
    }
  }
  if (urllc_fifo_.empty()) {
    punctured_ = busy;
    return;
  }

  std::vector<Packet> fifo(urllc_fifo_.begin(), urllc_fifo_.end());
  urllc_fifo_.clear();
  for (auto& u : fifo) {
    const auto row = rates_.row(u.subscriber);
    u.rates.assign(row.begin(), row.end());
  }
  std::vector<InflightView> views;
  views.reserve(inflight_.size());
  for (const auto& [id, f] : inflight_) {
    views.push_back({id, f.packet.reward, f.packet.length_bits, f.share, f.packet.rates,
                     f.remaining_bits, f.packet.expiry});
  }

  const UrllcOverlay overlay = urllc_preempt(fifo, views, rb_count_, now, busy);
  for (const auto& a : overlay.assignments) {
    std::vector<int> rbs;
    for (int k = 0; k < rb_count_; ++k) {
      if (a.rbs[k] != 0) {
        busy[k] = true;
        rbs.push_back(k);
      }
    }
    urllc_tx_.push_back({a.id, a.rbs, now + a.duration});
    log("urllc", a.id, rbs);
  }
  for (PacketId id : overlay.overloaded) {
    ++report_.urllc_missed;
    ++report_.urllc_overload_events;
    log("urllc-miss", id);
  }
  for (PacketId id : overlay.victims) claim2_.exempt(id);
  for (PacketId id : overlay.dropped) {
    ++report_.urllc_victims_dropped;
    drop_inflight(id, "punctured");
  }
  punctured_ = busy;
}

void Simulator::clean_grants(int rb) {
  const Tick now = clock_.now();
  auto& g = grants_[rb];
  while (!g.empty() && (g.front().until <= now || !inflight_.contains(g.front().owner))) {
    g.pop_front();
  }
}

std::vector<bool> Simulator::free_rbs() {
  std::vector<bool> out(rb_count_, false);
  for (int k = 0; k < rb_count_; ++k) {
    clean_grants(k);
    out[k] = grants_[k].empty() && !punctured_[k];
  }
  return out;
}

void Simulator::schedule(double tau) {
  // Mid-subframe decisions plan from the next boundary; the rest of the
  // current subframe is a bonus on top of a plan that already meets its
  // deadlines.
  const Tick now = tau > 0.0 ? clock_.now() + 1 : clock_.now();
  const auto free = free_rbs();
  if (std::none_of(free.begin(), free.end(), [](bool b) { return b; })) return;

  std::vector<Packet> eligible;
  for (const auto& q : queues_) {
    const auto live = std::find_if(q.begin(), q.end(), [&](const Packet& p) { return p.expiry > now; });
    if (live == q.end()) continue;
    Packet head = *live;
    const auto row = rates_.row(head.subscriber);
    head.rates.assign(row.begin(), row.end());
    eligible.push_back(std::move(head));
  }
  if (eligible.empty()) return;
  std::sort(eligible.begin(), eligible.end(),
            [](const Packet& a, const Packet& b) { return a.id < b.id; });

  SchedulingContext ctx;
  ctx.now = now;
  ctx.rb_count = rb_count_;
  ctx.free_rbs = free;
  ctx.eligible = eligible;
  ctx.mean_rate = mean_rate_;
  ctx.mlwdf = cfg_.mlwdf;
  const ScheduleDecision d = cfg_.policy.select(ctx);

  if (cfg_.check_invariants) {
    bool ok = respects_rb_exclusivity(d);
    std::vector<double> used(rb_count_, 0.0);
    for (const auto& a : d.allocations) {
      for (int k = 0; k < rb_count_; ++k) {
        if (a.share[k] > kFractional && !free[k]) ok = false;
        used[k] += a.share[k];
      }
    }
    if (d.empty()) {
      // Work conservation: an empty decision is only allowed when no head
      // could meet its deadline on the free RBs.
      for (const auto& p : eligible) {
        double cap = 0.0;
        for (int k = 0; k < rb_count_; ++k) {
          if (free[k]) cap += p.rates[k];
        }
        if (cap + 1e-9 * std::max(1.0, cap) >= min_rate(p.length_bits, p.expiry, now)) ok = false;
      }
    } else {
      for (int k = 0; k < rb_count_; ++k) {
        if (free[k] && used[k] < 1.0 - 1e-6) ok = false;
      }
    }
    if (cfg_.check_reward_scaling && (cfg_.policy.kind == PolicyKind::kMrrLp2 ||
                                      cfg_.policy.kind == PolicyKind::kMrrIlp ||
                                      cfg_.policy.kind == PolicyKind::kMud)) {
      std::vector<Packet> scaled = eligible;
      for (auto& p : scaled) p.reward *= 2.0;
      SchedulingContext c2 = ctx;
      c2.eligible = scaled;
      if (cfg_.policy.select(c2).chosen != d.chosen) ok = false;
    }
    if (!ok) ++report_.invariant_failures;
  }
  if (d.empty()) return;

  ++report_.decisions;
  ++report_.added_packets_histogram[d.added_count];
  if (cfg_.trace_packets) decisions_.push_back(d);
  admit(d, eligible, now);
}

void Simulator::admit(const ScheduleDecision& d, const std::vector<Packet>& eligible,
                      Tick now) {
  for (std::size_t i = 0; i < d.chosen.size(); ++i) {
    const PacketId id = d.chosen[i];
    const auto it = std::find_if(eligible.begin(), eligible.end(),
                                 [&](const Packet& p) { return p.id == id; });
    if (it == eligible.end()) throw Error("policy chose a packet that is not eligible");
    auto& q = queues_[it->subscriber];
    const auto qit = std::find_if(q.begin(), q.end(), [&](const Packet& p) { return p.id == id; });
    q.erase(qit);
    --queued_count_;

    InFlight f;
    f.packet = *it;  // rates frozen from here on
    f.share = d.allocations[i].share;
    for (double& s : f.share) {
      if (s < kFractional) s = 0.0;
      if (s > 1.0 - kFractional) s = 1.0;
    }
    f.remaining_bits = it->length_bits;
    f.admitted = now;
    std::vector<int> rbs;
    for (int k = 0; k < rb_count_; ++k) {
      if (f.share[k] > 0.0) rbs.push_back(k);
    }
    log("admit", id, rbs);
    inflight_.emplace(id, std::move(f));
  }

  // Turn shares into RB holds. A split RB is served in EDF order: the
  // earlier deadline holds it for ceil(x d) subframes, then the other packet
  // takes over. On equal deadlines the smaller share goes first.
  bool tracked = false;
  for (int k = 0; k < rb_count_; ++k) {
    std::vector<const InFlight*> owners;
    for (PacketId id : d.chosen) {
      const InFlight& f = inflight_.at(id);
      if (f.share[k] > 0.0) owners.push_back(&f);
    }
    if (owners.empty()) continue;
    if (owners.size() == 1) {
      grants_[k].push_back({owners[0]->packet.id, kForever});
      continue;
    }
    if (owners.size() != 2) throw Error("more than two packets share one RB");
    std::sort(owners.begin(), owners.end(), [&](const InFlight* a, const InFlight* b) {
      if (a->packet.expiry != b->packet.expiry) return a->packet.expiry < b->packet.expiry;
      if (a->share[k] != b->share[k]) return a->share[k] < b->share[k];
      return a->packet.id < b->packet.id;
    });
    const InFlight& first = *owners[0];
    const InFlight& second = *owners[1];
    const Tick d1 = first.packet.expiry - now;
    const Tick d2 = second.packet.expiry - now;
    const auto quota = std::max<Tick>(
        1, static_cast<Tick>(std::ceil(first.share[k] * static_cast<double>(d1) - 1e-9)));
    grants_[k].push_back({first.packet.id, now + quota});
    grants_[k].push_back({second.packet.id, kForever});
    if (!tracked) {
      claim2_.track(first.packet.id, second.packet.id, now, d1, d2);
      tracked = true;
    }
  }
}

double Simulator::next_completion(double tau) {
  std::map<PacketId, double> rate;
  for (int k = 0; k < rb_count_; ++k) {
    clean_grants(k);
    if (grants_[k].empty() || punctured_[k]) continue;
    const InFlight& f = inflight_.at(grants_[k].front().owner);
    rate[f.packet.id] += f.packet.rates[k];
  }
  double next = 1.0;
  for (const auto& [id, r] : rate) {
    if (r <= 0.0) continue;
    next = std::min(next, tau + inflight_.at(id).remaining_bits / r);
  }
  return std::max(next, tau);
}

void Simulator::transmit(double from, double to, std::vector<double>& served) {
  const double span = to - from;
  for (int k = 0; k < rb_count_; ++k) {
    if (grants_[k].empty() || punctured_[k]) continue;
    InFlight& f = inflight_.at(grants_[k].front().owner);
    const double bits = std::min(f.packet.rates[k] * span, f.remaining_bits);
    f.remaining_bits -= bits;
    served[f.packet.subscriber] += bits;
    if (cfg_.trace_packets) sent_bits_[f.packet.id] += bits;
  }
}

int Simulator::deliver_finished() {
  const Tick end = clock_.now() + 1;
  std::vector<PacketId> finished;
  for (const auto& [id, f] : inflight_) {
    if (f.remaining_bits <= 1e-9 * std::max(1.0, f.packet.length_bits)) finished.push_back(id);
  }
  for (PacketId id : finished) {
    const InFlight& f = inflight_.at(id);
    ++report_.delivered;
    report_.delivered_reward += f.packet.reward;
    report_.delivered_bytes += f.packet.length_bytes();
    claim2_.completed(id, end);
    if (cfg_.trace_packets) delivered_[id] = true;
    log("deliver", id);
    inflight_.erase(id);
  }
  return static_cast<int>(finished.size());
}

void Simulator::drop_inflight(PacketId id, const char* why) {
  const Tick end = clock_.now() + 1;
  ++report_.dropped;
  claim2_.dropped(id, end);
  log(why, id);
  inflight_.erase(id);
}

void Simulator::settle() {
  const Tick end = clock_.now() + 1;  // boundary after this subframe
  std::vector<PacketId> expired;
  for (const auto& [id, f] : inflight_) {
    if (f.packet.expiry <= end) expired.push_back(id);
  }
  for (PacketId id : expired) drop_inflight(id, "expire");

  for (auto& q : queues_) {
    const auto before = q.size();
    std::erase_if(q, [&](const Packet& p) {
      if (p.expiry > end) return false;
      log("drop", p.id);
      return true;
    });
    const auto gone = static_cast<std::int64_t>(before - q.size());
    report_.dropped += gone;
    queued_count_ -= gone;
  }
}

void Simulator::check_invariants() {
  bool ok = report_.arrived ==
            report_.delivered + report_.dropped + queued_count_ +
                static_cast<std::int64_t>(inflight_.size());
  ok = ok && report_.delivered_reward <= report_.arrived_reward * (1.0 + 1e-12) + 1e-9;
  for (const auto& [id, f] : inflight_) {
    if (f.remaining_bits > f.packet.length_bits) ok = false;
  }
  if (!ok) ++report_.invariant_failures;
}

SimReport Simulator::report() const {
  SimReport r = report_;
  r.utility_defined = r.arrived_reward > 0.0;
  r.utility = r.utility_defined ? r.delivered_reward / r.arrived_reward : 0.0;
  r.delivered_bytes_fraction = r.arrived_bytes > 0.0 ? r.delivered_bytes / r.arrived_bytes : 0.0;
  r.claim2_pairs = claim2_.pairs();
  r.claim2_violations = claim2_.violations();
  return r;
}

SimReport Simulator::run_to_completion() {
  const auto start = std::chrono::steady_clock::now();
  Tick horizon = 0;
  for (const auto& p : stream_) horizon = std::max(horizon, p.expiry);
  while (!done()) {
    if (clock_.now() > horizon + 1) throw Error("simulation failed to drain");
    step();
  }
  SimReport r = report();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

SimReport run(const PolicySpec& policy, TrafficConfig traffic, ChannelConfig channel,
              std::uint64_t seed, const MlwdfParams& mlwdf) {
  traffic.seed = seed;
  channel.seed = seed;
  SimConfig cfg;
  cfg.channel = std::move(channel);
  cfg.traffic = std::move(traffic);
  cfg.policy = policy;
  cfg.mlwdf = mlwdf;
  return Simulator::from_config(cfg).run_to_completion();
}

}  // namespace mrr
