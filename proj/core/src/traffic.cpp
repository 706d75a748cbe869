#include "mrr/traffic.hpp"

#include <cmath>
#include <random>

namespace mrr {

void TrafficConfig::validate() const {
  if (!(arrival_rate > 0.0)) throw ConfigError("traffic.arrival_rate must be positive");
  if (total_packets < 0) throw ConfigError("traffic.total_packets must be >= 0");
  if (mixture.empty()) throw ConfigError("traffic.mixture is empty");
  double sum = 0.0;
  for (const auto& c : mixture) {
    if (!(c.share > 0.0 && c.share <= 1.0)) {
      throw ConfigError("traffic class '" + c.name + "' share must lie in (0, 1]");
    }
    if (c.length.min_bytes < 1 || c.length.max_bytes < c.length.min_bytes) {
      throw ConfigError("traffic class '" + c.name + "' has an invalid length range");
    }
    if (!(c.deadline.seconds > 0.0)) {
      throw ConfigError("traffic class '" + c.name + "' deadline must be positive");
    }
    sum += c.share;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw ConfigError("traffic class shares must sum to 1");
}

std::vector<TrafficClass> default_mixture() {
  using LK = LengthDist::Kind;
  using DK = DeadlineDist::Kind;
  return {
      {"urllc", 0.08, {LK::kConstant, 32, 32}, {DK::kConstant, 0.0005}, 0.0, true},
      {"type1", 0.138, {LK::kConstant, 64, 64}, {DK::kExponential, 0.1}, 4.0, false},
      {"type2", 0.322, {LK::kUniform, 64, 100}, {DK::kExponential, 0.2}, 1.0, false},
      {"type3", 0.046, {LK::kUniform, 100, 1400}, {DK::kExponential, 0.2}, 2.0, false},
      {"type4", 0.184, {LK::kUniform, 100, 1400}, {DK::kExponential, 0.3}, 1.0, false},
      {"type5", 0.23, {LK::kConstant, 1500, 1500}, {DK::kExponential, 0.4}, 1.0, false},
  };
}

std::vector<Packet> generate_stream(const TrafficConfig& cfg, int subscribers) {
  cfg.validate();
  if (subscribers < 1) throw ConfigError("need at least one subscriber");

  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed),
                    static_cast<std::uint32_t>(cfg.seed >> 32), 0x74726166U};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> gap(cfg.arrival_rate);
  std::vector<double> shares;
  for (const auto& c : cfg.mixture) shares.push_back(c.share);
  std::discrete_distribution<int> pick_class(shares.begin(), shares.end());
  std::uniform_int_distribution<int> pick_ms(0, subscribers - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<Packet> out;
  out.reserve(cfg.total_packets);
  double t = 0.0;  // seconds
  for (int i = 0; i < cfg.total_packets; ++i) {
    t += gap(rng);
    const int cls = pick_class(rng);
    const TrafficClass& c = cfg.mixture[cls];

    int bytes = c.length.min_bytes;
    if (c.length.kind == LengthDist::Kind::kUniform) {
      bytes = std::uniform_int_distribution<int>(c.length.min_bytes, c.length.max_bytes)(rng);
    }
    double deadline_s = c.deadline.seconds;
    if (c.deadline.kind == DeadlineDist::Kind::kExponential) {
      const double rate =
          cfg.exponential_param_is_rate ? c.deadline.seconds : 1.0 / c.deadline.seconds;
      deadline_s = -std::log(1.0 - unit(rng)) / rate;
    }

    Packet p;
    p.id = i;
    p.arrival = static_cast<Tick>(std::floor(t / kSubframeSeconds));
    p.subscriber = pick_ms(rng);
    p.length_bits = 8.0 * bytes;
    p.urllc = c.urllc;
    p.traffic_class = cls;
    p.reward = c.urllc ? 0.0 : c.priority_per_byte * bytes;
    const Tick floor_subframes = c.urllc ? 1 : std::max<Tick>(1, cfg.min_deadline_subframes);
    const auto whole = static_cast<Tick>(std::floor(deadline_s / kSubframeSeconds + 1e-9));
    p.expiry = p.arrival + std::max(whole, floor_subframes);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mrr
