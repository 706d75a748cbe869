#include "mrr/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mrr {
namespace {

constexpr double kSpeedOfLight = 299'792'458.0;
constexpr std::uint64_t kPlacementStream = 0x706c6163;  // "plac"
constexpr std::uint64_t kFadingStream = 0x66616465;     // "fade"

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

void ChannelConfig::validate() const {
  if (rb_count < 1) throw ConfigError("channel.rb_count must be >= 1");
  if (subscribers < 1) throw ConfigError("channel.subscribers must be >= 1");
  if (rb_bandwidth_hz <= 0 || carrier_hz <= 0 || tower_height_m <= 0 ||
      cell_radius_m <= 0 || min_distance_m <= 0 || path_loss_exponent <= 0) {
    throw ConfigError("channel physical quantities must be positive");
  }
  if (min_distance_m >= cell_radius_m) {
    throw ConfigError("channel.min_distance_m must be below the cell radius");
  }
}

std::vector<double> place_subscribers(const ChannelConfig& cfg) {
  auto rng = stream(cfg.seed, kPlacementStream);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(cfg.subscribers);
  // 1 - u lies in (0, 1], so distances land in (min, radius].
  for (double& d : out) {
    d = cfg.min_distance_m + (1.0 - u(rng)) * (cfg.cell_radius_m - cfg.min_distance_m);
  }
  return out;
}

double mean_snr(const ChannelConfig& cfg, double distance_m) {
  const double wavelength = kSpeedOfLight / cfg.carrier_hz;
  const double ref_loss_db = 20.0 * std::log10(4.0 * std::numbers::pi / wavelength);
  const double d3 = std::hypot(distance_m, cfg.tower_height_m);
  const double loss_db = ref_loss_db + 10.0 * cfg.path_loss_exponent * std::log10(d3);
  const double per_rb_dbm = cfg.tx_power_dbm - 10.0 * std::log10(cfg.rb_count);
  const double noise_dbm = cfg.noise_density_dbm_hz + 10.0 * std::log10(cfg.rb_bandwidth_hz) +
                           cfg.noise_figure_db;
  return db_to_linear(per_rb_dbm - loss_db - noise_dbm);
}

RateMatrix draw_rates(const ChannelConfig& cfg, const std::vector<double>& distances,
                      Tick frame_index) {
  const int m_count = static_cast<int>(distances.size());
  RateMatrix rates(m_count, cfg.rb_count);
  auto rng = stream(cfg.seed, kFadingStream, static_cast<std::uint64_t>(frame_index));
  std::exponential_distribution<double> fade(1.0);  // |h|^2 of a Rayleigh tap
  for (int m = 0; m < m_count; ++m) {
    const double snr = mean_snr(cfg, distances[m]);
    for (int k = 0; k < cfg.rb_count; ++k) {
      const double bits =
          cfg.rb_bandwidth_hz * std::log2(1.0 + snr * fade(rng)) * kSubframeSeconds;
      rates.at(m, k) = std::max(0.0, bits);
    }
  }
  return rates;
}

}  // namespace mrr
