#pragma once

#include <cstdint>
#include <vector>

#include "mrr/types.hpp"

namespace mrr {

/// Log-distance path loss with per-RB Rayleigh block fading and Shannon
/// rates. Transmit power is split evenly over `rb_count` RBs.
struct ChannelConfig {
  int rb_count = 15;
  double rb_bandwidth_hz = 180e3;
  double carrier_hz = 6e9;
  double tx_power_dbm = 42.0;
  double tower_height_m = 25.0;
  double cell_radius_m = 250.0;
  double min_distance_m = 10.0;
  int subscribers = 24;
  double path_loss_exponent = 3.7;
  double noise_figure_db = 9.0;
  double noise_density_dbm_hz = -174.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Ground distances of the subscribers, uniform on (min_distance, radius].
std::vector<double> place_subscribers(const ChannelConfig& cfg);

/// Mean SNR (linear) at a ground distance, before fading.
double mean_snr(const ChannelConfig& cfg, double distance_m);

/// Per-(subscriber, RB) rates in bits per subframe for one frame. A pure
/// function of (cfg.seed, frame_index).
RateMatrix draw_rates(const ChannelConfig& cfg, const std::vector<double>& distances,
                      Tick frame_index);

}  // namespace mrr
