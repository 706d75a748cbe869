#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "mrr/channel.hpp"
#include "mrr/traffic.hpp"

using namespace mrr;

TEST_SUITE("channel") {
  TEST_CASE("placements stay in range and average 130 m") {
    ChannelConfig c;
    c.subscribers = 10000;
    c.seed = 5;
    const auto d = place_subscribers(c);
    REQUIRE(d.size() == 10000);
    for (double x : d) {
      CHECK(x > 10.0);
      CHECK(x <= 250.0);
    }
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
    CHECK(mean == doctest::Approx(130).epsilon(5.0 / 130));
  }

  TEST_CASE("same seed, same placements and rates") {
    ChannelConfig c;
    c.seed = 9;
    CHECK(place_subscribers(c) == place_subscribers(c));
    const auto d = place_subscribers(c);
    CHECK(draw_rates(c, d, 3) == draw_rates(c, d, 3));
    CHECK_FALSE(draw_rates(c, d, 3) == draw_rates(c, d, 4));
    ChannelConfig other = c;
    other.seed = 10;
    CHECK_FALSE(place_subscribers(other) == d);
  }

  TEST_CASE("mean SNR matches the link budget") {
    // 42 dBm over 15 RBs, Friis at 1 m for 6 GHz, exponent 3.7 over the
    // slant range to a 25 m tower, -174 dBm/Hz + 52.55 dB + 9 dB noise.
    ChannelConfig c;
    CHECK(mean_snr(c, 100.0) == doctest::Approx(104.4351936207226).epsilon(1e-9));
    CHECK(mean_snr(c, 50.0) > mean_snr(c, 100.0));
  }

  TEST_CASE("rates are positive and fall with distance") {
    ChannelConfig c;
    c.rb_count = 4;
    c.subscribers = 2;
    const std::vector<double> d{40.0, 220.0};
    double near = 0.0, far = 0.0;
    for (Tick f = 0; f < 2500; ++f) {
      const auto r = draw_rates(c, d, f);
      for (int k = 0; k < 4; ++k) {
        CHECK(r.at(0, k) > 0.0);
        CHECK(r.at(1, k) > 0.0);
        near += r.at(0, k);
        far += r.at(1, k);
      }
    }
    CHECK(near > far);
  }

  TEST_CASE("config validation") {
    ChannelConfig c;
    c.rb_count = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.rb_bandwidth_hz = -1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.min_distance_m = 300;
    CHECK_THROWS_AS(c.validate(), ConfigError);
  }
}

TEST_SUITE("traffic") {
  TrafficConfig big(std::uint64_t seed = 1) {
    TrafficConfig t;
    t.mixture = default_mixture();
    t.total_packets = 100000;
    t.arrival_rate = 6000;
    t.seed = seed;
    return t;
  }

  TEST_CASE("class shares follow the mixture") {
    const auto cfg = big();
    const auto s = generate_stream(cfg, 24);
    std::vector<int> count(cfg.mixture.size(), 0);
    for (const auto& p : s) ++count[p.traffic_class];
    for (std::size_t c = 0; c < count.size(); ++c) {
      CHECK(std::abs(static_cast<double>(count[c]) / s.size() - cfg.mixture[c].share) <= 0.01);
    }
  }

  TEST_CASE("lengths, rewards and deadlines") {
    const auto cfg = big(2);
    const auto s = generate_stream(cfg, 24);
    for (const auto& p : s) {
      const auto& c = cfg.mixture[p.traffic_class];
      const double bytes = p.length_bytes();
      CHECK(bytes >= c.length.min_bytes);
      CHECK(bytes <= c.length.max_bytes);
      CHECK(p.subscriber >= 0);
      CHECK(p.subscriber < 24);
      CHECK(p.expiry > p.arrival);
      if (p.urllc) {
        CHECK(p.expiry - p.arrival == 1);
        CHECK(p.reward == 0.0);
      } else {
        CHECK(p.expiry - p.arrival >= 2);
        CHECK(p.reward == doctest::Approx(c.priority_per_byte * bytes));
      }
      if (c.name == "type1") CHECK(p.reward == 256.0);
      if (c.name == "type2") {
        CHECK(bytes >= 64);
        CHECK(bytes <= 100);
      }
    }
  }

  TEST_CASE("inter-arrival mean is 1 / lambda") {
    const auto cfg = big(3);
    const auto s = generate_stream(cfg, 24);
    const double span_ms = static_cast<double>(s.back().arrival - s.front().arrival);
    const double mean_gap_ms = span_ms / (s.size() - 1);
    CHECK(mean_gap_ms == doctest::Approx(1000.0 / 6000.0).epsilon(0.02));
  }

  TEST_CASE("sorted, sequential ids, reproducible") {
    auto cfg = big(4);
    cfg.total_packets = 5000;
    const auto a = generate_stream(cfg, 8);
    const auto b = generate_stream(cfg, 8);
    REQUIRE(a.size() == 5000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].id == static_cast<PacketId>(i));
      CHECK(a[i].arrival == b[i].arrival);
      CHECK(a[i].expiry == b[i].expiry);
      CHECK(a[i].length_bits == b[i].length_bits);
      if (i > 0) CHECK(a[i].arrival >= a[i - 1].arrival);
    }
  }

  TEST_CASE("exponential parameter read as a rate") {
    auto mean_cfg = big(6);
    mean_cfg.total_packets = 20000;
    auto rate_cfg = mean_cfg;
    rate_cfg.exponential_param_is_rate = true;
    auto avg_window = [](const std::vector<Packet>& s) {
      double sum = 0;
      int n = 0;
      for (const auto& p : s) {
        if (p.traffic_class == 1) {
          sum += static_cast<double>(p.expiry - p.arrival);
          ++n;
        }
      }
      return sum / n;
    };
    // Mean 0.1 s is about 100 subframes; rate 0.1 per second means 10 s.
    CHECK(avg_window(generate_stream(mean_cfg, 8)) == doctest::Approx(100).epsilon(0.1));
    CHECK(avg_window(generate_stream(rate_cfg, 8)) == doctest::Approx(10000).epsilon(0.1));
  }

  TEST_CASE("config validation") {
    TrafficConfig t;
    t.mixture = default_mixture();
    t.arrival_rate = 0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.arrival_rate = 100;
    t.mixture[0].share += 0.1;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.mixture = default_mixture();
    t.mixture[1].length.min_bytes = 0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t.mixture.clear();
    CHECK_THROWS_AS(t.validate(), ConfigError);
  }
}
