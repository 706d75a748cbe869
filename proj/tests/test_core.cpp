#include <doctest.h>

#include <vector>

#include "mrr/rate_math.hpp"
#include "mrr/types.hpp"

using namespace mrr;

TEST_SUITE("core") {
  TEST_CASE("min_rate") {
    CHECK(min_rate(100, 15, 10) == doctest::Approx(20));
    CHECK(min_rate(100, 11, 10) == doctest::Approx(100));
    CHECK_THROWS_AS(min_rate(100, 10, 10), ExpiredError);
    CHECK_THROWS_AS(min_rate(100, 9, 10), ExpiredError);
  }

  TEST_CASE("min_rate falls as the window grows") {
    double prev = min_rate(100, 11, 10);
    for (Tick e = 12; e < 40; ++e) {
      const double r = min_rate(100, e, 10);
      CHECK(r < prev);
      prev = r;
    }
  }

  TEST_CASE("adjusted_min_rate branches") {
    CHECK(*adjusted_min_rate(100, 5, true) == doctest::Approx(20));
    CHECK(*adjusted_min_rate(100, 5, false) == doctest::Approx(100.0 / 3.0));
    CHECK_FALSE(adjusted_min_rate(100, 2, false).has_value());
    CHECK_FALSE(adjusted_min_rate(100, 1, false).has_value());
    CHECK(*adjusted_min_rate(100, 1, true) == doctest::Approx(100));
    for (Tick d = 3; d < 30; ++d) {
      CHECK(*adjusted_min_rate(77, d, false) >= *adjusted_min_rate(77, d, true));
    }
  }

  TEST_CASE("reward_rate") {
    const std::vector<double> x{1, 0, 1}, r{3, 5, 7};
    CHECK(reward_rate(4, 2, x, r) == doctest::Approx(20));
    const std::vector<double> zero{0, 0, 0};
    CHECK(reward_rate(1, 1, zero, r) == 0.0);
    const std::vector<double> half{0.5}, ten{10};
    CHECK(reward_rate(1, 1, half, ten) == doctest::Approx(5));
  }

  TEST_CASE("reward_rate is linear in the allocation") {
    const std::vector<double> r{3, 5, 7};
    const std::vector<double> x1{1, 0, 0.25}, x2{0, 1, 0.75};
    for (double a : {0.0, 0.3, 0.5, 0.9, 1.0}) {
      std::vector<double> mix(3);
      for (int k = 0; k < 3; ++k) mix[k] = a * x1[k] + (1 - a) * x2[k];
      CHECK(reward_rate(3, 8, mix, r) ==
            doctest::Approx(a * reward_rate(3, 8, x1, r) + (1 - a) * reward_rate(3, 8, x2, r)));
    }
  }

  TEST_CASE("puncture scales the punctured RBs") {
    const std::vector<double> r{10, 10};
    std::vector<Puncture> p{{{1, 0}, 2}};
    const auto eff = effective_rate_after_puncture(r, p, 10);
    CHECK(eff[0] == doctest::Approx(8));
    CHECK(eff[1] == doctest::Approx(10));

    const std::vector<double> one{10};
    CHECK(effective_rate_after_puncture(one, {}, 10) == one);
    std::vector<Puncture> full{{{1}, 10}};
    CHECK(effective_rate_after_puncture(one, full, 10)[0] == doctest::Approx(0));
  }

  TEST_CASE("puncture never raises a rate") {
    const std::vector<double> r{4, 9, 2, 7};
    std::vector<Puncture> p{{{1, 0, 1, 0}, 3}, {{0, 1, 0, 0}, 20}};
    const auto eff = effective_rate_after_puncture(r, p, 5);
    for (int k = 0; k < 4; ++k) {
      CHECK(eff[k] <= r[k]);
      CHECK(eff[k] >= 0.0);
    }
    CHECK(eff[1] == 0.0);
  }

  TEST_CASE("clock and packet helpers") {
    Clock c;
    CHECK(c.now() == 0);
    CHECK(c.at_frame_start());
    for (int i = 0; i < 13; ++i) c.advance();
    CHECK(c.now() == 13);
    CHECK(c.frame_index() == 1);
    CHECK_FALSE(c.at_frame_start());

    Packet p;
    p.arrival = 3;
    p.expiry = 8;
    p.length_bits = 512;
    CHECK(p.time_to_expiry(5) == 3);
    CHECK_FALSE(p.expired(7));
    CHECK(p.expired(8));
    CHECK(p.length_bytes() == 64);
  }

  TEST_CASE("rate matrix rows") {
    RateMatrix m(2, 3);
    m.at(1, 2) = 5;
    CHECK(m.row(1)[2] == 5);
    CHECK(m.row(0)[2] == 0);
    CHECK(m.subscribers() == 2);
    CHECK(m.rbs() == 3);
  }
}
