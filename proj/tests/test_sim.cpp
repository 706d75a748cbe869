#include <doctest.h>

#include <sstream>
#include <vector>

#include "mrr/simulator.hpp"

using namespace mrr;

namespace {

Packet pkt(PacketId id, Tick arrival, Tick expiry, double bits, double reward, int ms = 0) {
  Packet p;
  p.id = id;
  p.arrival = arrival;
  p.expiry = expiry;
  p.subscriber = ms;
  p.length_bits = bits;
  p.reward = reward;
  return p;
}

SimConfig small(const char* policy, int k = 2, int m = 2) {
  SimConfig c;
  c.channel.rb_count = k;
  c.channel.subscribers = m;
  c.policy = parse_policy(policy);
  c.trace_packets = true;
  return c;
}

RateProvider flat(int m, int k, double rate) {
  return [=](Tick) { return RateMatrix(m, k, rate); };
}

SimConfig desk(const char* policy, std::uint64_t seed, double lambda) {
  SimConfig c;
  c.channel.rb_count = 5;
  c.channel.subscribers = 8;
  c.channel.seed = seed;
  c.traffic.mixture = default_mixture();
  c.traffic.total_packets = 400;
  c.traffic.arrival_rate = lambda;
  c.traffic.seed = seed;
  c.policy = parse_policy(policy);
  return c;
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("empty system only advances the clock") {
    Simulator s(small("mrr-lp2"), {}, flat(2, 2, 10));
    CHECK(s.done());
    s.step();
    s.step();
    CHECK(s.now() == 2);
    const auto r = s.report();
    CHECK(r.arrived == 0);
    CHECK(r.delivered == 0);
    CHECK_FALSE(r.utility_defined);
    CHECK(r.decisions == 0);
  }

  TEST_CASE("zero-load run flags utility as undefined") {
    const auto r = Simulator(small("edf"), {}, flat(2, 2, 1)).run_to_completion();
    CHECK_FALSE(r.utility_defined);
    CHECK(r.arrived == 0);
    CHECK(r.urllc_sent == 0);
  }

  TEST_CASE("a packet with enough rate is delivered in one subframe") {
    for (const char* policy : {"mrr-lp2", "mrr-ilp:4", "edf", "mxrate", "mud", "mlwdf"}) {
      Simulator s(small(policy), {pkt(0, 0, 3, 40, 5)}, flat(2, 2, 30));
      s.step();
      CHECK(s.delivered(0));
      CHECK(s.bits_sent(0) == doctest::Approx(40));
      CHECK(s.in_flight() == 0);
      const auto r = s.report();
      CHECK(r.delivered == 1);
      CHECK(r.utility == doctest::Approx(1.0));
    }
  }

  TEST_CASE("a packet that cannot start before expiry is never sent") {
    // Packet 0 holds both RBs for 10 subframes; packet 1 needs them by tick 2.
    std::vector<Packet> stream{pkt(0, 0, 20, 200, 5, 0), pkt(1, 1, 3, 10, 5, 1)};
    Simulator s(small("edf"), stream, flat(2, 2, 10));
    const auto r = s.run_to_completion();
    CHECK(s.delivered(0));
    CHECK_FALSE(s.delivered(1));
    CHECK(s.bits_sent(1) == 0.0);
    CHECK(r.dropped == 1);
    CHECK(r.utility == doctest::Approx(0.5));
  }

  TEST_CASE("capacity far above load delivers everything") {
    auto cfg = desk("mrr-lp2", 3, 50);
    cfg.channel.tx_power_dbm = 80;
    const auto r = Simulator::from_config(cfg).run_to_completion();
    CHECK(r.utility_defined);
    CHECK(r.utility == doctest::Approx(1.0));
    CHECK(r.delivered_bytes_fraction == doctest::Approx(1.0));
    CHECK(r.urllc_missed == 0);
  }

  TEST_CASE("same seed, same report") {
    for (const char* policy : {"mrr-lp2", "mlwdf"}) {
      const auto a = Simulator::from_config(desk(policy, 4, 2000)).run_to_completion();
      const auto b = Simulator::from_config(desk(policy, 4, 2000)).run_to_completion();
      CHECK(a.utility == b.utility);
      CHECK(a.delivered == b.delivered);
      CHECK(a.dropped == b.dropped);
      CHECK(a.added_packets_histogram == b.added_packets_histogram);
      CHECK(a.subframes == b.subframes);
    }
  }

  TEST_CASE("conservation holds at every tick") {
    auto cfg = desk("mrr-lp2", 5, 2500);
    auto sim = Simulator::from_config(cfg);
    while (!sim.done()) {
      sim.step();
      const auto r = sim.report();
      CHECK(r.arrived == r.delivered + r.dropped + static_cast<std::int64_t>(sim.queued()) +
                             static_cast<std::int64_t>(sim.in_flight()));
      CHECK(r.utility >= 0.0);
      CHECK(r.utility <= 1.0);
    }
    const auto r = sim.report();
    CHECK(r.invariant_failures == 0);
    CHECK(r.arrived == r.delivered + r.dropped);
  }

  TEST_CASE("queued packets see fresh rates, in-flight packets keep theirs") {
    // Frame 0 rates 5, frame 1 rates 50. Packet 0 (admitted in frame 0) keeps
    // rate 5; packet 1 waits behind it on the same MS and gets 50.
    SimConfig cfg = small("edf", 1, 1);
    RateProvider p = [](Tick frame) { return RateMatrix(1, 1, frame == 0 ? 5.0 : 50.0); };
    std::vector<Packet> stream{pkt(0, 0, 30, 60, 1), pkt(1, 0, 40, 100, 1)};
    Simulator s(cfg, stream, p);
    s.run_to_completion();
    CHECK(s.delivered(0));
    CHECK(s.delivered(1));
    const auto& d = s.decisions();
    REQUIRE(d.size() == 2);
    CHECK(d[0].chosen == std::vector<PacketId>{0});
    CHECK(d[1].chosen == std::vector<PacketId>{1});
    CHECK(d[0].total_rr == doctest::Approx(5.0 / 60.0));
    CHECK(d[1].total_rr == doctest::Approx(50.0 / 100.0));
  }

  TEST_CASE("RB time freed mid-subframe is reused") {
    // Two 10-bit packets on one RB of rate 40 both finish in subframe 0.
    std::vector<Packet> stream{pkt(0, 0, 5, 10, 1, 0), pkt(1, 0, 5, 10, 1, 1)};
    Simulator s(small("mud", 1, 2), stream, flat(2, 1, 40));
    s.step();
    CHECK(s.delivered(0));
    CHECK(s.delivered(1));
    CHECK(s.report().decisions == 2);
  }

  TEST_CASE("URLLC punctures and is delivered") {
    SimConfig cfg = small("edf", 2, 2);
    Packet u = pkt(1, 2, 3, 30, 0, 1);
    u.urllc = true;
    std::vector<Packet> stream{pkt(0, 0, 50, 400, 10, 0), u};
    std::ostringstream log;
    cfg.event_log = &log;
    Simulator s(cfg, stream, flat(2, 2, 40));
    const auto r = s.run_to_completion();
    CHECK(r.urllc_sent == 1);
    CHECK(r.urllc_missed == 0);
    CHECK(s.delivered(0));
    CHECK(log.str().find("2,urllc,1,0") != std::string::npos);
    // One RB was punctured for one subframe: 40 bits short of 2 x 40 x 5.
    CHECK(r.subframes >= 6);
  }

  TEST_CASE("URLLC overload is counted, not thrown") {
    SimConfig cfg = small("edf", 1, 1);
    Packet u = pkt(0, 0, 1, 500, 0, 0);
    u.urllc = true;
    const auto r = Simulator(cfg, {u}, flat(1, 1, 10)).run_to_completion();
    CHECK(r.urllc_missed == 1);
    CHECK(r.urllc_overload_events == 1);
  }

  TEST_CASE("rejects malformed streams") {
    CHECK_THROWS_AS(Simulator(small("edf"), {pkt(0, 5, 9, 1, 1), pkt(1, 2, 9, 1, 1)}, flat(2, 2, 1)),
                    Error);
    CHECK_THROWS_AS(Simulator(small("edf"), {pkt(0, 0, 9, 1, 1, 7)}, flat(2, 2, 1)), Error);
    CHECK_THROWS_AS(Simulator(small("edf"), {pkt(0, 3, 3, 1, 1)}, flat(2, 2, 1)), Error);
  }

  TEST_CASE("two-subframe monitor arithmetic") {
    const auto [first, second] = Claim2Monitor::ceiling_bounds(4, 10, 0.5);
    CHECK(first == 2);
    CHECK(second == 7);
    CHECK(second <= 10 + 2);

    Claim2Monitor m;
    CHECK(m.violations() == 0);
    m.track(1, 2, 0, 4, 10);
    m.completed(1, 4);
    m.completed(2, 12);
    CHECK(m.pairs() == 1);
    CHECK(m.violations() == 0);

    m.track(3, 4, 20, 4, 10);
    m.completed(3, 25);
    m.dropped(4, 30);
    CHECK(m.violations() == 2);

    m.track(5, 6, 40, 4, 10);
    m.exempt(6);
    m.dropped(5, 60);
    m.dropped(6, 60);
    CHECK(m.violations() == 2);
  }

  TEST_CASE("mrr-lp2 desk runs keep the two-subframe bound") {
    std::int64_t pairs = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto r = Simulator::from_config(desk("mrr-lp2", seed, 2666.67)).run_to_completion();
      CHECK(r.claim2_violations == 0);
      CHECK(r.invariant_failures == 0);
      pairs += r.claim2_pairs;
    }
    MESSAGE("shared-RB pairs observed: " << pairs);
  }

  TEST_CASE("every policy runs clean at desk scale") {
    for (const char* policy : {"mrr-lp2", "mrr-ilp:4", "edf", "mxrate", "mud", "mlwdf"}) {
      const auto r = Simulator::from_config(desk(policy, 7, 2000)).run_to_completion();
      CHECK(r.invariant_failures == 0);
      CHECK(r.utility >= 0.0);
      CHECK(r.utility <= 1.0);
      CHECK(r.delivered_bytes_fraction <= 1.0);
      std::int64_t total = 0;
      for (const auto& [size, n] : r.added_packets_histogram) total += n;
      CHECK(total == r.decisions);
    }
  }
}
