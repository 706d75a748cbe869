#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mrr/metrics.hpp"

using namespace mrr;

namespace {

SimReport rep(const char* policy, double lambda, std::uint64_t seed, double u) {
  SimReport r;
  r.policy = policy;
  r.lambda = lambda;
  r.seed = seed;
  r.utility_defined = true;
  r.utility = u;
  r.delivered_bytes_fraction = u;
  return r;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("utility") {
    const std::vector<double> arrived{4, 1, 2};
    CHECK(utility(arrived, arrived) == doctest::Approx(1.0));
    CHECK(utility({}, arrived) == 0.0);
    const std::vector<double> got{4, 2};
    CHECK(utility(got, arrived) == doctest::Approx(6.0 / 7.0));
    CHECK_THROWS_AS(utility({}, {}), NoTrafficError);
    const std::vector<double> zeros{0, 0};
    CHECK_THROWS_AS(utility({}, zeros), NoTrafficError);
  }

  TEST_CASE("utility ignores a common reward scale") {
    const std::vector<double> arrived{4, 1, 2, 9}, got{4, 9};
    std::vector<double> a2, g2;
    for (double x : arrived) a2.push_back(x * 3.5);
    for (double x : got) g2.push_back(x * 3.5);
    CHECK(utility(g2, a2) == doctest::Approx(utility(got, arrived)));
  }

  TEST_CASE("added-packets histogram") {
    std::vector<ScheduleDecision> d(5);
    for (auto& x : d) x.added_count = 1;
    CHECK(added_packets_histogram(d) == std::map<int, std::int64_t>{{1, 5}});
    d[2].added_count = 2;
    CHECK(added_packets_histogram(d) == std::map<int, std::int64_t>{{1, 4}, {2, 1}});
    CHECK(added_packets_histogram({}).empty());
  }

  TEST_CASE("describe") {
    const std::vector<double> one{0.7};
    auto s = describe(one);
    CHECK(s.mean == doctest::Approx(0.7));
    CHECK(s.std == 0.0);
    const std::vector<double> two{0.4, 0.6};
    s = describe(two);
    CHECK(s.mean == doctest::Approx(0.5));
    CHECK(s.std == doctest::Approx(0.14142135623730948));
    CHECK(s.ci95 == doctest::Approx(12.706 * 0.14142135623730948 / std::sqrt(2.0)).epsilon(1e-4));
  }

  TEST_CASE("CI95 uses Student t beyond the table") {
    std::vector<double> v;
    for (int i = 0; i < 50; ++i) v.push_back(0.5 + 0.01 * ((i * 37) % 11 - 5));
    const auto s = describe(v);
    CHECK(s.ci95 == doctest::Approx(2.0095752371292397 * s.std / std::sqrt(50.0)).epsilon(1e-6));
  }

  TEST_CASE("aggregate groups by policy and lambda, independent of order") {
    std::vector<SimReport> rs{rep("b", 2, 2, 0.6), rep("a", 1, 1, 0.9), rep("b", 2, 1, 0.4),
                              rep("a", 2, 1, 0.3)};
    rs[0].added_packets_histogram = {{1, 3}};
    rs[2].added_packets_histogram = {{1, 1}, {2, 2}};
    const auto rows = aggregate(rs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].policy == "a");
    CHECK(rows[0].lambda == 1);
    CHECK(rows[2].policy == "b");
    CHECK(rows[2].runs == 2);
    CHECK(rows[2].utility.mean == doctest::Approx(0.5));
    CHECK(rows[2].utility.std == doctest::Approx(0.14142135623730948));
    CHECK(rows[2].added_packets_histogram == std::map<int, std::int64_t>{{1, 4}, {2, 2}});

    std::reverse(rs.begin(), rs.end());
    const auto again = aggregate(rs);
    CHECK(again[2].utility.mean == rows[2].utility.mean);
    CHECK(again[2].utility.std == rows[2].utility.std);
  }

  TEST_CASE("reports with undefined utility are left out of its mean") {
    std::vector<SimReport> rs{rep("a", 1, 1, 0.8), rep("a", 1, 2, 0.0)};
    rs[1].utility_defined = false;
    const auto rows = aggregate(rs);
    CHECK(rows[0].utility.mean == doctest::Approx(0.8));
    CHECK(rows[0].runs == 2);
  }

  TEST_CASE("histogram JSON round trip") {
    const std::map<int, std::int64_t> h{{1, 12}, {2, 4}, {4, 1}};
    const auto text = histogram_to_json(h);
    CHECK(text == R"({"1":12,"2":4,"4":1})");
    CHECK(histogram_from_json(text) == h);
    CHECK(histogram_to_json({}) == "{}");
    CHECK(histogram_from_json("{}").empty());
  }
}
