#include "mrr/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <tuple>

#include <json.hpp>

namespace mrr {
namespace {

// Two-sided 95% Student t quantiles for 1..30 degrees of freedom.
constexpr std::array<double, 30> kT975 = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

double t975(std::size_t dof) {
  if (dof == 0) return 0.0;
  if (dof <= kT975.size()) return kT975[dof - 1];
  // Cornish-Fisher expansion around the normal quantile.
  const double z = 1.959963984540054;
  const double v = static_cast<double>(dof);
  const double z3 = z * z * z, z5 = z3 * z * z, z7 = z5 * z * z;
  return z + (z3 + z) / (4 * v) + (5 * z5 + 16 * z3 + 3 * z) / (96 * v * v) +
         (3 * z7 + 19 * z5 + 17 * z3 - 15 * z) / (384 * v * v * v);
}

}  // namespace

double utility(std::span<const double> delivered_rewards,
               std::span<const double> arrived_rewards) {
  const double total = std::accumulate(arrived_rewards.begin(), arrived_rewards.end(), 0.0);
  if (!(total > 0.0)) throw NoTrafficError("no non-URLLC reward arrived");
  const double got = std::accumulate(delivered_rewards.begin(), delivered_rewards.end(), 0.0);
  return got / total;
}

std::map<int, std::int64_t> added_packets_histogram(std::span<const ScheduleDecision> decisions) {
  std::map<int, std::int64_t> h;
  for (const auto& d : decisions) ++h[d.added_count];
  return h;
}

Stat describe(std::span<const double> values) {
  Stat s;
  const std::size_t n = values.size();
  if (n == 0) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  if (n < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(n - 1));
  s.ci95 = t975(n - 1) * s.std / std::sqrt(static_cast<double>(n));
  return s;
}

std::vector<SummaryRow> aggregate(std::vector<SimReport> reports) {
  std::sort(reports.begin(), reports.end(), [](const SimReport& a, const SimReport& b) {
    return std::tie(a.policy, a.lambda, a.seed) < std::tie(b.policy, b.lambda, b.seed);
  });
  std::vector<SummaryRow> out;
  std::size_t i = 0;
  while (i < reports.size()) {
    std::size_t j = i;
    std::vector<double> u, dbf, missed;
    SummaryRow row;
    row.policy = reports[i].policy;
    row.lambda = reports[i].lambda;
    while (j < reports.size() && reports[j].policy == row.policy &&
           reports[j].lambda == row.lambda) {
      const auto& r = reports[j];
      if (r.utility_defined) u.push_back(r.utility);
      dbf.push_back(r.delivered_bytes_fraction);
      missed.push_back(static_cast<double>(r.urllc_missed));
      for (const auto& [size, count] : r.added_packets_histogram) {
        row.added_packets_histogram[size] += count;
      }
      ++j;
    }
    row.runs = static_cast<int>(j - i);
    row.utility = describe(u);
    row.delivered_bytes_fraction = describe(dbf);
    row.urllc_missed = describe(missed);
    out.push_back(std::move(row));
    i = j;
  }
  return out;
}

std::string histogram_to_json(const std::map<int, std::int64_t>& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [size, count] : h) j[std::to_string(size)] = count;
  return j.dump();
}

std::map<int, std::int64_t> histogram_from_json(const std::string& text) {
  std::map<int, std::int64_t> h;
  if (text.empty()) return h;
  const auto j = nlohmann::json::parse(text);
  for (const auto& [key, value] : j.items()) h[std::stoi(key)] = value.get<std::int64_t>();
  return h;
}

}  // namespace mrr
