#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrr/experiment.hpp"

using namespace mrr;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const char* name) {
  const auto dir = fs::temp_directory_path() / "mrrsched-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig tiny() {
  return parse_run_config(R"({
    "policies": ["mrr-lp2", "edf"],
    "replications": 2,
    "lambda_sweep": [1500],
    "traffic": {"total_packets": 120}
  })");
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("desk defaults") {
    const auto c = default_run_config();
    CHECK(c.channel.rb_count == 5);
    CHECK(c.channel.subscribers == 8);
    CHECK(c.traffic.total_packets == 1000);
    CHECK(c.replications == 10);
    REQUIRE(c.lambda_sweep.size() == 5);
    CHECK(c.lambda_sweep.front() == doctest::Approx(4000.0 / 3));
    CHECK(c.lambda_sweep.back() == doctest::Approx(8000.0 / 3));
    CHECK(c.policies.size() == 6);

    const auto full = default_run_config(1.0);
    CHECK(full.channel.rb_count == 15);
    CHECK(full.channel.subscribers == 24);
    CHECK(full.traffic.total_packets == 5000);
    CHECK(full.replications == 50);
  }

  TEST_CASE("config parsing and overrides") {
    const auto c = parse_run_config(R"({
      "scale": 1,
      "channel": {"tx_power_dbm": 30, "noise_figure_db": 7},
      "traffic": {"exponential_param_is_rate": true},
      "mlwdf": {"delta": 0.1},
      "base_seed": 40,
      "output_dir": "elsewhere"
    })", RunOverrides{7, std::nullopt, std::string("out2")});
    CHECK(c.channel.rb_count == 15);
    CHECK(c.channel.tx_power_dbm == 30);
    CHECK(c.channel.noise_figure_db == 7);
    CHECK(c.traffic.exponential_param_is_rate);
    CHECK(c.mlwdf.delta == 0.1);
    CHECK(c.base_seed == 7);
    CHECK(c.output_dir == "out2");

    const auto s = parse_run_config("{}", RunOverrides{std::nullopt, 2.0 / 3.0, std::nullopt});
    CHECK(s.channel.rb_count == 10);
    CHECK(s.channel.subscribers == 16);
  }

  TEST_CASE("custom mixture") {
    const auto c = parse_run_config(R"({"traffic": {"mixture": [
      {"name": "a", "share": 0.5, "length": 100, "deadline": 0.05, "priority_per_byte": 2},
      {"name": "b", "share": 0.5, "length": {"uniform": [10, 20]},
       "deadline": {"exponential": 0.2}}
    ]}})");
    REQUIRE(c.traffic.mixture.size() == 2);
    CHECK(c.traffic.mixture[0].length.max_bytes == 100);
    CHECK(c.traffic.mixture[1].length.kind == LengthDist::Kind::kUniform);
    CHECK(c.traffic.mixture[1].deadline.kind == DeadlineDist::Kind::kExponential);
  }

  TEST_CASE("bad configs") {
    CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("[]"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"policies": []})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"policies": ["fifo"]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"replications": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"replications": "ten"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"lambda_sweep": [-1]})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"channel": {"rb_count": 0}})"), ConfigError);
    CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("one replication, one policy: one run row, one summary row") {
    auto c = tiny();
    c.policies = {"mud"};
    c.replications = 1;
    c.output_dir = scratch("one").string();
    const auto reports = run_experiment(c);
    write_outputs(c, reports);
    std::ifstream runs(fs::path(c.output_dir) / kRunsFile), summary(fs::path(c.output_dir) / kSummaryFile);
    int run_lines = 0, summary_lines = 0;
    for (std::string l; std::getline(runs, l);) ++run_lines;
    for (std::string l; std::getline(summary, l);) ++summary_lines;
    CHECK(run_lines == 2);
    CHECK(summary_lines == 2);
  }

  TEST_CASE("paired seeding and sorted results") {
    const auto c = tiny();
    const auto r = run_experiment(c);
    REQUIRE(r.size() == 4);
    CHECK(r[0].policy == "edf");
    CHECK(r[0].seed == 1);
    CHECK(r[1].seed == 2);
    CHECK(r[2].policy == "mrr-lp2");
    // Same stream for both policies at the same seed.
    CHECK(r[0].arrived == r[2].arrived);
    CHECK(r[0].arrived_reward == r[2].arrived_reward);
  }

  TEST_CASE("reruns and worker counts give identical CSVs") {
    const auto c = tiny();
    std::ostringstream a, b, w;
    write_runs_csv(a, run_experiment(c, 1));
    write_runs_csv(b, run_experiment(c, 1));
    write_runs_csv(w, run_experiment(c, 3));
    CHECK(a.str() == b.str());
    CHECK(a.str() == w.str());
  }

  TEST_CASE("runs CSV round trip") {
    const auto c = tiny();
    const auto r = run_experiment(c);
    std::ostringstream os;
    write_runs_csv(os, r, true);
    std::istringstream is(os.str());
    const auto back = read_runs_csv(is);
    REQUIRE(back.size() == r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(back[i].policy == r[i].policy);
      CHECK(back[i].seed == r[i].seed);
      CHECK(back[i].utility == doctest::Approx(r[i].utility).epsilon(1e-9));
      CHECK(back[i].added_packets_histogram == r[i].added_packets_histogram);
    }
    std::istringstream junk("hello\n1,2\n");
    CHECK_THROWS_AS(read_runs_csv(junk), IoError);
  }

  TEST_CASE("report reads back what aggregate computed") {
    auto c = tiny();
    c.output_dir = scratch("report").string();
    const auto r = run_experiment(c);
    write_outputs(c, r);
    const auto loaded = load_runs(c.output_dir);
    REQUIRE(loaded.size() == r.size());
    const auto direct = aggregate(r);
    const auto via_csv = aggregate(loaded);
    REQUIRE(direct.size() == via_csv.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
      CHECK(via_csv[i].utility.mean == doctest::Approx(direct[i].utility.mean).epsilon(1e-9));
    }
    CHECK(format_utility_matrix(via_csv) == format_utility_matrix(direct));
  }

  TEST_CASE("utility matrix layout") {
    std::vector<SummaryRow> rows(1);
    rows[0].policy = "edf";
    rows[0].lambda = 1500;
    rows[0].utility.mean = 0.75;
    const auto m = format_utility_matrix(rows);
    CHECK(m.find("edf") != std::string::npos);
    CHECK(m.find("0.7500") != std::string::npos);
    int lines = 0;
    for (char ch : m) lines += ch == '\n';
    CHECK(lines == 2);
  }

  TEST_CASE("empty directory has no runs") {
    CHECK(load_runs(scratch("empty")).empty());
    CHECK_THROWS_AS(load_runs("/nonexistent/dir"), IoError);
  }

  TEST_CASE("worker count from the environment") {
    setenv("MRRSIM_WORKERS", "3", 1);
    CHECK(workers_from_env() == 3);
    setenv("MRRSIM_WORKERS", "zero", 1);
    CHECK(workers_from_env() == 1);
    unsetenv("MRRSIM_WORKERS");
    CHECK(workers_from_env() == 1);
  }
}

#include "mrr/verify.hpp"

TEST_SUITE("verify") {
  TEST_CASE("suites pass on the real solvers") {
    const verify::VerifyHooks hooks;
    for (const auto& s : {verify::ilp_vs_exhaustive(hooks, 50), verify::lp2_vs_grid(hooks, 20),
                          verify::partition_vs_dp(hooks, 30), verify::pruned_vs_unpruned(hooks, 50),
                          verify::lp2_dominates_ilp(hooks, 50), verify::urllc_vs_oracle(50),
                          verify::claim2_simulations(1)}) {
      CHECK_MESSAGE(s.ok(), s.name << ": " << s.first_failure);
    }
  }

  TEST_CASE("a perturbed ILP solver is caught") {
    verify::VerifyHooks hooks;
    hooks.ilp = [](const AllocationProblem& p) {
      auto r = solve_ilp_subset(p);
      r.total_rr *= 0.999;
      return r;
    };
    CHECK_FALSE(verify::ilp_vs_exhaustive(hooks, 50).ok());
  }

  TEST_CASE("a perturbed LP(2) solver is caught") {
    verify::VerifyHooks hooks;
    hooks.lp2 = [](const Demand& a, const Demand& b, int k) {
      auto r = solve_lp2(a, b, k);
      if (r.feasible) {
        for (auto& x : r.allocations[0]) x = std::min(1.0, x + 0.05);
        for (auto& x : r.allocations[1]) x = std::max(0.0, x - 0.05);
      }
      return r;
    };
    CHECK_FALSE(verify::lp2_vs_grid(hooks, 50).ok());
  }

  TEST_CASE("a partition reduction that always says yes is caught") {
    verify::VerifyHooks hooks;
    hooks.ilp = [](const AllocationProblem& p) {
      SolveResult r;
      r.feasible = true;
      r.allocations.assign(p.packets.size(), std::vector<double>(p.rb_count, 0.0));
      return r;
    };
    CHECK_FALSE(verify::partition_vs_dp(hooks, 50).ok());
  }
}
