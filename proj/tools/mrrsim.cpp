#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mrr/experiment.hpp"
#include "mrr/verify.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int cmd_run(const std::string& config, const mrr::RunOverrides& overrides, bool timing) {
  mrr::RunConfig cfg;
  try {
    cfg = mrr::load_run_config(config, overrides);
  } catch (const mrr::ConfigError& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitConfig;
  }
  const int workers = mrr::workers_from_env();
  const auto reports = mrr::run_experiment(cfg, workers);
  try {
    mrr::write_outputs(cfg, reports, timing);
  } catch (const mrr::IoError& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitIo;
  }
  std::cout << reports.size() << " runs written to " << cfg.output_dir << '\n';
  std::cout << mrr::format_utility_matrix(mrr::aggregate(reports));
  return 0;
}

int cmd_report(const std::string& dir) {
  std::vector<mrr::SimReport> runs;
  try {
    runs = mrr::load_runs(dir);
  } catch (const mrr::IoError& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitIo;
  }
  if (runs.empty()) {
    std::cout << "no runs found\n";
    return kExitFailure;
  }
  std::cout << mrr::format_utility_matrix(mrr::aggregate(std::move(runs)));
  return 0;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& s : mrr::verify::run_all()) {
    std::printf("%-20s %4d/%-4d %7.2fs %s\n", s.name.c_str(), s.passed, s.total, s.seconds,
                s.ok() ? "ok" : "FAILED");
    if (!s.ok()) {
      std::printf("  first failure: %s\n", s.first_failure.c_str());
      ok = false;
    }
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-aware downlink scheduling simulator"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::optional<double> scale;
  std::optional<std::string> out;
  bool timing = false;
  std::string config;
  std::string dir;

  auto* run = app.add_subcommand("run", "Run the policy x lambda x replication grid");
  run->add_option("config", config, "JSON run configuration")->required();
  run->add_option("--seed", seed, "Base seed");
  run->add_option("--scale", scale, "Scale factor for RBs, subscribers and arrival rates");
  run->add_option("--out", out, "Output directory");
  run->add_flag("--timing", timing, "Fill the wall_ms column (breaks byte-identical reruns)");

  auto* report = app.add_subcommand("report", "Print the mean utility matrix of a run directory");
  report->add_option("dir", dir, "Directory holding runs.csv")->required();

  auto* verify = app.add_subcommand("verify", "Run the solver and simulator property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(config, mrr::RunOverrides{seed, scale, out}, timing);
    if (*report) return cmd_report(dir);
    if (*verify) return cmd_verify();
  } catch (const mrr::ConfigError& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mrr::IoError& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "mrrsim: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
