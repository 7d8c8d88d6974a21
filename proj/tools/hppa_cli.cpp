// Command-line front end: run configured experiments, list the scenario
// registry, or run the property suite of one scenario.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "hppa/errors.hpp"
#include "hppa/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

void print_config_error(const std::string& source, const hppa::ConfigError& e) {
  std::cerr << source;
  if (e.line() > 0) std::cerr << ":" << e.line() << ":" << e.column();
  std::cerr << ": config error";
  if (!e.field().empty()) std::cerr << " [" << e.field() << "]";
  std::cerr << ": " << e.what() << "\n";
}

int cmd_run(const std::vector<std::string>& paths, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& out, unsigned threads) {
  std::vector<hppa::ExperimentConfig> cfgs;
  for (const auto& path : paths) {
    try {
      hppa::ExperimentConfig cfg = hppa::load_config(path);
      if (seed) cfg.seed = *seed;
      if (out) cfg.output_dir = *out;
      cfgs.push_back(std::move(cfg));
    } catch (const hppa::ConfigError& e) {
      print_config_error(path, e);
      return kExitConfig;
    }
  }
  const auto results = hppa::run_experiments(cfgs, threads);
  int code = kExitOk;
  for (const auto& r : results) {
    const bool certified = r.certificate && r.certificate->pass;
    std::printf("%-16s %-12s iterations=%-7d residual=%.3e certificate=%s\n", r.scenario.c_str(),
                hppa::result_status_name(r.status).c_str(), r.iterations, r.final_residual,
                r.certificate ? (certified ? "pass" : "fail") : "none");
    if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
    if (!r.summary_path.empty()) std::printf("  summary: %s\n", r.summary_path.c_str());
    if (r.status != hppa::ResultStatus::Converged || !certified) code = kExitFailed;
  }
  return code;
}

int cmd_list() {
  for (const auto& s : hppa::list_scenarios()) {
    std::printf("%-16s F = %s\n  %s\n", s.name.c_str(), s.solution_label.c_str(), s.description.c_str());
  }
  return kExitOk;
}

int cmd_check(const std::string& name, std::uint64_t seed, int samples) {
  if (!hppa::is_scenario(name)) {
    std::cerr << "unknown scenario '" << name << "'\n";
    return kExitConfig;
  }
  const hppa::CheckReport report = hppa::check_scenario(name, seed, samples);
  for (const auto& item : report.items) {
    std::printf("[%s] %-52s worst=% .3e limit=%.1e\n", item.pass ? "PASS" : "FAIL", item.name.c_str(), item.value,
                item.threshold);
  }
  std::printf("%s: %s\n", name.c_str(), report.pass() ? "all checks passed" : "checks failed");
  return report.pass() ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-step proximal point experiments in Hadamard spaces"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run one or more experiment configs");
  run->add_option("--config", configs, "Config file (repeatable)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the RNG seed");
  run->add_option("--out", out, "Override the output directory");
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  app.add_subcommand("list-scenarios", "List bundled scenarios");

  std::string scenario;
  std::uint64_t check_seed = 0;
  int samples = 200;
  auto* check = app.add_subcommand("check", "Run the property suite for one scenario");
  check->add_option("--scenario", scenario, "Scenario name")->required();
  check->add_option("--seed", check_seed, "Sampling seed");
  check->add_option("--samples", samples, "Samples per property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(configs, seed, out, threads);
    if (app.got_subcommand("list-scenarios")) return cmd_list();
    if (*check) return cmd_check(scenario, check_seed, samples);
  } catch (const hppa::ConfigError& e) {
    print_config_error("hppa", e);
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitOk;
}
