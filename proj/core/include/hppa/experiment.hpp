#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hppa/diagnostics.hpp"
#include "hppa/ppa.hpp"
#include "hppa/prox.hpp"
#include "hppa/scenario.hpp"

namespace hppa {

enum class StartRule { Canonical, Random };

struct ExperimentConfig {
  std::string scenario;
  std::optional<int> dimension;
  std::uint64_t seed = 0;
  std::string output_dir;  // empty: nothing is written
  StartRule start = StartRule::Canonical;
  Schedule schedule;
  StoppingRule stopping;
  ResolventConfig prox;  // prox.k is unused; the schedule supplies k_n
};

/// Parses the sectioned key = value format:
///
///   [scenario]  name, dimension, seed, output, start (canonical | random)
///   [schedule]  a, b, alpha_rule (constant | alternating | decay), alpha,
///               k_rule (constant | decaying), k0
///   [stopping]  tol, max_iters
///   [solver]    kind (auto | closed-form | geodesic-descent |
///               tree-branch-scan), inner_tol, max_inner_iters
///
/// '#' and ';' start comments. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

enum class ResultStatus { Converged, Unconverged, Error };
std::string result_status_name(ResultStatus s);

struct ScenarioResult {
  std::string scenario;
  ResultStatus status = ResultStatus::Error;
  std::string error;
  std::optional<Point> final_iterate;
  double final_residual = 0.0;
  int iterations = 0;
  std::optional<Certificate> certificate;
  double wall_seconds = 0.0;
  Trace trace;
  std::string trace_path;
  std::string summary_path;
};

/// Runs one configured scenario and certifies the trace. Writes
/// <output>/<scenario>.trace.csv and <output>/<scenario>.summary.json when an
/// output directory is configured. Solver and runtime failures are recorded in
/// the status, not thrown.
ScenarioResult run_experiment(const ExperimentConfig& cfg);

/// Runs configurations on a pool of worker threads; results keep input order.
std::vector<ScenarioResult> run_experiments(const std::vector<ExperimentConfig>& cfgs,
                                            unsigned threads = 0);

std::string trace_csv(const Space& space, const Trace& trace);
std::string summary_json(const ExperimentConfig& cfg, const ScenarioResult& result);

struct CheckItem {
  std::string name;
  bool pass = false;
  double value = 0.0;  // worst observed statistic
  double threshold = 0.0;
};

struct CheckReport {
  std::string scenario;
  std::vector<CheckItem> items;
  bool pass() const;
};

/// Property suite for one scenario: objective convexity, resolvent checks,
/// mapping checks, and a certified default run.
CheckReport check_scenario(const std::string& name, std::uint64_t seed = 0, int samples = 200);

}  // namespace hppa
