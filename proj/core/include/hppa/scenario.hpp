#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hppa/geometry.hpp"
#include "hppa/mappings.hpp"
#include "hppa/prox.hpp"
#include "hppa/rng.hpp"

namespace hppa {

/// A bundled test problem: space, objective, mapping family and the common
/// solution set 𝔽 = argmin f ∩ ⋂ F(T_i).
struct Scenario {
  std::string name;
  std::string description;
  Space space = Space::euclidean(1);
  ConvexObjective objective;
  std::vector<TanMapping> family;
  std::vector<Point> solution_set;  // empty when unknown
  std::string solution_label;       // human-readable 𝔽
  Point canonical_start;
  std::function<Point(Rng&)> random_start;
  // Samples the domain C; property checks draw pairs from it.
  std::function<Point(Rng&)> sample_domain;
  ProxSolver preferred_solver = ProxSolver::Auto;
  // Lower bound on κ in d(J x, x) + max_i d(T_i x, x) >= κ dist(x, 𝔽), when
  // the scenario is meant to exhibit Condition (I).
  std::optional<double> required_kappa;
};

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::string solution_label;
};

/// Registered names in their stable listing order.
const std::vector<std::string>& scenario_names();
std::vector<ScenarioInfo> list_scenarios();
bool is_scenario(const std::string& name);

/// `dimension` overrides d (or K) where the scenario allows it. Throws
/// ConfigError for unknown names or unsupported dimensions.
Scenario make_scenario(const std::string& name, std::optional<int> dimension = std::nullopt);

}  // namespace hppa
