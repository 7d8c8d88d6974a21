#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hppa/geometry.hpp"
#include "hppa/mappings.hpp"
#include "hppa/prox.hpp"

namespace hppa {

/// Step sizes α_n ∈ [a, b] ⊂ (0, 1) and resolvent parameters k_n >= k_min > 0.
struct Schedule {
  enum class AlphaRule { Constant, Alternating, Decay, Custom };
  enum class KRule { Constant, Decaying };

  AlphaRule alpha_rule = AlphaRule::Constant;
  double alpha = 0.5;  // used by Constant
  double a = 0.1;
  double b = 0.9;
  std::function<double(int)> custom_alpha;  // used by Custom

  KRule k_rule = KRule::Constant;
  double k0 = 1.0;

  // Alternating: a on odd n, b on even n. Decay: a + (b - a)/n.
  double alpha_at(int n) const;
  // Decaying: k0 (1 + 1/n), which stays above k0.
  double k_at(int n) const;
  double k_min() const { return k0; }

  // Throws ConfigError naming the violated constraint.
  void validate() const;
};

std::string alpha_rule_name(Schedule::AlphaRule rule);
Schedule::AlphaRule parse_alpha_rule(const std::string& name);
std::string k_rule_name(Schedule::KRule rule);
Schedule::KRule parse_k_rule(const std::string& name);

/// Iterate x_n plus the intermediate points of the step that produced it:
/// z_{n-1} and y_{1(n-1)}, ..., y_{(m-1)(n-1)} (y[i-1] holds y_i). Both are
/// empty for the starting state.
struct IterState {
  int n = 1;
  Point x;
  std::optional<Point> z;
  std::vector<Point> y;
};

struct IterRecord {
  int n = 0;
  Point x;
  Point z;
  double d_xz = 0.0;
  std::vector<double> d_tx;  // d(T_i x_n, x_n), i = 1..m
  double residual = 0.0;     // d_xz + Σ d_tx
  double f_x = 0.0;
  double f_z = 0.0;
  double alpha = 0.0;
  double k = 0.0;
  double wall_seconds = 0.0;  // since the start of the run
};

enum class RunStatus { Converged, Unconverged };
std::string status_name(RunStatus status);

struct Trace {
  std::vector<IterRecord> records;
  RunStatus status = RunStatus::Unconverged;
  std::size_t mapping_count = 0;
};

struct StoppingRule {
  double tol = 1e-8;
  int max_iters = 100000;
};

/// One step x_n -> x_{n+1}. `prox` supplies solver settings; its k is
/// replaced by the schedule's k_n. `z` may carry an already computed J_{k_n} x_n.
IterState step(const Space& space, const ConvexObjective& f,
               const std::vector<TanMapping>& family, const Schedule& schedule,
               const IterState& state, const ResolventConfig& prox = {},
               const std::optional<Point>& z = std::nullopt);

/// Iterates until residual(x_n) <= tol or max_iters records were produced.
Trace run(const Space& space, const ConvexObjective& f, const std::vector<TanMapping>& family,
          const Schedule& schedule, const Point& x1, const StoppingRule& stop,
          const ResolventConfig& prox = {});

/// d(x, J_k x) + Σ_i d(T_i x, x) with k = prox.k.
double residual(const Space& space, const ConvexObjective& f,
                const std::vector<TanMapping>& family, const Point& x,
                const ResolventConfig& prox = {});

}  // namespace hppa
