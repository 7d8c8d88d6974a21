#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hppa/geometry.hpp"
#include "hppa/mappings.hpp"
#include "hppa/ppa.hpp"

namespace hppa {

struct FejerReport {
  Point p;
  double max_increment = 0.0;  // max_n d_{n+1} - d_n (may be negative)
  int worst_index = 0;         // n at which max_increment occurs
  // Smallest β >= 0 with d_{n+1} <= (1 + β Λ_n) d_n + β (Λ_n + M_n), where
  // Λ_n = Σ_i λ_in and M_n = Σ_i μ_in. Then B_n = β Λ_n, C_n = β (Λ_n + M_n).
  double fitted_scale = 0.0;
  double sum_b = 0.0;  // Σ_n B_n over the trace
  double sum_c = 0.0;  // Σ_n C_n over the trace
  double sum_b_bound = 0.0;  // β Σ_{n>=1} Λ_n, finite by construction
  double sum_c_bound = 0.0;
  bool feasible = false;
  double tail_oscillation = 0.0;  // max - min of d_n over the last 10%
  bool limit_exists = false;
  bool pass = false;
};

struct FejerOptions {
  double increment_tol = 1e-10;
  double oscillation_tol = 1e-6;
};

/// Quasi-Fejér certificate of {x_n} with respect to p. The λ, μ bounds come
/// from the mapping family. Throws InsufficientDataError for fewer than 10
/// records.
FejerReport fejer_certificate(const Trace& trace, const Point& p, const Space& space,
                              const std::vector<TanMapping>& family,
                              const FejerOptions& options = {});

struct ResidualSeries {
  std::vector<double> d_xz;
  std::vector<double> max_d_tx;
};
ResidualSeries residual_series(const Trace& trace);

struct AsymptoticCenter {
  Point center;
  double radius = 0.0;
  int iterations = 0;
};

/// Chebyshev center of a finite point set: minimizer of x -> max_j d(x, p_j),
/// warm-started at the last point.
AsymptoticCenter asymptotic_center(const Space& space, const std::vector<Point>& points,
                                   double tol = 1e-10);

std::vector<double> dist_to_solution_series(const Trace& trace,
                                            const std::vector<Point>& solution_set,
                                            const Space& space);

struct ConditionIReport {
  bool pass = true;
  std::optional<int> violating_n;
  // Largest κ with lhs_n >= κ dist_n at every n with dist_n > 0 (+inf when
  // every dist_n is zero).
  double kappa = 0.0;
};

/// Checks d(J_k x_n, x_n) + max_i d(T_i x_n, x_n) >= g(dist(x_n, 𝔽)) for each n.
ConditionIReport condition_I_check(const Trace& trace, const std::vector<double>& dist_series,
                                   const std::function<double(double)>& g);

struct CertificateOptions {
  double residual_tol = 1e-8;
  double dist_tol = 1e-6;
  double center_tol = 1e-4;
  FejerOptions fejer;
  std::optional<double> required_kappa;
};

struct CenterWindow {
  int first_n = 0;
  int last_n = 0;
  AsymptoticCenter estimate;
};

struct Certificate {
  std::vector<FejerReport> fejer;
  bool fejer_skipped = false;  // trace too short to fit
  double final_d_xz = 0.0;
  double final_max_d_tx = 0.0;
  bool residual_pass = false;
  std::vector<double> dist_series;
  bool dist_pass = false;
  std::vector<CenterWindow> windows;  // tail window, then the disjoint earlier one
  double center_error = 0.0;          // distance from the tail center to the limit point
  double window_separation = 0.0;     // distance between the two window centers
  bool center_pass = false;
  std::optional<ConditionIReport> condition_i;
  bool condition_i_pass = true;
  bool pass = false;
};

/// Tail window length: max(50, ceil(10% of the trace)), capped at a quarter of
/// the trace so short runs do not average in their transient.
std::size_t tail_window_size(std::size_t trace_length);

Certificate certify(const Space& space, const Trace& trace, const std::vector<TanMapping>& family,
                    const std::vector<Point>& solution_set, const CertificateOptions& options = {});

}  // namespace hppa
