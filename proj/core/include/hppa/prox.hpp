#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hppa/geometry.hpp"

namespace hppa {

/// A proper convex lower-semicontinuous function f : X -> (-inf, +inf].
///
/// Only `value` is mandatory. `resolvent` is a closed-form J_k when one is
/// known; `subgradient` returns a Riemannian (sub)gradient in ambient tangent
/// coordinates and feeds the geodesic-descent solver. `minimizers` is test
/// metadata: a few known elements of argmin f.
struct ConvexObjective {
  std::string name;
  std::function<double(const Point&)> value;
  std::function<Point(double k, const Point& x)> resolvent;
  std::function<Tangent(const Point&)> subgradient;
  std::vector<Point> minimizers;
  // Isolated non-smooth points. At each, the subdifferential is the subgradient
  // rule's value plus a closed tangent ball of the given radius.
  struct Kink {
    Point at;
    double radius;
  };
  std::vector<Kink> kinks;

  double operator()(const Point& y) const { return value(y); }
  bool has_closed_form() const { return static_cast<bool>(resolvent); }
};

namespace objectives {

ConvexObjective zero(const Space& space);
// ½ d²(y, c); prox is the point k/(1+k) of the way from x to c.
ConvexObjective half_squared_distance(const Space& space, Point center);
// d(y, a); prox moves x towards a by min(k, d(x, a)).
ConvexObjective distance_to(const Space& space, Point anchor);
// 0 on the closed ball B(c, r), +inf outside; prox is the metric projection.
ConvexObjective ball_indicator(const Space& space, Point center, double radius);
// Σ w_i d²(y, a_i). Closed-form prox and minimizer on Euclidean only.
ConvexObjective weighted_frechet(const Space& space, std::vector<Point> anchors,
                                 std::vector<double> weights);
// Σ w_i d(y, a_i). No closed form.
ConvexObjective sum_of_distances(const Space& space, std::vector<Point> anchors,
                                 std::vector<double> weights);

}  // namespace objectives

enum class ProxSolver {
  Auto,  // closed form when available, otherwise the backend's numeric solver
  ClosedForm,
  GeodesicDescent,
  TreeBranchScan,
};

std::string solver_name(ProxSolver s);
ProxSolver parse_solver_name(const std::string& s);

struct ResolventConfig {
  double k = 1.0;
  double inner_tolerance = 1e-10;
  int max_inner_iterations = 10000;
  ProxSolver solver = ProxSolver::Auto;
};

/// Numeric prox failure: no convergence, or the result failed the
/// sub-differential inequality on the probe points.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& message, Point last_iterate, double residual)
      : std::runtime_error(message), last_iterate_(std::move(last_iterate)), residual_(residual) {}

  const Point& last_iterate() const { return last_iterate_; }
  double residual() const { return residual_; }

 private:
  Point last_iterate_;
  double residual_;
};

// Post-validation threshold for numeric resolvent results.
inline constexpr double kResolventValidationTolerance = 1e-6;

/// J_k(x) = argmin_y f(y) + d²(y,x)/(2k), with J_0 = identity.
Point resolvent(const Space& space, const ConvexObjective& f, const ResolventConfig& cfg,
                const Point& x);

/// (1/2k)[d²(jx,y) - d²(x,y) + d²(jx,x)] + f(jx) - f(y). Non-positive for
/// every y when jx = J_k(x).
double subdiff_inequality_residual(const Space& space, const ConvexObjective& f, double k,
                                   const Point& x, const Point& y, const Point& jx);

/// d(J_k x, J_eta(combine(J_k x, x, eta/k))); zero for an exact resolvent.
double resolvent_identity_residual(const Space& space, const ConvexObjective& f, double k,
                                   double eta, const Point& x, const ResolventConfig& cfg);

/// Golden-section search for the minimiser of a unimodal phi on [lo, hi],
/// followed by a parabolic polish and an endpoint check.
double solve_1d_convex(const std::function<double(double)>& phi, double lo, double hi,
                       double tol);

struct DescentOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  double initial_step = 1.0;
  // When > 0, stop once |grad|/strong_convexity <= tolerance (a certified
  // bound on the distance to the minimiser).
  double strong_convexity = 0.0;
};

struct DescentResult {
  Point point;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Riemannian gradient descent with Armijo backtracking along geodesics.
/// Once function values stop resolving progress, a trial step is also
/// accepted when it keeps the value within rounding and shrinks the
/// gradient norm.
DescentResult geodesic_descent(const Space& space,
                               const std::function<double(const Point&)>& value,
                               const std::function<Tangent(const Point&)>& gradient,
                               const Point& start, const DescentOptions& options);

/// Probe points used to post-validate numeric resolvent results.
std::vector<Point> resolvent_probes(const Space& space, const ConvexObjective& f, double k,
                                    const Point& x, const Point& jx);

}  // namespace hppa
