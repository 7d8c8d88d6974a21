#include "hppa/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double rounding_slack(double v) { return 64.0 * kEps * (std::abs(v) + 1.0); }

ProxSolver select_solver(const Space& space, const ConvexObjective& f, ProxSolver requested) {
  if (requested != ProxSolver::Auto) return requested;
  if (f.has_closed_form()) return ProxSolver::ClosedForm;
  return space.backend() == Backend::SpiderTree ? ProxSolver::TreeBranchScan
                                                : ProxSolver::GeodesicDescent;
}

// Global chart for the smooth backends: Euclidean coordinates, or the spatial
// part of the hyperboloid coordinates.
Eigen::VectorXd to_chart(const Point& p) {
  if (const auto* h = std::get_if<HyperbolicPoint>(&p)) return h->coords.tail(h->coords.size() - 1);
  return std::get<EuclideanPoint>(p).coords;
}

Point from_chart(const Space& space, const Eigen::VectorXd& v) {
  return space.backend() == Backend::Hyperbolic ? hyperbolic_point(v) : euclidean_point(v);
}

// Pulls a Riemannian gradient at p back to chart coordinates.
Eigen::VectorXd chart_gradient(const Point& p, const Tangent& g) {
  if (const auto* h = std::get_if<HyperbolicPoint>(&p)) {
    const auto d = h->coords.size() - 1;
    return g.tail(d) - (g(0) / h->coords(0)) * h->coords.tail(d);
  }
  return g;
}

// BFGS in chart coordinates. Used when steepest descent stalls on a stiff
// objective, typically a resolvent sitting just off a kink.
DescentResult quasi_newton(const Space& space, const std::function<double(const Point&)>& value,
                           const std::function<Tangent(const Point&)>& gradient, const Point& start,
                           const DescentOptions& options) {
  Eigen::VectorXd v = to_chart(start);
  Point y = start;
  double fy = value(y);
  Tangent g = gradient(y);
  Eigen::VectorXd cg = chart_gradient(y, g);
  const auto n = v.size();
  Eigen::MatrixXd inv_h = options.initial_step * Eigen::MatrixXd::Identity(n, n);
  for (int it = 0; it < options.max_iterations; ++it) {
    const double gnorm = tangent_norm(space, g);
    if (gnorm == 0.0 || gnorm / options.strong_convexity <= options.tolerance) return {y, gnorm, it, true};
    Eigen::VectorXd dir = -inv_h * cg;
    if (!(dir.dot(cg) < 0.0)) {
      inv_h = options.initial_step * Eigen::MatrixXd::Identity(n, n);
      dir = -inv_h * cg;
    }
    double t = 1.0;
    Point trial = y;
    double ft = fy;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      const Eigen::VectorXd cand = v + t * dir;
      if (!cand.allFinite()) continue;
      trial = from_chart(space, cand);
      if (!space.contains(trial)) continue;
      ft = value(trial);
      if (ft <= fy + 1e-4 * t * dir.dot(cg)) {
        moved = true;
        break;
      }
      // Below rounding, the value test is noise; accept a gradient-norm decrease.
      if (ft <= fy + rounding_slack(fy) && tangent_norm(space, gradient(trial)) < gnorm) {
        moved = true;
        break;
      }
    }
    if (!moved) return {y, gnorm, it, false};
    const Tangent g_new = gradient(trial);
    const Eigen::VectorXd cg_new = chart_gradient(trial, g_new);
    const Eigen::VectorXd sv = to_chart(trial) - v;
    const Eigen::VectorXd yv = cg_new - cg;
    const double sy = sv.dot(yv);
    if (sy > 1e-300) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * sv * yv.transpose();
      inv_h = left * inv_h * left.transpose() + rho * sv * sv.transpose();
    }
    v = to_chart(trial);
    y = trial;
    fy = ft;
    g = g_new;
    cg = cg_new;
  }
  return {y, tangent_norm(space, g), options.max_iterations, false};
}

Point prox_by_descent(const Space& space, const ConvexObjective& f, const ResolventConfig& cfg,
                      const Point& x) {
  if (space.backend() == Backend::SpiderTree) {
    throw DomainError("geodesic descent is unavailable on the spider tree");
  }
  if (!f.subgradient) throw DomainError("geodesic descent needs a subgradient rule for " + f.name);
  const double k = cfg.k;
  auto value = [&](const Point& y) {
    const double d = distance(space, y, x);
    return f.value(y) + d * d / (2.0 * k);
  };
  auto gradient = [&](const Point& y) {
    return Tangent(f.subgradient(y) - log_map(space, y, x) / k);
  };
  // A kink is the resolvent exactly when zero lies in the subdifferential there.
  for (const auto& kink : f.kinks) {
    if (tangent_norm(space, gradient(kink.at)) <= kink.radius) return kink.at;
  }
  DescentOptions opts;
  opts.tolerance = cfg.inner_tolerance;
  opts.max_iterations = cfg.max_inner_iterations;
  opts.initial_step = k;
  opts.strong_convexity = 1.0 / k;
  DescentOptions first = opts;
  first.max_iterations = std::min(opts.max_iterations, 500);
  DescentResult r = geodesic_descent(space, value, gradient, x, first);
  if (!r.converged) r = quasi_newton(space, value, gradient, r.point, opts);
  if (!r.converged) {
    throw SolverError("geodesic descent did not converge within " +
                          std::to_string(cfg.max_inner_iterations) + " iterations",
                      r.point, k * r.gradient_norm);
  }
  return r.point;
}

Point prox_by_branch_scan(const Space& space, const ConvexObjective& f, const ResolventConfig& cfg,
                          const Point& x) {
  if (space.backend() != Backend::SpiderTree) {
    throw DomainError("branch scan applies to the spider tree only");
  }
  const double k = cfg.k;
  const double rx = std::get<TreePoint>(x).radius;
  double best_value = std::numeric_limits<double>::infinity();
  Point best = x;
  for (int ray = 0; ray < space.dimension(); ++ray) {
    auto phi = [&](double r) {
      const Point y = tree_point(ray, r);
      const double d = distance(space, y, x);
      return f.value(y) + d * d / (2.0 * k);
    };
    // phi is convex on [0, inf): once phi(hi) >= phi(hi/2) the minimiser is
    // inside [0, hi].
    double hi = 2.0 * (rx + k + 1.0);
    int doublings = 0;
    while (phi(hi) < phi(0.5 * hi)) {
      hi *= 2.0;
      if (++doublings > 60) {
        throw SolverError("branch scan could not bracket the minimiser on ray " +
                              std::to_string(ray),
                          x, std::numeric_limits<double>::infinity());
      }
    }
    const double r = solve_1d_convex(phi, 0.0, hi, cfg.inner_tolerance);
    const double v = phi(r);
    if (v < best_value) {
      best_value = v;
      best = tree_point(ray, r);
    }
  }
  if (!std::isfinite(best_value)) {
    throw SolverError("branch scan found no point with finite objective", x, best_value);
  }
  return best;
}

void validate_candidate(const Space& space, const ConvexObjective& f, double k, const Point& x,
                        const Point& jx) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& y : resolvent_probes(space, f, k, x, jx)) {
    worst = std::max(worst, subdiff_inequality_residual(space, f, k, x, y, jx));
  }
  if (worst > kResolventValidationTolerance) {
    throw SolverError("resolvent candidate fails the sub-differential inequality", jx, worst);
  }
}

}  // namespace

std::string solver_name(ProxSolver s) {
  switch (s) {
    case ProxSolver::Auto: return "auto";
    case ProxSolver::ClosedForm: return "closed-form";
    case ProxSolver::GeodesicDescent: return "geodesic-descent";
    case ProxSolver::TreeBranchScan: return "tree-branch-scan";
  }
  return "?";
}

ProxSolver parse_solver_name(const std::string& s) {
  for (auto kind : {ProxSolver::Auto, ProxSolver::ClosedForm, ProxSolver::GeodesicDescent,
                    ProxSolver::TreeBranchScan}) {
    if (solver_name(kind) == s) return kind;
  }
  throw DomainError("unknown prox solver '" + s + "'");
}

Point resolvent(const Space& space, const ConvexObjective& f, const ResolventConfig& cfg,
                const Point& x) {
  space.require(x);
  if (!(cfg.k >= 0.0) || !std::isfinite(cfg.k)) throw DomainError("resolvent: k must be >= 0");
  if (cfg.k == 0.0) return x;
  switch (select_solver(space, f, cfg.solver)) {
    case ProxSolver::ClosedForm:
      if (!f.has_closed_form()) throw DomainError("no closed-form resolvent for " + f.name);
      return f.resolvent(cfg.k, x);
    case ProxSolver::GeodesicDescent: {
      Point jx = prox_by_descent(space, f, cfg, x);
      validate_candidate(space, f, cfg.k, x, jx);
      return jx;
    }
    case ProxSolver::TreeBranchScan: {
      Point jx = prox_by_branch_scan(space, f, cfg, x);
      validate_candidate(space, f, cfg.k, x, jx);
      return jx;
    }
    case ProxSolver::Auto: break;
  }
  throw DomainError("unreachable solver selection");
}

double subdiff_inequality_residual(const Space& space, const ConvexObjective& f, double k,
                                   const Point& x, const Point& y, const Point& jx) {
  if (!(k > 0.0)) throw DomainError("subdiff_inequality_residual: k must be > 0");
  const double f_jx = f.value(jx);
  if (!std::isfinite(f_jx)) throw InvalidCandidateError("candidate has f(jx) = +inf");
  const double f_y = f.value(y);
  if (!std::isfinite(f_y)) throw DomainError("probe point has f(y) = +inf");
  const double d_jy = distance(space, jx, y);
  const double d_xy = distance(space, x, y);
  const double d_jx = distance(space, jx, x);
  return (d_jy * d_jy - d_xy * d_xy + d_jx * d_jx) / (2.0 * k) + f_jx - f_y;
}

double resolvent_identity_residual(const Space& space, const ConvexObjective& f, double k,
                                   double eta, const Point& x, const ResolventConfig& cfg) {
  if (!(eta > 0.0) || !(k > eta)) {
    throw DomainError("resolvent identity needs k > eta > 0");
  }
  ResolventConfig outer = cfg;
  outer.k = k;
  const Point jk = resolvent(space, f, outer, x);
  ResolventConfig inner = cfg;
  inner.k = eta;
  const Point rhs = resolvent(space, f, inner, combine(space, jk, x, eta / k));
  return distance(space, jk, rhs);
}

double solve_1d_convex(const std::function<double(double)>& phi, double lo, double hi,
                       double tol) {
  if (!(lo < hi)) throw DomainError("solve_1d_convex: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("solve_1d_convex: need tol > 0");
  const double inv_golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_golden * (b - a);
  double d = a + inv_golden * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  for (int it = 0; it < 400 && b - a > 2.0 * tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_golden * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_golden * (b - a);
      fd = phi(d);
    }
  }
  double best = fc <= fd ? c : d;
  double f_best = std::min(fc, fd);

  // Golden section stops resolving the minimiser of a smooth piece once value
  // differences sink below rounding (~sqrt(eps)). A parabola through well
  // separated samples recovers the vertex; kinks make the vertex worse and it
  // is then rejected.
  const double h = 1e-4 * (hi - lo);
  if (best - h >= lo && best + h <= hi && std::isfinite(f_best)) {
    const double f_minus = phi(best - h);
    const double f_plus = phi(best + h);
    const double curvature = f_plus - 2.0 * f_best + f_minus;
    if (std::isfinite(curvature) && curvature > 0.0) {
      const double vertex = best - 0.5 * h * (f_plus - f_minus) / curvature;
      if (std::abs(vertex - best) <= 0.5 * h) {
        const double f_vertex = phi(vertex);
        if (f_vertex <= f_best + rounding_slack(f_best)) {
          best = vertex;
          f_best = std::min(f_best, f_vertex);
        }
      }
    }
  }

  if (phi(lo) <= f_best) return lo;
  if (phi(hi) <= f_best) return hi;
  return best;
}

DescentResult geodesic_descent(const Space& space,
                               const std::function<double(const Point&)>& value,
                               const std::function<Tangent(const Point&)>& gradient,
                               const Point& start, const DescentOptions& options) {
  DescentResult result{start, 0.0, 0, false};
  Point y = start;
  double gy = value(y);
  Tangent grad = gradient(y);
  double gnorm = tangent_norm(space, grad);
  double step = options.initial_step;
  const double max_step = 64.0 * options.initial_step;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it;
    if (gnorm == 0.0 ||
        (options.strong_convexity > 0.0 && gnorm / options.strong_convexity <= options.tolerance)) {
      result = {y, gnorm, it, true};
      return result;
    }
    step = std::min(2.0 * step, max_step);
    bool accepted = false;
    Point trial = y;
    double trial_value = gy;
    Tangent trial_grad;
    while (!accepted) {
      if (step * gnorm <= options.tolerance) {
        // Any further move would be below the displacement tolerance.
        result = {y, gnorm, it, true};
        return result;
      }
      trial = exp_map(space, y, Tangent(-step * grad));
      if (!space.contains(trial)) {
        // The move overflowed the model coordinates.
        step *= 0.5;
        continue;
      }
      trial_value = value(trial);
      if (0.5 * step * gnorm * gnorm <= rounding_slack(gy)) {
        // Value differences are below rounding; judge the step by the gradient norm.
        if (trial_value <= gy + rounding_slack(gy)) {
          trial_grad = gradient(trial);
          accepted = tangent_norm(space, trial_grad) < gnorm;
        }
      } else if (trial_value <= gy - 0.5 * step * gnorm * gnorm) {
        // A sufficient-decrease constant of 1/2 keeps accepted steps near 1/L on
        // smooth objectives; a small constant lets ill-conditioned problems zigzag.
        trial_grad = gradient(trial);
        accepted = true;
      }
      if (!accepted) step *= 0.5;
    }
    const double displacement = step * gnorm;
    y = trial;
    gy = trial_value;
    grad = trial_grad;
    gnorm = tangent_norm(space, grad);
    if (displacement <= options.tolerance) {
      result = {y, gnorm, it + 1, true};
      return result;
    }
  }
  result = {y, gnorm, options.max_iterations, false};
  return result;
}

std::vector<Point> resolvent_probes(const Space& space, const ConvexObjective& f, double k,
                                    const Point& x, const Point& jx) {
  constexpr std::size_t kProbeCount = 8;
  std::vector<Point> probes;
  auto add = [&](const Point& y) {
    if (probes.size() < kProbeCount && std::isfinite(f.value(y))) probes.push_back(y);
  };
  add(x);
  add(combine(space, jx, x, 0.5));
  for (std::size_t i = 0; i < f.minimizers.size() && i < 2; ++i) add(f.minimizers[i]);
  const double delta = std::min(0.1, k);
  if (space.backend() == Backend::SpiderTree) {
    const auto& t = std::get<TreePoint>(jx);
    for (int ray = 0; ray < space.dimension(); ++ray) add(tree_point(ray, t.radius + delta));
    if (t.radius > 0.0) add(tree_point(t.ray, std::max(0.0, t.radius - delta)));
  } else {
    const int d = space.dimension();
    for (int axis = 0; axis < d && probes.size() < kProbeCount; ++axis) {
      Tangent v = zero_tangent(space);
      if (space.backend() == Backend::Euclidean) {
        v(axis) = 1.0;
      } else {
        const auto& p = std::get<HyperbolicPoint>(jx).coords;
        v(axis + 1) = 1.0;
        v += minkowski_dot(p, v) * p;
        v /= tangent_norm(space, v);
      }
      add(exp_map(space, jx, Tangent(delta * v)));
      add(exp_map(space, jx, Tangent(-delta * v)));
    }
  }
  for (double t = 0.25; probes.size() < kProbeCount && t > 1e-3; t *= 0.5) {
    add(combine(space, jx, x, t));
  }
  return probes;
}

}  // namespace hppa
