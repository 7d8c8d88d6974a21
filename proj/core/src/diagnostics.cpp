#include "hppa/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

double family_lambda(const std::vector<TanMapping>& family, int n) {
  double s = 0.0;
  for (const auto& T : family) s += T.lambda(n);
  return s;
}

double family_mu(const std::vector<TanMapping>& family, int n) {
  double s = 0.0;
  for (const auto& T : family) s += T.mu(n);
  return s;
}

// Maximiser of  Σ_j w_j q_j - |G w|² / (2H)  over the probability simplex,
// by Frank-Wolfe with away steps and exact line search.
Eigen::VectorXd solve_simplex_dual(const Eigen::MatrixXd& G, const Eigen::VectorXd& q, double H) {
  const Eigen::Index n = q.size();
  Eigen::Index start = 0;
  q.maxCoeff(&start);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w(start) = 1.0;
  Eigen::VectorXd Gw = G.col(start);

  const double gap_tol = 1e-15 * (1.0 + q.cwiseAbs().maxCoeff() + G.squaredNorm() / H);
  for (int it = 0; it < 100000; ++it) {
    // Gradient of the (minimised) negative dual.
    const Eigen::VectorXd grad = (G.transpose() * Gw) / H - q;
    const double grad_w = grad.dot(w);
    Eigen::Index s = 0;
    grad.minCoeff(&s);
    const double fw_gap = grad_w - grad(s);
    if (fw_gap <= gap_tol) break;

    Eigen::Index a = -1;
    double worst = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (w(j) > 0.0 && grad(j) > worst) {
        worst = grad(j);
        a = j;
      }
    }
    const double away_gap = worst - grad_w;

    Eigen::VectorXd dir;
    double gamma_max = 1.0;
    bool away = false;
    if (fw_gap >= away_gap || w(a) >= 1.0) {
      dir = -w;
      dir(s) += 1.0;
    } else {
      dir = w;
      dir(a) -= 1.0;
      gamma_max = w(a) / (1.0 - w(a));
      away = true;
    }
    const Eigen::VectorXd Gd = G * dir;
    const double curvature = Gd.squaredNorm() / H;
    const double slope = grad.dot(dir);
    double gamma = curvature > 0.0 ? std::clamp(-slope / curvature, 0.0, gamma_max) : gamma_max;
    if (gamma <= 0.0) break;
    w += gamma * dir;
    Gw += gamma * Gd;
    if (away && gamma == gamma_max) w(a) = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) w(j) = std::max(w(j), 0.0);
    w /= w.sum();
    Gw = G * w;
  }
  return w;
}

double max_squared_distance(const Space& space, const Point& c, const std::vector<Point>& points) {
  double m = 0.0;
  for (const auto& p : points) {
    const double d = distance(space, c, p);
    m = std::max(m, d * d);
  }
  return m;
}

AsymptoticCenter tree_center(const Space& space, const std::vector<Point>& points) {
  // Double sweep: in a metric tree the farthest point from a farthest point
  // realises the diameter.
  auto farthest = [&](const Point& from) {
    std::size_t best = 0;
    double best_d = -1.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double d = distance(space, from, points[j]);
      if (d > best_d) {
        best_d = d;
        best = j;
      }
    }
    return best;
  };
  const Point& b = points[farthest(points.back())];
  const Point& c = points[farthest(b)];
  AsymptoticCenter out;
  out.center = combine(space, b, c, 0.5);
  out.radius = std::sqrt(max_squared_distance(space, out.center, points));
  out.iterations = 1;
  return out;
}

}  // namespace

FejerReport fejer_certificate(const Trace& trace, const Point& p, const Space& space,
                              const std::vector<TanMapping>& family, const FejerOptions& options) {
  const auto& recs = trace.records;
  if (recs.size() < 10) {
    throw InsufficientDataError("fejer_certificate needs at least 10 records, got " +
                                std::to_string(recs.size()));
  }
  space.require(p);
  std::vector<double> d;
  d.reserve(recs.size());
  for (const auto& r : recs) d.push_back(distance(space, r.x, p));

  FejerReport rep;
  rep.p = p;
  rep.max_increment = -std::numeric_limits<double>::infinity();
  rep.feasible = true;
  double lambda_total = 0.0;
  double mu_total = 0.0;
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    const int n = recs[i].n;
    const double inc = d[i + 1] - d[i];
    if (inc > rep.max_increment) {
      rep.max_increment = inc;
      rep.worst_index = n;
    }
    const double lam = family_lambda(family, n);
    const double mu = family_mu(family, n);
    lambda_total += lam;
    mu_total += mu;
    if (inc <= options.increment_tol) continue;
    const double denom = lam * (d[i] + 1.0) + mu;
    if (denom <= 0.0) {
      rep.feasible = false;
      continue;
    }
    rep.fitted_scale = std::max(rep.fitted_scale, inc / denom);
  }
  rep.sum_b = rep.fitted_scale * lambda_total;
  rep.sum_c = rep.fitted_scale * (lambda_total + mu_total);
  double lambda_series = 0.0;
  double mu_series = 0.0;
  for (const auto& T : family) {
    lambda_series += T.lambda.sum();
    mu_series += T.mu.sum();
  }
  rep.sum_b_bound = rep.fitted_scale * lambda_series;
  rep.sum_c_bound = rep.fitted_scale * (lambda_series + mu_series);
  if (!std::isfinite(rep.sum_b_bound) || !std::isfinite(rep.sum_c_bound)) rep.feasible = false;

  const std::size_t tail = std::max<std::size_t>(1, (d.size() + 9) / 10);
  const auto first = d.end() - static_cast<std::ptrdiff_t>(tail);
  const auto [lo, hi] = std::minmax_element(first, d.end());
  rep.tail_oscillation = *hi - *lo;
  rep.limit_exists = rep.tail_oscillation <= options.oscillation_tol;
  rep.pass = rep.feasible && rep.limit_exists;
  return rep;
}

ResidualSeries residual_series(const Trace& trace) {
  ResidualSeries s;
  s.d_xz.reserve(trace.records.size());
  s.max_d_tx.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    s.d_xz.push_back(r.d_xz);
    s.max_d_tx.push_back(r.d_tx.empty() ? 0.0 : *std::max_element(r.d_tx.begin(), r.d_tx.end()));
  }
  return s;
}

AsymptoticCenter asymptotic_center(const Space& space, const std::vector<Point>& points, double tol) {
  if (points.empty()) throw DomainError("asymptotic_center: empty point list");
  for (const auto& p : points) space.require(p);
  if (space.backend() == Backend::SpiderTree) return tree_center(space, points);

  const bool hyperbolic = space.backend() == Backend::Hyperbolic;
  const int d = space.dimension();
  const auto n = static_cast<Eigen::Index>(points.size());
  Point c = points.back();
  double r2 = max_squared_distance(space, c, points);

  AsymptoticCenter out;
  for (int outer = 0; outer < 1000; ++outer) {
    out.iterations = outer + 1;
    // Model of d²(exp_c v, p_j) around v = 0 in orthonormal tangent coordinates.
    Eigen::MatrixXd frame;
    Eigen::MatrixXd frame_inverse;
    if (hyperbolic) {
      frame = lorentz_boost(c);
      frame_inverse = lorentz_inverse(frame);
    }
    Eigen::MatrixXd G(d, n);
    Eigen::VectorXd q(n);
    double H = 2.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const Tangent u = log_map(space, c, points[j]);
      const double dj = tangent_norm(space, u);
      q(j) = dj * dj;
      const Eigen::VectorXd coords = hyperbolic ? Eigen::VectorXd((frame_inverse * u).tail(d)) : u;
      G.col(j) = -2.0 * coords;
      // Hessian of d²(·, p_j) is bounded by 2 d coth d in curvature -1.
      if (hyperbolic && dj > 1e-8) H = std::max(H, 2.0 * dj / std::tanh(dj));
    }

    Eigen::VectorXd v;
    Point next = c;
    double next_r2 = r2;
    bool accepted = false;
    for (int guard = 0; guard < 60; ++guard) {
      const Eigen::VectorXd w = solve_simplex_dual(G, q, H);
      v = -(G * w) / H;
      Tangent step = v;
      if (hyperbolic) {
        Eigen::VectorXd lifted = Eigen::VectorXd::Zero(d + 1);
        lifted.tail(d) = v;
        step = frame * lifted;
      }
      next = exp_map(space, c, step);
      next_r2 = max_squared_distance(space, next, points);
      if (next_r2 <= r2 * (1.0 + 1e-14) + 1e-300) {
        accepted = true;
        break;
      }
      H *= 2.0;
    }
    if (!accepted) break;
    c = next;
    r2 = next_r2;
    if (v.norm() <= 1e-2 * tol) break;
  }
  out.center = c;
  out.radius = std::sqrt(r2);
  return out;
}

std::vector<double> dist_to_solution_series(const Trace& trace, const std::vector<Point>& solution_set,
                                            const Space& space) {
  if (solution_set.empty()) throw DomainError("dist_to_solution_series: empty solution set");
  std::vector<double> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : solution_set) best = std::min(best, distance(space, r.x, p));
    out.push_back(best);
  }
  return out;
}

ConditionIReport condition_I_check(const Trace& trace, const std::vector<double>& dist_series,
                                   const std::function<double(double)>& g) {
  if (dist_series.size() != trace.records.size()) {
    throw DomainError("condition_I_check: distance series length does not match the trace");
  }
  ConditionIReport rep;
  rep.kappa = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dist_series.size(); ++i) {
    const auto& r = trace.records[i];
    const double max_tx = r.d_tx.empty() ? 0.0 : *std::max_element(r.d_tx.begin(), r.d_tx.end());
    const double lhs = r.d_xz + max_tx;
    const double dist = dist_series[i];
    const double rhs = g(dist);
    if (lhs < rhs - 1e-12 * (1.0 + std::abs(rhs)) && rep.pass) {
      rep.pass = false;
      rep.violating_n = r.n;
    }
    if (dist > 0.0) rep.kappa = std::min(rep.kappa, lhs / dist);
  }
  return rep;
}

std::size_t tail_window_size(std::size_t trace_length) {
  const std::size_t tenth = (trace_length + 9) / 10;
  const std::size_t quarter = (trace_length + 3) / 4;
  return std::max<std::size_t>(1, std::min(std::max<std::size_t>(50, tenth), quarter));
}

Certificate certify(const Space& space, const Trace& trace, const std::vector<TanMapping>& family,
                    const std::vector<Point>& solution_set, const CertificateOptions& options) {
  if (trace.records.empty()) throw InsufficientDataError("certify: empty trace");
  Certificate cert;
  const auto& recs = trace.records;
  const auto& last = recs.back();

  if (recs.size() >= 10) {
    for (const auto& p : solution_set) {
      cert.fejer.push_back(fejer_certificate(trace, p, space, family, options.fejer));
    }
  } else {
    cert.fejer_skipped = true;
  }
  const bool fejer_pass =
      std::all_of(cert.fejer.begin(), cert.fejer.end(), [](const FejerReport& r) { return r.pass; });

  cert.final_d_xz = last.d_xz;
  cert.final_max_d_tx = last.d_tx.empty() ? 0.0 : *std::max_element(last.d_tx.begin(), last.d_tx.end());
  cert.residual_pass = cert.final_d_xz <= options.residual_tol && cert.final_max_d_tx <= options.residual_tol;

  cert.dist_series = dist_to_solution_series(trace, solution_set, space);
  cert.dist_pass = cert.dist_series.back() <= options.dist_tol;

  // Tail window and the disjoint window right before it.
  const std::size_t w = tail_window_size(recs.size());
  auto window = [&](std::size_t end, std::size_t len) {
    std::vector<Point> pts;
    pts.reserve(len);
    for (std::size_t i = end - len; i < end; ++i) pts.push_back(recs[i].x);
    CenterWindow cw;
    cw.first_n = recs[end - len].n;
    cw.last_n = recs[end - 1].n;
    cw.estimate = asymptotic_center(space, pts);
    return cw;
  };
  cert.windows.push_back(window(recs.size(), w));
  if (recs.size() > w) cert.windows.push_back(window(recs.size() - w, std::min(w, recs.size() - w)));

  const Point* limit = &solution_set.front();
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& p : solution_set) {
    const double dp = distance(space, last.x, p);
    if (dp < nearest) {
      nearest = dp;
      limit = &p;
    }
  }
  cert.center_error = distance(space, cert.windows.front().estimate.center, *limit);
  if (cert.windows.size() > 1) {
    cert.window_separation =
        distance(space, cert.windows[0].estimate.center, cert.windows[1].estimate.center);
  }
  cert.center_pass = cert.center_error <= options.center_tol;

  if (options.required_kappa) {
    const double kappa = *options.required_kappa;
    cert.condition_i = condition_I_check(trace, cert.dist_series, [kappa](double t) { return kappa * t; });
    cert.condition_i_pass = cert.condition_i->pass;
  }

  cert.pass = fejer_pass && cert.residual_pass && cert.dist_pass && cert.center_pass && cert.condition_i_pass;
  return cert;
}

}  // namespace hppa
