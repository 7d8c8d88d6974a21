#include "hppa/scenario.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

using Builder = Scenario (*)(std::optional<int>);

int pick_dimension(const std::string& scenario, std::optional<int> requested, int fallback, int lo, int hi) {
  const int d = requested.value_or(fallback);
  if (d < lo || d > hi) {
    throw ConfigError(ConfigError::Kind::Constraint, "dimension",
                      "scenario " + scenario + " supports dimension in [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "], got " + std::to_string(d));
  }
  return d;
}

Eigen::VectorXd gaussian_vector(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.normal();
  return v;
}

// Uniform in the Euclidean ball B(center, radius).
Point uniform_in_ball(Rng& rng, const Eigen::VectorXd& center, double radius) {
  const auto d = static_cast<int>(center.size());
  Eigen::VectorXd u = gaussian_vector(rng, d);
  while (u.norm() == 0.0) u = gaussian_vector(rng, d);
  const double r = radius * std::pow(rng.uniform(), 1.0 / d);
  return euclidean_point(Eigen::VectorXd(center + r * u.normalized()));
}

Point hyperbolic_in_ball(Rng& rng, int d, double max_rho) {
  Eigen::VectorXd u = gaussian_vector(rng, d);
  while (u.norm() == 0.0) u = gaussian_vector(rng, d);
  return hyperbolic_polar(rng.uniform(0.0, max_rho), u.normalized());
}

Point tree_sample(Rng& rng, int k, double max_radius) {
  return tree_point(rng.uniform_int(k), rng.uniform(0.0, max_radius));
}

Scenario quad_1d(std::optional<int> dim) {
  pick_dimension("quad-1d", dim, 1, 1, 1);
  Scenario s;
  s.name = "quad-1d";
  s.description = "R^1, f(y) = (y-2)^2/2, T = identity";
  s.space = Space::euclidean(1);
  s.objective = objectives::half_squared_distance(s.space, euclidean_point({2.0}));
  s.family = {mappings::identity(s.space)};
  s.solution_set = {euclidean_point({2.0})};
  s.solution_label = "{2}";
  s.canonical_start = euclidean_point({0.0});
  s.random_start = [](Rng& rng) { return euclidean_point({rng.uniform(-10.0, 10.0)}); };
  s.sample_domain = s.random_start;
  return s;
}

Scenario rot_proj_2d(std::optional<int> dim) {
  pick_dimension("rot-proj-2d", dim, 2, 2, 2);
  Scenario s;
  const Eigen::Vector2d c(1.0, -0.5);
  s.name = "rot-proj-2d";
  s.description =
      "R^2, f(y) = |y-c|^2/2, T1 = rotation by 1 rad about c, T2 = projection onto B(c+(0.4,0.3), 1); "
      "c = (1,-0.5)";
  s.space = Space::euclidean(2);
  const Point cp = euclidean_point(Eigen::VectorXd(c));
  s.objective = objectives::half_squared_distance(s.space, cp);
  s.family = {mappings::euclidean_rotation(s.space, cp, 1.0),
              mappings::ball_projection(s.space, euclidean_point(Eigen::VectorXd(c + Eigen::Vector2d(0.4, 0.3))),
                                        1.0)};
  s.solution_set = {cp};
  s.solution_label = "{(1,-0.5)}";
  s.canonical_start = euclidean_point({4.0, 3.0});
  s.random_start = [](Rng& rng) { return euclidean_point({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)}); };
  s.sample_domain = s.random_start;
  return s;
}

Scenario proj_family_2d(std::optional<int> dim) {
  pick_dimension("proj-family-2d", dim, 2, 2, 2);
  Scenario s;
  const Eigen::Vector2d c(-1.0, 2.0);
  s.name = "proj-family-2d";
  s.description = "R^2, f(y) = |y-c|, T1 = projection onto {c}, T2 = projection onto B(c+(0.5,0), 1); c = (-1,2)";
  s.space = Space::euclidean(2);
  const Point cp = euclidean_point(Eigen::VectorXd(c));
  s.objective = objectives::distance_to(s.space, cp);
  s.family = {mappings::point_projection(s.space, cp),
              mappings::ball_projection(s.space, euclidean_point(Eigen::VectorXd(c + Eigen::Vector2d(0.5, 0.0))),
                                        1.0)};
  s.solution_set = {cp};
  s.solution_label = "{(-1,2)}";
  s.canonical_start = euclidean_point({3.0, -2.0});
  s.random_start = [](Rng& rng) { return euclidean_point({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)}); };
  s.sample_domain = s.random_start;
  s.required_kappa = 0.5;
  return s;
}

Scenario tree_median(std::optional<int> dim) {
  const int k = pick_dimension("tree-median", dim, 3, 2, 64);
  Scenario s;
  s.name = "tree-median";
  s.description = "spider tree with K rays, f(y) = sum_i d(y, (ray i, 1)), T = cyclic ray permutation";
  s.space = Space::spider_tree(k);
  std::vector<Point> anchors;
  for (int i = 0; i < k; ++i) anchors.push_back(tree_point(i, 1.0));
  s.objective = objectives::sum_of_distances(s.space, anchors, std::vector<double>(k, 1.0));
  s.objective.minimizers = {tree_point(0, 0.0)};
  s.family = {mappings::ray_permutation(s.space, 1)};
  s.solution_set = {tree_point(0, 0.0)};
  s.solution_label = "{origin}";
  s.canonical_start = tree_point(0, 4.0);
  s.random_start = [k](Rng& rng) { return tree_sample(rng, k, 10.0); };
  s.sample_domain = s.random_start;
  s.preferred_solver = ProxSolver::TreeBranchScan;
  return s;
}

Scenario hyp_frechet(std::optional<int> dim) {
  const int d = pick_dimension("hyp-frechet", dim, 2, 2, 2);
  Scenario s;
  s.name = "hyp-frechet";
  s.description =
      "H^2, f = weighted Frechet functional of four anchors, T = projection onto the ball of radius 1 "
      "about the base point";
  s.space = Space::hyperbolic(d);
  const std::vector<Point> anchors = {hyperbolic_point({0.3, 0.1}), hyperbolic_point({-0.2, 0.4}),
                                      hyperbolic_point({0.1, -0.3}), hyperbolic_point({0.35, 0.25})};
  const std::vector<double> weights = {1.0, 2.0, 1.0, 1.5};
  s.objective = objectives::weighted_frechet(s.space, anchors, weights);

  // Reference minimiser: f is 2Σw-strongly convex, so the gradient
  // certificate bounds the distance to argmin f.
  DescentOptions opts;
  opts.tolerance = 1e-14;
  opts.max_iterations = 100000;
  opts.initial_step = 0.1;
  double total = 0.0;
  for (double w : weights) total += w;
  opts.strong_convexity = 2.0 * total;
  const auto& f = s.objective;
  const DescentResult mean = geodesic_descent(s.space, f.value, f.subgradient, anchors.front(), opts);
  s.objective.minimizers = {mean.point};

  const Point o = base_point(s.space);
  s.family = {mappings::ball_projection(s.space, o, 1.0)};
  s.solution_set = {mean.point};
  s.solution_label = "{weighted Frechet mean " + to_string(mean.point) + "}";
  Eigen::VectorXd dir(2);
  dir << 1.0, 1.0;
  s.canonical_start = hyperbolic_polar(2.5, dir.normalized());
  s.random_start = [d](Rng& rng) { return hyperbolic_in_ball(rng, d, 3.0); };
  s.sample_domain = s.random_start;
  s.preferred_solver = ProxSolver::GeodesicDescent;
  return s;
}

Scenario hyp_rotation(std::optional<int> dim) {
  const int d = pick_dimension("hyp-rotation", dim, 2, 2, 8);
  Scenario s;
  s.name = "hyp-rotation";
  s.description = "H^d, f(y) = d(y, p), T = hyperbolic rotation by 1 rad about p; p lifts (0.5, -0.2, 0, ...)";
  s.space = Space::hyperbolic(d);
  Eigen::VectorXd pv = Eigen::VectorXd::Zero(d);
  pv(0) = 0.5;
  pv(1) = -0.2;
  const Point p = hyperbolic_point(pv);
  s.objective = objectives::distance_to(s.space, p);
  s.family = {mappings::hyperbolic_rotation(s.space, p, 1.0)};
  s.solution_set = {p};
  s.solution_label = "{p}";
  Eigen::VectorXd xv = Eigen::VectorXd::Zero(d);
  xv(0) = -1.5;
  xv(1) = 2.0;
  s.canonical_start = hyperbolic_point(xv);
  s.random_start = [d](Rng& rng) { return hyperbolic_in_ball(rng, d, 3.0); };
  s.sample_domain = s.random_start;
  return s;
}

Scenario gk_ball_8d(std::optional<int> dim) {
  pick_dimension("gk-ball-8d", dim, mappings::kGoebelKirkDimension, mappings::kGoebelKirkDimension,
                 mappings::kGoebelKirkDimension);
  Scenario s;
  const int d = mappings::kGoebelKirkDimension;
  s.name = "gk-ball-8d";
  s.description =
      "closed unit ball of R^8, f(y) = |y|^2/2, T = (0, x1^2, 0.9 x2, ..., 0.9 x7) with fitted lambda_n";
  s.space = Space::euclidean(d);
  const Point zero = base_point(s.space);
  s.objective = objectives::half_squared_distance(s.space, zero);
  s.family = {mappings::goebel_kirk(s.space, mappings::kGoebelKirkCoefficient,
                                    mappings::goebel_kirk_recorded_lambda())};
  s.solution_set = {zero};
  s.solution_label = "{0}";
  Eigen::VectorXd x(d);
  x << 0.6, 0.3, -0.2, 0.1, 0.4, -0.3, 0.2, 0.1;
  s.canonical_start = euclidean_point(Eigen::VectorXd(0.9 * x.normalized()));
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);
  s.random_start = [origin](Rng& rng) { return uniform_in_ball(rng, origin, 1.0); };
  s.sample_domain = s.random_start;
  return s;
}

Scenario chain_3d(std::optional<int> dim) {
  pick_dimension("chain-3d", dim, 3, 3, 3);
  Scenario s;
  s.name = "chain-3d";
  s.description =
      "R^3, f = weighted Frechet functional of three anchors (minimiser m), T1 = projection onto B(m, 1), "
      "T2 = rotation by 0.7 about m, T3 = projection onto B(m+(0,0,0.5), 0.8)";
  s.space = Space::euclidean(3);
  const std::vector<Point> anchors = {euclidean_point({1.0, 0.0, 0.0}), euclidean_point({0.0, 2.0, 0.0}),
                                      euclidean_point({0.0, 0.0, 3.0})};
  const std::vector<double> weights = {1.0, 1.0, 2.0};
  s.objective = objectives::weighted_frechet(s.space, anchors, weights);
  const Point m = s.objective.minimizers.front();
  const Eigen::VectorXd mv = std::get<EuclideanPoint>(m).coords;
  s.family = {mappings::ball_projection(s.space, m, 1.0), mappings::euclidean_rotation(s.space, m, 0.7),
              mappings::ball_projection(s.space, euclidean_point(Eigen::VectorXd(mv + Eigen::Vector3d(0, 0, 0.5))),
                                        0.8)};
  s.solution_set = {m};
  s.solution_label = "{(0.25,0.5,1.5)}";
  s.canonical_start = euclidean_point({-3.0, 4.0, 5.0});
  s.random_start = [](Rng& rng) {
    return euclidean_point({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
  };
  s.sample_domain = s.random_start;
  return s;
}

const std::vector<std::pair<std::string, Builder>>& registry() {
  static const std::vector<std::pair<std::string, Builder>> r = {
      {"quad-1d", &quad_1d},         {"rot-proj-2d", &rot_proj_2d}, {"proj-family-2d", &proj_family_2d},
      {"chain-3d", &chain_3d},       {"tree-median", &tree_median}, {"hyp-frechet", &hyp_frechet},
      {"hyp-rotation", &hyp_rotation}, {"gk-ball-8d", &gk_ball_8d},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, builder] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

bool is_scenario(const std::string& name) {
  const auto& names = scenario_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<ScenarioInfo> list_scenarios() {
  std::vector<ScenarioInfo> out;
  for (const auto& [name, builder] : registry()) {
    const Scenario s = builder(std::nullopt);
    out.push_back({s.name, s.description, s.solution_label});
  }
  return out;
}

Scenario make_scenario(const std::string& name, std::optional<int> dimension) {
  for (const auto& [n, builder] : registry()) {
    if (n == name) return builder(dimension);
  }
  throw ConfigError(ConfigError::Kind::UnknownScenario, "name", "unknown scenario '" + name + "'");
}

}  // namespace hppa
