#include <cmath>
#include <limits>
#include <numeric>

#include "hppa/errors.hpp"
#include "hppa/prox.hpp"

namespace hppa::objectives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unit-speed direction towards `target`, or zero when already there.
Tangent unit_towards(const Space& space, const Point& y, const Point& target) {
  Tangent v = log_map(space, y, target);
  const double n = tangent_norm(space, v);
  if (n == 0.0) return v;
  return v / n;
}

void check_weights(const std::vector<Point>& anchors, const std::vector<double>& weights) {
  if (anchors.empty()) throw DomainError("objective needs at least one anchor");
  if (anchors.size() != weights.size()) throw DomainError("anchor/weight count mismatch");
  for (double w : weights) {
    if (!(w > 0.0)) throw DomainError("weights must be positive");
  }
}

}  // namespace

ConvexObjective zero(const Space& space) {
  ConvexObjective f;
  f.name = "zero";
  f.value = [space](const Point& y) {
    space.require(y);
    return 0.0;
  };
  f.resolvent = [](double, const Point& x) { return x; };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space](const Point&) { return zero_tangent(space); };
  }
  f.minimizers = {base_point(space)};
  return f;
}

ConvexObjective half_squared_distance(const Space& space, Point center) {
  space.require(center);
  ConvexObjective f;
  f.name = "half-squared-distance";
  f.value = [space, center](const Point& y) {
    const double d = distance(space, y, center);
    return 0.5 * d * d;
  };
  f.resolvent = [space, center](double k, const Point& x) {
    return combine(space, x, center, k / (1.0 + k));
  };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space, center](const Point& y) { return Tangent(-log_map(space, y, center)); };
  }
  f.minimizers = {center};
  return f;
}

ConvexObjective distance_to(const Space& space, Point anchor) {
  space.require(anchor);
  ConvexObjective f;
  f.name = "distance";
  f.value = [space, anchor](const Point& y) { return distance(space, y, anchor); };
  f.resolvent = [space, anchor](double k, const Point& x) {
    const double d = distance(space, x, anchor);
    if (d <= k) return anchor;
    return combine(space, x, anchor, k / d);
  };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space, anchor](const Point& y) {
      return Tangent(-unit_towards(space, y, anchor));
    };
  }
  f.minimizers = {anchor};
  f.kinks = {{anchor, 1.0}};
  return f;
}

ConvexObjective ball_indicator(const Space& space, Point center, double radius) {
  space.require(center);
  if (!(radius >= 0.0)) throw DomainError("ball radius must be >= 0");
  ConvexObjective f;
  f.name = "ball-indicator";
  // Projections land on the sphere up to rounding; admit that slack.
  const double slack = 1e-9 * std::max(1.0, radius);
  f.value = [space, center, radius, slack](const Point& y) {
    return distance(space, y, center) <= radius + slack ? 0.0 : kInf;
  };
  f.resolvent = [space, center, radius](double, const Point& x) {
    const double d = distance(space, x, center);
    if (d <= radius) return x;
    return combine(space, center, x, radius / d);
  };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space](const Point&) { return zero_tangent(space); };
  }
  f.minimizers = {center};
  return f;
}

ConvexObjective weighted_frechet(const Space& space, std::vector<Point> anchors,
                                 std::vector<double> weights) {
  check_weights(anchors, weights);
  for (const auto& a : anchors) space.require(a);
  ConvexObjective f;
  f.name = "weighted-frechet";
  f.value = [space, anchors, weights](const Point& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      const double d = distance(space, y, anchors[i]);
      sum += weights[i] * d * d;
    }
    return sum;
  };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space, anchors, weights](const Point& y) {
      Tangent g = zero_tangent(space);
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        g -= 2.0 * weights[i] * log_map(space, y, anchors[i]);
      }
      return g;
    };
  }
  if (space.backend() == Backend::Euclidean) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    Eigen::VectorXd weighted_sum = Eigen::VectorXd::Zero(space.dimension());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      weighted_sum += weights[i] * std::get<EuclideanPoint>(anchors[i]).coords;
    }
    // Stationarity: 2 Σ w_i (y - a_i) + (y - x)/k = 0.
    f.resolvent = [weighted_sum, total](double k, const Point& x) {
      const auto& xc = std::get<EuclideanPoint>(x).coords;
      return Point(EuclideanPoint{(2.0 * k * weighted_sum + xc) / (2.0 * k * total + 1.0)});
    };
    f.minimizers = {EuclideanPoint{weighted_sum / total}};
  }
  return f;
}

ConvexObjective sum_of_distances(const Space& space, std::vector<Point> anchors,
                                 std::vector<double> weights) {
  check_weights(anchors, weights);
  for (const auto& a : anchors) space.require(a);
  ConvexObjective f;
  f.name = "sum-of-distances";
  f.value = [space, anchors, weights](const Point& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      sum += weights[i] * distance(space, y, anchors[i]);
    }
    return sum;
  };
  if (space.backend() != Backend::SpiderTree) {
    f.subgradient = [space, anchors, weights](const Point& y) {
      Tangent g = zero_tangent(space);
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        g -= weights[i] * unit_towards(space, y, anchors[i]);
      }
      return g;
    };
  }
  for (std::size_t i = 0; i < anchors.size(); ++i) f.kinks.push_back({anchors[i], weights[i]});
  return f;
}

}  // namespace hppa::objectives
