#include "hppa/mappings.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hppa/errors.hpp"

namespace hppa {

SummableSequence SummableSequence::zero() { return {Kind::Zero, 0.0, 0.0, {}}; }

SummableSequence SummableSequence::geometric(double scale, double ratio) {
  if (!(scale >= 0.0) || !(ratio >= 0.0 && ratio < 1.0)) {
    throw DomainError("geometric sequence needs scale >= 0 and 0 <= ratio < 1");
  }
  return {Kind::Geometric, scale, ratio, {}};
}

SummableSequence SummableSequence::table(std::vector<double> values) {
  for (double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("sequence table entries must be >= 0");
  }
  return {Kind::Table, 0.0, 0.0, std::move(values)};
}

double SummableSequence::operator()(int n) const {
  if (n < 1) throw DomainError("sequences are indexed from n = 1");
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Geometric: return scale_ * std::pow(ratio_, n);
    case Kind::Table:
      return static_cast<std::size_t>(n) <= values_.size() ? values_[n - 1] : 0.0;
  }
  return 0.0;
}

double SummableSequence::sum() const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Geometric: return scale_ * ratio_ / (1.0 - ratio_);
    case Kind::Table: {
      double s = 0.0;
      for (double v : values_) s += v;
      return s;
    }
  }
  return 0.0;
}

bool SummableSequence::is_zero() const {
  switch (kind_) {
    case Kind::Zero: return true;
    case Kind::Geometric: return scale_ == 0.0 || ratio_ == 0.0;
    case Kind::Table: return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }
  return false;
}

std::string SummableSequence::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Zero: out << "0"; break;
    case Kind::Geometric: out << scale_ << "*" << ratio_ << "^n"; break;
    case Kind::Table:
      out << "table[";
      for (std::size_t i = 0; i < values_.size(); ++i) out << (i ? "," : "") << values_[i];
      out << "]";
      break;
  }
  return out.str();
}

Xi Xi::identity() { return Xi(std::nullopt); }

Xi Xi::capped(double cap) {
  if (!(cap > 0.0)) throw DomainError("capped xi needs cap > 0");
  return Xi(cap);
}

double Xi::operator()(double t) const { return cap_ ? std::min(t, *cap_) : t; }

bool Xi::satisfies_growth_bound(double m, double m_star) const {
  if (!(m > 0.0) || !(m_star > 0.0)) return false;
  if (m_star >= 1.0) return true;  // ξ(t) <= t in both variants
  // For m_star < 1 only the cap helps: min(t, cap) <= m_star t for t >= m.
  return cap_ && *cap_ <= m_star * m;
}

std::string Xi::describe() const {
  if (!cap_) return "identity";
  std::ostringstream out;
  out << "min(t," << *cap_ << ")";
  return out.str();
}

void TanMapping::check_conditions() const {
  if (!map) throw DomainError("mapping " + name + " has no apply rule");
  if (!std::isfinite(lambda.sum()) || !std::isfinite(mu.sum())) {
    throw DomainError("mapping " + name + ": λ_n and μ_n must be summable");
  }
  if (!xi.satisfies_growth_bound(growth_threshold, growth_constant)) {
    throw DomainError("mapping " + name + ": ξ(t) <= M*·t must hold for t >= M");
  }
}

namespace {

void require_domain(const Space& space, const TanMapping& T, const Point& x) {
  space.require(x);
  if (T.domain && !T.domain(x)) {
    throw DomainError("point " + to_string(x) + " is outside the domain of " + T.name);
  }
}

Eigen::Matrix2d planar_rotation(double angle) {
  Eigen::Matrix2d r;
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

}  // namespace

Point apply(const Space& space, const TanMapping& T, const Point& x) {
  require_domain(space, T, x);
  return T.map(x);
}

Point apply_iter(const Space& space, const TanMapping& T, int n, const Point& x) {
  if (n < 0) throw DomainError("apply_iter: n must be >= 0");
  require_domain(space, T, x);
  if (n == 0) return x;
  if (T.power) return T.power(n, x);
  Point y = x;
  for (int i = 0; i < n; ++i) {
    Point next = T.map(y);
    if (next == y) break;  // reached a fixed point; further powers are constant
    y = std::move(next);
  }
  return y;
}

double tan_violation(const Space& space, const TanMapping& T, int n,
                     const std::vector<std::pair<Point, Point>>& pairs) {
  if (pairs.empty()) throw DomainError("tan_violation: empty pair list");
  if (n < 1) throw DomainError("tan_violation: n must be >= 1");
  const double lam = T.lambda(n);
  const double mu = T.mu(n);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    const double d = distance(space, x, y);
    const double dn = distance(space, apply_iter(space, T, n, x), apply_iter(space, T, n, y));
    worst = std::max(worst, dn - (d + lam * T.xi(d) + mu));
  }
  return worst;
}

namespace mappings {

TanMapping identity(const Space& space) {
  TanMapping T;
  T.name = "identity";
  T.map = [](const Point& x) { return x; };
  T.power = [](int, const Point& x) { return x; };
  T.fixed_points = {base_point(space)};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping euclidean_rotation(const Space& space, Point center, double angle) {
  if (space.backend() != Backend::Euclidean || space.dimension() < 2) {
    throw DomainError("euclidean_rotation needs a Euclidean space with d >= 2");
  }
  space.require(center);
  const Eigen::VectorXd c = std::get<EuclideanPoint>(center).coords;
  auto rotate = [c](double theta, const Point& x) {
    Eigen::VectorXd v = std::get<EuclideanPoint>(x).coords - c;
    v.head<2>() = planar_rotation(theta) * v.head<2>();
    return Point(EuclideanPoint{c + v});
  };
  TanMapping T;
  T.name = "euclidean-rotation";
  T.map = [rotate, angle](const Point& x) { return rotate(angle, x); };
  T.power = [rotate, angle](int n, const Point& x) {
    return rotate(std::remainder(n * angle, 2.0 * M_PI), x);
  };
  T.fixed_points = {center};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping ball_projection(const Space& space, Point center, double radius) {
  space.require(center);
  if (!(radius >= 0.0)) throw DomainError("ball_projection: radius must be >= 0");
  auto project = [space, center, radius](const Point& x) {
    const double d = distance(space, x, center);
    if (d <= radius) return x;
    return combine(space, center, x, radius / d);
  };
  TanMapping T;
  T.name = "ball-projection";
  T.map = project;
  T.power = [project](int, const Point& x) { return project(x); };
  T.fixed_points = {center};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping point_projection(const Space& space, Point p) {
  space.require(p);
  TanMapping T;
  T.name = "point-projection";
  T.map = [p](const Point&) { return p; };
  T.power = [p](int, const Point&) { return p; };
  T.fixed_points = {p};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping hyperbolic_rotation(const Space& space, Point center, double angle) {
  if (space.backend() != Backend::Hyperbolic || space.dimension() < 2) {
    throw DomainError("hyperbolic_rotation needs a hyperbolic space with d >= 2");
  }
  space.require(center);
  const Eigen::MatrixXd boost = lorentz_boost(center);
  const Eigen::MatrixXd inverse = lorentz_inverse(boost);
  auto rotate = [boost, inverse](double theta, const Point& x) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Identity(boost.rows(), boost.cols());
    r.block<2, 2>(1, 1) = planar_rotation(theta);
    const Eigen::VectorXd y = boost * (r * (inverse * std::get<HyperbolicPoint>(x).coords));
    return Point(HyperbolicPoint{renormalize_hyperbolic(y)});
  };
  TanMapping T;
  T.name = "hyperbolic-rotation";
  T.map = [rotate, angle](const Point& x) { return rotate(angle, x); };
  T.power = [rotate, angle](int n, const Point& x) {
    return rotate(std::remainder(n * angle, 2.0 * M_PI), x);
  };
  T.fixed_points = {center};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping ray_permutation(const Space& space, int shift) {
  if (space.backend() != Backend::SpiderTree) {
    throw DomainError("ray_permutation needs a spider tree");
  }
  const int k = space.dimension();
  auto permute = [k, shift](long long times, const Point& x) {
    const auto& t = std::get<TreePoint>(x);
    if (t.radius == 0.0) return x;
    const long long moved = (static_cast<long long>(t.ray) + times * shift) % k;
    return tree_point(static_cast<int>((moved + k) % k), t.radius);
  };
  TanMapping T;
  T.name = "ray-permutation";
  T.map = [permute](const Point& x) { return permute(1, x); };
  T.power = [permute](int n, const Point& x) { return permute(n, x); };
  T.fixed_points = {base_point(space)};
  T.continuity_modulus = 1.0;
  return T;
}

TanMapping goebel_kirk(const Space& space, double coefficient, SummableSequence fitted_lambda) {
  if (space.backend() != Backend::Euclidean || space.dimension() < 3) {
    throw DomainError("goebel_kirk needs a Euclidean space with d >= 3");
  }
  if (!(coefficient > 0.0 && coefficient <= 1.0)) {
    throw DomainError("goebel_kirk coefficient must lie in (0, 1]");
  }
  const int d = space.dimension();
  TanMapping T;
  T.name = "goebel-kirk";
  T.map = [d, coefficient](const Point& x) {
    const auto& v = std::get<EuclideanPoint>(x).coords;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
    y(1) = v(0) * v(0);
    for (int j = 2; j < d; ++j) y(j) = coefficient * v(j - 1);
    return Point(EuclideanPoint{y});
  };
  T.domain = [](const Point& x) {
    return std::get<EuclideanPoint>(x).coords.norm() <= 1.0 + 1e-12;
  };
  T.lambda = std::move(fitted_lambda);
  T.fixed_points = {base_point(space)};
  T.continuity_modulus = 2.0;
  return T;
}

SummableSequence goebel_kirk_recorded_lambda() {
  // Output of the sampling fit (tests/oracles/fit_goebel_kirk.cpp) for d = 8,
  // a = 0.9: sampled sup of d(Tⁿx,Tⁿy)/d(x,y) - 1, plus 1e-3, rounded up to
  // 1e-3. Tⁿ vanishes identically for n >= 8.
  return SummableSequence::table({1.001, 0.801, 0.621, 0.459, 0.314, 0.182, 0.064});
}

}  // namespace mappings

}  // namespace hppa
