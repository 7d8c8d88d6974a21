#include "hppa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hppa/errors.hpp"

namespace hppa {

namespace {

// Below this separation combine() returns x unchanged.
constexpr double kDegenerateSeparation = 1e-14;


Eigen::VectorXd spatial(const Eigen::VectorXd& x) { return x.tail(x.size() - 1); }

Eigen::VectorXd lift(const Eigen::VectorXd& v) {
  Eigen::VectorXd x(v.size() + 1);
  x(0) = std::sqrt(1.0 + v.squaredNorm());
  x.tail(v.size()) = v;
  return x;
}

[[noreturn]] void mismatch(const Space& space, const char* what) {
  throw DomainError(std::string("point does not belong to ") + space.describe() + ": " + what);
}

double hyperbolic_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  // Minkowski norm of x - y with the time component rebuilt from the spatial
  // parts: x0 - y0 = (dv . s) / (x0 + y0). This keeps full relative accuracy
  // for nearby points, where arcosh(-<x,y>) loses half the digits.
  const auto n = x.size() - 1;
  const Eigen::VectorXd dv = x.tail(n) - y.tail(n);
  const Eigen::VectorXd s = x.tail(n) + y.tail(n);
  const double d0 = dv.dot(s) / (x(0) + y(0));
  const double m = std::max(0.0, dv.squaredNorm() - d0 * d0);
  if (m <= 4.0) return 2.0 * std::asinh(0.5 * std::sqrt(m));
  // Far apart the subtraction above cancels; arcosh is well conditioned here.
  const double b = x(0) * y(0) - x.tail(n).dot(y.tail(n));
  return std::acosh(std::max(b, 1.0));
}

double tree_distance(const TreePoint& a, const TreePoint& b) {
  if (a.radius == 0.0 || b.radius == 0.0 || a.ray == b.ray) {
    return std::abs(a.radius - b.radius);
  }
  return a.radius + b.radius;
}

Point tree_combine(const TreePoint& a, const TreePoint& b, double t) {
  if (a.radius == 0.0 || b.radius == 0.0 || a.ray == b.ray) {
    const int ray = a.radius > 0.0 ? a.ray : b.ray;
    return tree_point(ray, (1.0 - t) * a.radius + t * b.radius);
  }
  const double travelled = t * (a.radius + b.radius);
  if (travelled <= a.radius) return tree_point(a.ray, a.radius - travelled);
  return tree_point(b.ray, travelled - a.radius);
}

}  // namespace

bool operator==(const EuclideanPoint& a, const EuclideanPoint& b) {
  return a.coords.size() == b.coords.size() && a.coords == b.coords;
}

bool operator==(const HyperbolicPoint& a, const HyperbolicPoint& b) {
  return a.coords.size() == b.coords.size() && a.coords == b.coords;
}

bool operator==(const TreePoint& a, const TreePoint& b) {
  if (a.radius == 0.0 && b.radius == 0.0) return true;
  return a.ray == b.ray && a.radius == b.radius;
}

Space Space::euclidean(int dimension) {
  if (dimension < 1) throw DomainError("Euclidean dimension must be >= 1");
  return Space(Backend::Euclidean, dimension);
}

Space Space::hyperbolic(int dimension) {
  if (dimension < 1) throw DomainError("hyperbolic dimension must be >= 1");
  return Space(Backend::Hyperbolic, dimension);
}

Space Space::spider_tree(int rays) {
  if (rays < 2) throw DomainError("spider tree needs at least 2 rays");
  return Space(Backend::SpiderTree, rays);
}

bool Space::contains(const Point& p) const {
  switch (backend_) {
    case Backend::Euclidean: {
      const auto* e = std::get_if<EuclideanPoint>(&p);
      return e && e->coords.size() == dimension_ && e->coords.allFinite();
    }
    case Backend::Hyperbolic: {
      const auto* h = std::get_if<HyperbolicPoint>(&p);
      if (!h || h->coords.size() != dimension_ + 1 || !h->coords.allFinite()) return false;
      const double x0 = h->coords(0);
      return x0 > 0.0 &&
             std::abs(minkowski_dot(h->coords, h->coords) + 1.0) <= 1e-8 * std::max(1.0, x0 * x0);
    }
    case Backend::SpiderTree: {
      const auto* t = std::get_if<TreePoint>(&p);
      return t && t->ray >= 0 && t->ray < dimension_ && t->radius >= 0.0 &&
             std::isfinite(t->radius);
    }
  }
  return false;
}

void Space::require(const Point& p) const {
  if (contains(p)) return;
  switch (backend_) {
    case Backend::Euclidean:
      if (!std::holds_alternative<EuclideanPoint>(p)) mismatch(*this, "backend mismatch");
      mismatch(*this, "wrong dimension or non-finite coordinates");
    case Backend::Hyperbolic:
      if (!std::holds_alternative<HyperbolicPoint>(p)) mismatch(*this, "backend mismatch");
      mismatch(*this, "wrong dimension or off the hyperboloid sheet");
    case Backend::SpiderTree:
      if (!std::holds_alternative<TreePoint>(p)) mismatch(*this, "backend mismatch");
      mismatch(*this, "ray id out of range or negative radius");
  }
}

std::string Space::describe() const {
  std::ostringstream out;
  out << backend_name(backend_) << (backend_ == Backend::SpiderTree ? "(K=" : "(d=")
      << dimension_ << ")";
  return out.str();
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Euclidean: return "Euclidean";
    case Backend::Hyperbolic: return "Hyperbolic";
    case Backend::SpiderTree: return "SpiderTree";
  }
  return "?";
}

Point euclidean_point(std::vector<double> coords) {
  return EuclideanPoint{Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()))};
}

Point euclidean_point(std::initializer_list<double> coords) {
  return euclidean_point(std::vector<double>(coords));
}

Point euclidean_point(const Eigen::VectorXd& coords) { return EuclideanPoint{coords}; }

Point hyperbolic_point(const Eigen::VectorXd& v) { return HyperbolicPoint{lift(v)}; }

Point hyperbolic_point(std::vector<double> v) {
  return hyperbolic_point(Eigen::VectorXd(
      Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))));
}

Point hyperbolic_point(std::initializer_list<double> v) {
  return hyperbolic_point(std::vector<double>(v));
}

Point hyperbolic_polar(double rho, const Eigen::VectorXd& direction) {
  const double n = direction.norm();
  if (n == 0.0) throw DomainError("hyperbolic_polar: zero direction");
  Eigen::VectorXd x(direction.size() + 1);
  x(0) = std::cosh(rho);
  x.tail(direction.size()) = std::sinh(rho) * direction / n;
  return HyperbolicPoint{x};
}

Point tree_point(int ray, double radius) {
  if (radius < 0.0) throw DomainError("tree point radius must be >= 0");
  if (radius == 0.0) return TreePoint{0, 0.0};
  return TreePoint{ray, radius};
}

Point base_point(const Space& space) {
  switch (space.backend()) {
    case Backend::Euclidean: return EuclideanPoint{Eigen::VectorXd::Zero(space.dimension())};
    case Backend::Hyperbolic: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(space.dimension() + 1);
      x(0) = 1.0;
      return HyperbolicPoint{x};
    }
    case Backend::SpiderTree: return TreePoint{0, 0.0};
  }
  return TreePoint{};
}

double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = a.size() - 1;
  return -a(0) * b(0) + a.tail(n).dot(b.tail(n));
}

Eigen::VectorXd renormalize_hyperbolic(const Eigen::VectorXd& x) { return lift(spatial(x)); }

double distance(const Space& space, const Point& x, const Point& y) {
  space.require(x);
  space.require(y);
  switch (space.backend()) {
    case Backend::Euclidean:
      return (std::get<EuclideanPoint>(x).coords - std::get<EuclideanPoint>(y).coords).norm();
    case Backend::Hyperbolic:
      return hyperbolic_distance(std::get<HyperbolicPoint>(x).coords,
                                 std::get<HyperbolicPoint>(y).coords);
    case Backend::SpiderTree:
      return tree_distance(std::get<TreePoint>(x), std::get<TreePoint>(y));
  }
  return 0.0;
}

Point combine(const Space& space, const Point& x, const Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("combine: t must lie in [0,1]");
  space.require(x);
  space.require(y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  switch (space.backend()) {
    case Backend::Euclidean: {
      const auto& a = std::get<EuclideanPoint>(x).coords;
      const auto& b = std::get<EuclideanPoint>(y).coords;
      return EuclideanPoint{(1.0 - t) * a + t * b};
    }
    case Backend::Hyperbolic: {
      const auto& a = std::get<HyperbolicPoint>(x).coords;
      const auto& b = std::get<HyperbolicPoint>(y).coords;
      const double s = hyperbolic_distance(a, b);
      if (s < kDegenerateSeparation) return x;
      const double sh = std::sinh(s);
      const Eigen::VectorXd v =
          (std::sinh((1.0 - t) * s) / sh) * spatial(a) + (std::sinh(t * s) / sh) * spatial(b);
      return HyperbolicPoint{lift(v)};
    }
    case Backend::SpiderTree: {
      const auto& a = std::get<TreePoint>(x);
      const auto& b = std::get<TreePoint>(y);
      if (tree_distance(a, b) < kDegenerateSeparation) return x;
      return tree_combine(a, b, t);
    }
  }
  return x;
}

double cat0_defect(const Space& space, const Point& x, const Point& y, const Point& z, double t) {
  const Point p = combine(space, x, y, t);
  const double dpz = distance(space, p, z);
  const double dxz = distance(space, x, z);
  const double dyz = distance(space, y, z);
  const double dxy = distance(space, x, y);
  return dpz * dpz - ((1.0 - t) * dxz * dxz + t * dyz * dyz - t * (1.0 - t) * dxy * dxy);
}

Tangent log_map(const Space& space, const Point& base, const Point& target) {
  space.require(base);
  space.require(target);
  switch (space.backend()) {
    case Backend::Euclidean:
      return std::get<EuclideanPoint>(target).coords - std::get<EuclideanPoint>(base).coords;
    case Backend::Hyperbolic: {
      const auto& x = std::get<HyperbolicPoint>(base).coords;
      const auto& y = std::get<HyperbolicPoint>(target).coords;
      const double d = hyperbolic_distance(x, y);
      if (d == 0.0) return Eigen::VectorXd::Zero(x.size());
      // y + <x,y> x is the tangent direction with Minkowski length sinh(d).
      Eigen::VectorXd u = y + minkowski_dot(x, y) * x;
      u += minkowski_dot(x, u) * x;
      const double scale = d < 1e-8 ? 1.0 : d / std::sinh(d);
      return scale * u;
    }
    case Backend::SpiderTree:
      throw DomainError("log_map: the spider tree has no tangent space");
  }
  return {};
}

Point exp_map(const Space& space, const Point& base, const Tangent& v) {
  space.require(base);
  switch (space.backend()) {
    case Backend::Euclidean: {
      const auto& x = std::get<EuclideanPoint>(base).coords;
      if (v.size() != x.size()) throw DomainError("exp_map: tangent dimension mismatch");
      return EuclideanPoint{x + v};
    }
    case Backend::Hyperbolic: {
      const auto& x = std::get<HyperbolicPoint>(base).coords;
      if (v.size() != x.size()) throw DomainError("exp_map: tangent dimension mismatch");
      const double n = std::sqrt(std::max(0.0, minkowski_dot(v, v)));
      if (n == 0.0) return base;
      const Eigen::VectorXd p = std::cosh(n) * x + (std::sinh(n) / n) * v;
      return HyperbolicPoint{lift(spatial(p))};
    }
    case Backend::SpiderTree:
      throw DomainError("exp_map: the spider tree has no tangent space");
  }
  return base;
}

double tangent_norm(const Space& space, const Tangent& v) {
  switch (space.backend()) {
    case Backend::Euclidean: return v.norm();
    case Backend::Hyperbolic: return std::sqrt(std::max(0.0, minkowski_dot(v, v)));
    case Backend::SpiderTree: throw DomainError("tangent_norm: the spider tree has no tangent space");
  }
  return 0.0;
}

Tangent zero_tangent(const Space& space) {
  switch (space.backend()) {
    case Backend::Euclidean: return Eigen::VectorXd::Zero(space.dimension());
    case Backend::Hyperbolic: return Eigen::VectorXd::Zero(space.dimension() + 1);
    case Backend::SpiderTree: throw DomainError("zero_tangent: the spider tree has no tangent space");
  }
  return {};
}

std::vector<double> coordinates(const Point& p) {
  return std::visit(
      [](const auto& q) -> std::vector<double> {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, TreePoint>) {
          return {static_cast<double>(q.ray), q.radius};
        } else {
          return {q.coords.data(), q.coords.data() + q.coords.size()};
        }
      },
      p);
}

std::vector<std::string> coordinate_names(const Space& space) {
  std::vector<std::string> names;
  switch (space.backend()) {
    case Backend::Euclidean:
      for (int i = 1; i <= space.dimension(); ++i) names.push_back("x_" + std::to_string(i));
      break;
    case Backend::Hyperbolic:
      for (int i = 0; i <= space.dimension(); ++i) names.push_back("x_" + std::to_string(i));
      break;
    case Backend::SpiderTree:
      names = {"ray", "radius"};
      break;
  }
  return names;
}

std::string to_string(const Point& p) {
  std::ostringstream out;
  char buf[32];
  if (const auto* t = std::get_if<TreePoint>(&p)) {
    std::snprintf(buf, sizeof buf, "%.17g", t->radius);
    out << "(ray " << t->ray << ", " << buf << ")";
    return out.str();
  }
  const auto c = coordinates(p);
  out << "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c[i]);
    out << (i ? ", " : "") << buf;
  }
  out << ")";
  return out.str();
}

bool approx_equal(double a, double b, double atol, double rtol) {
  return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
}

Eigen::MatrixXd lorentz_boost(const Point& p) {
  const auto* h = std::get_if<HyperbolicPoint>(&p);
  if (h == nullptr) throw DomainError("lorentz_boost needs a hyperbolic point");
  const Eigen::VectorXd& x = h->coords;
  const auto d = x.size() - 1;
  const Eigen::VectorXd v = x.tail(d);
  Eigen::MatrixXd b(d + 1, d + 1);
  b(0, 0) = x(0);
  b.block(0, 1, 1, d) = v.transpose();
  b.block(1, 0, d, 1) = v;
  b.block(1, 1, d, d) = Eigen::MatrixXd::Identity(d, d) + v * v.transpose() / (1.0 + x(0));
  return b;
}

Eigen::MatrixXd lorentz_inverse(const Eigen::MatrixXd& boost) {
  Eigen::MatrixXd inv = boost.transpose();
  inv.row(0) *= -1.0;
  inv.col(0) *= -1.0;
  return inv;
}

}  // namespace hppa
