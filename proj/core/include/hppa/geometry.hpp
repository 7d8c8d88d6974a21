#pragma once

#include <Eigen/Core>

#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

namespace hppa {

enum class Backend { Euclidean, Hyperbolic, SpiderTree };

struct EuclideanPoint {
  Eigen::VectorXd coords;
};

// Point on the upper sheet of the hyperboloid <x,x>_M = -1, x0 > 0, stored in
// ambient coordinates (x0, x1, ..., xd).
struct HyperbolicPoint {
  Eigen::VectorXd coords;
};

// K half-lines glued at a common origin. Radius 0 is the origin whatever the
// ray id; constructors canonicalise it to ray 0.
struct TreePoint {
  int ray = 0;
  double radius = 0.0;
};

bool operator==(const EuclideanPoint& a, const EuclideanPoint& b);
bool operator==(const HyperbolicPoint& a, const HyperbolicPoint& b);
bool operator==(const TreePoint& a, const TreePoint& b);

using Point = std::variant<EuclideanPoint, HyperbolicPoint, TreePoint>;

// Tangent vectors in ambient coordinates. Euclidean: R^d. Hyperbolic: R^{d+1},
// Minkowski-orthogonal to the base point. The tree has no tangent space.
using Tangent = Eigen::VectorXd;

class Space {
 public:
  static Space euclidean(int dimension);
  static Space hyperbolic(int dimension);
  static Space spider_tree(int rays);

  Backend backend() const { return backend_; }
  // d for Euclidean/Hyperbolic, K for SpiderTree.
  int dimension() const { return dimension_; }

  bool contains(const Point& p) const;
  // Throws DomainError naming the mismatch.
  void require(const Point& p) const;

  std::string describe() const;

  bool operator==(const Space&) const = default;

 private:
  Space(Backend backend, int dimension) : backend_(backend), dimension_(dimension) {}

  Backend backend_;
  int dimension_;
};

std::string backend_name(Backend b);

// Point construction.
Point euclidean_point(std::vector<double> coords);
Point euclidean_point(std::initializer_list<double> coords);
Point euclidean_point(const Eigen::VectorXd& coords);
// Lifts spatial coordinates v to (sqrt(1 + |v|^2), v).
Point hyperbolic_point(const Eigen::VectorXd& spatial);
Point hyperbolic_point(std::vector<double> spatial);
Point hyperbolic_point(std::initializer_list<double> spatial);
// Polar form: distance rho from the base point (1,0,...,0) in unit direction u.
Point hyperbolic_polar(double rho, const Eigen::VectorXd& direction);
Point tree_point(int ray, double radius);
// (0,...,0), (1,0,...,0) or the tree origin.
Point base_point(const Space& space);

double minkowski_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
// Rescales onto the sheet; also flips to the upper sheet if needed.
Eigen::VectorXd renormalize_hyperbolic(const Eigen::VectorXd& x);

// Lorentz boost carrying the base point (1,0,...,0) to the hyperbolic point p;
// its columns 1..d form an orthonormal frame of the tangent space at p.
Eigen::MatrixXd lorentz_boost(const Point& p);
// Inverse of a Lorentz transformation: diag(-1,1,..,1) Bᵀ diag(-1,1,..,1).
Eigen::MatrixXd lorentz_inverse(const Eigen::MatrixXd& boost);

double distance(const Space& space, const Point& x, const Point& y);

// (1-t)x ⊕ ty: the point a fraction t along the geodesic from x to y.
Point combine(const Space& space, const Point& x, const Point& y, double t);

// d²((1-t)x⊕ty, z) - [(1-t)d²(x,z) + t d²(y,z) - t(1-t)d²(x,y)]; <= 0 in CAT(0).
double cat0_defect(const Space& space, const Point& x, const Point& y,
                   const Point& z, double t);

// Riemannian exponential/logarithm for Euclidean and Hyperbolic backends.
// SpiderTree throws DomainError.
Tangent log_map(const Space& space, const Point& base, const Point& target);
Point exp_map(const Space& space, const Point& base, const Tangent& v);
double tangent_norm(const Space& space, const Tangent& v);
Tangent zero_tangent(const Space& space);

// Flat coordinate view for CSV output: Euclidean x_1..x_d, Hyperbolic
// x_0..x_d, tree (ray, radius).
std::vector<double> coordinates(const Point& p);
std::vector<std::string> coordinate_names(const Space& space);
std::string to_string(const Point& p);

// |a-b| <= atol + rtol*max(|a|,|b|).
bool approx_equal(double a, double b, double atol = 1e-12, double rtol = 1e-9);

}  // namespace hppa
