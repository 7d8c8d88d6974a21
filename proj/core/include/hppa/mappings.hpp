#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hppa/geometry.hpp"

namespace hppa {

/// Non-negative sequence indexed from n = 1 whose series is summable by
/// construction: identically zero, geometric c*q^n with 0 <= q < 1, or a
/// finite table followed by zeros.
class SummableSequence {
 public:
  static SummableSequence zero();
  static SummableSequence geometric(double scale, double ratio);
  static SummableSequence table(std::vector<double> values);

  double operator()(int n) const;
  // Σ_{n>=1}, evaluated in closed form.
  double sum() const;
  bool is_zero() const;
  std::string describe() const;

 private:
  enum class Kind { Zero, Geometric, Table };
  SummableSequence(Kind kind, double scale, double ratio, std::vector<double> values)
      : kind_(kind), scale_(scale), ratio_(ratio), values_(std::move(values)) {}

  Kind kind_;
  double scale_;
  double ratio_;
  std::vector<double> values_;
};

/// The gauge ξ in d(Tⁿx,Tⁿy) <= d(x,y) + λ_n ξ(d(x,y)) + μ_n.
class Xi {
 public:
  static Xi identity();
  // min(t, cap). Non-decreasing only; kept for configurations that need a
  // bounded gauge.
  static Xi capped(double cap);

  double operator()(double t) const;
  // ξ(t) <= m_star * t for every t >= m.
  bool satisfies_growth_bound(double m, double m_star) const;
  std::string describe() const;

 private:
  explicit Xi(std::optional<double> cap) : cap_(cap) {}
  std::optional<double> cap_;
};

/// A self-map of the scenario domain together with its total asymptotic
/// nonexpansiveness data.
struct TanMapping {
  std::string name;
  std::function<Point(const Point&)> map;
  // Closed-form Tⁿ for n >= 1 when composing is wasteful (isometries,
  // idempotent maps). Empty means "compose `map` n times".
  std::function<Point(int, const Point&)> power;
  // Membership test for the domain C; empty means the whole space.
  std::function<bool(const Point&)> domain;
  SummableSequence lambda = SummableSequence::zero();
  SummableSequence mu = SummableSequence::zero();
  Xi xi = Xi::identity();
  // Constants (M, M*) with ξ(t) <= M* t for t >= M.
  double growth_threshold = 1.0;
  double growth_constant = 1.0;
  std::vector<Point> fixed_points;
  // Uniform-continuity modulus: d(Tx,Ty) <= L d(x,y) on the domain.
  std::optional<double> continuity_modulus;

  bool nonexpansive() const { return lambda.is_zero() && mu.is_zero(); }
  // Throws DomainError unless Σλ, Σμ are finite and (M, M*) bound ξ.
  void check_conditions() const;
};

Point apply(const Space& space, const TanMapping& T, const Point& x);
Point apply_iter(const Space& space, const TanMapping& T, int n, const Point& x);

/// max over pairs of d(Tⁿx,Tⁿy) - [d(x,y) + λ_n ξ(d(x,y)) + μ_n].
double tan_violation(const Space& space, const TanMapping& T, int n,
                     const std::vector<std::pair<Point, Point>>& pairs);

namespace mappings {

TanMapping identity(const Space& space);
// Rotation by `angle` in the (x_1, x_2) plane about `center`. Needs d >= 2.
TanMapping euclidean_rotation(const Space& space, Point center, double angle);
// Metric projection onto the closed ball B(center, radius); any backend.
TanMapping ball_projection(const Space& space, Point center, double radius);
// Constant map onto a single point (projection onto {p}).
TanMapping point_projection(const Space& space, Point p);
// Hyperbolic isometry fixing `center`: conjugate of a rotation in the first
// spatial plane by the boost carrying the base point to `center`. Needs d >= 2.
TanMapping hyperbolic_rotation(const Space& space, Point center, double angle);
// (ray j, r) -> (ray (j + shift) mod K, r); fixes only the origin.
TanMapping ray_permutation(const Space& space, int shift);

// Nonlinear shift on the closed unit ball of R^d, d >= 3:
//   T(x_1, ..., x_d) = (0, x_1², a x_2, ..., a x_{d-1}).
// Fixes only 0. Not nonexpansive: Lipschitz constant 2 for n = 1.
TanMapping goebel_kirk(const Space& space, double coefficient,
                       SummableSequence fitted_lambda);

// Coefficient and λ_n table recorded for the 8-dimensional catalog instance.
inline constexpr double kGoebelKirkCoefficient = 0.9;
inline constexpr int kGoebelKirkDimension = 8;
SummableSequence goebel_kirk_recorded_lambda();

}  // namespace mappings

}  // namespace hppa
