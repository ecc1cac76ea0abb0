#pragma once

/** Spherical metric geometry: points on S^n embedded in R^{n+1}, geodesics,
 * convex combinations, admissibility guards, and the curvature rescaling
 * d_kappa = d_1 / sqrt(kappa) that turns the unit sphere into a model space
 * of curvature bound kappa. */

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <vector>

namespace geoprox {

using Vector = Eigen::VectorXd;

/// Thrown when two points live on spheres of different dimension.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an argument leaves the admissible domain of an operation
/// (parameter out of range, antipodal endpoints, inadmissible point, ...).
class GeometryDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A point of S^n, stored as a unit vector in R^{n+1}.  The constructor
/// renormalizes, so the unit-norm invariant holds to machine precision.
class SpherePoint {
 public:
  explicit SpherePoint(Vector coords);
  SpherePoint(std::initializer_list<double> coords);

  const Vector& coords() const { return coords_; }
  /// Number of ambient coordinates, n + 1.
  int ambient_dim() const { return static_cast<int>(coords_.size()); }
  /// Intrinsic dimension n of the sphere the point lives on.
  int sphere_dim() const { return ambient_dim() - 1; }

  double dot(const SpherePoint& other) const;

 private:
  Vector coords_;
};

/// Descriptor of the model space: S^dim with the metric d = angle / sqrt(kappa),
/// which is a space of curvature bound kappa.  admissible_radius is the open
/// bound pi / (2 sqrt(kappa)) on pairwise distances of admissible point sets.
struct ModelSpace {
  int dim;
  double kappa;
  double admissible_radius;

  explicit ModelSpace(int dim, double kappa = 1.0);

  double sqrt_kappa() const { return sqrt_kappa_; }
  /// Converts a distance in this space's metric to the unit-sphere angle.
  double to_angle(double dist) const { return dist * sqrt_kappa_; }
  /// Converts a unit-sphere angle to a distance in this space's metric.
  double from_angle(double angle) const { return angle / sqrt_kappa_; }

 private:
  double sqrt_kappa_;
};

/// Unit-sphere angle arccos<x,y>, the kappa = 1 metric.  Inner products are
/// clamped to [-1, 1]; small angles are evaluated through the chord so the
/// result stays accurate to ~1e-15 where plain arccos bottoms out at ~1e-8.
double angle_between(const SpherePoint& x, const SpherePoint& y);

/// Geodesic distance in the space's metric: angle_between / sqrt(kappa).
double distance(const SpherePoint& x, const SpherePoint& y,
                const ModelSpace& space);

/// Unit tangent vector at x pointing along the geodesic toward y.
/// Requires x and y distinct and non-antipodal.
Vector tangent_toward(const SpherePoint& x, const SpherePoint& y);

/// Exponential map: the point at the given angle from p along the unit
/// tangent direction, cos(angle) p + sin(angle) v.
SpherePoint geodesic_step(const SpherePoint& p, const Vector& unit_tangent,
                          double angle);

/// Orthonormal basis of the tangent space at p, as columns of an
/// (n+1) x n matrix (Householder construction, deterministic).
Eigen::MatrixXd tangent_basis(const SpherePoint& p);

/// Point at arc-length parameter t (in the space's metric) along the unique
/// geodesic from x to y.  Rejects t outside [0, d(x,y)] and antipodal pairs.
SpherePoint geodesic_point(const SpherePoint& x, const SpherePoint& y,
                           double t, const ModelSpace& space);

/// The point alpha x (+) (1-alpha) y: parameter (1-alpha) d(x,y) along the
/// geodesic from x to y, so alpha = 1 gives x and alpha = 0 gives y.
SpherePoint convex_combination(const SpherePoint& x, const SpherePoint& y,
                               double alpha, const ModelSpace& space);

/// True iff every pairwise distance is strictly below the admissible radius.
bool check_admissible(std::span<const SpherePoint> points,
                      const ModelSpace& space);

/// The unique geodesic between two distinct, non-antipodal points.
/// length is in the space's metric; point_at(0) = start, point_at(length) = end.
class Geodesic {
 public:
  Geodesic(const SpherePoint& start, const SpherePoint& end,
           const ModelSpace& space);

  const SpherePoint& start() const { return start_; }
  const SpherePoint& end() const { return end_; }
  double length() const { return length_; }

  SpherePoint point_at(double t) const;

 private:
  SpherePoint start_;
  SpherePoint end_;
  double length_;      // space metric
  double angle_;       // unit-sphere angle
  double sqrt_kappa_;
  Vector tangent_;     // unit tangent at start_
};

/// Both sides of the three spherical comparison inequalities evaluated on one
/// triple.  slack = lhs - rhs, so the inequality holds when slack >= 0 (up to
/// rounding).  The cosine-convexity inequality needs d(x1,x3) <= pi/2 and
/// d(x2,x3) <= pi/2; when that fails it is reported as not checked.
struct ComparisonReport {
  double sine_slack;               // cos d(c,x3) sin d12 vs sine-weighted mix
  double midpoint_slack;           // midpoint cosine vs average of cosines
  double cosine_convexity_slack;   // cos d(c,x3) vs convex mix of cosines
  bool sine_ok;
  bool midpoint_ok;
  bool cosine_convexity_ok;
  bool cosine_convexity_checked;

  bool all_ok() const {
    return sine_ok && midpoint_ok && (!cosine_convexity_checked || cosine_convexity_ok);
  }
};

/// Evaluates the three comparison inequalities at the given alpha (the
/// midpoint one always at 1/2), in the unit-sphere angle metric.  Requires
/// triangle perimeter < 2 pi.  Satisfaction tolerance is slack >= -1e-10.
ComparisonReport comparison_inequality_oracle(const SpherePoint& x1,
                                              const SpherePoint& x2,
                                              const SpherePoint& x3,
                                              double alpha,
                                              const ModelSpace& space);

inline constexpr double kComparisonSlackTol = 1e-10;

}  // namespace geoprox
