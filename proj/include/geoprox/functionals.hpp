#pragma once

/** Convex objective functions on the admissible sphere.  All families
 * evaluate through the unit-sphere angle theta_i = sqrt(kappa) * d(y, p_i),
 * so the same anchor data defines the same function under any curvature
 * rescaling of the metric. */

#include "geoprox/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace geoprox {

/// Thrown when a point violates admissibility against a functional's anchors;
/// carries the index of the first offending anchor.
class AdmissibilityError : public GeometryDomainError {
 public:
  AdmissibilityError(const std::string& what, int anchor_index)
      : GeometryDomainError(what), anchor_index(anchor_index) {}
  int anchor_index;
};

/// The penalty kernel tan(t) sin(t): zero at 0, strictly increasing and
/// convex on [0, pi/2), diverging as t -> pi/2.  Its second-order Maclaurin
/// approximation is t^2, so it degenerates to the quadratic penalty in the
/// flat limit.
double penalty(double t);

enum class FunctionalKind {
  constant,            // f == 0 everywhere (anchors ignored)
  cosine_mean,         // sum_i w_i (1 - cos theta_i)
  tan_sin_sum,         // sum_i w_i tan(theta_i) sin(theta_i)
  max_cosine,          // max_i w_i (1 - cos theta_i)
  custom_combination,  // sum_i w_i [ (1 - cos theta_i) + tan sin theta_i ]
};

FunctionalKind functional_kind_from_string(const std::string& name);
std::string to_string(FunctionalKind kind);

/// A proper continuous convex function on the admissible part of the sphere,
/// determined by a family kind, anchor points, and positive weights.
class ConvexFunctional {
 public:
  ConvexFunctional(FunctionalKind kind, std::vector<SpherePoint> anchors,
                   std::vector<double> weights, const ModelSpace& space);

  FunctionalKind kind() const { return kind_; }
  const std::vector<SpherePoint>& anchors() const { return anchors_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight_sum() const { return weight_sum_; }

  /// True iff y is strictly within angle pi/2 of every anchor (always true
  /// for the constant functional).
  bool admissible_at(const SpherePoint& y) const;

 private:
  FunctionalKind kind_;
  std::vector<SpherePoint> anchors_;
  std::vector<double> weights_;
  double weight_sum_;
};

/// Objective value at y.  Throws AdmissibilityError (with the offending
/// anchor index) if y is not admissible for f.
double evaluate(const ConvexFunctional& f, const SpherePoint& y,
                const ModelSpace& space);

/// Samples f along a geodesic: `samples` equally spaced parameters covering
/// both endpoints (samples >= 2).
std::vector<std::pair<double, double>> geodesic_restriction(
    const ConvexFunctional& f, const Geodesic& geodesic,
    const ModelSpace& space, int samples);

struct ConvexityReport {
  bool passed;
  double worst_violation;  // max over trials of f(mix) - [a f(x) + (1-a) f(y)]
  int trials;
};

inline constexpr double kConvexityTol = 1e-9;

/// Randomized check of the defining convexity inequality for an arbitrary
/// point function, sampling pairs inside the cap of the given center/radius.
ConvexityReport certify_convexity_fn(
    const std::function<double(const SpherePoint&)>& fn,
    const SpherePoint& cap_center, double cap_radius, const ModelSpace& space,
    int trials, unsigned seed);

/// Randomized convexity certificate for a functional; the sampling cap is
/// derived from the anchors so every sampled point is admissible.
ConvexityReport certify_convexity(const ConvexFunctional& f,
                                  const ModelSpace& space, int trials,
                                  unsigned seed);

/// Center/radius of a sampling cap inside which every point is admissible
/// for f and any two sampled points are mutually admissible.
std::pair<SpherePoint, double> admissible_cap(const ConvexFunctional& f);

}  // namespace geoprox
