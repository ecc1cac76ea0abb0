#pragma once

/** The resolvent of lambda f on the admissible sphere: the unique minimizer
 * of lambda f(y) + tan(theta) sin(theta) with theta the unit-sphere angle
 * from y to the base point.  For curvature kappa the angle is
 * sqrt(kappa) * d(y, x), so the same routine realizes the rescaled scheme. */

#include "geoprox/functionals.hpp"
#include "geoprox/geometry.hpp"

#include <stdexcept>
#include <string>

namespace geoprox {

enum class InnerMethod { geodesic_descent, nested_golden_section };

struct InnerSolverConfig {
  InnerMethod method = InnerMethod::geodesic_descent;
  double tol = 1e-10;     // geodesic step-length termination, radians
  int max_iter = 10000;
  double fd_step = 1e-6;  // central-difference step for directional derivatives
};

struct ResolventResult {
  SpherePoint point;       // R_{lambda f} x
  double c_value;          // cos of the angle from point to x, in (0, 1]
  double objective;        // lambda f + penalty at the minimizer
  int inner_iterations;
  double inner_residual;   // last geodesic step length considered
};

/// Thrown when the inner solver exhausts max_iter without meeting tol;
/// carries the best iterate found so far.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SpherePoint best, double residual,
              int iterations)
      : std::runtime_error(what),
        best(std::move(best)),
        residual(residual),
        iterations(iterations) {}
  SpherePoint best;
  double residual;
  int iterations;
};

/// Full objective of the resolvent problem at y.
double resolvent_objective(const ConvexFunctional& f, double lambda,
                           const SpherePoint& x, const SpherePoint& y,
                           const ModelSpace& space);

/// Computes R_{lambda f} x.  Deterministic given its inputs; the returned
/// objective never exceeds the value at x itself.
ResolventResult resolve(const ConvexFunctional& f, double lambda,
                        const SpherePoint& x, const ModelSpace& space,
                        const InnerSolverConfig& cfg = {});

struct InequalityReport {
  double lhs;
  double rhs;
  double slack;   // lhs - rhs
  bool passed;    // slack >= -1e-6
};

inline constexpr double kResolventSlackTol = 1e-6;

/// Two-resolvent inequality with the distance and sine factors: the one-sided
/// bound relating the objective drop to the cosine geometry.
InequalityReport check_first_inequality(const ConvexFunctional& f,
                                        double lambda, double mu,
                                        const SpherePoint& x,
                                        const SpherePoint& y,
                                        const ResolventResult& rx,
                                        const ResolventResult& ry,
                                        const ModelSpace& space);

/// Symmetrized two-resolvent cosine inequality (the firm-nonexpansiveness
/// analogue); at lambda = mu it reduces to the single-parameter form.
InequalityReport check_resolvent_inequality(const ConvexFunctional& f,
                                            double lambda, double mu,
                                            const SpherePoint& x,
                                            const SpherePoint& y,
                                            const ResolventResult& rx,
                                            const ResolventResult& ry,
                                            const ModelSpace& space);

struct FejerReport {
  InequalityReport value_bound;   // objective-gap bound against a minimizer
  InequalityReport cosine_bound;  // C cos d(u, Rx) >= cos d(u, x)
  bool passed;
};

/// Checks the two minimizer-anchored inequalities; u must minimize f.
FejerReport check_fejer_inequality(const ConvexFunctional& f, double lambda,
                                   const SpherePoint& x,
                                   const ResolventResult& rx,
                                   const SpherePoint& u,
                                   const ModelSpace& space);

}  // namespace geoprox
