#include "geoprox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

void require_same_dim(const SpherePoint& x, const SpherePoint& y) {
  if (x.ambient_dim() != y.ambient_dim()) {
    throw DimensionError("sphere points have different ambient dimensions");
  }
}

void require_space_dim(const SpherePoint& x, const ModelSpace& space) {
  if (x.ambient_dim() != space.dim + 1) {
    throw DimensionError("point dimension does not match model space");
  }
}

}  // namespace

SpherePoint::SpherePoint(Vector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw DimensionError("a sphere point needs at least 2 coordinates");
  }
  const double norm = coords_.norm();
  if (!(norm > 1e-8) || !std::isfinite(norm)) {
    throw GeometryDomainError("cannot normalize a (near-)zero coordinate vector");
  }
  coords_ /= norm;
}

SpherePoint::SpherePoint(std::initializer_list<double> coords)
    : SpherePoint(Eigen::Map<const Vector>(coords.begin(),
                                           static_cast<long>(coords.size()))) {}

double SpherePoint::dot(const SpherePoint& other) const {
  require_same_dim(*this, other);
  return coords_.dot(other.coords_);
}

ModelSpace::ModelSpace(int dim_in, double kappa_in)
    : dim(dim_in), kappa(kappa_in) {
  if (dim < 1) throw DimensionError("model space dimension must be >= 1");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw GeometryDomainError("curvature parameter kappa must be positive");
  }
  sqrt_kappa_ = std::sqrt(kappa);
  admissible_radius = kPi / (2.0 * sqrt_kappa_);
}

double angle_between(const SpherePoint& x, const SpherePoint& y) {
  const double dot = clamp_unit(x.dot(y));
  if (dot > 0.5) {
    // arccos loses all precision near 1 (acos(1 - ulp) is already ~1.5e-8),
    // so small angles go through the chord, where asin is well conditioned.
    const double half_chord = 0.5 * (x.coords() - y.coords()).norm();
    return 2.0 * std::asin(std::min(1.0, half_chord));
  }
  return std::acos(dot);
}

double distance(const SpherePoint& x, const SpherePoint& y,
                const ModelSpace& space) {
  require_space_dim(x, space);
  require_space_dim(y, space);
  return space.from_angle(angle_between(x, y));
}

Vector tangent_toward(const SpherePoint& x, const SpherePoint& y) {
  require_same_dim(x, y);
  Vector w = y.coords() - y.dot(x) * x.coords();
  const double norm = w.norm();
  if (norm < 1e-12) {
    if (x.dot(y) < 0.0) {
      throw GeometryDomainError(
          "antipodal endpoints: geodesic direction is not unique");
    }
    throw GeometryDomainError(
        "coincident endpoints: geodesic direction is undefined");
  }
  return w / norm;
}

SpherePoint geodesic_step(const SpherePoint& p, const Vector& unit_tangent,
                          double angle) {
  return SpherePoint(std::cos(angle) * p.coords() +
                     std::sin(angle) * unit_tangent);
}

Eigen::MatrixXd tangent_basis(const SpherePoint& p) {
  const int m = p.ambient_dim();
  // Householder reflection mapping p to -s e_0; its remaining columns span
  // the tangent space at p.
  const double s = p.coords()[0] >= 0.0 ? 1.0 : -1.0;
  Vector v = p.coords();
  v[0] += s;
  const double vtv = v.squaredNorm();
  Eigen::MatrixXd basis(m, m - 1);
  for (int j = 1; j < m; ++j) {
    Vector col = -2.0 * (v[j] / vtv) * v;
    col[j] += 1.0;
    basis.col(j - 1) = col.normalized();
  }
  return basis;
}

SpherePoint geodesic_point(const SpherePoint& x, const SpherePoint& y,
                           double t, const ModelSpace& space) {
  const double d = distance(x, y, space);
  if (t < 0.0 || t > d) {
    throw GeometryDomainError("geodesic parameter outside [0, d(x,y)]");
  }
  if (t == 0.0) return x;
  const double angle = space.to_angle(d);
  if (angle >= kPi - 1e-12) {
    throw GeometryDomainError("antipodal inputs: geodesic is not unique");
  }
  return geodesic_step(x, tangent_toward(x, y), space.to_angle(t));
}

SpherePoint convex_combination(const SpherePoint& x, const SpherePoint& y,
                               double alpha, const ModelSpace& space) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw GeometryDomainError("convex combination weight outside [0, 1]");
  }
  if (alpha == 1.0) return x;
  if (alpha == 0.0) return y;
  const double d = distance(x, y, space);
  if (d == 0.0) return x;
  return geodesic_point(x, y, (1.0 - alpha) * d, space);
}

bool check_admissible(std::span<const SpherePoint> points,
                      const ModelSpace& space) {
  if (points.empty()) {
    throw GeometryDomainError("check_admissible needs a nonempty point list");
  }
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (!(distance(points[i], points[j], space) < space.admissible_radius)) {
        return false;
      }
    }
  }
  return true;
}

Geodesic::Geodesic(const SpherePoint& start, const SpherePoint& end,
                   const ModelSpace& space)
    : start_(start),
      end_(end),
      length_(distance(start, end, space)),
      angle_(space.to_angle(length_)),
      sqrt_kappa_(space.sqrt_kappa()),
      tangent_(Vector::Zero(start.ambient_dim())) {
  if (length_ == 0.0) {
    throw GeometryDomainError("geodesic endpoints must be distinct");
  }
  if (angle_ >= kPi - 1e-12) {
    throw GeometryDomainError("antipodal endpoints: geodesic is not unique");
  }
  tangent_ = tangent_toward(start_, end_);
}

SpherePoint Geodesic::point_at(double t) const {
  if (t < 0.0 || t > length_) {
    throw GeometryDomainError("geodesic parameter outside [0, length]");
  }
  return geodesic_step(start_, tangent_, t * sqrt_kappa_);
}

ComparisonReport comparison_inequality_oracle(const SpherePoint& x1,
                                              const SpherePoint& x2,
                                              const SpherePoint& x3,
                                              double alpha,
                                              const ModelSpace& space) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw GeometryDomainError("comparison oracle weight outside [0, 1]");
  }
  const double d12 = angle_between(x1, x2);
  const double d13 = angle_between(x1, x3);
  const double d23 = angle_between(x2, x3);
  if (!(d12 + d13 + d23 < 2.0 * kPi)) {
    throw GeometryDomainError("triangle perimeter must be below 2 pi");
  }

  // The combination point alpha x1 (+) (1-alpha) x2 in the angle metric;
  // the combination is metric-scale invariant, so any kappa works.
  const ModelSpace unit(space.dim, 1.0);
  const SpherePoint c_alpha = convex_combination(x1, x2, alpha, unit);
  const SpherePoint c_mid = convex_combination(x1, x2, 0.5, unit);

  ComparisonReport report{};

  const double lhs_sine = std::cos(angle_between(c_alpha, x3)) * std::sin(d12);
  const double rhs_sine = std::cos(d13) * std::sin(alpha * d12) +
                          std::cos(d23) * std::sin((1.0 - alpha) * d12);
  report.sine_slack = lhs_sine - rhs_sine;
  report.sine_ok = report.sine_slack >= -kComparisonSlackTol;

  const double lhs_mid =
      std::cos(angle_between(c_mid, x3)) * std::cos(0.5 * d12);
  const double rhs_mid = 0.5 * std::cos(d13) + 0.5 * std::cos(d23);
  report.midpoint_slack = lhs_mid - rhs_mid;
  report.midpoint_ok = report.midpoint_slack >= -kComparisonSlackTol;

  report.cosine_convexity_checked = d13 <= kPi / 2.0 && d23 <= kPi / 2.0;
  if (report.cosine_convexity_checked) {
    const double lhs_cos = std::cos(angle_between(c_alpha, x3));
    const double rhs_cos = alpha * std::cos(d13) + (1.0 - alpha) * std::cos(d23);
    report.cosine_convexity_slack = lhs_cos - rhs_cos;
    report.cosine_convexity_ok =
        report.cosine_convexity_slack >= -kComparisonSlackTol;
  } else {
    report.cosine_convexity_slack = 0.0;
    report.cosine_convexity_ok = true;
  }
  return report;
}

}  // namespace geoprox
