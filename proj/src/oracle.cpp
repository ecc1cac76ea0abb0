#include "geoprox/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double guarded_eval(const PointObjective& objective, const SpherePoint& p) {
  try {
    const double v = objective(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  } catch (const GeometryDomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// One lat-long sweep over the cap; returns the best candidate seen.
void scan_cap(const PointObjective& objective, const SpherePoint& center,
              double radius, double spacing, SpherePoint& best_point,
              double& best_value) {
  const Eigen::MatrixXd basis = tangent_basis(center);
  const Vector u = basis.col(0);
  const Vector w = basis.col(1);

  const double v0 = guarded_eval(objective, center);
  if (v0 < best_value) {
    best_value = v0;
    best_point = center;
  }
  const int rings = static_cast<int>(std::ceil(radius / spacing));
  for (int j = 1; j <= rings; ++j) {
    const double theta = std::min(j * spacing, radius);
    const int count =
        std::max(1, static_cast<int>(std::ceil(2.0 * kPi * std::sin(theta) / spacing)));
    for (int i = 0; i < count; ++i) {
      const double psi = 2.0 * kPi * i / count;
      const Vector dir = std::cos(psi) * u + std::sin(psi) * w;
      const SpherePoint p = geodesic_step(center, dir, theta);
      const double v = guarded_eval(objective, p);
      if (v < best_value) {
        best_value = v;
        best_point = p;
      }
    }
  }
}

}  // namespace

GridResult grid_argmin(const PointObjective& objective, const ModelSpace& space,
                       const GridSpec& grid, const SpherePoint& cap_center,
                       double cap_radius) {
  if (space.dim != 2) {
    throw GeometryDomainError("grid_argmin supports S^2 only");
  }
  if (!(grid.spacing > 0.0) || grid.refinement_rounds < 0) {
    throw GeometryDomainError("invalid grid spec");
  }

  SpherePoint best = cap_center;
  double best_value = std::numeric_limits<double>::infinity();
  double spacing = grid.spacing;
  scan_cap(objective, cap_center, cap_radius, spacing, best, best_value);

  for (int round = 0; round < grid.refinement_rounds; ++round) {
    const double window = std::min(10.0 * spacing, cap_radius);
    spacing /= 10.0;
    scan_cap(objective, best, window, spacing, best, best_value);
  }
  if (!std::isfinite(best_value)) {
    throw GeometryDomainError("grid objective was infinite on the whole cap");
  }
  return {best, best_value, spacing};
}

std::pair<double, double> geodesic_golden_section(
    const std::function<double(double)>& objective, double length, double tol) {
  if (!(length > 0.0) || !(tol > 0.0)) {
    throw GeometryDomainError("golden section needs positive length and tol");
  }
  double a = 0.0, b = length;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = objective(d);
    }
  }
  const double t = 0.5 * (a + b);
  return {t, objective(t)};
}

SpherePoint cosine_mean_argmin(const std::vector<SpherePoint>& anchors,
                               const std::vector<double>& weights) {
  if (anchors.empty() || anchors.size() != weights.size()) {
    throw GeometryDomainError("cosine_mean_argmin needs matching anchor/weight lists");
  }
  Vector mean = Vector::Zero(anchors.front().ambient_dim());
  for (size_t i = 0; i < anchors.size(); ++i) {
    mean += weights[i] * anchors[i].coords();
  }
  return SpherePoint(mean);
}

SpherePoint refine_argmin_golden(const PointObjective& objective,
                                 const SpherePoint& start, double initial_window,
                                 int max_rounds, double window_tol) {
  SpherePoint current = start;
  double window = initial_window;
  for (int round = 0; round < max_rounds && window > window_tol; ++round) {
    const Eigen::MatrixXd basis = tangent_basis(current);
    double max_move = 0.0;
    for (int j = 0; j < basis.cols(); ++j) {
      const SpherePoint base = current;
      // Re-project the basis direction onto the tangent space at the point
      // reached by the previous line searches of this round.
      Vector dir = basis.col(j);
      dir -= dir.dot(base.coords()) * base.coords();
      const double norm = dir.norm();
      if (norm < 1e-12) continue;
      dir /= norm;
      auto line = [&](double t) {
        return guarded_eval(objective, geodesic_step(base, dir, t - window));
      };
      // Golden section over [-window, window] via the shifted variable.
      const auto [t_shifted, value] =
          geodesic_golden_section(line, 2.0 * window, window * 1e-3);
      const double t = t_shifted - window;
      (void)value;
      if (std::abs(t) > 1e-15) {
        current = geodesic_step(base, dir, t);
        max_move = std::max(max_move, std::abs(t));
      }
    }
    window = std::max(4.0 * max_move, window / 8.0);
  }
  return current;
}

SpherePoint reference_argmin(const ConvexFunctional& f, const ModelSpace& space,
                             const GridSpec& grid) {
  if (f.kind() == FunctionalKind::cosine_mean) {
    return cosine_mean_argmin(f.anchors(), f.weights());
  }
  if (f.kind() == FunctionalKind::constant) {
    return f.anchors().front();  // everything minimizes a constant
  }
  const auto [center, radius] = admissible_cap(f);
  (void)radius;
  const PointObjective objective = [&](const SpherePoint& y) {
    return evaluate(f, y, space);
  };
  // The guarded evaluation skips inadmissible candidates, so the cap can be
  // generous; the argmin lies in the geodesic hull of the anchors.
  const GridResult coarse = grid_argmin(objective, space, grid, center, 1.45);
  return refine_argmin_golden(objective, coarse.point, 4.0 * coarse.final_spacing);
}

}  // namespace geoprox
