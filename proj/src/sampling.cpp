#include "geoprox/sampling.hpp"

#include <cmath>
#include <numbers>

namespace geoprox {

SpherePoint random_unit_point(int ambient_dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    Vector v(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) v[i] = gauss(rng);
    if (v.norm() > 1e-6) return SpherePoint(std::move(v));
  }
}

Vector random_tangent(const SpherePoint& p, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    Vector v(p.ambient_dim());
    for (int i = 0; i < p.ambient_dim(); ++i) v[i] = gauss(rng);
    v -= v.dot(p.coords()) * p.coords();
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
}

SpherePoint random_in_cap(const SpherePoint& center, double radius,
                          std::mt19937_64& rng) {
  if (!(radius >= 0.0) || radius >= std::numbers::pi) {
    throw GeometryDomainError("cap radius must lie in [0, pi)");
  }
  if (radius == 0.0) return center;
  const int n = center.sphere_dim();
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // Colatitude density is proportional to sin^{n-1}; rejection against the
  // envelope sin^{n-1}(min(radius, pi/2)) keeps the draw exact for any n.
  const double envelope = std::sin(std::min(radius, std::numbers::pi / 2.0));
  double theta = 0.0;
  while (true) {
    theta = radius * uniform(rng);
    const double accept = std::pow(std::sin(theta) / envelope, n - 1);
    if (uniform(rng) <= accept) break;
  }
  return geodesic_step(center, random_tangent(center, rng), theta);
}

std::vector<SpherePoint> random_admissible_tuple(int ambient_dim, int count,
                                                 double cap_radius,
                                                 std::mt19937_64& rng) {
  const SpherePoint center = random_unit_point(ambient_dim, rng);
  std::vector<SpherePoint> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) {
    points.push_back(random_in_cap(center, cap_radius, rng));
  }
  return points;
}

}  // namespace geoprox
