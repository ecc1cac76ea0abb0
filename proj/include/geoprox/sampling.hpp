#pragma once

/** Seeded random generators for points, caps, and admissible tuples.
 * Everything is driven by a caller-owned mt19937_64 so runs are reproducible. */

#include "geoprox/geometry.hpp"

#include <random>
#include <vector>

namespace geoprox {

/// Uniform point on the unit sphere of the given ambient dimension.
SpherePoint random_unit_point(int ambient_dim, std::mt19937_64& rng);

/// Uniform unit tangent direction at p.
Vector random_tangent(const SpherePoint& p, std::mt19937_64& rng);

/// Area-uniform point in the closed cap of the given angular radius around
/// center (radius in the unit-sphere angle metric, must be < pi).
SpherePoint random_in_cap(const SpherePoint& center, double radius,
                          std::mt19937_64& rng);

/// `count` points inside a cap of the given radius around a random center;
/// any two of them are within 2 * radius of each other, so radius below
/// pi/4 yields a pairwise-admissible set in the kappa = 1 metric.
std::vector<SpherePoint> random_admissible_tuple(int ambient_dim, int count,
                                                 double cap_radius,
                                                 std::mt19937_64& rng);

}  // namespace geoprox
