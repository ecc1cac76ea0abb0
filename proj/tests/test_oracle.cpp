#include "geoprox/oracle.hpp"

#include "geoprox/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace geoprox;

namespace {
const ModelSpace kS2(2, 1.0);
}

TEST_SUITE_BEGIN("oracle");

TEST_CASE("golden section finds analytic minima") {
  const auto [t1, v1] = geodesic_golden_section(
      [](double t) { return (t - 0.3) * (t - 0.3); }, 1.0, 1e-9);
  CHECK(t1 == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(v1 <= 1e-14);

  const auto [t2, v2] = geodesic_golden_section(
      [](double t) { return std::tan(t) * std::sin(t); }, 1.4, 1e-9);
  CHECK(t2 <= 1e-8);
  CHECK(v2 <= 1e-15);

  CHECK_THROWS_AS(geodesic_golden_section([](double t) { return t; }, 0.0, 1e-9),
                  GeometryDomainError);
}

TEST_CASE("grid argmin recovers a single anchor") {
  const SpherePoint p({0.3, -0.5, 0.81});
  const ConvexFunctional f(FunctionalKind::cosine_mean, {p}, {1.0}, kS2);
  const auto result = grid_argmin(
      [&](const SpherePoint& y) { return evaluate(f, y, kS2); }, kS2,
      GridSpec{0.02, 2}, SpherePoint({0.0, 0.0, 1.0}), 1.45);
  CHECK(angle_between(result.point, p) < 5.0 * result.final_spacing);
  CHECK(result.final_spacing == doctest::Approx(2e-4));
}

TEST_CASE("grid argmin of the bare penalty stays at the base point") {
  const SpherePoint x({0.0, 0.6, 0.8});
  const auto result = grid_argmin(
      [&](const SpherePoint& y) { return penalty(angle_between(y, x)); }, kS2,
      GridSpec{0.02, 2}, x, 1.3);
  CHECK(angle_between(result.point, x) < 5.0 * result.final_spacing);
  CHECK(result.value < 1e-6);
}

TEST_CASE("grid argmin matches the closed-form cosine mean") {
  std::mt19937_64 rng(13);
  const auto anchors = random_admissible_tuple(3, 3, 0.35, rng);
  const std::vector<double> weights{1.0, 1.0, 1.0};
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, weights, kS2);
  const SpherePoint closed = cosine_mean_argmin(anchors, weights);

  const auto result = grid_argmin(
      [&](const SpherePoint& y) { return evaluate(f, y, kS2); }, kS2,
      GridSpec{0.01, 3}, closed, 1.45);
  CHECK(angle_between(result.point, closed) < 10.0 * result.final_spacing);
  CHECK(result.value >= evaluate(f, closed, kS2) - 1e-12);
}

TEST_CASE("closed-form argmin beats nearby perturbations") {
  std::mt19937_64 rng(19);
  const auto anchors = random_admissible_tuple(3, 4, 0.3, rng);
  const std::vector<double> weights{0.5, 2.0, 1.0, 1.3};
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, weights, kS2);
  const SpherePoint u = cosine_mean_argmin(anchors, weights);
  const double fu = evaluate(f, u, kS2);
  for (int i = 0; i < 200; ++i) {
    const SpherePoint y = random_in_cap(u, 0.3, rng);
    CHECK(fu <= evaluate(f, y, kS2) + 1e-15);
  }
}

TEST_CASE("grid and 1D golden agree on a single-anchor resolvent problem") {
  const SpherePoint x({1.0, 0.0, 0.0});
  const SpherePoint p({std::cos(0.8), std::sin(0.8), 0.0});
  const double lambda = 1.0;

  // 1D route: restrict to the geodesic [x, p].
  const auto [t_star, value_1d] = geodesic_golden_section(
      [&](double t) {
        return lambda * (1.0 - std::cos(0.8 - t)) + std::tan(t) * std::sin(t);
      },
      0.8, 1e-9);

  // 2D route: grid over the cap.
  const ConvexFunctional f(FunctionalKind::cosine_mean, {p}, {1.0}, kS2);
  const auto grid = grid_argmin(
      [&](const SpherePoint& y) {
        return lambda * evaluate(f, y, kS2) + penalty(angle_between(y, x));
      },
      kS2, GridSpec{0.01, 3}, x, 1.0);

  const SpherePoint from_1d = geodesic_point(x, p, t_star, kS2);
  CHECK(angle_between(grid.point, from_1d) < 2e-4);
  CHECK(std::abs(value_1d - grid.value) < 1e-6);
}

TEST_CASE("golden coordinate refinement reaches machine precision") {
  std::mt19937_64 rng(29);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const std::vector<double> weights{1.0, 0.8, 1.7};
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, weights, kS2);
  const SpherePoint u = cosine_mean_argmin(anchors, weights);
  const SpherePoint start = random_in_cap(u, 0.05, rng);
  const SpherePoint refined = refine_argmin_golden(
      [&](const SpherePoint& y) { return evaluate(f, y, kS2); }, start, 0.1);
  // Value-comparison searches bottom out near sqrt(machine eps).
  CHECK(angle_between(refined, u) < 3e-8);
}

TEST_CASE("reference argmin works for both families") {
  std::mt19937_64 rng(43);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const std::vector<double> weights{1.0, 1.2, 0.9};

  const ConvexFunctional cosine(FunctionalKind::cosine_mean, anchors, weights, kS2);
  const SpherePoint u_cos = reference_argmin(cosine, kS2, GridSpec{0.02, 2});
  CHECK(angle_between(u_cos, cosine_mean_argmin(anchors, weights)) == 0.0);

  const ConvexFunctional tansin(FunctionalKind::tan_sin_sum, anchors, weights, kS2);
  const SpherePoint u_ts = reference_argmin(tansin, kS2, GridSpec{0.02, 2});
  // Independent check: no nearby point does better.
  const double fu = evaluate(tansin, u_ts, kS2);
  for (int i = 0; i < 400; ++i) {
    const SpherePoint y = random_in_cap(u_ts, 0.02, rng);
    CHECK(fu <= evaluate(tansin, y, kS2) + 1e-10);
  }
}

TEST_CASE("grid results are bit-stable across calls") {
  const SpherePoint p({0.3, -0.5, 0.81});
  const ConvexFunctional f(FunctionalKind::tan_sin_sum, {p}, {1.0}, kS2);
  const PointObjective objective = [&](const SpherePoint& y) {
    return evaluate(f, y, kS2);
  };
  const auto a = grid_argmin(objective, kS2, GridSpec{0.05, 1}, p, 0.8);
  const auto b = grid_argmin(objective, kS2, GridSpec{0.05, 1}, p, 0.8);
  CHECK(a.point.coords() == b.point.coords());
  CHECK(a.value == b.value);
}

TEST_CASE("grid oracle rejects unsupported dimensions") {
  const ModelSpace s3(3, 1.0);
  CHECK_THROWS_AS(grid_argmin([](const SpherePoint&) { return 0.0; }, s3,
                              GridSpec{}, SpherePoint({1.0, 0.0, 0.0, 0.0}), 1.0),
                  GeometryDomainError);
}

TEST_SUITE_END();
