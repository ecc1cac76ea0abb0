#include "geoprox/functionals.hpp"

#include "geoprox/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace geoprox;

namespace {
constexpr double kPi = std::numbers::pi;
const ModelSpace kS2(2, 1.0);

ConvexFunctional single_anchor(FunctionalKind kind, const SpherePoint& p,
                               double w = 1.0) {
  return ConvexFunctional(kind, {p}, {w}, kS2);
}
}  // namespace

TEST_SUITE_BEGIN("functionals");

TEST_CASE("penalty kernel values and domain") {
  CHECK(penalty(0.0) == 0.0);
  CHECK(penalty(kPi / 4.0) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(penalty(0.1) == doctest::Approx(0.010016753122429663).epsilon(1e-12));
  CHECK(std::abs(penalty(0.1) - 0.01) <= 1e-4);  // within the t^4 band of t^2
  CHECK_THROWS_AS(penalty(-1e-9), GeometryDomainError);
  CHECK_THROWS_AS(penalty(kPi / 2.0), GeometryDomainError);
}

TEST_CASE("penalty kernel is strictly increasing and convex") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> t_dist(0.0, kPi / 2.0 - 1e-3);
  for (int i = 0; i < 2000; ++i) {
    double a = t_dist(rng), b = t_dist(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(penalty(a) < penalty(b));
    CHECK(penalty(0.5 * (a + b)) <= 0.5 * (penalty(a) + penalty(b)) + 1e-12);
  }
}

TEST_CASE("construction validates anchors and weights") {
  const SpherePoint a({1.0, 0.0, 0.0});
  const SpherePoint b({0.0, 1.0, 0.0});
  CHECK_THROWS_AS(ConvexFunctional(FunctionalKind::cosine_mean, {}, {}, kS2),
                  GeometryDomainError);
  CHECK_THROWS_AS(
      ConvexFunctional(FunctionalKind::cosine_mean, {a}, {1.0, 2.0}, kS2),
      GeometryDomainError);
  CHECK_THROWS_AS(ConvexFunctional(FunctionalKind::cosine_mean, {a}, {0.0}, kS2),
                  GeometryDomainError);
  // a and b sit exactly pi/2 apart, violating strict admissibility.
  CHECK_THROWS_AS(
      ConvexFunctional(FunctionalKind::cosine_mean, {a, b}, {1.0, 1.0}, kS2),
      GeometryDomainError);
}

TEST_CASE("cosine mean evaluation") {
  const SpherePoint p({0.2, -0.4, 0.8});
  const ConvexFunctional f = single_anchor(FunctionalKind::cosine_mean, p);
  CHECK(evaluate(f, p, kS2) <= 1e-15);  // 1 - <p,p> up to rounding

  std::mt19937_64 rng(2);
  const SpherePoint y = geodesic_step(p, random_tangent(p, rng), kPi / 3.0);
  CHECK(evaluate(f, y, kS2) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tan-sin sum evaluation against a scalar computation") {
  const SpherePoint y({1.0, 0.0, 0.0});
  const SpherePoint a1({std::cos(0.4), std::sin(0.4), 0.0});
  const SpherePoint a2({std::cos(0.7), -std::sin(0.7), 0.0});
  const ConvexFunctional f(FunctionalKind::tan_sin_sum, {a1, a2}, {1.0, 2.0}, kS2);
  const double expected =
      std::tan(0.4) * std::sin(0.4) + 2.0 * std::tan(0.7) * std::sin(0.7);
  CHECK(evaluate(f, y, kS2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("admissibility violations carry the anchor index") {
  const SpherePoint a1({1.0, 0.0, 0.0});
  const SpherePoint a2({std::cos(0.7), std::sin(0.7), 0.0});
  const ConvexFunctional f(FunctionalKind::cosine_mean, {a1, a2}, {1.0, 1.0}, kS2);
  const SpherePoint y({std::cos(0.9), -std::sin(0.9), 0.0});
  // y is 0.9 from a1 but 1.6 > pi/2 from a2.
  try {
    evaluate(f, y, kS2);
    FAIL("expected an admissibility error");
  } catch (const AdmissibilityError& err) {
    CHECK(err.anchor_index == 1);
  }
  const ConvexFunctional constant(FunctionalKind::constant, {a1}, {1.0}, kS2);
  CHECK(evaluate(constant, y, kS2) == 0.0);  // constants ignore anchors
}

TEST_CASE("geodesic restriction samples endpoints and stays convex") {
  const SpherePoint p({0.3, 0.3, 0.9});  // strictly within pi/2 of the arc
  const ConvexFunctional constant = single_anchor(FunctionalKind::constant, p);
  const SpherePoint x({1.0, 0.0, 0.0});
  const SpherePoint y({0.8, 0.6, 0.0});
  const Geodesic geo(x, y, kS2);

  const auto flat = geodesic_restriction(constant, geo, kS2, 5);
  REQUIRE(flat.size() == 5);
  for (const auto& [t, v] : flat) CHECK(v == 0.0);

  const auto two = geodesic_restriction(constant, geo, kS2, 2);
  REQUIRE(two.size() == 2);
  CHECK(two.front().first == 0.0);
  CHECK(two.back().first == doctest::Approx(geo.length()));

  const ConvexFunctional f = single_anchor(FunctionalKind::cosine_mean, p);
  const auto samples = geodesic_restriction(f, geo, kS2, 3);
  CHECK(samples[1].second <=
        0.5 * (samples[0].second + samples[2].second) + 1e-12);

  CHECK_THROWS_AS(geodesic_restriction(f, geo, kS2, 1), GeometryDomainError);
}

TEST_CASE("convexity certificates separate convex from concave inputs") {
  std::mt19937_64 rng(31);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors,
                           {1.0, 0.5, 2.0}, kS2);
  const auto convex_report = certify_convexity(f, kS2, 2000, 99);
  CHECK(convex_report.passed);

  const ConvexFunctional constant(FunctionalKind::constant, {anchors.front()},
                                  {1.0}, kS2);
  const auto const_report = certify_convexity(constant, kS2, 200, 99);
  CHECK(const_report.passed);
  CHECK(const_report.worst_violation <= 0.0);

  // Sign-flipped cosine cost: concave, so the certificate must fail.
  const SpherePoint p = anchors.front();
  const auto concave_report = certify_convexity_fn(
      [&](const SpherePoint& y) { return -(1.0 - y.dot(p)); }, p, 0.7, kS2,
      2000, 99);
  CHECK_FALSE(concave_report.passed);
  CHECK(concave_report.worst_violation > 1e-6);
}

TEST_CASE("all declared families certify convex") {
  std::mt19937_64 rng(37);
  for (const FunctionalKind kind :
       {FunctionalKind::cosine_mean, FunctionalKind::tan_sin_sum,
        FunctionalKind::max_cosine, FunctionalKind::custom_combination}) {
    const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
    const ConvexFunctional f(kind, anchors, {1.0, 1.5, 0.7}, kS2);
    const auto report =
        certify_convexity(f, kS2, 1500, static_cast<unsigned>(rng()));
    INFO("kind = ", to_string(kind));
    CHECK(report.passed);
  }
}

TEST_CASE("cosine mean is Lipschitz with the weight sum as modulus") {
  std::mt19937_64 rng(41);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors,
                           {0.6, 1.1, 1.8}, kS2);
  const auto [center, radius] = admissible_cap(f);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint y1 = random_in_cap(center, radius, rng);
    const SpherePoint y2 = random_in_cap(center, radius, rng);
    CHECK(std::abs(evaluate(f, y1, kS2) - evaluate(f, y2, kS2)) <=
          f.weight_sum() * angle_between(y1, y2) + 1e-12);
  }
}

TEST_CASE("evaluation sees angles, not rescaled distances") {
  // The same anchor data defines the same function under any curvature
  // rescaling; only the metric returned by distance() changes.
  std::mt19937_64 rng(47);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const std::vector<double> weights{1.0, 0.6, 1.4};
  const ModelSpace quarter(2, 4.0);
  for (const FunctionalKind kind :
       {FunctionalKind::cosine_mean, FunctionalKind::tan_sin_sum,
        FunctionalKind::max_cosine, FunctionalKind::custom_combination}) {
    const ConvexFunctional f_unit(kind, anchors, weights, kS2);
    const ConvexFunctional f_quarter(kind, anchors, weights, quarter);
    for (int i = 0; i < 50; ++i) {
      const SpherePoint y = random_in_cap(anchors.front(), 0.4, rng);
      CHECK(evaluate(f_unit, y, kS2) == evaluate(f_quarter, y, quarter));
    }
  }
}

TEST_CASE("functional kinds round-trip through names") {
  for (const FunctionalKind kind :
       {FunctionalKind::constant, FunctionalKind::cosine_mean,
        FunctionalKind::tan_sin_sum, FunctionalKind::max_cosine,
        FunctionalKind::custom_combination}) {
    CHECK(functional_kind_from_string(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(functional_kind_from_string("nope"), GeometryDomainError);
}

TEST_SUITE_END();
