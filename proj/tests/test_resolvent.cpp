#include "geoprox/resolvent.hpp"

#include "geoprox/oracle.hpp"
#include "geoprox/sampling.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace geoprox;

namespace {
constexpr double kPi = std::numbers::pi;
const ModelSpace kS2(2, 1.0);
const InnerSolverConfig kSolver{};

ConvexFunctional constant_functional() {
  return ConvexFunctional(FunctionalKind::constant,
                          {SpherePoint({1.0, 0.0, 0.0})}, {1.0}, kS2);
}
}  // namespace

TEST_SUITE_BEGIN("resolvent");

TEST_CASE("constant functional: resolvent is the identity") {
  const ConvexFunctional f = constant_functional();
  std::mt19937_64 rng(51);
  for (int i = 0; i < 30; ++i) {
    const SpherePoint x = random_unit_point(3, rng);
    for (const double lambda : {0.1, 1.0, 10.0}) {
      const auto r = resolve(f, lambda, x, kS2, kSolver);
      CHECK(angle_between(r.point, x) < 1e-9);
      CHECK(r.c_value == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("anchored base point is a fixed point") {
  const SpherePoint p({0.1, 0.7, std::sqrt(1.0 - 0.01 - 0.49)});
  const ConvexFunctional f(FunctionalKind::cosine_mean, {p}, {1.0}, kS2);
  for (const double lambda : {0.5, 2.0}) {
    const auto r = resolve(f, lambda, p, kS2, kSolver);
    CHECK(angle_between(r.point, p) < 1e-9);
  }
}

TEST_CASE("single-anchor resolvent agrees with the 1D golden oracle") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 10; ++i) {
    const SpherePoint x = random_unit_point(3, rng);
    const double s = 0.3 + 0.06 * i;  // anchor distances 0.3 .. 0.84
    const SpherePoint p = geodesic_step(x, random_tangent(x, rng), s);
    const double lambda = i % 2 == 0 ? 1.0 : 0.5;
    const ConvexFunctional f(FunctionalKind::cosine_mean, {p}, {1.0}, kS2);

    const auto r = resolve(f, lambda, x, kS2, kSolver);
    const auto [t_star, value] = geodesic_golden_section(
        [&](double t) {
          return lambda * (1.0 - std::cos(s - t)) + std::tan(t) * std::sin(t);
        },
        s, 1e-10);
    (void)value;
    CHECK(std::abs(angle_between(r.point, x) - t_star) < 1e-6);
    CHECK(angle_between(r.point, geodesic_point(x, p, t_star, kS2)) < 1e-6);
  }
}

TEST_CASE("resolvent results satisfy their invariants") {
  std::mt19937_64 rng(57);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors,
                           {1.0, 1.0, 1.0}, kS2);
  const auto [center, radius] = admissible_cap(f);
  for (int i = 0; i < 25; ++i) {
    const SpherePoint x = random_in_cap(center, radius, rng);
    const auto r = resolve(f, 1.0, x, kS2, kSolver);
    // c_value is the cosine of the realized angle, strictly positive.
    CHECK(std::abs(r.c_value - std::cos(angle_between(r.point, x))) < 1e-12);
    CHECK(r.c_value > 0.0);
    CHECK(angle_between(r.point, x) < kPi / 2.0);
    // Minimization never increases the functional value.
    CHECK(evaluate(f, r.point, kS2) <= evaluate(f, x, kS2));
    CHECK(r.objective <= 1.0 * evaluate(f, x, kS2) + 1e-15);
  }
}

TEST_CASE("repeated calls are bit-identical") {
  std::mt19937_64 rng(59);
  const auto anchors = random_admissible_tuple(3, 2, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::tan_sin_sum, anchors, {1.0, 2.0}, kS2);
  const SpherePoint x = random_in_cap(anchors.front(), 0.4, rng);
  const auto r1 = resolve(f, 0.7, x, kS2, kSolver);
  const auto r2 = resolve(f, 0.7, x, kS2, kSolver);
  CHECK(r1.point.coords() == r2.point.coords());
  CHECK(r1.objective == r2.objective);
}

TEST_CASE("returned points are first-order stationary") {
  std::mt19937_64 rng(61);
  const double fd = 1e-5;
  for (int i = 0; i < 8; ++i) {
    const auto anchors = random_admissible_tuple(3, 2, 0.3, rng);
    const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, {1.0, 0.8}, kS2);
    const SpherePoint x = random_in_cap(anchors.front(), 0.4, rng);
    const double lambda = i % 2 == 0 ? 1.0 : 0.25;
    const auto r = resolve(f, lambda, x, kS2, kSolver);
    const Eigen::MatrixXd basis = tangent_basis(r.point);
    for (int j = 0; j < basis.cols(); ++j) {
      for (const double sign : {1.0, -1.0}) {
        const Vector dir = sign * basis.col(j);
        const double fwd = resolvent_objective(
            f, lambda, x, geodesic_step(r.point, dir, fd), kS2);
        const double bwd = resolvent_objective(
            f, lambda, x, geodesic_step(r.point, dir, -fd), kS2);
        CHECK((fwd - bwd) / (2.0 * fd) >= -10.0 * kSolver.tol);
      }
    }
  }
}

TEST_CASE("two-resolvent inequalities hold with equality at D = 0") {
  std::mt19937_64 rng(67);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors,
                           {1.0, 1.0, 1.0}, kS2);
  const SpherePoint x = random_in_cap(anchors.front(), 0.3, rng);
  const auto rx = resolve(f, 1.0, x, kS2, kSolver);

  const auto first = check_first_inequality(f, 1.0, 1.0, x, x, rx, rx, kS2);
  CHECK(first.lhs == 0.0);
  CHECK(first.rhs == 0.0);
  const auto symmetric = check_resolvent_inequality(f, 1.0, 1.0, x, x, rx, rx, kS2);
  CHECK(symmetric.slack == 0.0);
  CHECK(symmetric.passed);
}

TEST_CASE("two-resolvent inequalities hold on random instances") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
  for (const FunctionalKind kind :
       {FunctionalKind::cosine_mean, FunctionalKind::tan_sin_sum}) {
    const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
    const ConvexFunctional f(kind, anchors, {1.0, 1.4, 0.7}, kS2);
    const auto [center, radius] = admissible_cap(f);
    for (int i = 0; i < 25; ++i) {
      const SpherePoint x = random_in_cap(center, radius, rng);
      const SpherePoint y = random_in_cap(center, radius, rng);
      const double lambda = std::exp(log_lambda(rng));
      const double mu = std::exp(log_lambda(rng));
      const auto rx = resolve(f, lambda, x, kS2, kSolver);
      const auto ry = resolve(f, mu, y, kS2, kSolver);

      CHECK(check_first_inequality(f, lambda, mu, x, y, rx, ry, kS2).passed);
      CHECK(check_resolvent_inequality(f, lambda, mu, x, y, rx, ry, kS2).passed);
      // The first inequality also holds with the roles swapped.
      CHECK(check_first_inequality(f, mu, lambda, y, x, ry, rx, kS2).passed);
    }
  }
}

TEST_CASE("equal-parameter two-point inequality on the tan-sin family") {
  // With lambda = mu = 1 the symmetric inequality is exactly the
  // single-resolvent two-point bound.
  std::mt19937_64 rng(69);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional f(FunctionalKind::tan_sin_sum, anchors,
                           {1.0, 0.9, 1.2}, kS2);
  const auto [center, radius] = admissible_cap(f);
  for (int i = 0; i < 20; ++i) {
    const SpherePoint x = random_in_cap(center, radius, rng);
    const SpherePoint y = random_in_cap(center, radius, rng);
    const auto rx = resolve(f, 1.0, x, kS2, kSolver);
    const auto ry = resolve(f, 1.0, y, kS2, kSolver);
    CHECK(check_resolvent_inequality(f, 1.0, 1.0, x, y, rx, ry, kS2).passed);
  }
}

TEST_CASE("minimizer inequalities and the contraction consequence") {
  std::mt19937_64 rng(73);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const std::vector<double> weights{1.0, 2.0, 1.5};
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, weights, kS2);
  const SpherePoint u = cosine_mean_argmin(anchors, weights);

  {  // equality at x = u
    const auto ru = resolve(f, 1.0, u, kS2, kSolver);
    const auto fejer = check_fejer_inequality(f, 1.0, u, ru, u, kS2);
    CHECK(fejer.passed);
    CHECK(std::abs(fejer.cosine_bound.slack) < 1e-9);
  }
  for (int i = 0; i < 25; ++i) {
    const SpherePoint x = random_in_cap(u, 0.5, rng);
    const double lambda = i % 2 == 0 ? 1.0 : 3.0;
    const auto rx = resolve(f, lambda, x, kS2, kSolver);
    const auto fejer = check_fejer_inequality(f, lambda, x, rx, u, kS2);
    CHECK(fejer.value_bound.passed);
    CHECK(fejer.cosine_bound.passed);

    // min{cos d(x+, x), cos d(u, x+)} >= cos d(u, x): the step and the
    // distance to any minimizer both stay inside the previous radius.
    const double lhs = std::min(rx.c_value, std::cos(angle_between(u, rx.point)));
    CHECK(lhs >= std::cos(angle_between(u, x)) - 1e-6);
  }
}

TEST_CASE("solver errors carry the best iterate") {
  std::mt19937_64 rng(79);
  const auto anchors = random_admissible_tuple(3, 3, 0.25, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors,
                           {1.0, 1.0, 1.0}, kS2);
  const SpherePoint x = random_in_cap(anchors.front(), 0.4, rng);
  InnerSolverConfig cfg;
  cfg.tol = 1e-300;  // unreachable step tolerance
  cfg.max_iter = 2;
  try {
    resolve(f, 1.0, x, kS2, cfg);
    FAIL("expected a solver error");
  } catch (const SolverError& err) {
    CHECK(err.iterations == 2);
    CHECK(err.residual > 0.0);
    CHECK(err.best.ambient_dim() == 3);
  }
}

TEST_CASE("nested golden section agrees with geodesic descent on S^2") {
  std::mt19937_64 rng(83);
  const auto anchors = random_admissible_tuple(3, 1, 0.01, rng);
  const ConvexFunctional f(FunctionalKind::cosine_mean, anchors, {1.0}, kS2);
  const SpherePoint x = random_in_cap(anchors.front(), 0.7, rng);
  InnerSolverConfig golden_cfg;
  golden_cfg.method = InnerMethod::nested_golden_section;
  const auto descent = resolve(f, 1.0, x, kS2, kSolver);
  const auto golden = resolve(f, 1.0, x, kS2, golden_cfg);
  CHECK(angle_between(descent.point, golden.point) < 1e-5);

  const auto multi = random_admissible_tuple(3, 3, 0.3, rng);
  const ConvexFunctional g(FunctionalKind::tan_sin_sum, multi, {1.0, 0.8, 1.2},
                           kS2);
  const SpherePoint x2 = random_in_cap(multi.front(), 0.4, rng);
  const auto descent2 = resolve(g, 0.7, x2, kS2, kSolver);
  const auto golden2 = resolve(g, 0.7, x2, kS2, golden_cfg);
  CHECK(angle_between(descent2.point, golden2.point) < 1e-5);

  const ModelSpace s3(3, 1.0);
  const ConvexFunctional f3(FunctionalKind::cosine_mean,
                            {SpherePoint({1.0, 0.0, 0.0, 0.0})}, {1.0}, s3);
  CHECK_THROWS_AS(
      resolve(f3, 1.0, SpherePoint({1.0, 0.0, 0.0, 0.0}), s3, golden_cfg),
      GeometryDomainError);
}

TEST_CASE("geodesic descent works above dimension two") {
  const ModelSpace s3(3, 1.0);
  std::mt19937_64 rng(89);
  const SpherePoint x = random_unit_point(4, rng);
  const double s = 0.7;
  const SpherePoint p = geodesic_step(x, random_tangent(x, rng), s);
  const ConvexFunctional f(FunctionalKind::cosine_mean, {p}, {1.0}, s3);
  const auto r = resolve(f, 1.0, x, s3, kSolver);
  const auto [t_star, value] = geodesic_golden_section(
      [&](double t) {
        return (1.0 - std::cos(s - t)) + std::tan(t) * std::sin(t);
      },
      s, 1e-10);
  (void)value;
  CHECK(std::abs(angle_between(r.point, x) - t_star) < 1e-6);
}

TEST_CASE("solves and inequality checks are invariant under rescaling") {
  // The rescaled scheme runs through the same angles, so resolvents and the
  // inequality reports must not depend on kappa at all.
  std::mt19937_64 rng(97);
  const ModelSpace quarter(2, 4.0);
  const auto anchors = random_admissible_tuple(3, 3, 0.3, rng);
  const std::vector<double> weights{1.0, 1.4, 0.7};
  const ConvexFunctional f_unit(FunctionalKind::tan_sin_sum, anchors, weights, kS2);
  const ConvexFunctional f_quarter(FunctionalKind::tan_sin_sum, anchors, weights,
                                   quarter);
  const auto [center, radius] = admissible_cap(f_unit);
  const SpherePoint x = random_in_cap(center, radius, rng);
  const SpherePoint y = random_in_cap(center, radius, rng);

  const auto rx1 = resolve(f_unit, 0.8, x, kS2, kSolver);
  const auto rx4 = resolve(f_quarter, 0.8, x, quarter, kSolver);
  const auto ry1 = resolve(f_unit, 2.0, y, kS2, kSolver);
  const auto ry4 = resolve(f_quarter, 2.0, y, quarter, kSolver);
  CHECK(rx1.point.coords() == rx4.point.coords());
  CHECK(rx1.c_value == rx4.c_value);

  const auto report1 = check_resolvent_inequality(f_unit, 0.8, 2.0, x, y, rx1,
                                                  ry1, kS2);
  const auto report4 = check_resolvent_inequality(f_quarter, 0.8, 2.0, x, y,
                                                  rx4, ry4, quarter);
  CHECK(report1.slack == report4.slack);
  CHECK(report1.passed);
}

TEST_CASE("argument validation") {
  const ConvexFunctional f = constant_functional();
  const SpherePoint x({0.0, 0.0, 1.0});
  CHECK_THROWS_AS(resolve(f, 0.0, x, kS2, kSolver), GeometryDomainError);
  InnerSolverConfig bad;
  bad.fd_step = 0.5;
  CHECK_THROWS_AS(resolve(f, 1.0, x, kS2, bad), GeometryDomainError);

  const SpherePoint p({1.0, 0.0, 0.0});
  const ConvexFunctional g(FunctionalKind::cosine_mean, {p}, {1.0}, kS2);
  const SpherePoint far({-1.0, 0.0, 0.0});
  CHECK_THROWS_AS(resolve(g, 1.0, far, kS2, kSolver), GeometryDomainError);
}

TEST_SUITE_END();
