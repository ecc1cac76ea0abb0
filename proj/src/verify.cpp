#include "geoprox/verify.hpp"

#include "geoprox/diagnostics.hpp"
#include "geoprox/functionals.hpp"
#include "geoprox/geometry.hpp"
#include "geoprox/oracle.hpp"
#include "geoprox/ppa.hpp"
#include "geoprox/resolvent.hpp"
#include "geoprox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

struct SlackTracker {
  double worst = std::numeric_limits<double>::infinity();
  void update(double slack) { worst = std::min(worst, slack); }
};

PropertyResult make_result(std::string name, int trials, double worst,
                           double tolerance) {
  return {std::move(name), trials, worst, tolerance, worst >= -tolerance};
}

/// Random functional of the given kind with `count` anchors in a cap.
ConvexFunctional random_functional(FunctionalKind kind, int ambient_dim,
                                   int count, const ModelSpace& space,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight_dist(0.5, 2.0);
  std::vector<SpherePoint> anchors =
      random_admissible_tuple(ambient_dim, count, 0.35, rng);
  std::vector<double> weights;
  for (int i = 0; i < count; ++i) weights.push_back(weight_dist(rng));
  return ConvexFunctional(kind, std::move(anchors), std::move(weights), space);
}

void lemma_suite_for_dim(int dim, int trials, std::mt19937_64& rng,
                         std::vector<PropertyResult>& out) {
  const ModelSpace space(dim, 1.0);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);
  SlackTracker sine, midpoint, cosine;
  for (int t = 0; t < trials; ++t) {
    const auto triple =
        random_admissible_tuple(dim + 1, 3, 0.99 * kPi / 4.0, rng);
    const auto report = comparison_inequality_oracle(
        triple[0], triple[1], triple[2], alpha_dist(rng), space);
    sine.update(report.sine_slack);
    midpoint.update(report.midpoint_slack);
    cosine.update(report.cosine_convexity_slack);
  }
  const std::string suffix = "_s" + std::to_string(dim);
  out.push_back(make_result("sine_comparison" + suffix, trials, sine.worst,
                            kComparisonSlackTol));
  out.push_back(make_result("midpoint_comparison" + suffix, trials,
                            midpoint.worst, kComparisonSlackTol));
  out.push_back(make_result("cosine_convexity" + suffix, trials, cosine.worst,
                            kComparisonSlackTol));
}

}  // namespace

std::vector<PropertyResult> verify_geometry(int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("verify needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> results;
  const ModelSpace s2(2, 1.0);

  {  // metric symmetry (exact) and triangle inequality
    SlackTracker symmetry, triangle;
    for (int t = 0; t < trials; ++t) {
      const auto triple = random_admissible_tuple(3, 3, 0.75, rng);
      const double d01 = distance(triple[0], triple[1], s2);
      const double d10 = distance(triple[1], triple[0], s2);
      symmetry.update(-std::abs(d01 - d10));
      const double d12 = distance(triple[1], triple[2], s2);
      const double d02 = distance(triple[0], triple[2], s2);
      triangle.update(d01 + d12 - d02);
    }
    results.push_back(make_result("metric_symmetry", trials, symmetry.worst, 0.0));
    results.push_back(
        make_result("triangle_inequality", trials, triangle.worst, 1e-10));
  }

  {  // d(c(s), c(t)) = |s - t| along random geodesics
    SlackTracker tracker;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int t = 0; t < trials; ++t) {
      const SpherePoint x = random_unit_point(3, rng);
      const SpherePoint y = random_in_cap(x, 1.4, rng);
      if (angle_between(x, y) < 1e-6) continue;
      const Geodesic geo(x, y, s2);
      const double s1 = unit(rng) * geo.length();
      const double s2_param = unit(rng) * geo.length();
      const double measured =
          distance(geo.point_at(s1), geo.point_at(s2_param), s2);
      tracker.update(-std::abs(measured - std::abs(s1 - s2_param)));
    }
    results.push_back(
        make_result("geodesic_consistency", trials, tracker.worst, 1e-9));
  }

  lemma_suite_for_dim(2, trials, rng, results);
  lemma_suite_for_dim(4, trials, rng, results);

  {  // metric rescaling d_kappa = d_1 / sqrt(kappa), same arccos
    SlackTracker tracker;
    for (int t = 0; t < trials; ++t) {
      const auto pair = random_admissible_tuple(3, 2, 1.0, rng);
      for (double kappa : {4.0, 2.0, 0.25}) {
        const ModelSpace rescaled(2, kappa);
        const double expected =
            distance(pair[0], pair[1], s2) / std::sqrt(kappa);
        const double got = distance(pair[0], pair[1], rescaled);
        tracker.update(-std::abs(got - expected));
      }
    }
    results.push_back(
        make_result("rescaling_covariance", trials, tracker.worst, 0.0));
  }

  {  // |tan t sin t - t^2| <= t^4 on [0, 0.5]
    SlackTracker tracker;
    std::uniform_real_distribution<double> t_dist(0.0, 0.5);
    for (int t = 0; t < trials; ++t) {
      const double v = t_dist(rng);
      tracker.update(v * v * v * v - std::abs(penalty(v) - v * v));
    }
    tracker.update(0.0625 - std::abs(penalty(0.5) - 0.25));
    results.push_back(
        make_result("penalty_maclaurin", trials, tracker.worst, 0.0));
  }
  return results;
}

std::vector<PropertyResult> verify_functionals(int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("verify needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> results;
  const ModelSpace s2(2, 1.0);

  {  // penalty kernel strictly increasing and midpoint-convex
    SlackTracker increasing, convex;
    std::uniform_real_distribution<double> t_dist(0.0, kHalfPi - 1e-3);
    for (int t = 0; t < trials; ++t) {
      double a = t_dist(rng), b = t_dist(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      increasing.update(penalty(b) - penalty(a));
      convex.update(0.5 * (penalty(a) + penalty(b)) - penalty(0.5 * (a + b)));
    }
    results.push_back(make_result("penalty_increasing", trials,
                                  increasing.worst, 0.0));
    results.push_back(
        make_result("penalty_convex_midpoint", trials, convex.worst, 1e-12));
  }

  const int sets = 10;
  const int per_set = std::max(1, trials / sets);
  for (const FunctionalKind kind :
       {FunctionalKind::cosine_mean, FunctionalKind::tan_sin_sum,
        FunctionalKind::max_cosine, FunctionalKind::custom_combination}) {
    SlackTracker tracker;
    for (int s = 0; s < sets; ++s) {
      const ConvexFunctional f = random_functional(kind, 3, 3, s2, rng);
      const auto report =
          certify_convexity(f, s2, per_set, static_cast<unsigned>(rng()));
      tracker.update(-report.worst_violation);
    }
    results.push_back(make_result(to_string(kind) + "_convexity",
                                  sets * per_set, tracker.worst, kConvexityTol));
  }

  {  // |f(y1) - f(y2)| <= (sum w) angle(y1, y2) for the cosine family
    SlackTracker tracker;
    for (int t = 0; t < trials; ++t) {
      const ConvexFunctional f =
          random_functional(FunctionalKind::cosine_mean, 3, 3, s2, rng);
      const auto [center, radius] = admissible_cap(f);
      const SpherePoint y1 = random_in_cap(center, radius, rng);
      const SpherePoint y2 = random_in_cap(center, radius, rng);
      const double diff = std::abs(evaluate(f, y1, s2) - evaluate(f, y2, s2));
      tracker.update(f.weight_sum() * angle_between(y1, y2) - diff);
    }
    results.push_back(
        make_result("cosine_mean_lipschitz", trials, tracker.worst, 1e-12));
  }
  return results;
}

std::vector<PropertyResult> verify_resolvent(int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("verify needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> results;
  const ModelSpace s2(2, 1.0);
  const InnerSolverConfig solver{};

  {  // identical inputs give identical outputs
    SlackTracker tracker;
    const int n = std::min(trials, 20);
    for (int t = 0; t < n; ++t) {
      const ConvexFunctional f =
          random_functional(FunctionalKind::cosine_mean, 3, 2, s2, rng);
      const SpherePoint x = random_in_cap(f.anchors().front(), 0.6, rng);
      const auto r1 = resolve(f, 1.0, x, s2, solver);
      const auto r2 = resolve(f, 1.0, x, s2, solver);
      tracker.update(-angle_between(r1.point, r2.point));
    }
    results.push_back(make_result("determinism", n, tracker.worst, 1e-9));
  }

  {  // constant functional: the resolvent is the identity
    SlackTracker tracker;
    const int n = std::min(trials, 100);
    const ModelSpace space = s2;
    const ConvexFunctional constant(
        FunctionalKind::constant, {SpherePoint({1.0, 0.0, 0.0})}, {1.0}, space);
    for (int t = 0; t < n; ++t) {
      const SpherePoint x = random_unit_point(3, rng);
      for (double lambda : {0.1, 1.0, 10.0}) {
        const auto r = resolve(constant, lambda, x, space, solver);
        tracker.update(-angle_between(r.point, x));
      }
    }
    results.push_back(make_result("constant_identity", 3 * n, tracker.worst, 1e-9));
  }

  {  // fixed point at the argmin, and near-fixed points are near-minimizers
    SlackTracker fixed_point, converse, repulsion, monotone;
    const int n = std::min(trials, 50);
    for (int t = 0; t < n; ++t) {
      const ConvexFunctional f =
          random_functional(FunctionalKind::cosine_mean, 3, 3, s2, rng);
      const SpherePoint u = cosine_mean_argmin(f.anchors(), f.weights());
      const double f_min = evaluate(f, u, s2);
      const auto at_argmin = resolve(f, 1.0, u, s2, solver);
      fixed_point.update(-angle_between(at_argmin.point, u));
      // The resolvent at the argmin must not move, so the converse premise
      // holds there; random base points exercise the vacuous branch.
      const SpherePoint x = random_in_cap(u, 0.5, rng);
      const auto r = resolve(f, 1.0, x, s2, solver);
      if (angle_between(r.point, x) <= 1e-9) {
        converse.update(1e-6 - (evaluate(f, x, s2) - f_min));
      } else {
        converse.update(std::numeric_limits<double>::infinity());
      }
      if (angle_between(at_argmin.point, u) <= 1e-9) {
        converse.update(1e-6 - (evaluate(f, u, s2) - f_min));
      }
      repulsion.update(at_argmin.c_value);
      repulsion.update(r.c_value);
      monotone.update(evaluate(f, x, s2) - evaluate(f, r.point, s2));
    }
    results.push_back(make_result("fixed_point_at_argmin", n, fixed_point.worst, 1e-7));
    results.push_back(make_result("fixed_point_converse", n, converse.worst, 0.0));
    results.push_back(make_result("boundary_repulsion", 2 * n, repulsion.worst, 0.0));
    results.push_back(make_result("objective_monotone", n, monotone.worst, 0.0));
  }

  {  // the four resolvent inequalities over both functional families
    SlackTracker ineq_a, ineq_b, fejer_value, fejer_cosine;
    const int per_family = std::max(1, trials / 2);
    int instances = 0;
    std::uniform_real_distribution<double> log_lambda(std::log(0.1), std::log(10.0));
    for (const FunctionalKind kind :
         {FunctionalKind::cosine_mean, FunctionalKind::tan_sin_sum}) {
      const int sets = std::max(1, std::min(20, per_family / 10));
      const int per_set = std::max(1, per_family / sets);
      for (int s = 0; s < sets; ++s) {
        const ConvexFunctional f = random_functional(kind, 3, 3, s2, rng);
        const SpherePoint u = reference_argmin(f, s2, GridSpec{0.02, 2});
        const auto [center, radius] = admissible_cap(f);
        for (int t = 0; t < per_set; ++t) {
          const SpherePoint x = random_in_cap(center, radius, rng);
          const SpherePoint y = random_in_cap(center, radius, rng);
          const double lambda = std::exp(log_lambda(rng));
          const double mu = std::exp(log_lambda(rng));
          const auto rx = resolve(f, lambda, x, s2, solver);
          const auto ry = resolve(f, mu, y, s2, solver);
          ineq_a.update(
              check_first_inequality(f, lambda, mu, x, y, rx, ry, s2).slack);
          ineq_b.update(
              check_resolvent_inequality(f, lambda, mu, x, y, rx, ry, s2).slack);
          const auto fejer = check_fejer_inequality(f, lambda, x, rx, u, s2);
          fejer_value.update(fejer.value_bound.slack);
          fejer_cosine.update(fejer.cosine_bound.slack);
          ++instances;
        }
      }
    }
    results.push_back(make_result("resolvent_inequality_first", instances,
                                  ineq_a.worst, kResolventSlackTol));
    results.push_back(make_result("resolvent_inequality_symmetric", instances,
                                  ineq_b.worst, kResolventSlackTol));
    results.push_back(make_result("minimizer_value_bound", instances,
                                  fejer_value.worst, kResolventSlackTol));
    results.push_back(make_result("minimizer_cosine_bound", instances,
                                  fejer_cosine.worst, kResolventSlackTol));
  }

  {  // first-order stationarity of the returned point
    SlackTracker tracker;
    const int n = std::min(trials, 25);
    const double fd = 1e-5;
    for (int t = 0; t < n; ++t) {
      const ConvexFunctional f =
          random_functional(FunctionalKind::cosine_mean, 3, 2, s2, rng);
      const SpherePoint x = random_in_cap(f.anchors().front(), 0.5, rng);
      const double lambda = t % 2 == 0 ? 1.0 : 0.25;
      const auto r = resolve(f, lambda, x, s2, solver);
      const Eigen::MatrixXd basis = tangent_basis(r.point);
      for (int j = 0; j < basis.cols(); ++j) {
        for (double s : {1.0, -1.0}) {
          const Vector dir = s * basis.col(j);
          const double fwd = resolvent_objective(
              f, lambda, x, geodesic_step(r.point, dir, fd), s2);
          const double bwd = resolvent_objective(
              f, lambda, x, geodesic_step(r.point, dir, -fd), s2);
          tracker.update((fwd - bwd) / (2.0 * fd));
        }
      }
    }
    results.push_back(
        make_result("first_order_stationarity", n, tracker.worst, 10.0 * solver.tol));
  }
  return results;
}

std::vector<PropertyResult> verify_ppa(int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("verify needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> results;
  const ModelSpace s2(2, 1.0);
  const InnerSolverConfig solver{};

  SlackTracker objective_monotone, fejer, rate, schedule_inv, limit_fixed,
      existence;
  const int runs = std::clamp(trials / 100, 2, 8);
  for (int run = 0; run < runs; ++run) {
    const ConvexFunctional f =
        random_functional(FunctionalKind::cosine_mean, 3, 3, s2, rng);
    const SpherePoint u = cosine_mean_argmin(f.anchors(), f.weights());
    const SpherePoint x1 = random_in_cap(u, 0.45, rng);

    RunConfig cfg;
    cfg.max_iterations = 120;
    // Movements below ~1e-10 are inside the inner solver's own resolution,
    // so the fixed-point-at-the-limit property needs 10 x tol above that.
    cfg.stop_step_tol = 1e-11;
    cfg.reference_minimizer = u;
    const PpaTrace trace =
        run_ppa(f, x1, StepSchedule::constant(1.0), s2, cfg, solver);

    const double f_u = evaluate(f, u, s2);
    for (int n = 0; n < trace.steps(); ++n) {
      objective_monotone.update(trace.f_values[n] - trace.f_values[n + 1]);
      fejer.update(angle_between(u, trace.iterates[n]) -
                   angle_between(u, trace.iterates[n + 1]));
      rate.update(rate_bound(trace, u, n + 1) -
                  (trace.f_values[n + 1] - f_u));
      rate.update(trace.rate_bounds[n] - (trace.f_values[n + 1] - f_u));
    }

    RunConfig cfg_power = cfg;
    const PpaTrace trace_power =
        run_ppa(f, x1, StepSchedule::power(0.5), s2, cfg_power, solver);
    const SpherePoint final_const = trace.iterates.back();
    const SpherePoint final_power = trace_power.iterates.back();
    schedule_inv.update(2e-4 - angle_between(final_const, final_power));
    schedule_inv.update(2e-4 - angle_between(final_const, u));

    const auto moved = resolve(f, 1.0, final_const, s2, solver);
    limit_fixed.update(10.0 * cfg.stop_step_tol -
                       angle_between(moved.point, final_const));

    const auto cert = existence_certificate(trace);
    existence.update(cert.verdict ? (kHalfPi - cert.sup_step) : -1.0);
  }

  results.push_back(make_result("objective_monotonicity", runs,
                                objective_monotone.worst, kMonotoneTol));
  results.push_back(make_result("fejer_monotonicity", runs, fejer.worst,
                                kMonotoneTol));
  results.push_back(make_result("rate_certification", runs, rate.worst,
                                kMonotoneTol));
  results.push_back(
      make_result("schedule_invariance", runs, schedule_inv.worst, 0.0));
  results.push_back(
      make_result("limit_fixed_point", runs, limit_fixed.worst, 0.0));
  results.push_back(make_result("existence_positive", runs, existence.worst, 0.0));

  {  // adversarial oscillating trace must fail the certificate
    PpaTrace synthetic;
    synthetic.space = s2;
    const SpherePoint a({1.0, 0.0, 0.0});
    const SpherePoint b({0.0, 1.0, 0.0});
    for (int i = 0; i < 24; ++i) {
      synthetic.iterates.push_back(i % 2 == 0 ? a : b);
      synthetic.f_values.push_back(0.0);
      if (i > 0) {
        synthetic.lambdas.push_back(1.0);
        synthetic.step_distances.push_back(angle_between(a, b));
      }
    }
    synthetic.sup_step = angle_between(a, b);
    const auto cert = existence_certificate(synthetic);
    results.push_back(make_result("existence_adversarial", 1,
                                  cert.verdict ? -1.0 : 1.0, 0.0));
  }
  return results;
}

std::vector<PropertyResult> verify_diagnostics(int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("verify needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::vector<PropertyResult> results;
  const ModelSpace s2(2, 1.0);
  const InnerSolverConfig solver{};

  const ConvexFunctional f =
      random_functional(FunctionalKind::cosine_mean, 3, 3, s2, rng);
  const SpherePoint u = cosine_mean_argmin(f.anchors(), f.weights());
  RunConfig cfg;
  cfg.max_iterations = 120;
  cfg.stop_step_tol = 1e-12;
  cfg.reference_minimizer = u;
  const PpaTrace trace =
      run_ppa(f, random_in_cap(u, 0.4, rng), StepSchedule::constant(1.0), s2,
              cfg, solver);
  const GFunction gf = g_from_trace(trace);

  {  // g maps admissible points into [0, 1]
    SlackTracker tracker;
    for (int t = 0; t < trials; ++t) {
      const SpherePoint y = random_in_cap(u, 0.4, rng);
      const double g = g_evaluate(gf, y, s2);
      tracker.update(std::min(g, 1.0 - g));
    }
    results.push_back(make_result("g_range", trials, tracker.worst, 0.0));
  }

  {
    const auto report = g_concavity_check(gf, s2, trials, seed + 1);
    results.push_back(make_result("g_concavity", trials,
                                  report.worst_concavity_slack, kGSlackTol));
    results.push_back(make_result("g_lipschitz", trials,
                                  report.worst_lipschitz_slack, kGSlackTol));
  }

  const double spacing = 0.02;
  {  // near-max grid vertices form a single cluster
    const std::vector<SpherePoint> grid = icosphere_vertices(spacing);
    double best = -std::numeric_limits<double>::infinity();
    for (const SpherePoint& p : grid) {
      best = std::max(best, g_evaluate(gf, p, s2));
    }
    std::vector<const SpherePoint*> near_max;
    for (const SpherePoint& p : grid) {
      if (g_evaluate(gf, p, s2) >= best - 1e-9) near_max.push_back(&p);
    }
    double diameter = 0.0;
    for (size_t i = 0; i < near_max.size(); ++i) {
      for (size_t j = i + 1; j < near_max.size(); ++j) {
        diameter = std::max(diameter, angle_between(*near_max[i], *near_max[j]));
      }
    }
    results.push_back(make_result("maximizer_cluster",
                                  static_cast<int>(grid.size()),
                                  2.0 * spacing - diameter, 0.0));
  }

  {  // asymptotic center, g maximizer, and the oracle argmin coincide
    const auto center = asymptotic_center(trace.iterates, s2, spacing);
    const auto gmax = g_maximize(gf, s2, spacing);
    double worst = std::numeric_limits<double>::infinity();
    worst = std::min(worst, 3.0 * spacing - angle_between(center.center, u));
    worst = std::min(worst, 3.0 * spacing - angle_between(gmax.point, u));
    worst =
        std::min(worst, 3.0 * spacing - angle_between(center.center, gmax.point));
    results.push_back(make_result("center_consistency", 3, worst, 0.0));
  }

  {  // cos(limsup t_n) = liminf cos(t_n) on random bounded lists
    SlackTracker tracker;
    std::uniform_real_distribution<double> v_dist(0.0, kHalfPi);
    for (int t = 0; t < std::max(1, trials / 10); ++t) {
      std::vector<double> values;
      const int len = 16 + static_cast<int>(rng() % 48);
      for (int i = 0; i < len; ++i) values.push_back(v_dist(rng));
      const auto cos_report =
          monotone_limit_check(values, MapKind::nonincreasing);
      tracker.update(-std::abs(cos_report.map_of_limsup - cos_report.limit_of_map));
      const auto id_report =
          monotone_limit_check(values, MapKind::nondecreasing);
      tracker.update(-std::abs(id_report.map_of_limsup - id_report.limit_of_map));
    }
    results.push_back(make_result("monotone_limit_maps",
                                  std::max(1, trials / 10), tracker.worst,
                                  kGSlackTol));
  }
  return results;
}

std::vector<PropertyResult> verify_suite(const std::string& suite, int trials,
                                         unsigned seed) {
  if (suite == "geometry") return verify_geometry(trials, seed);
  if (suite == "functionals") return verify_functionals(trials, seed);
  if (suite == "resolvent") return verify_resolvent(trials, seed);
  if (suite == "ppa") return verify_ppa(trials, seed);
  if (suite == "diagnostics") return verify_diagnostics(trials, seed);
  if (suite == "all") {
    std::vector<PropertyResult> all;
    for (const char* name :
         {"geometry", "functionals", "resolvent", "ppa", "diagnostics"}) {
      auto part = verify_suite(name, trials, seed);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw GeometryDomainError("unknown verification suite: " + suite);
}

bool all_passed(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const PropertyResult& r) { return r.passed; });
}

}  // namespace geoprox
