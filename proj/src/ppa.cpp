#include "geoprox/ppa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

double rate_bound_from(double sup_step_angle, double cos_u_x1, double lambda_sum) {
  const double cos_l = std::cos(sup_step_angle);
  const double k_const = 1.0 / (cos_l * cos_l) + 1.0;
  return (k_const * kPi / 2.0) * (1.0 - cos_u_x1) / lambda_sum;
}

}  // namespace

StepSchedule StepSchedule::constant(double lambda) {
  if (!(lambda > 0.0)) {
    throw GeometryDomainError("constant schedule needs lambda > 0");
  }
  return {Kind::constant, lambda, {}, false};
}

StepSchedule StepSchedule::harmonic() { return {Kind::harmonic, 1.0, {}, false}; }

StepSchedule StepSchedule::power(double exponent) {
  if (!(exponent > 0.0) || exponent > 1.0) {
    throw GeometryDomainError(
        "power schedule exponent must be in (0, 1] so the step sum diverges");
  }
  return {Kind::power, exponent, {}, false};
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values,
                                         bool assert_divergent) {
  if (values.empty()) {
    throw GeometryDomainError("explicit schedule needs at least one value");
  }
  for (double v : values) {
    if (!(v > 0.0)) {
      throw GeometryDomainError("schedule values must be positive");
    }
  }
  if (!assert_divergent) {
    throw GeometryDomainError(
        "explicit schedules must assert divergence of the step sum");
  }
  return {Kind::explicit_list, 0.0, std::move(values), true};
}

double StepSchedule::lambda(int n) const {
  if (n < 1) throw GeometryDomainError("schedule index is 1-based");
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::harmonic:
      return 1.0 / static_cast<double>(n);
    case Kind::power:
      return std::pow(static_cast<double>(n), -value);
    case Kind::explicit_list:
      if (static_cast<size_t>(n) > list.size()) {
        throw GeometryDomainError(
            "explicit schedule exhausted before the run finished");
      }
      return list[n - 1];
  }
  throw GeometryDomainError("invalid schedule kind");
}

PpaTrace run_ppa(const ConvexFunctional& f, const SpherePoint& x1,
                 const StepSchedule& schedule, const ModelSpace& space,
                 const RunConfig& run_cfg, const InnerSolverConfig& inner_cfg) {
  if (run_cfg.max_iterations < 1) {
    throw GeometryDomainError("run needs max_iterations >= 1");
  }
  if (!(run_cfg.stop_step_tol > 0.0)) {
    throw GeometryDomainError("stop_step_tol must be positive");
  }
  if (run_cfg.stop_gap_tol && !(*run_cfg.stop_gap_tol > 0.0)) {
    throw GeometryDomainError("stop_gap_tol must be positive");
  }
  if (!f.admissible_at(x1)) {
    throw GeometryDomainError("initial point is not admissible for f");
  }

  PpaTrace trace;
  trace.space = space;
  trace.reference = run_cfg.reference_minimizer;
  trace.iterates.push_back(x1);
  trace.f_values.push_back(evaluate(f, x1, space));
  if (trace.reference) {
    trace.reference_value = evaluate(f, *trace.reference, space);
  }

  double sup_step_angle = 0.0;
  double lambda_sum = 0.0;
  trace.stop_reason = "max_iterations";

  for (int n = 1; n <= run_cfg.max_iterations; ++n) {
    const double lambda_n = schedule.lambda(n);
    const SpherePoint& x_n = trace.iterates.back();

    std::optional<ResolventResult> step;
    try {
      step = resolve(f, lambda_n, x_n, space, inner_cfg);
    } catch (const SolverError& err) {
      trace.sup_step = space.from_angle(sup_step_angle);
      throw PpaError("inner solver failed at iteration " + std::to_string(n) +
                         ": " + err.what(),
                     std::move(trace));
    }

    const double step_angle = angle_between(step->point, x_n);
    sup_step_angle = std::max(sup_step_angle, step_angle);
    lambda_sum += lambda_n;

    trace.lambdas.push_back(lambda_n);
    trace.step_distances.push_back(space.from_angle(step_angle));
    trace.f_values.push_back(evaluate(f, step->point, space));
    if (trace.reference) {
      const double angle_next = angle_between(*trace.reference, step->point);
      const double angle_cur = angle_between(*trace.reference, x_n);
      trace.fejer_flags.push_back(angle_next <= angle_cur + kMonotoneTol);
      const double cos_u_x1 = clamp_unit(trace.reference->dot(trace.iterates.front()));
      trace.rate_bounds.push_back(
          rate_bound_from(sup_step_angle, cos_u_x1, lambda_sum));
    }
    trace.iterates.push_back(step->point);

    if (space.from_angle(step_angle) < run_cfg.stop_step_tol) {
      trace.stop_reason = "step_tol";
      break;
    }
    if (run_cfg.stop_gap_tol && trace.reference &&
        trace.f_values.back() - trace.reference_value < *run_cfg.stop_gap_tol) {
      trace.stop_reason = "gap_tol";
      break;
    }
  }
  trace.sup_step = space.from_angle(sup_step_angle);
  return trace;
}

double rate_bound(const PpaTrace& trace, const SpherePoint& u, int n) {
  if (trace.iterates.empty() || trace.steps() == 0) {
    throw GeometryDomainError("rate_bound needs a trace with at least one step");
  }
  if (n < 1 || n > trace.steps()) {
    throw GeometryDomainError("rate_bound index outside the trace");
  }
  double lambda_sum = 0.0;
  for (int k = 0; k < n; ++k) lambda_sum += trace.lambdas[k];
  const double cos_u_x1 = clamp_unit(u.dot(trace.iterates.front()));
  return rate_bound_from(trace.space.to_angle(trace.sup_step), cos_u_x1,
                         lambda_sum);
}

PpaTrace iterated_resolvent_run(const ConvexFunctional& f, const SpherePoint& x,
                                int n, const ModelSpace& space,
                                const RunConfig& run_cfg,
                                const InnerSolverConfig& inner_cfg) {
  RunConfig cfg = run_cfg;
  cfg.max_iterations = n;
  return run_ppa(f, x, StepSchedule::constant(1.0), space, cfg, inner_cfg);
}

int tail_window(int horizon) {
  if (horizon < 1) throw GeometryDomainError("tail window needs horizon >= 1");
  const int quarter = (horizon + 3) / 4;
  return std::min(horizon, std::max(quarter, 8));
}

ExistenceReport existence_certificate(const PpaTrace& trace) {
  const int count = static_cast<int>(trace.iterates.size());
  if (count < 2) {
    throw GeometryDomainError("existence certificate needs >= 2 iterates");
  }
  const int window = tail_window(count);
  const int tail_start = count - window;

  auto tail_max_angle = [&](const SpherePoint& y) {
    double worst = 0.0;
    for (int i = tail_start; i < count; ++i) {
      worst = std::max(worst, angle_between(y, trace.iterates[i]));
    }
    return worst;
  };

  // Candidates: the trace points themselves, the normalized tail mean, and
  // (on S^2) a coarse cap grid around the tail mean.
  Vector mean = Vector::Zero(trace.iterates.front().ambient_dim());
  for (int i = tail_start; i < count; ++i) mean += trace.iterates[i].coords();
  std::vector<SpherePoint> candidates = trace.iterates;
  if (mean.norm() > 1e-9) candidates.emplace_back(mean);

  if (trace.space.dim == 2 && mean.norm() > 1e-9) {
    const SpherePoint center(mean);
    const Eigen::MatrixXd basis = tangent_basis(center);
    const double spacing = 0.05;
    const int rings = static_cast<int>(std::ceil((kPi / 2.0) / spacing));
    for (int j = 1; j <= rings; ++j) {
      const double theta = j * spacing;
      const int ring_count = std::max(
          1, static_cast<int>(std::ceil(2.0 * kPi * std::sin(theta) / spacing)));
      for (int i = 0; i < ring_count; ++i) {
        const double psi = 2.0 * kPi * i / ring_count;
        const Vector dir =
            std::cos(psi) * basis.col(0) + std::sin(psi) * basis.col(1);
        candidates.push_back(geodesic_step(center, dir, theta));
      }
    }
  }

  double estimate = std::numeric_limits<double>::infinity();
  for (const SpherePoint& y : candidates) {
    estimate = std::min(estimate, tail_max_angle(y));
  }

  ExistenceReport report{};
  report.spherically_bounded_estimate = estimate;
  report.sup_step = trace.space.to_angle(trace.sup_step);
  report.verdict = estimate < kPi / 2.0 - kExistenceMargin &&
                   report.sup_step < kPi / 2.0 - kExistenceMargin;
  return report;
}

}  // namespace geoprox
