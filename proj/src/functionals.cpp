#include "geoprox/functionals.hpp"

#include "geoprox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace geoprox {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

double penalty(double t) {
  if (t < 0.0 || t >= kHalfPi) {
    throw GeometryDomainError("penalty kernel argument outside [0, pi/2)");
  }
  return std::tan(t) * std::sin(t);
}

FunctionalKind functional_kind_from_string(const std::string& name) {
  if (name == "constant") return FunctionalKind::constant;
  if (name == "cosine_mean") return FunctionalKind::cosine_mean;
  if (name == "tan_sin_sum") return FunctionalKind::tan_sin_sum;
  if (name == "max_cosine") return FunctionalKind::max_cosine;
  if (name == "custom_combination") return FunctionalKind::custom_combination;
  throw GeometryDomainError("unknown functional kind: " + name);
}

std::string to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::constant: return "constant";
    case FunctionalKind::cosine_mean: return "cosine_mean";
    case FunctionalKind::tan_sin_sum: return "tan_sin_sum";
    case FunctionalKind::max_cosine: return "max_cosine";
    case FunctionalKind::custom_combination: return "custom_combination";
  }
  return "unknown";
}

ConvexFunctional::ConvexFunctional(FunctionalKind kind,
                                   std::vector<SpherePoint> anchors,
                                   std::vector<double> weights,
                                   const ModelSpace& space)
    : kind_(kind), anchors_(std::move(anchors)), weights_(std::move(weights)) {
  if (anchors_.empty()) {
    throw GeometryDomainError("functional needs at least one anchor");
  }
  if (weights_.size() != anchors_.size()) {
    throw GeometryDomainError("anchor and weight counts differ");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw GeometryDomainError("functional weights must be strictly positive");
    }
  }
  for (const SpherePoint& a : anchors_) {
    if (a.ambient_dim() != space.dim + 1) {
      throw DimensionError("anchor dimension does not match model space");
    }
  }
  if (!check_admissible(anchors_, space)) {
    throw GeometryDomainError("anchor set is not admissible");
  }
  weight_sum_ = 0.0;
  for (double w : weights_) weight_sum_ += w;
}

bool ConvexFunctional::admissible_at(const SpherePoint& y) const {
  if (kind_ == FunctionalKind::constant) return true;
  for (const SpherePoint& a : anchors_) {
    if (!(y.dot(a) > 0.0)) return false;  // angle < pi/2 iff inner product > 0
  }
  return true;
}

double evaluate(const ConvexFunctional& f, const SpherePoint& y,
                const ModelSpace& space) {
  if (y.ambient_dim() != space.dim + 1) {
    throw DimensionError("evaluation point dimension does not match space");
  }
  if (f.kind() == FunctionalKind::constant) return 0.0;

  const auto& anchors = f.anchors();
  const auto& weights = f.weights();
  double value = 0.0;
  double max_term = 0.0;
  for (size_t i = 0; i < anchors.size(); ++i) {
    const double c = clamp_unit(y.dot(anchors[i]));  // cos of the angle
    if (!(c > 0.0)) {
      throw AdmissibilityError(
          "point is at angle >= pi/2 from anchor " + std::to_string(i),
          static_cast<int>(i));
    }
    switch (f.kind()) {
      case FunctionalKind::cosine_mean:
        value += weights[i] * (1.0 - c);
        break;
      case FunctionalKind::tan_sin_sum:
        value += weights[i] * penalty(std::acos(c));
        break;
      case FunctionalKind::max_cosine:
        max_term = std::max(max_term, weights[i] * (1.0 - c));
        break;
      case FunctionalKind::custom_combination:
        value += weights[i] * ((1.0 - c) + penalty(std::acos(c)));
        break;
      case FunctionalKind::constant:
        break;
    }
  }
  return f.kind() == FunctionalKind::max_cosine ? max_term : value;
}

std::vector<std::pair<double, double>> geodesic_restriction(
    const ConvexFunctional& f, const Geodesic& geodesic,
    const ModelSpace& space, int samples) {
  if (samples < 2) {
    throw GeometryDomainError("geodesic restriction needs at least 2 samples");
  }
  std::vector<std::pair<double, double>> values;
  values.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double t =
        geodesic.length() * static_cast<double>(i) / (samples - 1);
    values.emplace_back(t, evaluate(f, geodesic.point_at(t), space));
  }
  return values;
}

ConvexityReport certify_convexity_fn(
    const std::function<double(const SpherePoint&)>& fn,
    const SpherePoint& cap_center, double cap_radius, const ModelSpace& space,
    int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("convexity check needs trials >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);

  ConvexityReport report{true, -std::numeric_limits<double>::infinity(), trials};
  for (int t = 0; t < trials; ++t) {
    const SpherePoint a = random_in_cap(cap_center, cap_radius, rng);
    const SpherePoint b = random_in_cap(cap_center, cap_radius, rng);
    const double alpha = alpha_dist(rng);
    const SpherePoint mix = convex_combination(a, b, alpha, space);
    const double violation =
        fn(mix) - (alpha * fn(a) + (1.0 - alpha) * fn(b));
    report.worst_violation = std::max(report.worst_violation, violation);
  }
  report.passed = report.worst_violation <= kConvexityTol;
  return report;
}

std::pair<SpherePoint, double> admissible_cap(const ConvexFunctional& f) {
  Vector mean = Vector::Zero(f.anchors().front().ambient_dim());
  for (const SpherePoint& a : f.anchors()) mean += a.coords();
  const SpherePoint center(mean);
  double spread = 0.0;
  for (const SpherePoint& a : f.anchors()) {
    spread = std::max(spread, angle_between(center, a));
  }
  // Points in the cap stay strictly within pi/2 of every anchor and (for
  // radius <= pi/4) of each other.
  const double radius =
      0.98 * std::min(kHalfPi / 2.0, kHalfPi - spread - 1e-6);
  if (!(radius > 0.0)) {
    throw GeometryDomainError("anchor spread leaves no admissible cap");
  }
  return {center, radius};
}

ConvexityReport certify_convexity(const ConvexFunctional& f,
                                  const ModelSpace& space, int trials,
                                  unsigned seed) {
  const auto [center, radius] = admissible_cap(f);
  return certify_convexity_fn(
      [&](const SpherePoint& y) { return evaluate(f, y, space); }, center,
      radius, space, trials, seed);
}

}  // namespace geoprox
