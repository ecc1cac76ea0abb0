#include "geoprox/diagnostics.hpp"

#include "geoprox/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

/// Tail-window minimum of the Cesaro averages A_n(y); cos values come from
/// inner products directly.
double g_eval_impl(const GFunction& gf, const SpherePoint& y) {
  const int horizon = gf.horizon;
  const int window = tail_window(horizon);
  double beta_sum = 0.0;
  double weighted_sum = 0.0;
  double result = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= horizon; ++n) {
    beta_sum += gf.betas[n - 1];
    weighted_sum += gf.betas[n - 1] * clamp_unit(y.dot(gf.sequence[n - 1]));
    if (n > horizon - window) {
      result = std::min(result, weighted_sum / beta_sum);
    }
  }
  return result;
}

/// Deterministic local refinement: a fine cap grid around the incumbent,
/// then finite-difference Armijo ascent/descent on the given objective.
template <typename Objective>
SpherePoint refine_local(const Objective& objective, const SpherePoint& start,
                         double spacing, bool maximize) {
  const double sign = maximize ? -1.0 : 1.0;  // descend on sign * objective
  SpherePoint best = start;
  double best_value = sign * objective(start);

  // Mini-grid pass at a tenth of the spacing.
  const Eigen::MatrixXd basis0 = tangent_basis(start);
  const double fine = spacing / 10.0;
  const int rings = 20;
  for (int j = 1; j <= rings; ++j) {
    const double theta = j * fine;
    const int count =
        std::max(1, static_cast<int>(std::ceil(2.0 * kPi * std::sin(theta) / fine)));
    for (int i = 0; i < count; ++i) {
      const double psi = 2.0 * kPi * i / count;
      const Vector dir =
          std::cos(psi) * basis0.col(0) + std::sin(psi) * basis0.col(1);
      const SpherePoint p = geodesic_step(start, dir, theta);
      const double v = sign * objective(p);
      if (v < best_value) {
        best_value = v;
        best = p;
      }
    }
  }

  // One Armijo pass from the mini-grid incumbent.
  const double h = std::max(1e-6, fine * 1e-3);
  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::MatrixXd basis = tangent_basis(best);
    Vector direction = Vector::Zero(best.ambient_dim());
    for (int j = 0; j < basis.cols(); ++j) {
      const Vector dir = basis.col(j);
      const double fwd = sign * objective(geodesic_step(best, dir, h));
      const double bwd = sign * objective(geodesic_step(best, dir, -h));
      direction -= ((fwd - bwd) / (2.0 * h)) * dir;
    }
    const double grad_norm = direction.norm();
    if (grad_norm < 1e-14) break;
    direction /= grad_norm;
    double step = fine;
    bool accepted = false;
    while (step > fine * 1e-4) {
      const SpherePoint trial = geodesic_step(best, direction, step);
      const double v = sign * objective(trial);
      if (v < best_value - 1e-4 * step * grad_norm) {  // strict: ties stall
        best = trial;
        best_value = v;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  return best;
}

/// Cap center and radius inside which every point is admissible to the whole
/// sequence (angle < pi/2 to every z_k) and pairwise admissible.
std::pair<SpherePoint, double> sequence_cap(const std::vector<SpherePoint>& seq) {
  Vector mean = Vector::Zero(seq.front().ambient_dim());
  for (const SpherePoint& z : seq) mean += z.coords();
  if (mean.norm() < 1e-9) {
    throw GeometryDomainError("sequence has no well-defined mean direction");
  }
  const SpherePoint center(mean);
  double spread = 0.0;
  for (const SpherePoint& z : seq) {
    spread = std::max(spread, angle_between(center, z));
  }
  const double radius = 0.98 * std::min(kPi / 4.0, kPi / 2.0 - spread - 1e-6);
  if (!(radius > 0.0)) {
    throw GeometryDomainError("sequence spread leaves no admissible cap");
  }
  return {center, radius};
}

}  // namespace

GFunction::GFunction(std::vector<SpherePoint> sequence_in,
                     std::vector<double> betas_in)
    : sequence(std::move(sequence_in)), betas(std::move(betas_in)) {
  if (sequence.empty() || sequence.size() != betas.size()) {
    throw GeometryDomainError("g-function needs matching sequence and weights");
  }
  for (double b : betas) {
    if (!(b > 0.0)) {
      throw GeometryDomainError("g-function weights must be positive");
    }
  }
  horizon = static_cast<int>(sequence.size());
}

GFunction g_from_trace(const PpaTrace& trace) {
  if (trace.steps() < 1) {
    throw GeometryDomainError("trace has no steps to weight");
  }
  std::vector<SpherePoint> sequence;
  std::vector<double> betas;
  sequence.reserve(trace.steps());
  betas.reserve(trace.steps());
  for (int k = 0; k < trace.steps(); ++k) {
    sequence.push_back(trace.iterates[k + 1]);  // z_k = x_{k+1}
    const double c = std::cos(trace.space.to_angle(trace.step_distances[k]));
    betas.push_back(trace.lambdas[k] * c * c / (1.0 + c * c));
  }
  return GFunction(std::move(sequence), std::move(betas));
}

GFunction g_uniform(std::vector<SpherePoint> sequence) {
  std::vector<double> betas(sequence.size(), 1.0);
  return GFunction(std::move(sequence), std::move(betas));
}

double g_evaluate(const GFunction& gf, const SpherePoint& y,
                  const ModelSpace& space) {
  if (y.ambient_dim() != space.dim + 1 ||
      y.ambient_dim() != gf.sequence.front().ambient_dim()) {
    throw DimensionError("g-function evaluation dimension mismatch");
  }
  return g_eval_impl(gf, y);
}

std::vector<SpherePoint> icosphere_vertices(double spacing) {
  if (!(spacing > 0.0)) throw GeometryDomainError("grid spacing must be positive");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double base_edge = 1.1071487177940904;  // icosahedron edge angle
  // Projection stretches face-interior lattice cells by up to ~15%, so the
  // subdivision frequency carries a safety factor to keep gaps <= spacing.
  const int freq =
      std::max(1, static_cast<int>(std::ceil(1.25 * base_edge / spacing)));

  std::vector<Eigen::Vector3d> corners = {
      {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& c : corners) c.normalize();
  static constexpr int faces[20][3] = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  // Barycentric lattice on every face, projected to the sphere.  Shared
  // edges and corners are emitted more than once; the few percent of
  // duplicates are harmless for extremum scans and keep the order fixed.
  std::vector<SpherePoint> vertices;
  vertices.reserve(static_cast<size_t>(10) * freq * freq + 40 * freq);
  for (const auto& face : faces) {
    const Eigen::Vector3d& a = corners[face[0]];
    const Eigen::Vector3d& b = corners[face[1]];
    const Eigen::Vector3d& c = corners[face[2]];
    for (int i = 0; i <= freq; ++i) {
      for (int j = 0; j <= freq - i; ++j) {
        const int k = freq - i - j;
        const Eigen::Vector3d v = a * i + b * j + c * k;
        Vector coords(3);
        coords << v.x(), v.y(), v.z();
        vertices.emplace_back(std::move(coords));
      }
    }
  }
  return vertices;
}

GMaximizeResult g_maximize(const GFunction& gf, const ModelSpace& space,
                           double grid_spacing) {
  if (!(grid_spacing > 0.0) || grid_spacing > 0.05) {
    throw GeometryDomainError("g_maximize needs grid_spacing in (0, 0.05]");
  }
  auto value = [&](const SpherePoint& y) { return g_eval_impl(gf, y); };

  if (space.dim == 2) {
    const std::vector<SpherePoint> grid = icosphere_vertices(grid_spacing);
    SpherePoint best = grid.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (const SpherePoint& p : grid) {
      const double v = value(p);
      if (v > best_value) {
        best_value = v;
        best = p;
      }
    }
    const SpherePoint refined = refine_local(value, best, grid_spacing, true);
    return {refined, value(refined), true};
  }

  // Higher dimensions: deterministic multistart descent, not grid-certified.
  std::mt19937_64 rng(20240915u);
  SpherePoint best = random_unit_point(space.dim + 1, rng);
  double best_value = value(best);
  for (int s = 0; s < 8; ++s) {
    const SpherePoint start = random_unit_point(space.dim + 1, rng);
    const SpherePoint refined = refine_local(value, start, 0.05, true);
    const double v = value(refined);
    if (v > best_value) {
      best_value = v;
      best = refined;
    }
  }
  return {best, best_value, false};
}

GConcavityReport g_concavity_check(const GFunction& gf, const ModelSpace& space,
                                   int trials, unsigned seed) {
  if (trials < 1) throw GeometryDomainError("concavity check needs trials >= 1");
  const auto [center, radius] = sequence_cap(gf.sequence);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> alpha_dist(0.0, 1.0);

  GConcavityReport report{true, std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity(), trials};
  for (int t = 0; t < trials; ++t) {
    const SpherePoint y1 = random_in_cap(center, radius, rng);
    const SpherePoint y2 = random_in_cap(center, radius, rng);
    const double alpha = alpha_dist(rng);
    const SpherePoint mix = convex_combination(y1, y2, alpha, space);
    const double g1 = g_eval_impl(gf, y1);
    const double g2 = g_eval_impl(gf, y2);
    const double gmix = g_eval_impl(gf, mix);

    const double concavity_slack = gmix - (alpha * g1 + (1.0 - alpha) * g2);
    const double lipschitz_slack = angle_between(y1, y2) - std::abs(g1 - g2);
    report.worst_concavity_slack =
        std::min(report.worst_concavity_slack, concavity_slack);
    report.worst_lipschitz_slack =
        std::min(report.worst_lipschitz_slack, lipschitz_slack);
  }
  report.passed = report.worst_concavity_slack >= -kGSlackTol &&
                  report.worst_lipschitz_slack >= -kGSlackTol;
  return report;
}

AsymptoticCenterResult asymptotic_center(std::span<const SpherePoint> sequence,
                                         const ModelSpace& space,
                                         double grid_spacing) {
  if (sequence.size() < 2) {
    throw GeometryDomainError("asymptotic center needs >= 2 points");
  }
  if (space.dim != 2) {
    throw GeometryDomainError("asymptotic_center grid mode supports S^2 only");
  }
  if (!(grid_spacing > 0.0) || grid_spacing > 0.05) {
    throw GeometryDomainError("asymptotic_center needs grid_spacing in (0, 0.05]");
  }
  const int count = static_cast<int>(sequence.size());
  const int window = tail_window(count);
  const int tail_start = count - window;
  auto tail_max = [&](const SpherePoint& y) {
    double worst = 0.0;
    for (int i = tail_start; i < count; ++i) {
      worst = std::max(worst, angle_between(y, sequence[i]));
    }
    return worst;
  };

  const std::vector<SpherePoint> grid = icosphere_vertices(grid_spacing);
  SpherePoint best = grid.front();
  double best_value = std::numeric_limits<double>::infinity();
  for (const SpherePoint& p : grid) {
    const double v = tail_max(p);
    if (v < best_value) {
      best_value = v;
      best = p;
    }
  }
  const SpherePoint refined = refine_local(tail_max, best, grid_spacing, false);
  return {refined, tail_max(refined), grid_spacing};
}

MonotoneLimitReport monotone_limit_check(std::span<const double> values,
                                         MapKind map_kind) {
  if (values.empty()) {
    throw GeometryDomainError("monotone limit check needs values");
  }
  const int count = static_cast<int>(values.size());
  const int window = tail_window(count);
  double tail_max = -std::numeric_limits<double>::infinity();
  double mapped_max = -std::numeric_limits<double>::infinity();
  double mapped_min = std::numeric_limits<double>::infinity();
  for (int i = count - window; i < count; ++i) {
    const double mapped =
        map_kind == MapKind::nondecreasing ? values[i] : std::cos(values[i]);
    tail_max = std::max(tail_max, values[i]);
    mapped_max = std::max(mapped_max, mapped);
    mapped_min = std::min(mapped_min, mapped);
  }
  MonotoneLimitReport report{};
  if (map_kind == MapKind::nondecreasing) {
    report.map_of_limsup = tail_max;          // identity map
    report.limit_of_map = mapped_max;         // limsup of identity
  } else {
    report.map_of_limsup = std::cos(tail_max);
    report.limit_of_map = mapped_min;         // liminf of cos
  }
  report.passed =
      std::abs(report.map_of_limsup - report.limit_of_map) <= kGSlackTol;
  return report;
}

}  // namespace geoprox
