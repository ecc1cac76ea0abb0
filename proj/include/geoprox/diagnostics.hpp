#pragma once

/** Sequence diagnostics: the Cesaro-weighted cosine function g of a sequence
 * (concave, nonexpansive, unique maximizer), asymptotic centers, and the
 * monotone-map limit identity used to validate the finite-tail surrogates.
 * All liminf/limsup are replaced by min/max over the trailing quarter of the
 * horizon (minimum window 8). */

#include "geoprox/geometry.hpp"
#include "geoprox/ppa.hpp"

#include <span>
#include <vector>

namespace geoprox {

/// The weighted sequence data behind g(y) = liminf over n of
/// (1 / sum_{l<=n} beta_l) sum_{k<=n} beta_k cos angle(y, z_k).
struct GFunction {
  std::vector<SpherePoint> sequence;  // z_k
  std::vector<double> betas;          // beta_k > 0
  int horizon;                        // number of leading entries used

  GFunction(std::vector<SpherePoint> sequence, std::vector<double> betas);
};

/// G-function of a PPA trace: z_k = x_{k+1} with the proof weights
/// beta_k = lambda_k C_k^2 / (1 + C_k^2), C_k = cos of the k-th step angle.
GFunction g_from_trace(const PpaTrace& trace);

/// Uniform-weight variant over an arbitrary sequence.
GFunction g_uniform(std::vector<SpherePoint> sequence);

double g_evaluate(const GFunction& gf, const SpherePoint& y,
                  const ModelSpace& space);

struct GMaximizeResult {
  SpherePoint point;
  double value;
  bool grid_certified;  // true when found by the exhaustive S^2 grid
};

/// Maximizes g: icosphere grid plus a local refinement pass on S^2; descent
/// from multiple deterministic starts (not grid-certified) in higher
/// dimensions.  grid_spacing must be <= 0.05 rad.
GMaximizeResult g_maximize(const GFunction& gf, const ModelSpace& space,
                           double grid_spacing);

struct GConcavityReport {
  bool passed;
  double worst_concavity_slack;   // min over trials of g(mix) - mix of g
  double worst_lipschitz_slack;   // min over trials of d - |g(y1) - g(y2)|
  int trials;
};

inline constexpr double kGSlackTol = 1e-9;

/// Randomized check that g is concave and 1-Lipschitz on the admissible cap
/// around the sequence tail.
GConcavityReport g_concavity_check(const GFunction& gf, const ModelSpace& space,
                                   int trials, unsigned seed);

struct AsymptoticCenterResult {
  SpherePoint center;
  double radius;        // achieved tail-max angle at the center
  double grid_spacing;
};

/// Minimizes the tail-window max angle over an S^2 grid with refinement.
/// radius < pi/2 certifies spherical boundedness of the sequence.
AsymptoticCenterResult asymptotic_center(std::span<const SpherePoint> sequence,
                                         const ModelSpace& space,
                                         double grid_spacing);

enum class MapKind { nondecreasing, nonincreasing };

struct MonotoneLimitReport {
  double map_of_limsup;   // f(limsup t_n), tail surrogate
  double limit_of_map;    // limsup f(t_n) or liminf f(t_n), tail surrogate
  bool passed;
};

/// Tail-window check of the monotone-map limit identity with the built-in
/// maps: identity (nondecreasing) and cos (nonincreasing on [0, pi]).
MonotoneLimitReport monotone_limit_check(std::span<const double> values,
                                         MapKind map_kind);

/// Deterministic icosphere vertex set with edge length <= spacing (S^2).
std::vector<SpherePoint> icosphere_vertices(double spacing);

}  // namespace geoprox
