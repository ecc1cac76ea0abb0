#pragma once

/** Independent ground truth at desk scale: deterministic grid minimization
 * on S^2, 1D golden-section search, a closed-form argmin for the cosine
 * family, and a derivative-free coordinate refinement.  None of this shares
 * code with the production inner solver. */

#include "geoprox/functionals.hpp"
#include "geoprox/geometry.hpp"

#include <functional>
#include <utility>

namespace geoprox {

using PointObjective = std::function<double(const SpherePoint&)>;

struct GridSpec {
  double spacing = 0.01;      // radians, initial lat-long spacing
  int refinement_rounds = 3;  // each round shrinks spacing by 10x
};

struct GridResult {
  SpherePoint point;
  double value;
  double final_spacing;
};

/// Deterministic latitude-longitude grid minimization over a cap (S^2 only).
/// Candidates where the objective throws are skipped.  Each refinement round
/// re-grids a window around the incumbent with 10x finer spacing; the window
/// is wide enough (10x previous spacing) to keep the true minimizer of any
/// moderately conditioned objective inside it.  The returned value is within
/// final_spacing times the objective's Lipschitz bound of the true minimum
/// (sum of the weights for the cosine family, sum of the weights times the
/// penalty-kernel slope over the cap for the tan-sin family).
GridResult grid_argmin(const PointObjective& objective, const ModelSpace& space,
                       const GridSpec& grid, const SpherePoint& cap_center,
                       double cap_radius);

/// Classic golden-section bracketing on [0, length]; returns the bracket
/// midpoint and its value once the bracket width is below tol.  Requires a
/// unimodal objective.
std::pair<double, double> geodesic_golden_section(
    const std::function<double(double)>& objective, double length, double tol);

/// Exact argmin of sum_i w_i (1 - cos d(y, p_i)) on the sphere: the
/// normalized weighted Euclidean mean of the anchors.
SpherePoint cosine_mean_argmin(const std::vector<SpherePoint>& anchors,
                               const std::vector<double>& weights);

/// Derivative-free polish: cyclic golden-section line searches along the
/// tangent basis directions with a shrinking trust window.  Used to refine a
/// grid incumbent to near machine precision independently of the production
/// descent solver.
SpherePoint refine_argmin_golden(const PointObjective& objective,
                                 const SpherePoint& start, double initial_window,
                                 int max_rounds = 80, double window_tol = 1e-11);

/// Reference minimizer of a functional: closed form for the cosine family,
/// grid + golden refinement otherwise (S^2 only for the latter).
SpherePoint reference_argmin(const ConvexFunctional& f, const ModelSpace& space,
                             const GridSpec& grid);

}  // namespace geoprox
