#pragma once

/** The proximal point iteration x_{n+1} = R_{lambda_n f} x_n, with step-size
 * schedules, stopping rules, per-iteration certificates (objective and Fejer
 * monotonicity, rate bounds), and a finite-horizon existence certificate. */

#include "geoprox/functionals.hpp"
#include "geoprox/geometry.hpp"
#include "geoprox/resolvent.hpp"

#include <optional>
#include <string>
#include <vector>

namespace geoprox {

struct StepSchedule {
  enum class Kind { constant, harmonic, power, explicit_list };

  Kind kind = Kind::constant;
  double value = 1.0;          // constant lambda, or exponent p in (0, 1]
  std::vector<double> list;    // explicit_list values
  bool assert_divergent = false;

  static StepSchedule constant(double lambda);
  static StepSchedule harmonic();
  static StepSchedule power(double exponent);
  static StepSchedule explicit_list(std::vector<double> values,
                                    bool assert_divergent);

  /// lambda_n for 1-based n.  Throws if an explicit list is exhausted.
  double lambda(int n) const;
};

struct RunConfig {
  int max_iterations = 100;
  double stop_step_tol = 1e-9;              // halt when d(x_{n+1}, x_n) < tol
  std::optional<double> stop_gap_tol;       // halt when f-gap vs reference < tol
  std::optional<SpherePoint> reference_minimizer;
  unsigned seed = 0;                         // recorded for reproducibility
};

/// Per-iteration record of a PPA run.  Distances are in the space's metric;
/// the certificate quantities (rate bounds, Fejer flags, sup-step constant)
/// are evaluated in the unit-sphere angle metric sqrt(kappa) * d.
struct PpaTrace {
  ModelSpace space{2, 1.0};
  std::vector<SpherePoint> iterates;      // x_1 .. x_N
  std::vector<double> lambdas;            // lambda_1 .. lambda_{N-1}
  std::vector<double> f_values;           // f(x_1) .. f(x_N)
  std::vector<double> step_distances;     // d(x_{n+1}, x_n), N-1 entries
  double sup_step = 0.0;                  // max of step_distances
  std::vector<double> rate_bounds;        // per step, empty without reference
  std::vector<bool> fejer_flags;          // per step, empty without reference
  std::optional<SpherePoint> reference;
  double reference_value = 0.0;           // f at the reference, if present
  std::string stop_reason;                // step_tol | gap_tol | max_iterations

  int steps() const { return static_cast<int>(step_distances.size()); }
};

/// Thrown when the inner solver fails mid-run; carries the partial trace.
class PpaError : public std::runtime_error {
 public:
  PpaError(const std::string& what, PpaTrace partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  PpaTrace partial;
};

inline constexpr double kMonotoneTol = 1e-8;

PpaTrace run_ppa(const ConvexFunctional& f, const SpherePoint& x1,
                 const StepSchedule& schedule, const ModelSpace& space,
                 const RunConfig& run_cfg, const InnerSolverConfig& inner_cfg);

/// Certified bound on f(x_{n+1}) - f(u) after n steps: with l the realized
/// sup step (angle), K = 1/cos^2(l) + 1 and the bound is
/// (K pi / 2) (1 - cos angle(u, x_1)) / sum_{k<=n} lambda_k.
double rate_bound(const PpaTrace& trace, const SpherePoint& u, int n);

/// Constant-schedule (lambda = 1) run: n applications of the resolvent.
PpaTrace iterated_resolvent_run(const ConvexFunctional& f, const SpherePoint& x,
                                int n, const ModelSpace& space,
                                const RunConfig& run_cfg,
                                const InnerSolverConfig& inner_cfg);

struct ExistenceReport {
  double spherically_bounded_estimate;  // surrogate of inf_y limsup angle(y, x_n)
  double sup_step;                      // max step angle
  bool verdict;
};

inline constexpr double kExistenceMargin = 1e-6;

/// Finite-horizon surrogate of the existence criterion: the trace must be
/// spherically bounded (tail-max estimate below pi/2) and have all steps
/// strictly below pi/2 in the angle metric.
ExistenceReport existence_certificate(const PpaTrace& trace);

/// Tail-window length for finite liminf/limsup surrogates: the last quarter
/// of the horizon, with a minimum window of 8 samples.
int tail_window(int horizon);

}  // namespace geoprox
