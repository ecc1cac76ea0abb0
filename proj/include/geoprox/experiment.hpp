#pragma once

/** Config-driven experiment runner: strict flat-key config files, the full
 * run pipeline (oracle reference, PPA, certificates), trace CSV and summary
 * JSON emission, and the run/verify/sweep command entry points. */

#include "geoprox/functionals.hpp"
#include "geoprox/geometry.hpp"
#include "geoprox/oracle.hpp"
#include "geoprox/ppa.hpp"
#include "geoprox/resolvent.hpp"
#include "geoprox/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace geoprox {

/// Thrown on malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  int space_dim = 2;
  double space_kappa = 1.0;

  std::string functional_kind = "cosine_mean";
  std::vector<std::vector<double>> anchors;
  std::vector<double> weights;

  std::vector<double> init;

  std::string schedule_kind = "constant";
  double schedule_value = 1.0;
  std::vector<double> schedule_list;
  bool schedule_assert_divergent = false;

  int max_iterations = 100;
  double stop_step_tol = 1e-9;
  std::optional<double> stop_gap_tol;
  unsigned seed = 0;

  std::string solver_method = "geodesic_descent";
  double solver_tol = 1e-10;
  int solver_max_iter = 10000;
  double solver_fd_step = 1e-6;

  double oracle_spacing = 0.01;
  int oracle_refinement_rounds = 3;

  std::string trace_path = "trace.csv";
  std::string summary_path = "summary.json";
};

/// Parses the flat `section.key = value` format; unknown keys are errors.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

/// Materialized, validated experiment inputs.
struct ExperimentSetup {
  ModelSpace space;
  ConvexFunctional functional;
  SpherePoint init;
  StepSchedule schedule;
  RunConfig run_cfg;
  InnerSolverConfig inner_cfg;
  GridSpec grid;
};

ExperimentSetup build_setup(const ExperimentConfig& config);

struct RunSummary {
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;
  double sup_step = 0.0;  // unit-sphere angle metric
  double k_constant = 0.0;
  double c_constant = 0.0;
  bool rate_bound_satisfied = false;
  bool fejer_satisfied = false;
  double argmin_distance = 0.0;
  long wall_time_ms = 0;
  bool reference_available = false;
  std::string stop_reason;
};

struct RunArtifacts {
  PpaTrace trace;
  RunSummary summary;
};

/// Full pipeline: oracle reference (on S^2), PPA run, certificates.
RunArtifacts execute_run(const ExperimentConfig& config);

RunSummary summarize(const PpaTrace& trace, double stop_step_tol,
                     long wall_time_ms);

/// Atomic writers (write to a temp file, then rename).
void write_trace_csv(const std::filesystem::path& path, const PpaTrace& trace);
void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary);
void write_verification_json(const std::filesystem::path& path,
                             const std::string& suite, int trials,
                             unsigned seed,
                             const std::vector<PropertyResult>& results);

struct CommandOptions {
  std::filesystem::path output_dir = ".";
  bool quiet = false;
};

/// Exit codes: 0 success, 1 property/run failure, 2 solver failure,
/// 3 configuration error.
int cmd_run(const std::filesystem::path& config_path, const CommandOptions& opts);
int cmd_verify(const std::string& suite, int trials, unsigned seed,
               const CommandOptions& opts);
int cmd_sweep(const std::filesystem::path& config_path,
              const std::string& parameter, const std::vector<std::string>& values,
              const CommandOptions& opts);

/// Sweep parallelism cap; reads GEOPROX_THREADS, defaulting to the hardware
/// concurrency.
int sweep_thread_cap();

}  // namespace geoprox
