#include "geoprox/experiment.hpp"

#include "geoprox/sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <thread>

namespace geoprox {

namespace {

constexpr double kPi = std::numbers::pi;

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

/// Writes content to path atomically (temp file + rename), so failed runs
/// never leave partial files behind.
void atomic_write(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot write to " + tmp.string());
    }
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path resolve_output(const std::filesystem::path& base,
                                     const std::string& configured) {
  const std::filesystem::path p(configured);
  return p.is_absolute() ? p : base / p;
}

nlohmann::json summary_to_json(const RunSummary& summary) {
  return nlohmann::json{{"converged", summary.converged},
                        {"iterations", summary.iterations},
                        {"final_gap", summary.final_gap},
                        {"sup_step", summary.sup_step},
                        {"K", summary.k_constant},
                        {"C", summary.c_constant},
                        {"rate_bound_satisfied", summary.rate_bound_satisfied},
                        {"fejer_satisfied", summary.fejer_satisfied},
                        {"argmin_distance", summary.argmin_distance},
                        {"wall_time_ms", summary.wall_time_ms},
                        {"reference_available", summary.reference_available},
                        {"stop_reason", summary.stop_reason}};
}

}  // namespace

RunSummary summarize(const PpaTrace& trace, double stop_step_tol,
                     long wall_time_ms) {
  RunSummary summary;
  summary.iterations = trace.steps();
  summary.stop_reason = trace.stop_reason;
  summary.converged =
      trace.stop_reason == "step_tol" || trace.stop_reason == "gap_tol" ||
      (trace.steps() > 0 && trace.step_distances.back() < stop_step_tol);
  summary.sup_step = trace.space.to_angle(trace.sup_step);
  const double cos_l = std::cos(summary.sup_step);
  summary.k_constant = 1.0 / (cos_l * cos_l) + 1.0;
  summary.c_constant = summary.k_constant * kPi / 2.0;
  summary.wall_time_ms = wall_time_ms;
  summary.reference_available = trace.reference.has_value();

  if (trace.reference) {
    summary.final_gap = trace.f_values.back() - trace.reference_value;
    summary.argmin_distance = trace.space.from_angle(
        angle_between(trace.iterates.back(), *trace.reference));
    summary.rate_bound_satisfied = true;
    for (int n = 0; n < trace.steps(); ++n) {
      const double gap = trace.f_values[n + 1] - trace.reference_value;
      if (gap > trace.rate_bounds[n] + kMonotoneTol) {
        summary.rate_bound_satisfied = false;
      }
    }
    summary.fejer_satisfied = true;
    for (bool flag : trace.fejer_flags) {
      if (!flag) summary.fejer_satisfied = false;
    }
  } else {
    summary.final_gap = std::numeric_limits<double>::quiet_NaN();
    summary.argmin_distance = std::numeric_limits<double>::quiet_NaN();
    summary.rate_bound_satisfied = false;
    summary.fejer_satisfied = false;
  }
  return summary;
}

RunArtifacts execute_run(const ExperimentConfig& config) {
  ExperimentSetup setup = build_setup(config);

  // Reference minimizer from the oracle: closed form for the cosine family,
  // grid plus golden refinement on S^2 otherwise.
  if (setup.functional.kind() == FunctionalKind::cosine_mean ||
      setup.functional.kind() == FunctionalKind::constant || setup.space.dim == 2) {
    setup.run_cfg.reference_minimizer =
        reference_argmin(setup.functional, setup.space, setup.grid);
  }

  const auto start = std::chrono::steady_clock::now();
  PpaTrace trace = run_ppa(setup.functional, setup.init, setup.schedule,
                           setup.space, setup.run_cfg, setup.inner_cfg);
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  RunArtifacts artifacts{std::move(trace), RunSummary{}};
  artifacts.summary = summarize(artifacts.trace, setup.run_cfg.stop_step_tol,
                                static_cast<long>(elapsed.count()));
  return artifacts;
}

void write_trace_csv(const std::filesystem::path& path, const PpaTrace& trace) {
  std::string out;
  out.reserve(128 * (trace.iterates.size() + 1));
  out += "n,lambda,f_value,step_distance,dist_to_reference,rate_bound,fejer_ok\n";

  const bool ref = trace.reference.has_value();
  auto dist_to_ref = [&](size_t i) {
    return ref ? trace.space.from_angle(
                     angle_between(trace.iterates[i], *trace.reference))
               : std::numeric_limits<double>::quiet_NaN();
  };

  for (size_t i = 0; i < trace.iterates.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double lambda = i == 0 ? 0.0 : trace.lambdas[i - 1];
    const double step = i == 0 ? 0.0 : trace.step_distances[i - 1];
    const double bound = i == 0 ? std::numeric_limits<double>::infinity()
                         : ref  ? trace.rate_bounds[i - 1]
                                : std::numeric_limits<double>::quiet_NaN();
    const bool fejer_ok = i == 0 || !ref || trace.fejer_flags[i - 1];
    out += std::to_string(n);
    out += ',';
    out += format_double(lambda);
    out += ',';
    out += format_double(trace.f_values[i]);
    out += ',';
    out += format_double(step);
    out += ',';
    out += format_double(dist_to_ref(i));
    out += ',';
    out += format_double(bound);
    out += ',';
    out += fejer_ok ? '1' : '0';
    out += '\n';
  }
  atomic_write(path, out);
}

void write_summary_json(const std::filesystem::path& path,
                        const RunSummary& summary) {
  atomic_write(path, summary_to_json(summary).dump(2) + "\n");
}

void write_verification_json(const std::filesystem::path& path,
                             const std::string& suite, int trials,
                             unsigned seed,
                             const std::vector<PropertyResult>& results) {
  nlohmann::json properties = nlohmann::json::array();
  for (const PropertyResult& r : results) {
    properties.push_back({{"name", r.name},
                          {"trials", r.trials},
                          {"worst_slack", r.worst_slack},
                          {"tolerance", r.tolerance},
                          {"passed", r.passed}});
  }
  const nlohmann::json report{{"suite", suite},
                              {"trials", trials},
                              {"seed", seed},
                              {"all_passed", all_passed(results)},
                              {"properties", properties}};
  atomic_write(path, report.dump(2) + "\n");
}

int cmd_run(const std::filesystem::path& config_path,
            const CommandOptions& opts) {
  ExperimentConfig config;
  try {
    config = parse_config_file(config_path);
    build_setup(config);  // full validation before any output
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 3;
  }

  const auto trace_path = resolve_output(opts.output_dir, config.trace_path);
  const auto summary_path = resolve_output(opts.output_dir, config.summary_path);

  try {
    const RunArtifacts artifacts = execute_run(config);
    write_trace_csv(trace_path, artifacts.trace);
    write_summary_json(summary_path, artifacts.summary);
    if (!opts.quiet) {
      std::cout << "run: " << artifacts.summary.iterations << " iterations, "
                << (artifacts.summary.converged ? "converged" : "not converged")
                << ", stop=" << artifacts.summary.stop_reason << "\n";
    }
    return 0;
  } catch (const PpaError& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    write_trace_csv(trace_path, err.partial);  // flush the partial trace
    RunSummary summary = summarize(err.partial, config.stop_step_tol, 0);
    summary.converged = false;
    summary.stop_reason = "solver_failure";
    write_summary_json(summary_path, summary);
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 3;
  }
}

int cmd_verify(const std::string& suite, int trials, unsigned seed,
               const CommandOptions& opts) {
  if (trials < 1) {
    std::cerr << "config error: trials must be >= 1\n";
    return 3;
  }
  std::vector<PropertyResult> results;
  try {
    results = verify_suite(suite, trials, seed);
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 3;
  }
  write_verification_json(opts.output_dir / ("verify_" + suite + ".json"),
                          suite, trials, seed, results);
  if (!opts.quiet) {
    for (const PropertyResult& r : results) {
      std::printf("%-34s trials=%-6d worst_slack=% .3e  %s\n", r.name.c_str(),
                  r.trials, r.worst_slack, r.passed ? "pass" : "FAIL");
    }
  }
  return all_passed(results) ? 0 : 1;
}

int sweep_thread_cap() {
  if (const char* env = std::getenv("GEOPROX_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

int cmd_sweep(const std::filesystem::path& config_path,
              const std::string& parameter,
              const std::vector<std::string>& values,
              const CommandOptions& opts) {
  ExperimentConfig base;
  try {
    base = parse_config_file(config_path);
    build_setup(base);
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    if (parameter != "lambda" && parameter != "kappa" &&
        parameter != "anchors-seed") {
      throw ConfigError("unknown sweep parameter '" + parameter + "'");
    }
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 3;
  }

  struct SweepSlot {
    std::string value;
    ExperimentConfig config;
    bool ok = false;
    RunSummary summary;
    std::string error;
  };
  std::vector<SweepSlot> slots;
  try {
    for (const std::string& value : values) {
      SweepSlot slot;
      slot.value = value;
      slot.config = base;
      if (parameter == "lambda") {
        slot.config.schedule_kind = "constant";
        slot.config.schedule_value = std::stod(value);
      } else if (parameter == "kappa") {
        slot.config.space_kappa = std::stod(value);
      } else {
        // Regenerate the anchor set (and an admissible start) from the seed.
        const unsigned anchor_seed = static_cast<unsigned>(std::stoul(value));
        std::mt19937_64 rng(anchor_seed);
        const auto anchors = random_admissible_tuple(
            base.space_dim + 1, static_cast<int>(base.anchors.size()), 0.35, rng);
        slot.config.anchors.clear();
        Vector mean = Vector::Zero(base.space_dim + 1);
        for (const SpherePoint& a : anchors) {
          slot.config.anchors.emplace_back(
              a.coords().data(), a.coords().data() + a.coords().size());
          mean += a.coords();
        }
        const SpherePoint init = random_in_cap(SpherePoint(mean), 0.4, rng);
        slot.config.init.assign(init.coords().data(),
                                init.coords().data() + init.coords().size());
      }
      build_setup(slot.config);  // validate the mutated config up front
      slots.push_back(std::move(slot));
    }
  } catch (const std::exception& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 3;
  }

  // Independent runs; parallelism capped by GEOPROX_THREADS.
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= slots.size()) return;
      try {
        const RunArtifacts artifacts = execute_run(slots[i].config);
        slots[i].summary = artifacts.summary;
        slots[i].ok = true;
      } catch (const std::exception& err) {
        slots[i].error = err.what();
      }
    }
  };
  const int threads =
      std::min<int>(sweep_thread_cap(), static_cast<int>(slots.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  std::string csv =
      "param_value,ok,converged,iterations,final_gap,sup_step,K,C,"
      "rate_bound_satisfied,fejer_satisfied,argmin_distance\n";
  bool any_failed = false;
  for (const SweepSlot& slot : slots) {
    const RunSummary& s = slot.summary;
    csv += slot.value;
    csv += slot.ok ? ",1," : ",0,";
    if (slot.ok) {
      csv += std::string(s.converged ? "1" : "0") + "," +
             std::to_string(s.iterations) + "," + format_double(s.final_gap) +
             "," + format_double(s.sup_step) + "," +
             format_double(s.k_constant) + "," + format_double(s.c_constant) +
             "," + (s.rate_bound_satisfied ? "1" : "0") + "," +
             (s.fejer_satisfied ? "1" : "0") + "," +
             format_double(s.argmin_distance);
      write_summary_json(
          opts.output_dir / ("sweep_" + parameter + "_" + slot.value + "_summary.json"),
          s);
    } else {
      any_failed = true;
      csv += "0,0,nan,nan,nan,nan,0,0,nan";
      if (!opts.quiet) {
        std::cerr << "sweep value " << slot.value << " failed: " << slot.error
                  << "\n";
      }
    }
    csv += '\n';
  }
  atomic_write(opts.output_dir / ("sweep_" + parameter + ".csv"), csv);
  if (!opts.quiet) {
    std::cout << "sweep: " << slots.size() << " runs, "
              << (any_failed ? "with failures" : "all ok") << "\n";
  }
  return any_failed ? 1 : 0;
}

}  // namespace geoprox
