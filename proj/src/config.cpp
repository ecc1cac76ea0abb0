#include "geoprox/experiment.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace geoprox {

namespace {

std::string trim(const std::string& s) {
  size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& token, const std::string& key) {
  try {
    size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + token + "'");
  }
}

int parse_int(const std::string& token, const std::string& key) {
  const double v = parse_double(token, key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + token + "'");
  }
  return i;
}

bool parse_bool(const std::string& token, const std::string& key) {
  if (token == "true" || token == "1") return true;
  if (token == "false" || token == "0") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + token + "'");
}

std::string strip_quotes(const std::string& token) {
  if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
    return token.substr(1, token.size() - 2);
  }
  return token;
}

std::vector<double> parse_number_list(const std::string& raw,
                                      const std::string& key) {
  const std::string text = trim(raw);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError("key '" + key + "': expected a [..] list");
  }
  std::vector<double> values;
  std::string item;
  std::stringstream inner(text.substr(1, text.size() - 2));
  while (std::getline(inner, item, ',')) {
    const std::string token = trim(item);
    if (token.empty()) {
      throw ConfigError("key '" + key + "': empty list element");
    }
    values.push_back(parse_double(token, key));
  }
  if (values.empty()) {
    throw ConfigError("key '" + key + "': list must not be empty");
  }
  return values;
}

std::vector<std::vector<double>> parse_nested_list(const std::string& raw,
                                                   const std::string& key) {
  const std::string text = trim(raw);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError("key '" + key + "': expected a [[..],..] list");
  }
  std::vector<std::vector<double>> rows;
  int depth = 0;
  std::string current;
  for (size_t i = 1; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c == '[') {
      if (++depth != 1) {
        throw ConfigError("key '" + key + "': nesting too deep");
      }
      current.clear();
    } else if (c == ']') {
      if (--depth != 0) {
        throw ConfigError("key '" + key + "': unbalanced brackets");
      }
      rows.push_back(parse_number_list("[" + current + "]", key));
    } else if (depth == 1) {
      current += c;
    } else if (c != ',' && !std::isspace(static_cast<unsigned char>(c))) {
      throw ConfigError("key '" + key + "': unexpected character between rows");
    }
  }
  if (depth != 0) throw ConfigError("key '" + key + "': unbalanced brackets");
  if (rows.empty()) {
    throw ConfigError("key '" + key + "': list must not be empty");
  }
  return rows;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::set<std::string> required_missing = {"functional.anchors",
                                            "functional.weights", "init"};

  std::stringstream stream(text);
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const size_t comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_number) +
                        ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }
    required_missing.erase(key);

    if (key == "space.dim") {
      config.space_dim = parse_int(value, key);
    } else if (key == "space.kappa") {
      config.space_kappa = parse_double(value, key);
    } else if (key == "functional.kind") {
      config.functional_kind = strip_quotes(value);
    } else if (key == "functional.anchors") {
      config.anchors = parse_nested_list(value, key);
    } else if (key == "functional.weights") {
      config.weights = parse_number_list(value, key);
    } else if (key == "init") {
      config.init = parse_number_list(value, key);
    } else if (key == "schedule.kind") {
      config.schedule_kind = strip_quotes(value);
    } else if (key == "schedule.value") {
      config.schedule_value = parse_double(value, key);
    } else if (key == "schedule.list") {
      config.schedule_list = parse_number_list(value, key);
    } else if (key == "schedule.assert_divergent") {
      config.schedule_assert_divergent = parse_bool(value, key);
    } else if (key == "run.max_iterations") {
      config.max_iterations = parse_int(value, key);
    } else if (key == "run.stop_step_tol") {
      config.stop_step_tol = parse_double(value, key);
    } else if (key == "run.stop_gap_tol") {
      config.stop_gap_tol = parse_double(value, key);
    } else if (key == "run.seed") {
      config.seed = static_cast<unsigned>(parse_int(value, key));
    } else if (key == "solver.method") {
      config.solver_method = strip_quotes(value);
    } else if (key == "solver.tol") {
      config.solver_tol = parse_double(value, key);
    } else if (key == "solver.max_iter") {
      config.solver_max_iter = parse_int(value, key);
    } else if (key == "solver.fd_step") {
      config.solver_fd_step = parse_double(value, key);
    } else if (key == "oracle.spacing") {
      config.oracle_spacing = parse_double(value, key);
    } else if (key == "oracle.refinement_rounds") {
      config.oracle_refinement_rounds = parse_int(value, key);
    } else if (key == "outputs.trace_path") {
      config.trace_path = strip_quotes(value);
    } else if (key == "outputs.summary_path") {
      config.summary_path = strip_quotes(value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }

  if (!required_missing.empty()) {
    throw ConfigError("missing required key '" + *required_missing.begin() + "'");
  }
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentSetup build_setup(const ExperimentConfig& config) {
  try {
    const ModelSpace space(config.space_dim, config.space_kappa);

    std::vector<SpherePoint> anchors;
    for (const auto& coords : config.anchors) {
      anchors.emplace_back(
          Eigen::Map<const Vector>(coords.data(), static_cast<long>(coords.size())));
    }
    ConvexFunctional functional(functional_kind_from_string(config.functional_kind),
                                std::move(anchors), config.weights, space);

    const SpherePoint init(
        Eigen::Map<const Vector>(config.init.data(),
                                 static_cast<long>(config.init.size())));
    if (init.ambient_dim() != space.dim + 1) {
      throw ConfigError("init dimension does not match the space");
    }
    if (!functional.admissible_at(init)) {
      throw ConfigError("init point is not admissible for the functional");
    }

    StepSchedule schedule;
    if (config.schedule_kind == "constant") {
      schedule = StepSchedule::constant(config.schedule_value);
    } else if (config.schedule_kind == "harmonic") {
      schedule = StepSchedule::harmonic();
    } else if (config.schedule_kind == "power") {
      schedule = StepSchedule::power(config.schedule_value);
    } else if (config.schedule_kind == "explicit_list") {
      schedule = StepSchedule::explicit_list(config.schedule_list,
                                             config.schedule_assert_divergent);
      if (static_cast<int>(config.schedule_list.size()) < config.max_iterations) {
        throw ConfigError("explicit schedule shorter than max_iterations");
      }
    } else {
      throw ConfigError("unknown schedule kind '" + config.schedule_kind + "'");
    }

    RunConfig run_cfg;
    run_cfg.max_iterations = config.max_iterations;
    run_cfg.stop_step_tol = config.stop_step_tol;
    run_cfg.stop_gap_tol = config.stop_gap_tol;
    run_cfg.seed = config.seed;
    if (run_cfg.max_iterations < 1 || !(run_cfg.stop_step_tol > 0.0)) {
      throw ConfigError("invalid run configuration");
    }

    InnerSolverConfig inner_cfg;
    if (config.solver_method == "geodesic_descent") {
      inner_cfg.method = InnerMethod::geodesic_descent;
    } else if (config.solver_method == "nested_golden_section") {
      inner_cfg.method = InnerMethod::nested_golden_section;
    } else {
      throw ConfigError("unknown solver method '" + config.solver_method + "'");
    }
    inner_cfg.tol = config.solver_tol;
    inner_cfg.max_iter = config.solver_max_iter;
    inner_cfg.fd_step = config.solver_fd_step;
    if (!(inner_cfg.tol > 0.0) || inner_cfg.max_iter < 1 ||
        !(inner_cfg.fd_step > 0.0) || !(inner_cfg.fd_step < 1e-2)) {
      throw ConfigError("invalid solver configuration");
    }

    GridSpec grid{config.oracle_spacing, config.oracle_refinement_rounds};
    if (!(grid.spacing > 0.0) || grid.refinement_rounds < 0) {
      throw ConfigError("invalid oracle configuration");
    }

    return ExperimentSetup{space,    std::move(functional), init, schedule,
                           run_cfg,  inner_cfg,             grid};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& err) {
    throw ConfigError(std::string("invalid configuration: ") + err.what());
  }
}

}  // namespace geoprox
