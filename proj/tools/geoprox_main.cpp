/** geoprox command line: run config-driven PPA experiments, verify the
 * property suites, and sweep parameters. */

#include "geoprox/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"geoprox: proximal point optimization on admissible spheres"};
  app.require_subcommand(1);

  geoprox::CommandOptions opts;

  std::string run_config;
  CLI::App* run = app.add_subcommand("run", "execute one experiment config");
  run->add_option("config", run_config, "experiment config file")->required();
  run->add_option("--output-dir", opts.output_dir, "directory for output files");
  run->add_flag("--quiet", opts.quiet, "suppress progress output");

  std::string suite = "all";
  int trials = 1000;
  unsigned seed = 12345;
  CLI::App* verify = app.add_subcommand("verify", "run a property suite");
  verify
      ->add_option("suite", suite,
                   "geometry|functionals|resolvent|ppa|diagnostics|all")
      ->required();
  verify->add_option("--trials", trials, "trials per property");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--output-dir", opts.output_dir, "directory for the report");
  verify->add_flag("--quiet", opts.quiet, "suppress per-property lines");

  std::string sweep_config;
  std::string parameter;
  std::vector<std::string> values;
  CLI::App* sweep = app.add_subcommand("sweep", "run one config per value");
  sweep->add_option("config", sweep_config, "base experiment config")->required();
  sweep->add_option("--param", parameter, "lambda|kappa|anchors-seed")->required();
  sweep->add_option("--values", values, "comma separated parameter values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--output-dir", opts.output_dir, "directory for output files");
  sweep->add_flag("--quiet", opts.quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;  // bad usage is a configuration error
  }

  if (run->parsed()) return geoprox::cmd_run(run_config, opts);
  if (verify->parsed()) return geoprox::cmd_verify(suite, trials, seed, opts);
  if (sweep->parsed()) return geoprox::cmd_sweep(sweep_config, parameter, values, opts);
  std::cerr << "no subcommand\n";
  return 3;
}
