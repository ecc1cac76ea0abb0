#pragma once

/** Randomized property suites behind the `verify` subcommand.  Each property
 * reports the worst slack seen over its trials; a property passes when the
 * worst slack stays above minus its tolerance. */

#include <string>
#include <vector>

namespace geoprox {

struct PropertyResult {
  std::string name;
  int trials;
  double worst_slack;
  double tolerance;   // property passes iff worst_slack >= -tolerance
  bool passed;
};

std::vector<PropertyResult> verify_geometry(int trials, unsigned seed);
std::vector<PropertyResult> verify_functionals(int trials, unsigned seed);
std::vector<PropertyResult> verify_resolvent(int trials, unsigned seed);
std::vector<PropertyResult> verify_ppa(int trials, unsigned seed);
std::vector<PropertyResult> verify_diagnostics(int trials, unsigned seed);

/// Runs the named suite ("geometry", "functionals", "resolvent", "ppa",
/// "diagnostics", or "all").  Throws GeometryDomainError for unknown names.
std::vector<PropertyResult> verify_suite(const std::string& suite, int trials,
                                         unsigned seed);

bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace geoprox
