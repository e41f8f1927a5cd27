#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace tomo::verify {

/// Fault injection for the mutation canary: scales applied to width/variance
/// constants inside the checked closed forms. All 1.0 in a normal run; the
/// suite must fail loudly whenever one of them is not.
struct FaultFlags {
  double gl_sigma_scale = 1.0;
  double gibbs_variance_scale = 1.0;
  double coherent_variance_scale = 1.0;

  bool any() const {
    return gl_sigma_scale != 1.0 || gibbs_variance_scale != 1.0 ||
           coherent_variance_scale != 1.0;
  }
};

struct CheckResult {
  std::string id;
  bool passed = false;
  double observed = 0.0;   // worst metric seen
  double threshold = 0.0;  // pass bound, pinned here
  std::string detail;
};

struct Options {
  std::string filter;  // substring on check ids; empty = all
  FaultFlags faults;
};

/// Run the oracle/property suite at desk scale. Check ids:
///   radon.closed_forms, gl.charfun, norm.homogeneity, invert.round_trip,
///   evolution.dual, evolution.fd_order, cavity.engine, sample.ks
std::vector<CheckResult> run_suite(const Options& opts);

nlohmann::json report_to_json(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace tomo::verify
