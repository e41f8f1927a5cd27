// Acceptance suite: runs every oracle/property criterion at desk scale and
// prints one PASS/FAIL line per criterion. Exit code 0 only if all pass.

#include "tomo/grid_io.hpp"
#include "tomo/verify.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Criterion {
  std::string name;
  bool passed;
  std::string detail;
};

const tomo::verify::CheckResult& find(const std::vector<tomo::verify::CheckResult>& rs,
                                      const std::string& id) {
  for (const auto& r : rs)
    if (r.id == id) return r;
  throw std::runtime_error("missing check " + id);
}

std::string metric(const tomo::verify::CheckResult& r) {
  return r.detail + " [observed " + tomo::format_double(r.observed) + "]";
}

}  // namespace

int main() {
  using tomo::verify::CheckResult;
  using tomo::verify::Options;

  Options base;
  std::vector<CheckResult> rs = tomo::verify::run_suite(base);

  std::vector<Criterion> criteria;
  {
    const CheckResult& r = find(rs, "radon.closed_forms");
    criteria.push_back({"1 closed-form vs numeric Radon (< 1e-6)", r.passed, metric(r)});
  }
  {
    const CheckResult& r = find(rs, "gl.charfun");
    criteria.push_back(
        {"2 GL characteristic function (fft < 1e-6, forms < 1e-10)", r.passed, metric(r)});
  }
  {
    const CheckResult& r = find(rs, "norm.homogeneity");
    criteria.push_back(
        {"3 normalization (1e-6) and homogeneity (1e-5 / 1e-12)", r.passed, metric(r)});
  }
  {
    const CheckResult& r = find(rs, "invert.round_trip");
    criteria.push_back(
        {"4 inversion round trip (Linf < 1e-3, < 30 s/state)", r.passed, metric(r)});
  }
  {
    const CheckResult& a = find(rs, "evolution.dual");
    const CheckResult& b = find(rs, "evolution.fd_order");
    criteria.push_back({"5 dynamics dual consistency (1e-6 / 1e-10) and FD order 2.0 +- 0.2",
                        a.passed && b.passed, metric(a) + "; " + metric(b)});
  }
  {
    const CheckResult& r = find(rs, "cavity.engine");
    criteria.push_back({"6 cavity engine (spectrum 1e-14, round trip 1e-10, marginal and "
                        "product probe 1e-8)",
                        r.passed, metric(r)});
  }
  {
    const CheckResult& r = find(rs, "sample.ks");
    criteria.push_back({"7 sampling KS distance < 0.01 at 1e5 draws", r.passed, metric(r)});
  }

  // 8: mutation canary; each injected factor-of-2 width/variance fault must
  // make the suite fail loudly.
  {
    bool canary = true;
    std::string detail;
    struct Fault {
      const char* name;
      tomo::verify::FaultFlags flags;
    };
    std::vector<Fault> faults(3);
    faults[0].name = "gl_sigma_x2";
    faults[0].flags.gl_sigma_scale = 2.0;
    faults[1].name = "gibbs_variance_x2";
    faults[1].flags.gibbs_variance_scale = 2.0;
    faults[2].name = "coherent_variance_x2";
    faults[2].flags.coherent_variance_scale = 2.0;
    for (const Fault& f : faults) {
      Options opts;
      opts.filter = "radon.closed_forms";
      opts.faults = f.flags;
      std::vector<CheckResult> rf = tomo::verify::run_suite(opts);
      bool tripped = !tomo::verify::all_passed(rf);
      if (!tripped) canary = false;
      detail += std::string(f.name) + (tripped ? " tripped; " : " NOT CAUGHT; ");
    }
    criteria.push_back({"8 mutation canary trips on injected sigma/variance faults", canary,
                        detail});
  }

  bool all = true;
  for (const Criterion& c : criteria) {
    std::printf("%s  criterion %s\n    %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                c.detail.c_str());
    all = all && c.passed;
  }
  std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                          : "ACCEPTANCE: FAILURES PRESENT");
  return all ? 0 : 1;
}
