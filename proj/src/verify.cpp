#include "tomo/verify.hpp"

#include "tomo/analytic.hpp"
#include "tomo/evolution.hpp"
#include "tomo/fft.hpp"
#include "tomo/kg_cavity.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/radon.hpp"
#include "tomo/states.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace tomo::verify {

namespace {

// Closed forms with the canary scales applied. A scale of 1 reproduces the
// library values bit for bit.
double checked_gibbs(double X, double mu, double nu, double beta, double omega,
                     const FaultFlags& f) {
  return gibbs_tomogram(X, mu, nu, beta / f.gibbs_variance_scale, omega);
}

double checked_coherent(double X, double mu, double nu, Complex z, double omega,
                        const FaultFlags& f) {
  return coherent_tomogram(X, mu, nu, z, omega / f.coherent_variance_scale);
}

double checked_gl(double X, double mu, double nu, const GLDescriptor& d,
                  const FaultFlags& f) {
  return gl_tomogram_core(X, d.sigma(mu, nu) * f.gl_sigma_scale, d.m);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double a, double b) { return a + (b - a) * ((gen_() >> 11) * 0x1.0p-53); }

 private:
  std::mt19937_64 gen_;
};


std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct LineSample {
  double X, mu, nu;
};

LineSample random_line(Rng& rng, double xscale) {
  double th = rng.uniform(0, M_PI);
  double r = rng.uniform(0.5, 2.0);
  return {rng.uniform(-xscale, xscale) * r, r * std::cos(th), r * std::sin(th)};
}

DensityState gibbs1(double beta, double omega) {
  return DensityState::gibbs(ModeSpec{{omega}, beta});
}
DensityState gl1(double omega, int m) {
  return DensityState::gauss_laguerre(ModeSpec{{omega}, std::nullopt}, {m});
}
DensityState coherent1(double omega, Complex z) {
  return DensityState::coherent(ModeSpec{{omega}, std::nullopt}, {z});
}

// --- criterion 1: closed forms vs the numeric Radon transform ---------------

CheckResult check_radon_closed_forms(const FaultFlags& faults) {
  CheckResult res{"radon.closed_forms", false, 0.0, 1e-6, ""};
  Rng rng(1001);
  double worst = 0.0;
  for (double beta : {0.5, 1.0, 2.0})
    for (double omega : {0.5, 1.0, 3.0}) {
      DensityState st = gibbs1(beta, omega);
      for (int i = 0; i < 50; ++i) {
        LineSample l = random_line(rng, 2.5 / std::sqrt(beta * omega));
        double num = symplectic_radon(st, LineCoords::single(l.X, l.mu, l.nu));
        double ana = checked_gibbs(l.X, l.mu, l.nu, beta, omega, faults);
        worst = std::max(worst, std::abs(num - ana));
      }
    }
  const Complex zs[] = {{1.0, 0.0}, {-0.5, 0.8}, {1.2, -1.2}, {0.0, 2.0}, {1.4, 1.4}};
  for (const Complex& z : zs)
    for (double omega : {0.5, 1.0, 3.0}) {
      DensityState st = coherent1(omega, z);
      for (int i = 0; i < 50; ++i) {
        LineSample l = random_line(rng, 2.5 / std::sqrt(omega) + 2.0 * std::abs(z));
        double num = symplectic_radon(st, LineCoords::single(l.X, l.mu, l.nu));
        double ana = checked_coherent(l.X, l.mu, l.nu, z, omega, faults);
        worst = std::max(worst, std::abs(num - ana));
      }
    }
  for (int m = 0; m <= 5; ++m) {
    DensityState st = gl1(1.0, m);
    for (int i = 0; i < 50; ++i) {
      LineSample l = random_line(rng, 2.5 * std::sqrt(2.0 * m + 1.0));
      double num = symplectic_radon(st, LineCoords::single(l.X, l.mu, l.nu));
      double ana = checked_gl(l.X, l.mu, l.nu, {1.0, m}, faults);
      worst = std::max(worst, std::abs(num - ana));
    }
  }
  res.observed = worst;
  res.passed = worst < res.threshold;
  res.detail = "max |analytic - symplectic_radon| over 50 random lines per state";
  return res;
}

// --- criterion 2: GL characteristic function --------------------------------

CheckResult check_gl_charfun(const FaultFlags& faults) {
  CheckResult res{"gl.charfun", false, 0.0, 1e-6, ""};
  double worst_fft = 0.0;
  for (int m = 0; m <= 5; ++m) {
    GLDescriptor d{1.0, m};
    int n = 1 << 14;
    double L = 80.0;
    double h = L / n;
    std::vector<Complex> a(n);
    for (int j = 0; j < n; ++j)
      a[j] = checked_gl(-0.5 * L + j * h, 1.0, 0.0, d, faults);
    fft_inplace(a, true);
    for (int k = 0; k <= 180; ++k) {
      double K = 2.0 * M_PI * k / L;
      Complex chi = static_cast<double>(n) * h * std::polar(1.0, -0.5 * L * K) * a[k];
      worst_fft = std::max(worst_fft, std::abs(chi.real() - gl_charfun(K, 1, 0, d)));
    }
  }
  // the two printed forms agree to 1e-10 (characteristic functions, |chi| <= 1)
  double worst_forms = 0.0;
  for (int m = 0; m <= 10; ++m) {
    GLDescriptor d{1.0, m};
    for (double y = 0.0; y <= 20.0; y += 0.01)
      worst_forms = std::max(worst_forms,
                             std::abs(gl_charfun(y, 1, 0, d) - gl_charfun_addition(y, 1, 0, d)));
  }
  res.observed = std::max(worst_fft, worst_forms * 1e4);  // forms scaled to the 1e-6 gate
  res.passed = worst_fft < 1e-6 && worst_forms < 1e-10;
  res.detail = "fft vs closed form " + short_num(worst_fft) + ", form agreement " +
               short_num(worst_forms);
  return res;
}

// --- criterion 3: normalization and homogeneity ------------------------------

CheckResult check_norm_homogeneity(const FaultFlags& faults) {
  CheckResult res{"norm.homogeneity", false, 0.0, 1.0, ""};
  TomogramGridSpec gspec{64, 1024};
  double worst_norm = 0.0;
  std::vector<DensityState> states = {gibbs1(1, 1), coherent1(1.0, {1.0, 0.0}), gl1(1.0, 2)};
  for (const DensityState& st : states) {
    TomogramGrid grid = make_tomogram_grid(st, gspec);
    worst_norm = std::max(worst_norm, grid.max_normalization_error);
    worst_norm = std::max(worst_norm, std::max(0.0, -grid.min_value) * 1e3);
  }
  std::vector<HomogeneityProbe> probes;
  Rng rng(1003);
  for (double lambda : {-2.0, -1.0, 0.5, 2.0})
    for (int i = 0; i < 5; ++i)
      probes.push_back(
          {rng.uniform(-1, 1), rng.uniform(-1.5, 1.5), rng.uniform(0.2, 1.5), lambda});
  DensityState st = gl1(1.0, 2);
  double res_num = homogeneity_residual(
      [&](double X, double mu, double nu) {
        return symplectic_radon(st, LineCoords::single(X, mu, nu));
      },
      probes);
  double res_ana = homogeneity_residual(
      [&](double X, double mu, double nu) {
        return checked_gl(X, mu, nu, {1.0, 2}, faults);
      },
      probes);
  res_ana = std::max(res_ana, homogeneity_residual(
                                  [&](double X, double mu, double nu) {
                                    return checked_gibbs(X, mu, nu, 1.5, 0.8, faults);
                                  },
                                  probes));
  res.passed = worst_norm < 1e-6 && res_num < 1e-5 && res_ana < 1e-12;
  res.observed = std::max({worst_norm, res_num * 0.1, res_ana * 1e6});
  res.threshold = 1e-6;
  res.detail = "norm " + short_num(worst_norm) + ", numeric homogeneity " +
               short_num(res_num) + ", analytic homogeneity " + short_num(res_ana);
  return res;
}

// --- criterion 4: inversion round trip ---------------------------------------

CheckResult check_invert_round_trip(const FaultFlags&) {
  CheckResult res{"invert.round_trip", false, 0.0, 1e-3, ""};
  TomogramGridSpec gspec{64, 1024};
  std::vector<std::pair<std::string, DensityState>> states = {
      {"gibbs", gibbs1(1, 1)}, {"coherent", coherent1(1.0, {1.0, 0.0})}, {"gl3", gl1(1.0, 3)}};
  double worst = 0.0;
  double slowest = 0.0;
  for (auto& [name, st] : states) {
    auto t0 = std::chrono::steady_clock::now();
    TomogramGrid grid = make_tomogram_grid(st, gspec);
    InversionResult inv = inverse_radon(grid);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    slowest = std::max(slowest, secs);
    const GridDensity& d = inv.density;
    for (int i = 0; i < d.xi_count(); ++i)
      for (int j = 0; j < d.eta_count(); ++j) {
        double xi = d.xi_min() + i * d.dxi(), eta = d.eta_min() + j * d.deta();
        if (std::abs(xi) > 4.0 || std::abs(eta) > 4.0) continue;
        double ref = eval_density(st, PhasePoint::single(xi, eta));
        worst = std::max(worst, std::abs(d.values()(i, j) - ref));
      }
  }
  res.observed = worst;
  res.passed = worst < res.threshold && slowest < 30.0;
  res.detail = "Linf on [-4,4]^2, slowest state " + short_num(slowest) + " s";
  return res;
}

// --- criterion 5: dynamics dual consistency ----------------------------------

CheckResult check_evolve_dual(const FaultFlags&) {
  CheckResult res{"evolution.dual", false, 0.0, 1e-6, ""};
  Rng rng(1005);
  std::vector<DensityState> states = {gibbs1(1, 1), coherent1(1.0, {1.0, 0.0}), gl1(1.0, 2)};
  double worst = 0.0;
  for (const DensityState& st : states) {
    ModeSpec spec = state_mode_spec(st);
    for (double t : {0.3, 1.0, 2.7}) {
      DensityState st_t = evolve_density(st, t);
      for (int i = 0; i < 50; ++i) {
        LineSample l = random_line(rng, 3.0);
        LineCoords line = LineCoords::single(l.X, l.mu, l.nu);
        double a = symplectic_radon(st_t, line);
        double b = symplectic_radon(st, rotate_line(line, t, spec));
        worst = std::max(worst, std::abs(a - b));
      }
    }
  }
  // coherent rotation law z(t) = exp(-i w t) z(0), parametric vs transport
  double worst_rot = 0.0;
  DensityState c0 = coherent1(1.3, {0.8, -0.6});
  for (double t : {0.3, 1.0, 2.7}) {
    Complex zt = std::polar(1.0, -1.3 * t) * Complex(0.8, -0.6);
    DensityState want = coherent1(1.3, zt);
    for (int i = 0; i < 100; ++i) {
      PhasePoint pt = PhasePoint::single(rng.uniform(-3, 3), rng.uniform(-3, 3));
      double a = evolved_density_eval(c0, t, pt);
      double b = eval_density(want, pt);
      worst_rot = std::max(worst_rot, std::abs(a - b) / std::max({a, b, 1e-12}));
    }
  }
  res.observed = std::max(worst, worst_rot * 1e4);
  res.passed = worst < 1e-6 && worst_rot < 1e-10;
  res.detail = "dual " + short_num(worst) + ", rotation law " + short_num(worst_rot);
  return res;
}

// --- criterion 5b: measured FD convergence order ------------------------------

CheckResult check_fd_order(const FaultFlags&) {
  CheckResult res{"evolution.fd_order", false, 0.0, 0.2, ""};
  double omega = 1.0, t = 0.5;
  auto W = [](double X, double mu, double nu) {
    return coherent_tomogram(X, mu, nu, {1.0, 0.0}, 1.0);
  };
  auto Wex = evolve_tomogram_exact(W, t, omega);
  ArrayXd xnodes = uniform_axis(-1, 1, 3);
  auto run = [&](int n) {
    FdTomogram w0 = sample_fd_tomogram(W, xnodes, 6.0, n);
    EvolutionConfig cfg;
    cfg.extent = 6.0;
    cfg.points = n;
    cfg.dt = t / std::ceil(t / (0.5 * cfg.grid_step() / (omega * cfg.extent)));
    cfg.t = t;
    FdTomogram wt = evolve_tomogram_fd(w0, cfg, omega);
    ArrayXd axis = uniform_axis(-cfg.extent, cfg.extent, n);
    double err = 0.0;
    int cnt = 0;
    for (int ix = 0; ix < xnodes.size(); ++ix)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double r = std::hypot(axis[i], axis[j]);
          if (r > 0.7 * cfg.extent || r < 1.0) continue;
          double d = wt.slices[ix](i, j) - Wex(xnodes[ix], axis[i], axis[j]);
          err += d * d;
          ++cnt;
        }
    return std::sqrt(err / cnt);
  };
  double order = std::log2(run(65) / run(129));
  res.observed = std::abs(order - 2.0);
  res.passed = res.observed <= 0.2;
  res.detail = "measured order " + short_num(order);
  return res;
}

// --- criterion 6: cavity engine ----------------------------------------------

CheckResult check_cavity(const FaultFlags&) {
  CheckResult res{"cavity.engine", false, 0.0, 1e-8, ""};
  double worst_spec = 0.0;
  for (const CavitySpec& cav : {CavitySpec{M_PI, 0.0, 8}, CavitySpec{1.0, 1.0, 4},
                                CavitySpec{2.7, 0.4, 16}}) {
    std::vector<double> w = spectrum(cav);
    for (int k = 1; k <= cav.truncation; ++k) {
      double kappa = k * M_PI / cav.length;
      double want = std::sqrt(kappa * kappa + cav.mass * cav.mass);
      worst_spec = std::max(worst_spec, std::abs(w[k - 1] - want) / want);
    }
  }
  // mode round trip
  CavitySpec cav{M_PI, 0.0, 4};
  int n = 257;
  ArrayXd x = uniform_axis(0.0, cav.length, n);
  FieldConfig c0;
  c0.xi = VectorXd(4);
  c0.eta = VectorXd(4);
  c0.xi << 0.3, -1.1, 0.0, 0.7;
  c0.eta << 1.0, 0.2, -0.4, 0.0;
  auto [f, ft] = modes_to_field(c0, x, cav);
  FieldConfig c1 = field_to_modes(x, f, ft, cav);
  double rt = std::max((c0.xi - c1.xi).norm(), (c0.eta - c1.eta).norm());

  // K = 2 marginal equals the single-mode Gibbs tomogram
  CavitySpec two{M_PI, 0.0, 2};
  double worst_marg = 0.0;
  for (double X1 : {-0.7, 0.0, 1.1}) {
    double marg = integrate_trapezoid(
        [&](double X2) {
          FieldTomogramCoords c(Eigen::Vector2d(X1, X2), Eigen::Vector2d(0.6, -1.0),
                                Eigen::Vector2d(0.8, 0.5));
          return canonical_field_tomogram(c, 1.7, two);
        },
        -15, 15, 3001);
    worst_marg = std::max(worst_marg, std::abs(marg - gibbs_tomogram(X1, 0.6, 0.8, 1.7, 1.0)));
  }

  // K = 3 product probe against the per-mode quadrature oracle
  CavitySpec three{M_PI, 0.0, 3};
  FieldTomogramCoords c3(VectorXd::Zero(3), VectorXd::Ones(3), VectorXd::Zero(3));
  double got = canonical_field_tomogram(c3, 1.0, three);
  double oracle = 1.0;
  for (int k = 1; k <= 3; ++k)
    oracle *= symplectic_radon(DensityState::gibbs(ModeSpec{{static_cast<double>(k)}, 1.0}),
                               LineCoords::single(0, 1, 0));
  double probe = std::abs(got - oracle);

  res.observed = std::max({worst_spec * 1e6, rt * 0.01, worst_marg, probe});
  res.passed = worst_spec < 1e-14 && rt < 1e-10 && worst_marg < 1e-8 && probe < 1e-8;
  res.detail = "spectrum " + short_num(worst_spec) + ", round trip " + short_num(rt) +
               ", marginal " + short_num(worst_marg) + ", product probe " +
               short_num(probe);
  return res;
}

// --- criterion 7: sampling vs closed-form tomograms (KS) ----------------------

double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    double F = cdf(xs[i]);
    worst = std::max(worst, std::abs((i + 1) / n - F));
    worst = std::max(worst, std::abs(F - i / n));
  }
  return worst;
}

CheckResult check_sample_ks(const FaultFlags& faults) {
  CheckResult res{"sample.ks", false, 0.0, 0.01, ""};
  const int N = 100000;
  double worst = 0.0;

  auto project = [](const std::vector<PhasePoint>& pts, double mu, double nu) {
    std::vector<double> xs;
    xs.reserve(pts.size());
    for (const PhasePoint& p : pts) xs.push_back(mu * p.xi[0] + nu * p.eta[0]);
    return xs;
  };

  {
    auto pts = sample(gibbs1(1, 1), N, 42);
    double ks = ks_distance(project(pts, 1.0, 0.0), [&](double X) {
      double sigma = std::sqrt(1.0 * faults.gibbs_variance_scale);
      return 0.5 * (1.0 + std::erf(X / (sigma * std::sqrt(2.0))));
    });
    worst = std::max(worst, ks);
  }
  {
    auto pts = sample(coherent1(1.0, {1.0, 0.0}), N, 43);
    double ks = ks_distance(project(pts, 0.6, 0.8), [&](double X) {
      double mean = std::sqrt(2.0) * 0.6;
      double sigma = std::sqrt(faults.coherent_variance_scale);  // r = 1
      return 0.5 * (1.0 + std::erf((X - mean) / (sigma * std::sqrt(2.0))));
    });
    worst = std::max(worst, ks);
  }
  {
    auto pts = sample(gl1(1.0, 1), N, 44);
    // numeric CDF of the m = 1 tomogram on the unit line
    GLDescriptor d{1.0, 1};
    int M = 8193;
    double xmax = 12.0;
    ArrayXd grid = uniform_axis(-xmax, xmax, M);
    std::vector<double> cum(M, 0.0);
    double h = grid[1] - grid[0];
    for (int i = 1; i < M; ++i) {
      double a = checked_gl(grid[i - 1], 1, 0, d, faults);
      double b = checked_gl(grid[i], 1, 0, d, faults);
      cum[i] = cum[i - 1] + 0.5 * h * (a + b);
    }
    double ks = ks_distance(project(pts, 1.0, 0.0), [&](double X) {
      if (X <= -xmax) return 0.0;
      if (X >= xmax) return cum[M - 1];
      double f = (X + xmax) / h;
      int i = static_cast<int>(f);
      double t = f - i;
      return cum[i] * (1 - t) + cum[i + 1] * t;
    });
    worst = std::max(worst, ks);
  }
  res.observed = worst;
  res.passed = worst < res.threshold;
  res.detail = "max KS over {gibbs, coherent, gl} at 1e5 seeded samples";
  return res;
}

}  // namespace

std::vector<CheckResult> run_suite(const Options& opts) {
  std::vector<CheckResult> out;
  auto want = [&](const std::string& id) {
    return opts.filter.empty() || id.find(opts.filter) != std::string::npos;
  };
  if (want("radon.closed_forms")) out.push_back(check_radon_closed_forms(opts.faults));
  if (want("gl.charfun")) out.push_back(check_gl_charfun(opts.faults));
  if (want("norm.homogeneity")) out.push_back(check_norm_homogeneity(opts.faults));
  if (want("invert.round_trip")) out.push_back(check_invert_round_trip(opts.faults));
  if (want("evolution.dual")) out.push_back(check_evolve_dual(opts.faults));
  if (want("evolution.fd_order")) out.push_back(check_fd_order(opts.faults));
  if (want("cavity.engine")) out.push_back(check_cavity(opts.faults));
  if (want("sample.ks")) out.push_back(check_sample_ks(opts.faults));
  return out;
}

nlohmann::json report_to_json(const std::vector<CheckResult>& results) {
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& r : results)
    checks.push_back({{"id", r.id},
                      {"passed", r.passed},
                      {"observed", r.observed},
                      {"threshold", r.threshold},
                      {"detail", r.detail}});
  return nlohmann::json{{"checks", checks}, {"all_passed", all_passed(results)}};
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const CheckResult& r : results)
    if (!r.passed) return false;
  return !results.empty();
}

}  // namespace tomo::verify
