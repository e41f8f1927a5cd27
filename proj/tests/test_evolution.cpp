#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/analytic.hpp"
#include "tomo/evolution.hpp"
#include "tomo/fft.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/radon.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace tomo;
using tomo::testutil::TestRng;

namespace {
DensityState gibbs1(double beta, double omega) {
  return DensityState::gibbs(ModeSpec{{omega}, beta});
}
DensityState gl1(double omega, int m) {
  return DensityState::gauss_laguerre(ModeSpec{{omega}, std::nullopt}, {m});
}
DensityState coherent1(double omega, Complex z) {
  return DensityState::coherent(ModeSpec{{omega}, std::nullopt}, {z});
}
}  // namespace

TEST_CASE("flow map: quarter period, full period, energy") {
  ModeSpec spec{{1.0}, std::nullopt};
  PhasePoint p = flow_map(PhasePoint::single(1, 0), M_PI / 2, spec);
  CHECK(p.xi[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p.eta[0] == doctest::Approx(-1.0).epsilon(1e-15));
  PhasePoint q = flow_map(PhasePoint::single(0.3, -0.8), 2 * M_PI, spec);
  CHECK(q.xi[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(q.eta[0] == doctest::Approx(-0.8).epsilon(1e-14));
  TestRng rng(51);
  ModeSpec spec2{{0.7, 2.3}, std::nullopt};
  for (int i = 0; i < 20; ++i) {
    PhasePoint w(VectorXd::Random(2) * 2, VectorXd::Random(2) * 2);
    double t = rng.uniform(-5, 5);
    PhasePoint wt = flow_map(w, t, spec2);
    for (int k = 0; k < 2; ++k) {
      double e0 = spec2.omegas[k] * (w.xi[k] * w.xi[k] + w.eta[k] * w.eta[k]);
      double e1 = spec2.omegas[k] * (wt.xi[k] * wt.xi[k] + wt.eta[k] * wt.eta[k]);
      CHECK(std::abs(e1 - e0) <= 1e-14 * std::max(1.0, e0));
    }
  }
}

TEST_CASE("density transport: stationary states and the coherent rotation law") {
  TestRng rng(52);
  // Gibbs and GL are stationary
  for (double t : {0.3, 1.7}) {
    DensityState g = evolve_density(gibbs1(2, 0.8), t);
    DensityState l = evolve_density(gl1(1.2, 3), t);
    for (int i = 0; i < 20; ++i) {
      PhasePoint pt = PhasePoint::single(rng.uniform(-3, 3), rng.uniform(-3, 3));
      CHECK(eval_density(g, pt) == eval_density(gibbs1(2, 0.8), pt));
      CHECK(eval_density(l, pt) == eval_density(gl1(1.2, 3), pt));
    }
  }
  // coherent: z(t) = e^{-i w t} z(0); spec probe z = 1, t = pi/2 -> z = -i
  DensityState c0 = coherent1(1.0, 1.0);
  DensityState ct = evolve_density(c0, M_PI / 2);
  DensityState want = coherent1(1.0, Complex(0.0, -1.0));
  for (int i = 0; i < 100; ++i) {
    PhasePoint pt = PhasePoint::single(rng.uniform(-4, 4), rng.uniform(-4, 4));
    double a = eval_density(ct, pt), b = eval_density(want, pt);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(a, b) + 1e-300);
    // generic transport route rho0(Phi_{-t} w) agrees with the parametric map
    double g = evolved_density_eval(c0, M_PI / 2, pt);
    CHECK(std::abs(g - b) <= 1e-12 * std::max(g, b) + 1e-300);
  }
  // mass is preserved
  CHECK(total_mass(evolve_density(coherent1(1.3, {0.8, -0.4}), 2.7)) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("grid states transport by lookup rotation") {
  // grid holding a displaced Gaussian, omega = 1
  int n = 201;
  ArrayXd ax = uniform_axis(-8, 8, n);
  ArrayXXd vals(n, n);
  double cx = std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vals(i, j) = 0.5 / M_PI *
                   std::exp(-0.5 * ((ax[i] - cx) * (ax[i] - cx) + ax[j] * ax[j]));
  DensityState g = DensityState::grid(GridDensity(-8, 8, -8, 8, vals), 1.0);
  DensityState gt = evolve_density(g, M_PI / 2);
  // after a quarter period the bump sits at (0, -sqrt(2))
  CHECK(eval_density(gt, PhasePoint::single(0, -cx)) ==
        doctest::Approx(0.5 / M_PI).epsilon(1e-3));
  CHECK(eval_density(gt, PhasePoint::single(cx, 0)) < 0.03);
  // a grid without omega cannot be evolved
  DensityState bare = DensityState::grid(GridDensity(-8, 8, -8, 8, vals));
  CHECK_THROWS_AS(evolve_density(bare, 0.5), std::invalid_argument);
}

TEST_CASE("exact tomogram propagator: periodicity and the coherent law") {
  auto W0 = [](double X, double mu, double nu) {
    return coherent_tomogram(X, mu, nu, {1.0, 0.0}, 1.0);
  };
  auto Wt = evolve_tomogram_exact(W0, 2 * M_PI, 1.0);
  TestRng rng(53);
  for (int i = 0; i < 30; ++i) {
    double X = rng.uniform(-3, 3), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
    CHECK(Wt(X, mu, nu) == doctest::Approx(W0(X, mu, nu)).epsilon(1e-14));
  }
  // Gibbs tomogram is invariant (depends on mu^2 + nu^2 only)
  auto G0 = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1.0, 2.0); };
  auto Gt = evolve_tomogram_exact(G0, 0.77, 2.0);
  for (int i = 0; i < 30; ++i) {
    double X = rng.uniform(-3, 3), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
    CHECK(Gt(X, mu, nu) == doctest::Approx(G0(X, mu, nu)).epsilon(1e-13));
  }
  // W_t equals the tomogram of the rotated coherent state, 1e-10 on random lines
  for (double t : {0.4, 1.3, 2.9}) {
    auto Wt2 = evolve_tomogram_exact(W0, t, 1.0);
    Complex zt = std::polar(1.0, -t) * Complex(1.0, 0.0);
    for (int i = 0; i < 30; ++i) {
      double X = rng.uniform(-3, 3), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
      double want = coherent_tomogram(X, mu, nu, zt, 1.0);
      CHECK(std::abs(Wt2(X, mu, nu) - want) <= 1e-10 * std::max(want, 1e-6));
    }
  }
}

TEST_CASE("dual consistency: Radon of the transported state equals the propagated tomogram") {
  TestRng rng(54);
  std::vector<DensityState> states = {gibbs1(1, 1), coherent1(1.0, {1.0, 0.0}),
                                      coherent1(2.0, {-0.5, 0.8}), gl1(1.0, 2)};
  for (const DensityState& st : states) {
    ModeSpec spec = state_mode_spec(st);
    for (double t : {0.3, 1.0, 2.7}) {
      DensityState st_t = evolve_density(st, t);
      for (int i = 0; i < 17; ++i) {
        LineCoords line = LineCoords::single(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                             rng.uniform(0.1, 2));
        double a = symplectic_radon(st_t, line);
        double b = symplectic_radon(st, rotate_line(line, t, spec));
        CHECK(std::abs(a - b) < 1e-6);
      }
    }
  }
}

TEST_CASE("the propagator satisfies the harmonic tomographic PDE") {
  // d_t W = omega (mu d_nu - nu d_mu) W, residual measured by central
  // differences on the exact propagator.
  double omega = 1.4;
  auto W0 = [](double X, double mu, double nu) {
    return coherent_tomogram(X, mu, nu, {0.7, -0.3}, 1.4);
  };
  TestRng rng(55);
  double h = 1e-4;
  for (int i = 0; i < 25; ++i) {
    double X = rng.uniform(-2, 2), mu = rng.uniform(0.3, 1.5), nu = rng.uniform(0.3, 1.5);
    auto Wp = evolve_tomogram_exact(W0, h, omega);
    auto Wm = evolve_tomogram_exact(W0, -h, omega);
    double dWdt = (Wp(X, mu, nu) - Wm(X, mu, nu)) / (2 * h);
    double dWdnu = (W0(X, mu, nu + h) - W0(X, mu, nu - h)) / (2 * h);
    double dWdmu = (W0(X, mu + h, nu) - W0(X, mu - h, nu)) / (2 * h);
    double rhs = omega * (mu * dWdnu - nu * dWdmu);
    CHECK(std::abs(dWdt - rhs) < 5e-6 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("sampled tomogram propagator matches the analytic rotation") {
  DensityState st = coherent1(1.0, {1.0, 0.0});
  TomogramGrid grid = make_tomogram_grid(st, TomogramGridSpec{64, 1024});
  ModeSpec spec = state_mode_spec(st);
  double t = 0.9;
  TomogramGrid gt = evolve_tomogram_grid(grid, t, spec);
  Complex zt = std::polar(1.0, -t) * Complex(1.0, 0.0);
  const ModeTomogramBlock& blk = gt.modes[0];
  ArrayXd xs = blk.x_axis.nodes();
  double worst = 0.0;
  for (size_t j = 0; j < blk.nodes.size(); j += 7) {
    auto [mu, nu] = blk.nodes[j];
    for (int i = 0; i < blk.x_axis.count; i += 13) {
      double want = coherent_tomogram(xs[i], mu, nu, zt, 1.0);
      worst = std::max(worst, std::abs(blk.values(j, i) - want));
    }
  }
  CHECK(worst < 2e-5);  // angular cubic resampling across 64 rays
  // full period: exact identity of the ray set
  TomogramGrid gp = evolve_tomogram_grid(grid, 2 * M_PI, spec);
  double drift = (gp.modes[0].values - grid.modes[0].values).abs().maxCoeff();
  CHECK(drift < 1e-12);
}

TEST_CASE("finite-difference advection: fixed point, conservation, convergence") {
  double omega = 1.0;

  // Gibbs tomogram is a fixed point (radial in (mu, nu) for each X)
  {
    auto W = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1, 1); };
    ArrayXd xnodes = uniform_axis(-2, 2, 5);
    FdTomogram w0 = sample_fd_tomogram(W, xnodes, 6.0, 97);
    EvolutionConfig cfg;
    cfg.t = 0.5;
    cfg.dt = 0.5 / 64;
    cfg.extent = 6.0;
    cfg.points = 97;
    FdTomogram wt = evolve_tomogram_fd(w0, cfg, omega);
    ArrayXd axis = uniform_axis(-w0.extent, w0.extent, w0.n);
    double worst = 0.0;
    for (int ix = 0; ix < xnodes.size(); ++ix)
      for (int i = 0; i < w0.n; ++i)
        for (int j = 0; j < w0.n; ++j) {
          double r = std::hypot(axis[i], axis[j]);
          if (r > 0.8 * w0.extent || r < 1.5) continue;
          worst = std::max(worst, std::abs(wt.slices[ix](i, j) - w0.slices[ix](i, j)));
        }
    CHECK(worst < 5e-3);  // O(h^2) truncation drift at h = 0.125
  }

  // Normalization is conserved over 1000 steps. The grid is chosen so that
  // every slice carries its full mass: even point counts keep the origin
  // (where sigma_X -> 0) off the grid, and the X window both covers the
  // corner radii and resolves the innermost one. The mass field is then
  // constant, and the sweeps preserve constants exactly.
  {
    auto W = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1, 1); };
    int nx = 352;
    ArrayXd xnodes = uniform_axis(-38.2, 38.2, nx);
    int n = 16;
    FdTomogram w0 = sample_fd_tomogram(W, xnodes, 3.0, n);
    EvolutionConfig cfg;
    cfg.extent = 3.0;
    cfg.points = n;
    double h = cfg.grid_step();
    cfg.dt = 0.85 * h / (omega * cfg.extent);
    cfg.t = 1000 * cfg.dt;
    FdTomogram wt = evolve_tomogram_fd(w0, cfg, omega);
    ArrayXd wx = trapezoid_weights(nx, xnodes[1] - xnodes[0]);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double m0 = 0.0, m1 = 0.0;
        for (int ix = 0; ix < nx; ++ix) {
          m0 += wx[ix] * w0.slices[ix](i, j);
          m1 += wx[ix] * wt.slices[ix](i, j);
        }
        worst = std::max(worst, std::abs(m1 - m0));
      }
    CHECK(worst < 1e-6);
  }

  // second-order convergence against the exact propagator
  {
    auto W = [](double X, double mu, double nu) {
      return coherent_tomogram(X, mu, nu, {1.0, 0.0}, 1.0);
    };
    double t = 0.5;
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
    double e1 = run(65), e2 = run(129);
    double order = std::log2(e1 / e2);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }

  // CFL violations are rejected
  {
    auto W = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1, 1); };
    FdTomogram w0 = sample_fd_tomogram(W, uniform_axis(-1, 1, 3), 6.0, 33);
    EvolutionConfig cfg;
    cfg.extent = 6.0;
    cfg.points = 33;
    cfg.dt = 1.0;  // far beyond the bound
    cfg.t = 1.0;
    CHECK_THROWS_AS(evolve_tomogram_fd(w0, cfg, omega), std::invalid_argument);
  }

  // opt-in boundary-leakage gate: Gibbs tomogram rims are O(1/r), so a
  // finite tolerance rejects them while compact data passes
  {
    auto W = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1, 1); };
    FdTomogram w0 = sample_fd_tomogram(W, uniform_axis(-1, 1, 3), 6.0, 33);
    EvolutionConfig cfg;
    cfg.extent = 6.0;
    cfg.points = 33;
    cfg.dt = 0.01;
    cfg.t = 0.1;
    cfg.boundary_tolerance = 1e-10;
    CHECK_THROWS_AS(evolve_tomogram_fd(w0, cfg, omega), numerics_error);
    auto bump = [](double X, double mu, double nu) {
      double d2 = (mu - 2) * (mu - 2) + nu * nu + X * X;
      return std::exp(-4.0 * d2);
    };
    FdTomogram b0 = sample_fd_tomogram(bump, uniform_axis(-1, 1, 3), 6.0, 33);
    CHECK_NOTHROW(evolve_tomogram_fd(b0, cfg, omega));
  }
}

TEST_CASE("spectral inverse derivative") {
  int n = 256;
  SpectralFunction1D f;
  f.x0 = 0.0;
  f.length = 2 * M_PI;
  f.values = ArrayXd(n);
  for (int j = 0; j < n; ++j) f.values[j] = std::sin(f.x0 + f.length * j / n);
  SpectralFunction1D g = inverse_partial_X(f);
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    worst = std::max(worst, std::abs(g.values[j] + std::cos(f.length * j / n)));
  CHECK(worst < 1e-10);

  // cos(3x) -> sin(3x)/3
  for (int j = 0; j < n; ++j) f.values[j] = std::cos(3.0 * f.length * j / n);
  g = inverse_partial_X(f);
  worst = 0.0;
  for (int j = 0; j < n; ++j)
    worst = std::max(worst, std::abs(g.values[j] - std::sin(3.0 * f.length * j / n) / 3.0));
  CHECK(worst < 1e-10);

  // d/dX of the output reproduces the input (spectral derivative)
  {
    for (int j = 0; j < n; ++j)
      f.values[j] = std::sin(2.0 * M_PI * j / n) + 0.5 * std::cos(10.0 * M_PI * j / n);
    g = inverse_partial_X(f);
    std::vector<Complex> c(n);
    for (int j = 0; j < n; ++j) c[j] = g.values[j];
    fft_inplace(c, false);
    for (int m = 0; m < n; ++m) {
      double K = (m <= n / 2 ? m : m - n) * 2.0 * M_PI / f.length;
      c[m] *= Complex(0.0, K);
    }
    fft_inplace(c, true);
    worst = 0.0;
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(c[j].real() - f.values[j]));
    CHECK(worst < 1e-10);
  }

  // constant (nonzero-mean) input hits the 1/(iK) pole
  f.values = ArrayXd::Constant(n, 0.7);
  CHECK_THROWS_AS(inverse_partial_X(f), std::invalid_argument);
  f.values = ArrayXd(100);  // not a power of two
  CHECK_THROWS_AS(inverse_partial_X(f), std::invalid_argument);
}
