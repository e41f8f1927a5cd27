#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/analytic.hpp"
#include "tomo/fft.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/radon.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace tomo;
using tomo::testutil::TestRng;

TEST_CASE("gibbs tomogram closed form and homogeneity") {
  CHECK(gibbs_tomogram(0, 1, 0, 1, 1) == doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(gibbs_tomogram(1, 1, 0, 1, 1) == doctest::Approx(0.2419707245).epsilon(1e-9));
  // scaling (X, mu, nu) by 2 halves the value
  TestRng rng(31);
  for (int i = 0; i < 20; ++i) {
    double X = rng.uniform(-2, 2), mu = rng.uniform(-2, 2), nu = rng.uniform(0.2, 2);
    double beta = rng.uniform(0.5, 3), omega = rng.uniform(0.5, 3);
    double a = gibbs_tomogram(2 * X, 2 * mu, 2 * nu, beta, omega);
    double b = gibbs_tomogram(X, mu, nu, beta, omega);
    CHECK(std::abs(2 * a - b) <= 1e-13 * b);
  }
  CHECK_THROWS_AS(gibbs_tomogram(0, 0, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gibbs_tomogram(0, 1, 0, -1, 1), std::invalid_argument);
}

TEST_CASE("coherent tomogram: reduction, mean and normalization") {
  TestRng rng(32);
  for (int i = 0; i < 50; ++i) {
    double X = rng.uniform(-3, 3), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
    double ref = gibbs_tomogram(X, mu, nu, 1.0, 1.7);
    CHECK(std::abs(coherent_tomogram(X, mu, nu, 0.0, 1.7) - ref) <= 1e-14 * ref);
  }
  // peak sits at the projected mean sqrt(2) Re z on the (1, 0) line
  Complex z{1.0, 0.0};
  double peak = std::sqrt(2.0);
  CHECK(coherent_tomogram(peak, 1, 0, z, 1.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(coherent_tomogram(peak + 0.1, 1, 0, z, 1.0) < coherent_tomogram(peak, 1, 0, z, 1.0));
  // unit mass in X
  double mass = integrate_trapezoid(
      [&](double X) { return coherent_tomogram(X, 0.8, -0.6, {0.7, -1.1}, 2.0); }, -20, 20,
      4001);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("GL tomogram: m = 0 reduction and the m = 1 value") {
  TestRng rng(33);
  for (int i = 0; i < 30; ++i) {
    double X = rng.uniform(-3, 3), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
    double omega = rng.uniform(0.5, 3);
    double ref = gibbs_tomogram(X, mu, nu, 1.0, omega);
    CHECK(std::abs(gl_tomogram(X, mu, nu, {omega, 0}) - ref) <= 1e-13 * ref);
  }
  // m = 1, omega = 1, line (0, 1, 0): sigma = sqrt(2), X = 0 -> 0.75/sqrt(2 pi)
  CHECK(gl_tomogram(0, 1, 0, {1.0, 1}) ==
        doctest::Approx(0.75 / std::sqrt(2.0 * M_PI)).epsilon(1e-12));
  CHECK(gl_tomogram(0, 1, 0, {1.0, 1}) == doctest::Approx(0.2992067).epsilon(1e-6));
  CHECK_THROWS_AS(gl_tomogram(0, 1, 0, {1.0, 33}), std::invalid_argument);
}

TEST_CASE("GL tomogram: normalization, parity, positivity, large m") {
  for (int m : {1, 3, 8, 32}) {
    GLDescriptor d{1.3, m};
    double sigma = d.sigma(0.9, -0.7);
    double lim = 10.0 * sigma * std::sqrt(m + 1.0);
    double mass = integrate_trapezoid(
        [&](double X) { return gl_tomogram(X, 0.9, -0.7, d); }, -lim, lim, 8001);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
  }
  TestRng rng(34);
  for (int i = 0; i < 10000; ++i) {
    GLDescriptor d{rng.uniform(0.5, 3.0), rng.uniform_int(0, 10)};
    double X = rng.uniform(-8, 8), mu = rng.uniform(-2, 2), nu = rng.uniform(0.1, 2);
    double w = gl_tomogram(X, mu, nu, d);
    CHECK(w >= 0.0);
    CHECK(gl_tomogram(-X, mu, nu, d) == w);  // even Hermite series: exact parity
  }
}

TEST_CASE("analytic tomograms satisfy exact homogeneity") {
  std::vector<HomogeneityProbe> probes;
  TestRng rng(35);
  for (double lambda : {-2.0, -1.0, 0.5, 2.0})
    for (int i = 0; i < 10; ++i)
      probes.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0.1, 2), lambda});
  auto gibbs = [](double X, double mu, double nu) { return gibbs_tomogram(X, mu, nu, 1.5, 0.8); };
  auto coh = [](double X, double mu, double nu) {
    return coherent_tomogram(X, mu, nu, {0.4, 0.9}, 1.2);
  };
  auto gl = [](double X, double mu, double nu) { return gl_tomogram(X, mu, nu, {1.0, 4}); };
  CHECK(homogeneity_residual(gibbs, probes) < 1e-12);
  CHECK(homogeneity_residual(coh, probes) < 1e-12);
  CHECK(homogeneity_residual(gl, probes) < 1e-12);
}

TEST_CASE("GL characteristic function: values and the addition-formula form") {
  GLDescriptor d1{1.0, 1};
  CHECK(gl_charfun(0, 1, 0, d1) == 1.0);
  CHECK(gl_charfun_addition(0, 1, 0, d1) == doctest::Approx(1.0).epsilon(1e-14));
  // y^2/2 = 1 (K = sqrt(2) on the unit line): L_1(1) = 0
  CHECK(gl_charfun(std::sqrt(2.0), 1, 0, d1) == doctest::Approx(0.0).epsilon(1e-14));

  // The squared-Laguerre and addition forms agree to 1e-10 relative over
  // y in [0, 20] for m <= 10; the 1e-13 term is the round-off floor of the
  // addition sum near the zeros of L_m.
  for (int m = 0; m <= 10; ++m) {
    GLDescriptor d{1.0, m};
    for (double y = 0.0; y <= 20.0; y += 0.01) {
      double a = gl_charfun(y, 1, 0, d);  // unit line, omega 1: y = K
      double b = gl_charfun_addition(y, 1, 0, d);
      CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), std::abs(b)) + 1e-13);
      CHECK(std::abs(a - b) <= 1e-10);  // characteristic functions are bounded by 1
    }
  }
}

TEST_CASE("FFT of the GL tomogram reproduces the characteristic function") {
  // chi(K) = int W(X) e^{iKX} dX, checked for m <= 5 on the unit line.
  for (int m = 0; m <= 5; ++m) {
    GLDescriptor d{1.0, m};
    int n = 1 << 14;
    double L = 80.0;  // X in [-L/2, L/2)
    double h = L / n;
    std::vector<Complex> a(n);
    for (int j = 0; j < n; ++j) {
      double X = -0.5 * L + j * h;
      a[j] = gl_tomogram(X, 1, 0, d);
    }
    fft_inplace(a, true);  // e^{+i 2 pi j k / n} convention, scaled by 1/n
    // chi at K_k = 2 pi k / L: chi = n h e^{i K x0} a_k with x0 = -L/2;
    // k <= 180 covers K up to ~14, past the charfun support for m <= 5
    for (int k = 0; k <= 180; ++k) {
      double K = 2.0 * M_PI * k / L;
      Complex chi = static_cast<double>(n) * h * std::polar(1.0, -0.5 * L * K) * a[k];
      CHECK(std::abs(chi.imag()) < 1e-9);
      CHECK(std::abs(chi.real() - gl_charfun(K, 1, 0, d)) < 1e-6);
    }
  }
}
