#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/special.hpp"

#include <cmath>

using namespace tomo;

TEST_CASE("laguerre small orders") {
  CHECK(laguerre(0, 3.7) == 1.0);
  CHECK(laguerre(1, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));
  // L_2(x) = 1 - 2x + x^2/2
  CHECK(laguerre(2, 1.5) == doctest::Approx(1.0 - 3.0 + 1.125).epsilon(1e-14));
  CHECK_THROWS_AS(laguerre(65, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(laguerre(-1, 1.0), std::invalid_argument);
}

TEST_CASE("hermite small orders and log form") {
  CHECK(hermite(2, 0.0) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(hermite(3, 1.0) == doctest::Approx(8.0 - 12.0).epsilon(1e-14));
  for (int n : {0, 1, 2, 5, 10, 17}) {
    for (double x : {-3.0, -0.5, 0.2, 4.0}) {
      auto [lg, sign] = hermite_log(n, x);
      double ref = hermite(n, x);
      if (ref == 0.0) continue;
      CHECK(sign == (ref > 0 ? 1 : -1));
      CHECK(lg == doctest::Approx(std::log(std::abs(ref))).epsilon(1e-12));
    }
  }
  // beyond plain-double range: H_64 at large argument stays representable in log form
  auto [lg, sign] = hermite_log(64, 4.0e4);
  CHECK(std::isfinite(lg));
  CHECK(sign != 0);
  CHECK(lg > 709.0);  // the value itself would overflow a double
}

TEST_CASE("bessel_j0 against the standard library") {
  CHECK(bessel_j0(0.0) == 1.0);
  for (double x = 0.0; x <= 40.0; x += 0.137)
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 2e-9);
  CHECK(bessel_j0(-5.0) == bessel_j0(5.0));
}

TEST_CASE("log binomial and factorial") {
  CHECK(std::exp(log_binomial(10, 3)) == doctest::Approx(120.0).epsilon(1e-12));
  CHECK(std::exp(log_factorial(5)) == doctest::Approx(120.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_binomial(3, 5), std::invalid_argument);
}
