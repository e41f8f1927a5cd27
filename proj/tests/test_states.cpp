#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tomo/quadrature.hpp"
#include "tomo/states.hpp"

#include "test_util.hpp"

#include <cmath>

using namespace tomo;
using tomo::testutil::TestRng;

namespace {
const double kInv2Pi = 1.0 / (2.0 * M_PI);

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

TEST_CASE("density evaluation matches the closed forms") {
  CHECK(eval_density(gibbs1(1, 1), PhasePoint::single(0, 0)) ==
        doctest::Approx(kInv2Pi).epsilon(1e-12));
  CHECK(eval_density(gl1(1, 0), PhasePoint::single(0, 0)) ==
        doctest::Approx(kInv2Pi).epsilon(1e-12));
  // GL m=1 on the circle xi^2 + eta^2 = 4: L_1(2)^2 e^{-2} / (2 pi)
  CHECK(eval_density(gl1(1, 1), PhasePoint::single(2.0, 0.0)) ==
        doctest::Approx(std::exp(-2.0) * kInv2Pi).epsilon(1e-12));
  CHECK(eval_density(gl1(1, 1), PhasePoint::single(2.0, 0.0)) ==
        doctest::Approx(0.0215393).epsilon(1e-5));
}

TEST_CASE("GL with m = 0 and coherent with z = 0 reduce to the beta = 1 Gibbs state") {
  TestRng rng(11);
  for (int i = 0; i < 100; ++i) {
    double omega = rng.uniform(0.5, 4.0);
    PhasePoint pt = PhasePoint::single(rng.uniform(-3, 3), rng.uniform(-3, 3));
    double ref = eval_density(gibbs1(1.0, omega), pt);
    CHECK(std::abs(eval_density(gl1(omega, 0), pt) - ref) <= 1e-14 * std::abs(ref));
    CHECK(std::abs(eval_density(coherent1(omega, 0.0), pt) - ref) <= 1e-14 * std::abs(ref));
  }
}

TEST_CASE("product state is the product of its factors") {
  TestRng rng(12);
  DensityState prod = DensityState::product({gibbs1(2, 1), gl1(1.5, 2), coherent1(1, {1, -0.5})});
  for (int i = 0; i < 50; ++i) {
    PhasePoint pt;
    pt.xi = VectorXd::Zero(3);
    pt.eta = VectorXd::Zero(3);
    double ref = 1.0;
    for (int k = 0; k < 3; ++k) {
      pt.xi[k] = rng.uniform(-3, 3);
      pt.eta[k] = rng.uniform(-3, 3);
    }
    ref = eval_density(gibbs1(2, 1), PhasePoint::single(pt.xi[0], pt.eta[0])) *
          eval_density(gl1(1.5, 2), PhasePoint::single(pt.xi[1], pt.eta[1])) *
          eval_density(coherent1(1, {1, -0.5}), PhasePoint::single(pt.xi[2], pt.eta[2]));
    CHECK(std::abs(eval_density(prod, pt) - ref) <= 1e-14 * std::abs(ref));
  }
}

TEST_CASE("evaluation rejects bad input") {
  CHECK_THROWS_AS(eval_density(gibbs1(1, 1), PhasePoint(VectorXd::Zero(2), VectorXd::Zero(2))),
                  std::invalid_argument);
  PhasePoint bad = PhasePoint::single(std::nan(""), 0.0);
  CHECK_THROWS_AS(eval_density(gibbs1(1, 1), bad), std::invalid_argument);
  CHECK_THROWS_AS(DensityState::gibbs(ModeSpec{{1.0}, std::nullopt}), std::invalid_argument);
  CHECK_THROWS_AS(DensityState::gibbs(ModeSpec{{-1.0}, 1.0}), std::invalid_argument);
}

TEST_CASE("total mass is 1 for the analytic zoo") {
  CHECK(total_mass(gibbs1(1, 1)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(total_mass(gl1(1, 3)) == doctest::Approx(1.0).epsilon(1e-8));
  TestRng rng(13);
  for (int i = 0; i < 12; ++i) {
    double omega = rng.uniform(0.5, 4.0);
    double beta = rng.uniform(0.5, 4.0);
    int m = rng.uniform_int(0, 5);
    double zr = rng.uniform(-2, 2), zi = rng.uniform(-2, 2);
    QuadSpec fine = QuadSpec::fine();
    CHECK(total_mass(gibbs1(beta, omega), fine) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(total_mass(gl1(omega, m), fine) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(total_mass(coherent1(omega, {zr, zi}), fine) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("grid density renormalizes and clamps at construction") {
  // Gibbs density scaled by 2 on a grid: constructor restores unit mass.
  int n = 201;
  ArrayXd ax = uniform_axis(-8, 8, n);
  ArrayXXd vals(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      vals(i, j) = 2.0 * kInv2Pi * std::exp(-0.5 * (ax[i] * ax[i] + ax[j] * ax[j]));
  GridDensity g(-8, 8, -8, 8, vals);
  CHECK(g.raw_mass() == doctest::Approx(2.0).epsilon(1e-6));
  DensityState state = DensityState::grid(g);
  CHECK(total_mass(state) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(eval_density(state, PhasePoint::single(0, 0)) == doctest::Approx(kInv2Pi).epsilon(1e-4));
  // outside the extents the density is zero
  CHECK(eval_density(state, PhasePoint::single(9, 0)) == 0.0);
  // audit: raw mass off by more than 1% is rejected when requested
  CHECK_THROWS_AS(GridDensity(-8, 8, -8, 8, vals, true), numerics_error);
}

TEST_CASE("expectations: equipartition, normalization, coherent mean") {
  auto H = [](const PhasePoint& p) { return 0.5 * (p.xi[0] * p.xi[0] + p.eta[0] * p.eta[0]); };
  CHECK(expectation(gibbs1(1, 1), H) == doctest::Approx(1.0).epsilon(1e-6));
  auto one = [](const PhasePoint&) { return 1.0; };
  CHECK(expectation(gl1(1.5, 2), one) == doctest::Approx(1.0).epsilon(1e-8));
  auto xi = [](const PhasePoint& p) { return p.xi[0]; };
  CHECK(expectation(coherent1(1, 1.0), xi) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  // two-mode expectation: <H> of a 2-mode Gibbs state = 2 / beta
  DensityState two = DensityState::gibbs(ModeSpec{{1.0, 2.0}, 0.5});
  auto H2 = [](const PhasePoint& p) {
    return 0.5 * (p.xi[0] * p.xi[0] + p.eta[0] * p.eta[0]) +
           1.0 * (p.xi[1] * p.xi[1] + p.eta[1] * p.eta[1]);
  };
  CHECK(expectation(two, H2) == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("partition function closed form") {
  CHECK(partition_function(ModeSpec{{1.0}, 1.0}) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(partition_function(ModeSpec{{1.0, 2.0}, 2.0}) ==
        doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-14));
  CHECK(partition_function(ModeSpec{{2.0}, 1.0}) == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("sampler moments and determinism") {
  auto s = sample(gibbs1(1, 1), 100000, 42);
  double var = 0.0, mean = 0.0;
  for (const PhasePoint& p : s) mean += p.xi[0];
  mean /= s.size();
  for (const PhasePoint& p : s) var += (p.xi[0] - mean) * (p.xi[0] - mean);
  var /= s.size();
  CHECK(std::abs(var - 1.0) < 0.02);

  auto s2 = sample(gl1(1, 1), 100000, 7);
  double mu = 0.0;
  for (const PhasePoint& p : s2) mu += 0.5 * (p.xi[0] * p.xi[0] + p.eta[0] * p.eta[0]);
  mu /= s2.size();
  CHECK(std::abs(mu - 3.0) < 0.05);  // int u L_1(u)^2 e^{-u} du = 3

  auto a = sample(coherent1(2, {0.5, -1}), 1000, 99);
  auto b = sample(coherent1(2, {0.5, -1}), 1000, 99);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].xi[0] == b[i].xi[0]);
    CHECK(a[i].eta[0] == b[i].eta[0]);
  }
}

TEST_CASE("sampler goodness of fit at the 1e-3 level") {
  const double z999 = 3.090232306167814;  // N(0,1) quantile for 0.999
  for (const DensityState& state :
       {gibbs1(1, 1), gl1(1, 1), gl1(1.5, 3), coherent1(1, {1.0, 0.5})}) {
    auto pts = sample(state, 100000, 2024);
    auto [chi2, dof] = testutil::chi2_gof(pts, mode_profile(state));
    CHECK(dof > 100);
    CHECK(chi2 < testutil::chi2_critical(dof, z999));
  }
}

TEST_CASE("grid sampler agrees with its density") {
  int n = 161;
  ArrayXd ax = uniform_axis(-6, 6, n);
  ArrayXXd vals(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double u = 0.5 * (ax[i] * ax[i] + ax[j] * ax[j]);
      double l = 1.0 - u;
      vals(i, j) = kInv2Pi * l * l * std::exp(-u);
    }
  DensityState state = DensityState::grid(GridDensity(-6, 6, -6, 6, vals));
  auto pts = sample(state, 100000, 5);
  auto [chi2, dof] = testutil::chi2_gof(pts, mode_profile(state));
  CHECK(chi2 < testutil::chi2_critical(dof, 3.090232306167814));
}

TEST_CASE("analytic densities are non-negative everywhere") {
  TestRng rng(14);
  for (int i = 0; i < 2000; ++i) {
    double omega = rng.uniform(0.5, 4.0);
    DensityState st = [&]() -> DensityState {
      switch (i % 3) {
        case 0:
          return gibbs1(rng.uniform(0.5, 4.0), omega);
        case 1:
          return coherent1(omega, {rng.uniform(-2, 2), rng.uniform(-2, 2)});
        default:
          return gl1(omega, rng.uniform_int(0, 8));
      }
    }();
    PhasePoint pt = PhasePoint::single(rng.uniform(-8, 8), rng.uniform(-8, 8));
    CHECK(eval_density(st, pt) >= 0.0);
  }
}

TEST_CASE("expectation rejects integrands the quadrature cannot resolve") {
  // cos(8 pi xi) aliases to a constant on the standard grid (h = 1/4) but
  // not on the fine one: the two levels must disagree
  auto wild = [](const PhasePoint& p) { return std::cos(8.0 * M_PI * p.xi[0]); };
  CHECK_THROWS_AS(expectation(gibbs1(1, 1), wild), numerics_error);
  CHECK_THROWS_AS(
      expectation(DensityState::product({gibbs1(1, 1), gibbs1(1, 1), gibbs1(1, 1)}),
                  [](const PhasePoint&) { return 1.0; }),
      std::invalid_argument);  // dense tensor rule capped at 2 modes
}

TEST_CASE("qp conversions invert and symmetrize the Hamiltonian") {
  ModeSpec spec{{0.5, 3.0}, std::nullopt};
  VectorXd q(2), p(2);
  q << 1.0, -0.3;
  p << 0.2, 0.7;
  PhasePoint pt = phase_point_from_qp(q, p, spec);
  auto [q2, p2] = phase_point_to_qp(pt, spec);
  CHECK((q - q2).norm() < 1e-15);
  CHECK((p - p2).norm() < 1e-15);
  // (1/2)(p^2 + w^2 q^2) = (1/2) w (xi^2 + eta^2) per mode
  for (int k = 0; k < 2; ++k) {
    double w = spec.omegas[k];
    double lhs = 0.5 * (p[k] * p[k] + w * w * q[k] * q[k]);
    double rhs = 0.5 * w * (pt.xi[k] * pt.xi[k] + pt.eta[k] * pt.eta[k]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}
