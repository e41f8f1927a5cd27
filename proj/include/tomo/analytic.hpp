#pragma once

#include "tomo/types.hpp"

namespace tomo {

/// Line-dependent data of a single Gauss-Laguerre mode. The Gaussian width
/// of its tomogram is sigma = sqrt(2 (mu^2 + nu^2) / omega).
struct GLDescriptor {
  double omega = 1.0;
  int m = 0;

  double sigma(double mu, double nu) const;
};

/// Tomogram of the canonical ensemble (one mode):
/// sqrt(beta omega / (2 pi r^2)) exp(-beta omega X^2 / (2 r^2)).
double gibbs_tomogram(double X, double mu, double nu, double beta, double omega);

/// Tomogram of the normalized coherent-like state: a Gaussian in X with mean
/// sqrt(2) (mu Re z + nu Im z) and variance (mu^2 + nu^2) / omega. The
/// sqrt(2) in the mean follows from <xi> = sqrt(2) Re z of the normalized
/// density and is pinned against the quadrature oracle in the tests.
double coherent_tomogram(double X, double mu, double nu, Complex z, double omega);

/// Gauss-Laguerre tomogram. The even-Hermite series is accumulated in log
/// magnitude (all terms are positive), largest term first.
double gl_tomogram(double X, double mu, double nu, const GLDescriptor& d);

/// Same series with sigma supplied directly; gl_tomogram forwards here with
/// sigma = d.sigma(mu, nu). The split exposes the width constant to the
/// verification canary.
double gl_tomogram_core(double X, double sigma, int m);

/// Characteristic function of the GL tomogram in the squared-Laguerre form
/// e^{-y^2/2} [L_m(y^2/2)]^2 with y = K sqrt(mu^2 + nu^2) / sqrt(omega).
double gl_charfun(double K, double mu, double nu, const GLDescriptor& d);

/// The Laguerre-addition expansion of the same characteristic function:
/// e^{-y^2/2} 2^{-2m} sum_s C(2(m-s), m-s) C(2s, s) L_{2s}(y^2).
double gl_charfun_addition(double K, double mu, double nu, const GLDescriptor& d);

}  // namespace tomo
