#include "tomo/analytic.hpp"

#include "tomo/special.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tomo {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void check_line(double mu, double nu) {
  if (mu == 0.0 && nu == 0.0)
    throw std::invalid_argument("tomogram: (mu, nu) = (0, 0)");
}

void check_gl_index(int m) {
  if (m < 0 || m > kMaxLaguerreIndex)
    throw std::invalid_argument("gl: m outside [0, " +
                                std::to_string(kMaxLaguerreIndex) + "]");
}

}  // namespace

double GLDescriptor::sigma(double mu, double nu) const {
  check_line(mu, nu);
  if (!(omega > 0.0)) throw std::invalid_argument("GLDescriptor: omega must be > 0");
  return std::sqrt(2.0 * (mu * mu + nu * nu) / omega);
}

double gibbs_tomogram(double X, double mu, double nu, double beta, double omega) {
  check_line(mu, nu);
  if (!(beta > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("gibbs_tomogram: beta, omega must be > 0");
  double r2 = mu * mu + nu * nu;
  double a = beta * omega;
  return std::sqrt(a / (kTwoPi * r2)) * std::exp(-0.5 * a * X * X / r2);
}

double coherent_tomogram(double X, double mu, double nu, Complex z, double omega) {
  check_line(mu, nu);
  if (!(omega > 0.0)) throw std::invalid_argument("coherent_tomogram: omega must be > 0");
  double r2 = mu * mu + nu * nu;
  double mean = std::sqrt(2.0) * (mu * z.real() + nu * z.imag());
  double d = X - mean;
  return std::sqrt(omega / (kTwoPi * r2)) * std::exp(-0.5 * omega * d * d / r2);
}

double gl_tomogram_core(double X, double sigma, int m) {
  check_gl_index(m);
  if (!(sigma > 0.0)) throw std::invalid_argument("gl_tomogram: sigma must be > 0");
  double t = X / sigma;
  const double log2 = std::log(2.0);
  // log-magnitude terms: log c_s + 2 log|H_2s(t)| - t^2, all terms >= 0.
  std::vector<double> logs;
  logs.reserve(m + 1);
  for (int s = 0; s <= m; ++s) {
    double log_c = -2.0 * m * log2 + log_binomial(2 * (m - s), m - s) +
                   log_binomial(2 * s, s) - 2.0 * s * log2 - log_factorial(2 * s);
    auto [log_h, sign] = hermite_log(2 * s, t);
    (void)sign;  // squared
    logs.push_back(log_c + 2.0 * log_h - t * t);
  }
  double lmax = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(lmax)) return 0.0;
  double sum = 0.0;
  for (double l : logs) sum += std::exp(l - lmax);
  return std::exp(lmax) * sum / (std::sqrt(M_PI) * sigma);
}

double gl_tomogram(double X, double mu, double nu, const GLDescriptor& d) {
  return gl_tomogram_core(X, d.sigma(mu, nu), d.m);
}

namespace {

double gl_y(double K, double mu, double nu, const GLDescriptor& d) {
  check_line(mu, nu);
  if (!(d.omega > 0.0)) throw std::invalid_argument("gl_charfun: omega must be > 0");
  if (!std::isfinite(K)) throw std::invalid_argument("gl_charfun: non-finite K");
  return K * std::sqrt((mu * mu + nu * nu) / d.omega);
}

}  // namespace

double gl_charfun(double K, double mu, double nu, const GLDescriptor& d) {
  check_gl_index(d.m);
  double y = gl_y(K, mu, nu, d);
  double l = laguerre(d.m, 0.5 * y * y);
  return std::exp(-0.5 * y * y) * l * l;
}

double gl_charfun_addition(double K, double mu, double nu, const GLDescriptor& d) {
  check_gl_index(d.m);
  double y = gl_y(K, mu, nu, d);
  double y2 = y * y;
  double sum = 0.0;
  for (int s = 0; s <= d.m; ++s) {
    double c = std::exp(-2.0 * d.m * std::log(2.0) + log_binomial(2 * (d.m - s), d.m - s) +
                        log_binomial(2 * s, s));
    sum += c * laguerre(2 * s, y2);
  }
  return std::exp(-0.5 * y2) * sum;
}

}  // namespace tomo
