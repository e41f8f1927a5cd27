#include "tomo/kg_cavity.hpp"

#include "tomo/analytic.hpp"
#include "tomo/evolution.hpp"
#include "tomo/quadrature.hpp"

#include <cmath>

namespace tomo {

std::vector<double> spectrum(const CavitySpec& cavity) {
  cavity.validate();
  std::vector<double> omegas(cavity.truncation);
  for (int k = 1; k <= cavity.truncation; ++k) {
    double kappa = k * M_PI / cavity.length;
    omegas[k - 1] = std::sqrt(kappa * kappa + cavity.mass * cavity.mass);
  }
  return omegas;
}

double eigenfunction(const CavitySpec& cavity, int k, double x) {
  cavity.validate();
  if (k < 1) throw std::invalid_argument("eigenfunction: k starts at 1");
  return std::sqrt(2.0 / cavity.length) * std::sin(k * M_PI * x / cavity.length);
}

ModeSpec cavity_mode_spec(const CavitySpec& cavity, std::optional<double> beta) {
  ModeSpec spec;
  spec.omegas = spectrum(cavity);
  spec.beta = beta;
  spec.validate();
  return spec;
}

namespace {

void check_field_grid(const ArrayXd& x, const ArrayXd& phi, const CavitySpec& cavity) {
  int n = static_cast<int>(x.size());
  if (n < 3 || phi.size() != n)
    throw std::invalid_argument("field grid: need matching x/phi with >= 3 nodes");
  double h = x[1] - x[0];
  if (std::abs(x[0]) > 1e-12 * cavity.length ||
      std::abs(x[n - 1] - cavity.length) > 1e-12 * cavity.length)
    throw std::invalid_argument("field grid: x must span [0, L]");
  for (int i = 1; i < n; ++i)
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * h)
      throw std::invalid_argument("field grid: x must be uniform");
  // K-th mode resolved by at least 8 points per wavelength: wavelength
  // 2L/K, spacing L/(n-1) -> n-1 >= 4K.
  if (n - 1 < 4 * cavity.truncation)
    throw std::invalid_argument("field grid: too coarse for mode K (need >= 8 points per "
                                "wavelength)");
}

void check_dirichlet(const ArrayXd& phi, const char* name) {
  double scale = std::max(1.0, phi.abs().maxCoeff());
  int n = static_cast<int>(phi.size());
  if (std::abs(phi[0]) > 1e-9 * scale || std::abs(phi[n - 1]) > 1e-9 * scale)
    throw std::invalid_argument(std::string("field grid: ") + name +
                                " violates the Dirichlet boundary");
}

}  // namespace

FieldConfig field_to_modes(const ArrayXd& x, const ArrayXd& phi, const ArrayXd& phi_t,
                           const CavitySpec& cavity) {
  cavity.validate();
  check_field_grid(x, phi, cavity);
  if (phi_t.size() != x.size())
    throw std::invalid_argument("field_to_modes: phi_t size mismatch");
  check_dirichlet(phi, "phi");
  check_dirichlet(phi_t, "phi_t");
  int n = static_cast<int>(x.size());
  double h = x[1] - x[0];
  ArrayXd w = trapezoid_weights(n, h);
  std::vector<double> omegas = spectrum(cavity);
  FieldConfig cfg;
  cfg.xi = VectorXd(cavity.truncation);
  cfg.eta = VectorXd(cavity.truncation);
  for (int k = 1; k <= cavity.truncation; ++k) {
    double pk = 0.0, pt = 0.0;
    for (int i = 0; i < n; ++i) {
      double e = eigenfunction(cavity, k, x[i]);
      pk += w[i] * phi[i] * e;
      pt += w[i] * phi_t[i] * e;
    }
    double sq = std::sqrt(omegas[k - 1]);
    cfg.xi[k - 1] = sq * pk;       // B^{1/2} phi
    cfg.eta[k - 1] = pt / sq;      // B^{-1/2} phi_t
  }
  return cfg;
}

std::pair<ArrayXd, ArrayXd> modes_to_field(const FieldConfig& cfg, const ArrayXd& x,
                                           const CavitySpec& cavity) {
  cavity.validate();
  if (cfg.xi.size() != cavity.truncation || cfg.eta.size() != cavity.truncation)
    throw std::invalid_argument("modes_to_field: coefficient length mismatch");
  std::vector<double> omegas = spectrum(cavity);
  ArrayXd phi = ArrayXd::Zero(x.size());
  ArrayXd phi_t = ArrayXd::Zero(x.size());
  for (int k = 1; k <= cavity.truncation; ++k) {
    double sq = std::sqrt(omegas[k - 1]);
    double ck = cfg.xi[k - 1] / sq;   // phi_k
    double dk = cfg.eta[k - 1] * sq;  // phi_t,k
    for (int i = 0; i < x.size(); ++i) {
      double e = eigenfunction(cavity, k, x[i]);
      phi[i] += ck * e;
      phi_t[i] += dk * e;
    }
  }
  return {phi, phi_t};
}

std::pair<double, double> field_hamiltonian(const FieldConfig& cfg, const CavitySpec& cavity) {
  cavity.validate();
  if (cfg.xi.size() != cavity.truncation || cfg.eta.size() != cavity.truncation)
    throw std::invalid_argument("field_hamiltonian: coefficient length mismatch");
  std::vector<double> omegas = spectrum(cavity);
  double H = 0.0, U = 0.0;
  for (int k = 0; k < cavity.truncation; ++k) {
    U += 0.5 * omegas[k] * cfg.xi[k] * cfg.xi[k];
    H += 0.5 * omegas[k] * (cfg.xi[k] * cfg.xi[k] + cfg.eta[k] * cfg.eta[k]);
  }
  return {H, U};
}

double field_potential_on_grid(const ArrayXd& x, const ArrayXd& phi, const CavitySpec& cavity) {
  cavity.validate();
  check_field_grid(x, phi, cavity);
  check_dirichlet(phi, "phi");
  int n = static_cast<int>(x.size());
  double h = x[1] - x[0];
  double m2 = cavity.mass * cavity.mass;
  double sum = 0.0;
  for (int i = 1; i < n - 1; ++i) {
    double lap = (phi[i + 1] - 2.0 * phi[i] + phi[i - 1]) / (h * h);
    sum += phi[i] * (-lap + m2 * phi[i]);
  }
  return 0.5 * sum * h;  // endpoints vanish under Dirichlet
}

double log_canonical_field_tomogram(const FieldTomogramCoords& coords, double beta,
                                    const CavitySpec& cavity) {
  cavity.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("canonical_field_tomogram: beta must be > 0");
  if (coords.dim() != cavity.truncation)
    throw std::invalid_argument("canonical_field_tomogram: coordinate length != K");
  coords.validate();
  std::vector<double> omegas = spectrum(cavity);
  double log_w = 0.0;
  for (int k = 0; k < cavity.truncation; ++k) {
    double r2 = coords.mu[k] * coords.mu[k] + coords.nu[k] * coords.nu[k];
    double a = beta * omegas[k];
    log_w += 0.5 * std::log(a / (2.0 * M_PI * r2)) - 0.5 * a * coords.X[k] * coords.X[k] / r2;
  }
  return log_w;
}

double canonical_field_tomogram(const FieldTomogramCoords& coords, double beta,
                                const CavitySpec& cavity) {
  return std::exp(log_canonical_field_tomogram(coords, beta, cavity));
}

double optical_field_tomogram(const VectorXd& xtilde, double beta, const CavitySpec& cavity) {
  cavity.validate();
  if (!(beta > 0.0)) throw std::invalid_argument("optical_field_tomogram: beta must be > 0");
  if (xtilde.size() != cavity.truncation)
    throw std::invalid_argument("optical_field_tomogram: length != K");
  int K = cavity.truncation;
  return std::exp(-xtilde.squaredNorm() - 0.5 * K * std::log(M_PI));
}

double log_mode_normalization(double beta, const CavitySpec& cavity) {
  cavity.validate();
  double acc = 0.0;
  for (double w : spectrum(cavity)) acc += std::log(0.5 * beta * w);
  return acc;
}

TomogramGrid truncated_field_evolution(const TomogramGrid& grid, double t,
                                       const CavitySpec& cavity) {
  return evolve_tomogram_grid(grid, t, cavity_mode_spec(cavity));
}

}  // namespace tomo
