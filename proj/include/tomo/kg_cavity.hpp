#pragma once

#include "tomo/radon.hpp"
#include "tomo/types.hpp"

namespace tomo {

/// 1D Dirichlet cavity for the real Klein-Gordon field: B = sqrt(-Lap + m^2)
/// on (0, L), truncated to the first K modes.
struct CavitySpec {
  double length = M_PI;
  double mass = 0.0;
  int truncation = 16;

  void validate() const {
    if (!(length > 0.0)) throw std::invalid_argument("CavitySpec: length must be > 0");
    if (mass < 0.0) throw std::invalid_argument("CavitySpec: mass must be >= 0");
    if (truncation < 1) throw std::invalid_argument("CavitySpec: truncation must be >= 1");
  }
};

/// omega_k = sqrt((k pi / L)^2 + mass^2), k = 1..K; strictly increasing and
/// nondegenerate (positive even at mass = 0 under Dirichlet conditions).
std::vector<double> spectrum(const CavitySpec& cavity);

/// Orthonormal eigenfunction Phi_k(x) = sqrt(2/L) sin(k pi x / L), k >= 1.
double eigenfunction(const CavitySpec& cavity, int k, double x);

/// ModeSpec over the truncated spectrum.
ModeSpec cavity_mode_spec(const CavitySpec& cavity,
                          std::optional<double> beta = std::nullopt);

/// Symmetric mode coefficients of a field configuration:
/// xi = B^{1/2} phi, eta = B^{-1/2} phi_t (spectrally, per mode).
struct FieldConfig {
  VectorXd xi;
  VectorXd eta;
};

/// Project sampled fields onto the eigenmodes (trapezoid inner products on a
/// uniform x grid over [0, L] including the endpoints, which must be ~0).
FieldConfig field_to_modes(const ArrayXd& x, const ArrayXd& phi, const ArrayXd& phi_t,
                           const CavitySpec& cavity);

/// Synthesize (phi, phi_t) from mode coefficients on an x grid.
std::pair<ArrayXd, ArrayXd> modes_to_field(const FieldConfig& cfg, const ArrayXd& x,
                                           const CavitySpec& cavity);

/// (H, U): H = (1/2) sum omega_k (xi_k^2 + eta_k^2), U = (1/2) sum omega_k xi_k^2.
std::pair<double, double> field_hamiltonian(const FieldConfig& cfg, const CavitySpec& cavity);

/// The potential (1/2) int phi (-Lap + m^2) phi dx evaluated on the grid with
/// a central-difference Laplacian; agrees with the spectral U to O(h^2).
double field_potential_on_grid(const ArrayXd& x, const ArrayXd& phi, const CavitySpec& cavity);

/// Per-mode line coordinates of a field tomogram (same shape as LineCoords).
using FieldTomogramCoords = LineCoords;

/// Tomogram of the canonical (Gibbs) field state at the truncation K:
/// product over modes of single-mode Gibbs tomograms, accumulated in log
/// space.
double canonical_field_tomogram(const FieldTomogramCoords& coords, double beta,
                                const CavitySpec& cavity);
double log_canonical_field_tomogram(const FieldTomogramCoords& coords, double beta,
                                    const CavitySpec& cavity);

/// Optical normal form of the canonical field tomogram with the truncated
/// normalization N_K = pi^{-K/2}: N_K exp(-sum xtilde_k^2). The arguments
/// absorb beta and omega: xtilde_k = sqrt(beta omega_k / 2) X_k / r_k.
double optical_field_tomogram(const VectorXd& xtilde, double beta, const CavitySpec& cavity);

/// sum_k log(beta omega_k / 2): the K-dependent part of the mode
/// normalization, recorded in output metadata for truncation studies.
double log_mode_normalization(double beta, const CavitySpec& cavity);

/// Free-field tomographic evolution at finite truncation: per-mode ray
/// rotation with the cavity spectrum.
TomogramGrid truncated_field_evolution(const TomogramGrid& grid, double t,
                                       const CavitySpec& cavity);

}  // namespace tomo
