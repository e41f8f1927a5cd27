#pragma once

#include "tomo/radon.hpp"
#include "tomo/states.hpp"
#include "tomo/types.hpp"

#include <functional>
#include <limits>

namespace tomo {

/// Exact harmonic flow: per mode xi(t) = xi cos(wt) + eta sin(wt),
/// eta(t) = eta cos(wt) - xi sin(wt).
PhasePoint flow_map(const PhasePoint& pt, double t, const ModeSpec& spec);

/// ModeSpec recovered from a state (every mode must carry a frequency).
ModeSpec state_mode_spec(const DensityState& state);

/// Exact Liouville transport rho_t = rho_0 o Phi_{-t}, returned as a state:
/// Gibbs and Gauss-Laguerre are stationary, coherent states map to
/// z(t) = exp(-i omega t) z, grid states accumulate a lookup rotation.
DensityState evolve_density(const DensityState& state, double t);

/// The same transport evaluated generically as rho_0(flow_map(w, -t));
/// reference route for checking the parametric maps above.
double evolved_density_eval(const DensityState& state, double t, const PhasePoint& pt);

/// Exact tomogram propagator for one mode:
/// W_t(X, mu, nu) = W_0(X, mu cos(wt) - nu sin(wt), mu sin(wt) + nu cos(wt)).
/// The rotation direction is pinned by the dual-consistency tests against
/// Radon(evolve_density).
std::function<double(double, double, double)> evolve_tomogram_exact(
    std::function<double(double, double, double)> W0, double t, double omega);

/// Line coordinates seen by the initial tomogram after time t (per mode).
LineCoords rotate_line(const LineCoords& line, double t, const ModeSpec& spec);

/// Exact propagation of a sampled tomogram: per-mode angular rotation of the
/// ray set with periodic cubic resampling (X flips sign when a ray folds
/// across pi).
TomogramGrid evolve_tomogram_grid(const TomogramGrid& grid, double t, const ModeSpec& spec);

// ---------------------------------------------------------------------------
// Finite-difference solver in the (mu, nu) plane

struct EvolutionConfig {
  double t = 1.0;
  double dt = 0.005;
  double extent = 6.0;  // (mu, nu) in [-extent, extent]^2
  int points = 129;     // nodes per side
  /// When finite, initial rim values above this bound are rejected
  /// ("boundary leakage"). Normalized tomograms decay only like 1/r in
  /// (mu, nu), so the gate is opt-in; audits should stay on the interior.
  double boundary_tolerance = std::numeric_limits<double>::infinity();

  double grid_step() const { return 2.0 * extent / (points - 1); }
};

/// W sampled on X slices over a square (mu, nu) grid; X is parametric for
/// the harmonic advection.
struct FdTomogram {
  ArrayXd x_nodes;
  double extent = 6.0;
  int n = 0;
  std::vector<ArrayXXd> slices;  // slices[ix](i, j) = W(x_nodes[ix], mu_i, nu_j)
};

FdTomogram sample_fd_tomogram(const std::function<double(double, double, double)>& W,
                              const ArrayXd& x_nodes, double extent, int n);

/// Explicit advection of d_t W = omega (mu d_nu - nu d_mu) W: Strang-split
/// Beam-Warming sweeps (second-order upwind in space, second order in time).
/// Enforces the CFL bound omega * extent * dt / h <= 0.9.
FdTomogram evolve_tomogram_fd(const FdTomogram& w0, const EvolutionConfig& cfg,
                              double omega);

// ---------------------------------------------------------------------------
// Spectral inverse-derivative operator

/// Real function on a uniform periodic grid: x_j = x0 + j * length / n,
/// j = 0 .. n-1, n a power of two.
struct SpectralFunction1D {
  double x0 = 0.0;
  double length = 2.0 * M_PI;
  ArrayXd values;
};

/// [d/dX]^{-1}: divide Fourier coefficients by iK. Requires zero mean (the
/// K = 0 pole); the Nyquist coefficient is dropped.
SpectralFunction1D inverse_partial_X(const SpectralFunction1D& f);

}  // namespace tomo
