#pragma once

#include "tomo/states.hpp"
#include "tomo/types.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace tomo {

// ---------------------------------------------------------------------------
// Forward transforms

/// Symplectic tomogram W(X, mu, nu) of a per-mode factorized state: exact
/// arclength line integral per mode (Gauss-Legendre), divided by
/// sqrt(mu_k^2 + nu_k^2), multiplied over modes.
double symplectic_radon(const DensityState& state, const LineCoords& line,
                        const QuadSpec& quad = QuadSpec::standard());

/// Same quantity through the characteristic-function route: chi(k) on a
/// k-grid (Hankel/Bessel reduction for radial states, dense grid sum for
/// gridded ones), then a 1D inverse Fourier integral in k. Kept free of any
/// line-integral code so the two routes cross-check each other.
double fourier_slice_radon(const DensityState& state, const LineCoords& line,
                           const QuadSpec& quad = QuadSpec::standard());

/// Center-of-mass tomogram: average of rho over the single hyperplane
/// X = mu . xi + nu . eta. n = 1 delegates to symplectic_radon (the
/// definitions coincide); n in {2, 3} uses a dense tensor rule on the
/// hyperplane (cost gate).
double cm_radon(const DensityState& state, const CmCoords& cm,
                const QuadSpec& quad = QuadSpec::standard());

/// Generalized Radon transform over the level set Phi = X0 of a single-mode
/// state: marching-squares contour extraction with the 1/|grad Phi| co-area
/// weight.
struct GeneralizedRadonResult {
  double value = 0.0;
  bool empty_level_set = false;
};
GeneralizedRadonResult generalized_radon(
    const DensityState& state, const std::function<double(double, double)>& phi,
    double X0, const QuadSpec& quad = QuadSpec::standard(),
    const std::function<std::pair<double, double>(double, double)>& grad_phi = nullptr);

// ---------------------------------------------------------------------------
// Optical reparametrization

OpticalCoords to_optical(const LineCoords& line);
/// Inverse map onto the unit-radius line family.
LineCoords from_optical(const OpticalCoords& opt);

// ---------------------------------------------------------------------------
// Homogeneity audit

struct HomogeneityProbe {
  double X = 0.0, mu = 1.0, nu = 0.0;
  double lambda = 2.0;
};

/// max over probes of |W(lX, lmu, lnu) |l| - W(X, mu, nu)| / max(|W|, floor).
double homogeneity_residual(const std::function<double(double, double, double)>& W,
                            const std::vector<HomogeneityProbe>& probes,
                            double floor = 1e-12);

// ---------------------------------------------------------------------------
// Sampled tomograms

struct TomogramAxis {
  double min = 0.0, max = 0.0;
  int count = 0;
  double step() const { return (max - min) / (count - 1); }
  ArrayXd nodes() const { return ArrayXd::LinSpaced(count, min, max); }
};

/// One mode of a sampled tomogram: unit-radius rays theta_j in [0, pi)
/// against a shared X axis. Radii follow from homogeneity.
struct ModeTomogramBlock {
  TomogramAxis x_axis;
  std::vector<std::pair<double, double>> nodes;  // (mu_k, nu_k), unit radius
  ArrayXXd values;                               // rows: node, cols: X
};

/// Sampled tomogram of a per-mode factorized state (product over modes).
struct TomogramGrid {
  std::vector<ModeTomogramBlock> modes;
  std::string state_descriptor;
  std::string quad_level = "standard";
  double max_normalization_error = 0.0;  // max_j |trapz_X W_j - 1|
  double min_value = 0.0;                // most negative sampled W
};

struct TomogramGridSpec {
  int rays = 64;       // angles over [0, pi)
  int x_points = 1024;
};

TomogramGrid make_tomogram_grid(const DensityState& state, const TomogramGridSpec& spec,
                                const QuadSpec& quad = QuadSpec::standard());

/// Sampled tomogram at an explicit per-mode (mu, nu) node list (any radii;
/// the same list is used for every mode). Ray-structure consumers
/// (inverse_radon, the exact grid propagator) require the uniform unit-ray
/// layout of make_tomogram_grid instead.
TomogramGrid make_tomogram_grid_at_nodes(const DensityState& state,
                                         const std::vector<std::pair<double, double>>& nodes,
                                         int x_points,
                                         const QuadSpec& quad = QuadSpec::standard());

/// chi(mu_j, nu_j) = int W(X, node j) e^{iX} dX of one mode block by
/// trapezoid; errors out if the X window visibly truncates the tomogram.
Complex characteristic_from_tomogram(const ModeTomogramBlock& block, int node_index,
                                     double tail_tolerance = 1e-8);

/// Center-of-mass tomogram from per-mode X slices of a sampled symplectic
/// tomogram: homogeneity-rescaled slices convolved over modes.
double cm_from_symplectic(const TomogramGrid& grid, const CmCoords& cm);

// ---------------------------------------------------------------------------
// Inversion

struct InversionSpec {
  int cart_points = 256;    // Cartesian (mu, nu) grid per side (power of two)
  int radial_points = 129;  // per-ray radial chi table
  int fft_points = 1024;    // zero-padded FFT size (power of two)
  double out_extent = 6.0;  // output density on [-E, E]^2
};

struct InversionResult {
  GridDensity density;
  double min_pre_clamp = 0.0;   // most negative reconstructed value
  double mass_pre_clamp = 0.0;  // trapezoid mass before clamp/renormalize
  double chi_radius = 0.0;      // (mu, nu) radius actually used
};

/// Reconstruct the phase-space density of a single-mode tomogram through the
/// characteristic function: per-ray chi tables, homogeneity extension onto a
/// Cartesian (mu, nu) grid, 2D inverse FFT, clamp and renormalize.
InversionResult inverse_radon(const TomogramGrid& grid,
                              const InversionSpec& spec = InversionSpec{});

}  // namespace tomo
