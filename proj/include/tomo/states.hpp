#pragma once

#include "tomo/types.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <variant>

namespace tomo {

/// Canonical (Gibbs) ensemble exp(-beta H)/Z0 of independent modes.
struct GibbsState {
  ModeSpec spec;  // beta required
};

/// Classical counterpart of coherent states: the beta = 1 Gaussian displaced
/// to the holomorphic amplitude z_k, normalized to unit mass. In symmetric
/// coordinates the mode-k center is (sqrt(2) Re z_k, sqrt(2) Im z_k) and the
/// variance is 1/omega_k per coordinate.
struct CoherentState {
  ModeSpec spec;
  std::vector<Complex> z;
};

/// Gauss-Laguerre state: per mode (omega/2pi) [L_m(omega r^2 / 2)]^2
/// exp(-omega r^2 / 2).
struct GaussLaguerreState {
  ModeSpec spec;
  std::vector<int> m;
};

/// Rectangular sampled density over one (xi, eta) plane. Values are clamped
/// to >= 0 and renormalized to unit trapezoid mass at construction; raw mass
/// more than 1% away from 1 is rejected when `audit_mass` is set.
class GridDensity {
 public:
  GridDensity(double xi_min, double xi_max, double eta_min, double eta_max,
              ArrayXXd values, bool audit_mass = false);

  /// Bilinear interpolation; zero outside the extents.
  double value(double xi, double eta) const;

  double xi_min() const { return xi_min_; }
  double xi_max() const { return xi_max_; }
  double eta_min() const { return eta_min_; }
  double eta_max() const { return eta_max_; }
  int xi_count() const { return static_cast<int>(values_.rows()); }
  int eta_count() const { return static_cast<int>(values_.cols()); }
  double dxi() const { return dxi_; }
  double deta() const { return deta_; }
  const ArrayXXd& values() const { return values_; }
  /// Trapezoid mass of the raw input, before clamping and renormalization.
  double raw_mass() const { return raw_mass_; }

 private:
  double xi_min_, xi_max_, eta_min_, eta_max_;
  double dxi_, deta_;
  double raw_mass_;
  ArrayXXd values_;  // row i = xi node, col j = eta node
};

/// Single-mode gridded state. `omega` is needed only for dynamics;
/// `rotation` is the accumulated phase-plane angle applied before lookup
/// (used by the exact Liouville propagator).
struct GridState {
  std::shared_ptr<const GridDensity> grid;
  std::optional<double> omega;
  double rotation = 0.0;
};

class DensityState;

struct ProductState {
  std::vector<DensityState> factors;  // each single-mode
};

/// A normalized probability density on 2n-dimensional phase space.
/// Immutable after construction; all operations are pure.
class DensityState {
 public:
  using Kind =
      std::variant<GibbsState, CoherentState, GaussLaguerreState, GridState, ProductState>;

  static DensityState gibbs(ModeSpec spec);
  static DensityState coherent(ModeSpec spec, std::vector<Complex> z);
  static DensityState gauss_laguerre(ModeSpec spec, std::vector<int> m);
  static DensityState grid(GridDensity grid, std::optional<double> omega = std::nullopt);
  /// Shares an existing grid (used by the exact propagator, which only
  /// advances the lookup rotation).
  static DensityState grid_shared(std::shared_ptr<const GridDensity> grid,
                                  std::optional<double> omega, double rotation);
  static DensityState product(std::vector<DensityState> factors);

  int mode_count() const;
  const Kind& kind() const { return kind_; }

  /// The single-mode factor for mode k (all kinds factorize per mode).
  DensityState mode_component(int k) const;

  /// omega of mode k when the state carries one (grid states may not).
  std::optional<double> mode_omega(int k) const;

 private:
  explicit DensityState(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Scalar view of a single-mode state used by the transform modules:
/// evaluation plus support metadata, and the radial profile when the density
/// is rotation-symmetric about its center.
struct ModeProfile {
  std::function<double(double, double)> rho;
  double center_xi = 0.0;
  double center_eta = 0.0;
  double radius = 0.0;       // support radius about the center
  double char_radius = 0.0;  // k-space support of the characteristic function
  std::function<double(double)> radial;  // null when not radial about center
  /// Mass known in closed form on the state's own representation (grid
  /// states: exact trapezoid integral of the bilinear interpolant). NaN when
  /// only quadrature can tell.
  double exact_mass = std::numeric_limits<double>::quiet_NaN();
};

ModeProfile mode_profile(const DensityState& state);

/// rho(xi, eta) at a phase-space point.
double eval_density(const DensityState& state, const PhasePoint& point);

/// Integral of rho over the truncated tensor grid; the standard and fine
/// quadrature levels are compared as the convergence gate.
double total_mass(const DensityState& state, const QuadSpec& quad = QuadSpec::standard());

/// Integral of f * rho. Supports one and two modes (the cost gate for the
/// dense tensor rule).
double expectation(const DensityState& state,
                   const std::function<double(const PhasePoint&)>& f,
                   const QuadSpec& quad = QuadSpec::standard());

/// Z0 = (2 pi)^n prod_k (beta omega_k)^{-1}.
double partition_function(const ModeSpec& spec);

/// i.i.d. draws, deterministic for a given (state, count, seed).
std::vector<PhasePoint> sample(const DensityState& state, int count, std::uint64_t seed);

}  // namespace tomo
