#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tomo {

using Eigen::ArrayXd;
using Eigen::ArrayXXd;
using Eigen::VectorXd;
using Complex = std::complex<double>;
using ArrayXcd = Eigen::ArrayXcd;

/// Thrown when a computation breaks a numerical contract (non-convergent
/// quadrature, audit breach, unstable recurrence, ...). Precondition and
/// argument errors use std::invalid_argument instead.
class numerics_error : public std::runtime_error {
 public:
  explicit numerics_error(const std::string& what) : std::runtime_error(what) {}
};

/// Frequencies of an ensemble of independent harmonic modes, plus the
/// inverse temperature where the state kind needs one.
struct ModeSpec {
  std::vector<double> omegas;
  std::optional<double> beta;

  int mode_count() const { return static_cast<int>(omegas.size()); }

  void validate() const {
    if (omegas.empty()) throw std::invalid_argument("ModeSpec: no modes");
    for (double w : omegas)
      if (!(w > 0.0)) throw std::invalid_argument("ModeSpec: omega must be > 0");
    if (beta && !(*beta > 0.0))
      throw std::invalid_argument("ModeSpec: beta must be > 0");
  }
};

/// A point of 2n-dimensional phase space in symmetric coordinates
/// (xi_k, eta_k). The mechanical pair is q_k = sqrt(omega_k) xi_k,
/// p_k = eta_k / sqrt(omega_k); use the conversion helpers below.
struct PhasePoint {
  VectorXd xi;
  VectorXd eta;

  PhasePoint() = default;
  PhasePoint(VectorXd xi_, VectorXd eta_) : xi(std::move(xi_)), eta(std::move(eta_)) {
    if (xi.size() != eta.size())
      throw std::invalid_argument("PhasePoint: xi/eta length mismatch");
  }
  static PhasePoint single(double xi, double eta) {
    PhasePoint p;
    p.xi = VectorXd::Constant(1, xi);
    p.eta = VectorXd::Constant(1, eta);
    return p;
  }
  int dim() const { return static_cast<int>(xi.size()); }

  bool finite() const { return xi.allFinite() && eta.allFinite(); }
};

/// (q, p) <-> (xi, eta) conversions; the Liouville measure is unchanged.
PhasePoint phase_point_from_qp(const VectorXd& q, const VectorXd& p, const ModeSpec& spec);
std::pair<VectorXd, VectorXd> phase_point_to_qp(const PhasePoint& pt, const ModeSpec& spec);

/// Per-mode line coordinates (X_k, mu_k, nu_k) of the symplectic tomogram.
/// The line of mode k is X_k = mu_k xi_k + nu_k eta_k; (mu_k, nu_k) = (0, 0)
/// is rejected everywhere.
struct LineCoords {
  VectorXd X;
  VectorXd mu;
  VectorXd nu;

  LineCoords() = default;
  LineCoords(VectorXd X_, VectorXd mu_, VectorXd nu_)
      : X(std::move(X_)), mu(std::move(mu_)), nu(std::move(nu_)) {
    if (X.size() != mu.size() || X.size() != nu.size())
      throw std::invalid_argument("LineCoords: length mismatch");
  }
  static LineCoords single(double X, double mu, double nu) {
    return LineCoords(VectorXd::Constant(1, X), VectorXd::Constant(1, mu),
                      VectorXd::Constant(1, nu));
  }
  int dim() const { return static_cast<int>(X.size()); }

  void validate() const {
    for (int k = 0; k < dim(); ++k)
      if (mu[k] == 0.0 && nu[k] == 0.0)
        throw std::invalid_argument("LineCoords: (mu, nu) = (0, 0) at mode " +
                                    std::to_string(k));
  }
};

/// Optical reparametrization, per mode: Xtilde_k = X_k / r_k,
/// theta_k = atan2(nu_k, mu_k) in (-pi, pi], r_k = sqrt(mu_k^2 + nu_k^2).
struct OpticalCoords {
  VectorXd xtilde;
  VectorXd theta;

  int dim() const { return static_cast<int>(xtilde.size()); }
};

/// Center-of-mass coordinates: one scalar X against the full-phase-space
/// hyperplane X = mu . xi + nu . eta (symmetric coordinates throughout).
struct CmCoords {
  double X = 0.0;
  VectorXd mu;
  VectorXd nu;

  int dim() const { return static_cast<int>(mu.size()); }
  void validate() const {
    if (mu.size() != nu.size()) throw std::invalid_argument("CmCoords: length mismatch");
    if (mu.norm() == 0.0 && nu.norm() == 0.0)
      throw std::invalid_argument("CmCoords: zero normal vector");
  }
};

/// Quadrature configuration shared by the density/transform integrators.
/// "fine" doubles every resolution; the pair is compared as the
/// convergence gate.
struct QuadSpec {
  int points_per_axis = 513;   // tensor-trapezoid nodes per axis (2D mass/moments)
  int line_points = 256;       // composite Gauss-Legendre nodes along a line
  int char_k_points = 513;     // k-nodes of the characteristic-function route
  int radial_points = 768;     // radial nodes of the Hankel route
  double radius_sigmas = 8.0;  // [-R, R] with R = radius_sigmas * max(scale, offset + 8 sigma)
  double tolerance = 1e-8;     // relative Richardson gate between levels

  static QuadSpec standard() { return QuadSpec{}; }
  static QuadSpec fine() {
    QuadSpec q;
    q.points_per_axis = 1025;
    q.line_points = 512;
    q.char_k_points = 1025;
    q.radial_points = 1536;
    return q;
  }
};

}  // namespace tomo
