#include "tomo/evolution.hpp"

#include "tomo/fft.hpp"
#include "tomo/quadrature.hpp"

#include <cmath>

namespace tomo {

PhasePoint flow_map(const PhasePoint& pt, double t, const ModeSpec& spec) {
  spec.validate();
  if (pt.dim() != spec.mode_count())
    throw std::invalid_argument("flow_map: dimension mismatch");
  PhasePoint out = pt;
  for (int k = 0; k < pt.dim(); ++k) {
    double c = std::cos(spec.omegas[k] * t), s = std::sin(spec.omegas[k] * t);
    out.xi[k] = pt.xi[k] * c + pt.eta[k] * s;
    out.eta[k] = pt.eta[k] * c - pt.xi[k] * s;
  }
  return out;
}

ModeSpec state_mode_spec(const DensityState& state) {
  ModeSpec spec;
  for (int k = 0; k < state.mode_count(); ++k) {
    std::optional<double> w = state.mode_omega(k);
    if (!w)
      throw std::invalid_argument("state_mode_spec: mode " + std::to_string(k) +
                                  " carries no frequency");
    spec.omegas.push_back(*w);
  }
  return spec;
}

DensityState evolve_density(const DensityState& state, double t) {
  return std::visit(
      [&](const auto& s) -> DensityState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>) {
          return state;  // function of H: stationary
        } else if constexpr (std::is_same_v<T, GaussLaguerreState>) {
          return state;  // rotation-symmetric per mode: stationary
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          std::vector<Complex> zt(s.z.size());
          for (size_t k = 0; k < s.z.size(); ++k)
            zt[k] = std::polar(1.0, -s.spec.omegas[k] * t) * s.z[k];
          return DensityState::coherent(s.spec, std::move(zt));
        } else if constexpr (std::is_same_v<T, GridState>) {
          if (!s.omega)
            throw std::invalid_argument("evolve_density: grid state carries no frequency");
          // lookup point is Phi_{-t}(w) = rot(w, +omega t)
          return DensityState::grid_shared(s.grid, s.omega, s.rotation + *s.omega * t);
        } else {
          std::vector<DensityState> factors;
          factors.reserve(s.factors.size());
          for (const DensityState& f : s.factors) factors.push_back(evolve_density(f, t));
          return DensityState::product(std::move(factors));
        }
      },
      state.kind());
}

double evolved_density_eval(const DensityState& state, double t, const PhasePoint& pt) {
  ModeSpec spec = state_mode_spec(state);
  return eval_density(state, flow_map(pt, -t, spec));
}

std::function<double(double, double, double)> evolve_tomogram_exact(
    std::function<double(double, double, double)> W0, double t, double omega) {
  double c = std::cos(omega * t), s = std::sin(omega * t);
  return [W0 = std::move(W0), c, s](double X, double mu, double nu) {
    return W0(X, mu * c - nu * s, mu * s + nu * c);
  };
}

LineCoords rotate_line(const LineCoords& line, double t, const ModeSpec& spec) {
  spec.validate();
  if (line.dim() != spec.mode_count())
    throw std::invalid_argument("rotate_line: dimension mismatch");
  LineCoords out = line;
  for (int k = 0; k < line.dim(); ++k) {
    double c = std::cos(spec.omegas[k] * t), s = std::sin(spec.omegas[k] * t);
    out.mu[k] = line.mu[k] * c - line.nu[k] * s;
    out.nu[k] = line.mu[k] * s + line.nu[k] * c;
  }
  return out;
}

TomogramGrid evolve_tomogram_grid(const TomogramGrid& grid, double t, const ModeSpec& spec) {
  if (static_cast<int>(grid.modes.size()) != spec.mode_count())
    throw std::invalid_argument("evolve_tomogram_grid: dimension mismatch");
  TomogramGrid out = grid;
  for (int k = 0; k < spec.mode_count(); ++k) {
    const ModeTomogramBlock& src = grid.modes[k];
    ModeTomogramBlock& dst = out.modes[k];
    int nrays = static_cast<int>(src.nodes.size());
    int nx = src.x_axis.count;
    double dth = M_PI / nrays;
    // validate: uniform unit rays (same contract as the inversion)
    for (int j = 0; j < nrays; ++j) {
      auto [mu, nu] = src.nodes[j];
      if (std::abs(std::hypot(mu, nu) - 1.0) > 1e-9 ||
          std::abs(std::atan2(nu, mu) - dth * j) > 1e-9)
        throw std::invalid_argument("evolve_tomogram_grid: rays must be uniform unit rays");
    }
    // W value at (X, angle phi): fold phi into [0, pi), flipping X across pi
    // (the axis is symmetric, so the flip is an exact column reversal).
    auto source = [&](int ray_idx, int ix) {
      int j = ray_idx % (2 * nrays);
      if (j < 0) j += 2 * nrays;
      bool fold = j >= nrays;
      if (fold) j -= nrays;
      return src.values(j, fold ? (nx - 1 - ix) : ix);
    };
    for (int j = 0; j < nrays; ++j) {
      double phi = dth * j + spec.omegas[k] * t;
      double fj = phi / dth;
      double base = std::floor(fj);
      double tt = fj - base;
      int j0 = static_cast<int>(base);
      for (int ix = 0; ix < nx; ++ix) {
        double p0 = source(j0 - 1, ix), p1 = source(j0, ix), p2 = source(j0 + 1, ix),
               p3 = source(j0 + 2, ix);
        dst.values(j, ix) =
            0.5 * ((2.0 * p1) + (-p0 + p2) * tt +
                   (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * tt * tt +
                   (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * tt * tt * tt);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-difference advection

FdTomogram sample_fd_tomogram(const std::function<double(double, double, double)>& W,
                              const ArrayXd& x_nodes, double extent, int n) {
  FdTomogram out;
  out.x_nodes = x_nodes;
  out.extent = extent;
  out.n = n;
  ArrayXd axis = uniform_axis(-extent, extent, n);
  out.slices.reserve(x_nodes.size());
  for (int ix = 0; ix < x_nodes.size(); ++ix) {
    ArrayXXd s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // (0, 0) is outside the line family (and a stagnation point of the
        // advection); store 0 there.
        if (std::abs(axis[i]) < 1e-14 && std::abs(axis[j]) < 1e-14)
          s(i, j) = 0.0;
        else
          s(i, j) = W(x_nodes[ix], axis[i], axis[j]);
      }
    out.slices.push_back(std::move(s));
  }
  return out;
}

namespace {

// One Beam-Warming sweep of step tau along dimension `along_rows` with the
// per-line constant velocity vel(line). Ghost cells replicate the edge.
void beam_warming_sweep(ArrayXXd& w, bool along_rows, double tau, double h,
                        const ArrayXd& axis, double omega) {
  int n = static_cast<int>(w.rows());
  ArrayXd line(n), upd(n);
  for (int fixed = 0; fixed < n; ++fixed) {
    // velocity is constant along each sweep line: v_mu = omega * nu,
    // v_nu = -omega * mu
    double vel = along_rows ? omega * axis[fixed] : -omega * axis[fixed];
    double C = vel * tau / h;
    if (C == 0.0) continue;
    for (int i = 0; i < n; ++i) line[i] = along_rows ? w(i, fixed) : w(fixed, i);
    double aC = std::abs(C);
    int dir = (C > 0.0) ? 1 : -1;
    auto at = [&](int i) {
      int j = std::clamp(i, 0, n - 1);
      return line[j];
    };
    for (int i = 0; i < n; ++i) {
      double u0 = at(i), u1 = at(i - dir), u2 = at(i - 2 * dir);
      upd[i] = u0 - 0.5 * aC * (3.0 * u0 - 4.0 * u1 + u2) +
               0.5 * aC * aC * (u0 - 2.0 * u1 + u2);
    }
    for (int i = 0; i < n; ++i) (along_rows ? w(i, fixed) : w(fixed, i)) = upd[i];
  }
}

}  // namespace

FdTomogram evolve_tomogram_fd(const FdTomogram& w0, const EvolutionConfig& cfg,
                              double omega) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("evolve_tomogram_fd: dt must be > 0");
  if (w0.n < 8) throw std::invalid_argument("evolve_tomogram_fd: grid too small");
  double h = 2.0 * w0.extent / (w0.n - 1);
  double cfl = omega * w0.extent * cfg.dt / h;
  if (cfl > 0.9)
    throw std::invalid_argument("evolve_tomogram_fd: CFL bound violated (omega max|mu,nu| "
                                "dt/h = " + std::to_string(cfl) + " > 0.9)");
  int steps = static_cast<int>(std::round(cfg.t / cfg.dt));
  if (std::abs(steps * cfg.dt - cfg.t) > 1e-9 * std::max(1.0, std::abs(cfg.t)))
    throw std::invalid_argument("evolve_tomogram_fd: t must be a multiple of dt");
  if (std::isfinite(cfg.boundary_tolerance)) {
    double rim = 0.0;
    for (const ArrayXXd& s : w0.slices) {
      rim = std::max({rim, s.row(0).abs().maxCoeff(), s.row(w0.n - 1).abs().maxCoeff(),
                      s.col(0).abs().maxCoeff(), s.col(w0.n - 1).abs().maxCoeff()});
    }
    if (rim > cfg.boundary_tolerance)
      throw numerics_error("evolve_tomogram_fd: boundary leakage, rim |W| = " +
                           std::to_string(rim) + " above tolerance");
  }

  FdTomogram out = w0;
  ArrayXd axis = uniform_axis(-w0.extent, w0.extent, w0.n);
  for (ArrayXXd& slice : out.slices) {
    for (int s = 0; s < steps; ++s) {
      // Strang split: half mu-sweep, full nu-sweep, half mu-sweep
      beam_warming_sweep(slice, true, 0.5 * cfg.dt, h, axis, omega);
      beam_warming_sweep(slice, false, cfg.dt, h, axis, omega);
      beam_warming_sweep(slice, true, 0.5 * cfg.dt, h, axis, omega);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral inverse derivative

SpectralFunction1D inverse_partial_X(const SpectralFunction1D& f) {
  std::size_t n = static_cast<std::size_t>(f.values.size());
  if (!is_power_of_two(n))
    throw std::invalid_argument("inverse_partial_X: grid length must be a power of two");
  if (!(f.length > 0.0)) throw std::invalid_argument("inverse_partial_X: bad period");
  std::vector<Complex> c(n);
  for (std::size_t j = 0; j < n; ++j) c[j] = f.values[static_cast<int>(j)];
  fft_inplace(c, false);
  double mean = std::abs(c[0]) / static_cast<double>(n);
  if (mean > 1e-10)
    throw std::invalid_argument("inverse_partial_X: input has nonzero mean (" +
                                std::to_string(mean) + "), the 1/(iK) pole is undefined");
  c[0] = 0.0;
  double base = 2.0 * M_PI / f.length;
  for (std::size_t m = 1; m < n; ++m) {
    double K = base * (m <= n / 2 ? static_cast<double>(m)
                                  : static_cast<double>(m) - static_cast<double>(n));
    if (m == n / 2) {
      c[m] = 0.0;  // Nyquist: sign of K is ambiguous on the grid
      continue;
    }
    c[m] /= Complex(0.0, K);
  }
  fft_inplace(c, true);
  SpectralFunction1D out = f;
  for (std::size_t j = 0; j < n; ++j) out.values[static_cast<int>(j)] = c[j].real();
  return out;
}

}  // namespace tomo
