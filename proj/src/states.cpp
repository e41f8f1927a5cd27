#include "tomo/states.hpp"

#include "tomo/quadrature.hpp"
#include "tomo/special.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tomo {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

// ---------------------------------------------------------------------------
// (q, p) <-> (xi, eta)
//
// xi_k = sqrt(omega_k) q_k, eta_k = p_k / sqrt(omega_k): the unique scaling
// that turns qdot = p, pdot = -omega^2 q into the symmetric pair
// xidot = omega eta, etadot = -omega xi with H = (1/2) sum omega (xi^2+eta^2).

PhasePoint phase_point_from_qp(const VectorXd& q, const VectorXd& p, const ModeSpec& spec) {
  spec.validate();
  if (q.size() != p.size() || q.size() != spec.mode_count())
    throw std::invalid_argument("phase_point_from_qp: dimension mismatch");
  PhasePoint pt;
  pt.xi = VectorXd(q.size());
  pt.eta = VectorXd(q.size());
  for (int k = 0; k < q.size(); ++k) {
    double s = std::sqrt(spec.omegas[k]);
    pt.xi[k] = s * q[k];
    pt.eta[k] = p[k] / s;
  }
  return pt;
}

std::pair<VectorXd, VectorXd> phase_point_to_qp(const PhasePoint& pt, const ModeSpec& spec) {
  spec.validate();
  if (pt.dim() != spec.mode_count())
    throw std::invalid_argument("phase_point_to_qp: dimension mismatch");
  VectorXd q(pt.dim()), p(pt.dim());
  for (int k = 0; k < pt.dim(); ++k) {
    double s = std::sqrt(spec.omegas[k]);
    q[k] = pt.xi[k] / s;
    p[k] = pt.eta[k] * s;
  }
  return {q, p};
}

// ---------------------------------------------------------------------------
// GridDensity

GridDensity::GridDensity(double xi_min, double xi_max, double eta_min, double eta_max,
                         ArrayXXd values, bool audit_mass)
    : xi_min_(xi_min), xi_max_(xi_max), eta_min_(eta_min), eta_max_(eta_max),
      values_(std::move(values)) {
  if (!(xi_max_ > xi_min_) || !(eta_max_ > eta_min_))
    throw std::invalid_argument("GridDensity: empty extents");
  if (values_.rows() < 2 || values_.cols() < 2)
    throw std::invalid_argument("GridDensity: need at least 2x2 samples");
  if (!values_.allFinite()) throw std::invalid_argument("GridDensity: non-finite values");
  dxi_ = (xi_max_ - xi_min_) / (values_.rows() - 1);
  deta_ = (eta_max_ - eta_min_) / (values_.cols() - 1);

  auto mass_of = [&](const ArrayXXd& v) {
    ArrayXd wx = trapezoid_weights(static_cast<int>(v.rows()), dxi_);
    ArrayXd wy = trapezoid_weights(static_cast<int>(v.cols()), deta_);
    return (v.colwise() * wx).rowwise().sum().matrix().dot(wy.matrix());
  };

  raw_mass_ = mass_of(values_);
  if (audit_mass && std::abs(raw_mass_ - 1.0) > 0.01)
    throw numerics_error("GridDensity: raw mass " + std::to_string(raw_mass_) +
                         " deviates more than 1% from 1");

  values_ = values_.max(0.0);  // clamp interpolation noise
  double mass = mass_of(values_);
  if (!(mass > 0.0)) throw std::invalid_argument("GridDensity: zero mass");
  values_ /= mass;
}

double GridDensity::value(double xi, double eta) const {
  if (xi < xi_min_ || xi > xi_max_ || eta < eta_min_ || eta > eta_max_) return 0.0;
  double fx = (xi - xi_min_) / dxi_;
  double fy = (eta - eta_min_) / deta_;
  int i = std::min(static_cast<int>(fx), xi_count() - 2);
  int j = std::min(static_cast<int>(fy), eta_count() - 2);
  double tx = fx - i, ty = fy - j;
  double v = values_(i, j) * (1 - tx) * (1 - ty) + values_(i + 1, j) * tx * (1 - ty) +
             values_(i, j + 1) * (1 - tx) * ty + values_(i + 1, j + 1) * tx * ty;
  return v;
}

// ---------------------------------------------------------------------------
// DensityState factories

DensityState DensityState::gibbs(ModeSpec spec) {
  spec.validate();
  if (!spec.beta) throw std::invalid_argument("gibbs: beta required");
  return DensityState(GibbsState{std::move(spec)});
}

DensityState DensityState::coherent(ModeSpec spec, std::vector<Complex> z) {
  spec.validate();
  if (z.size() != spec.omegas.size())
    throw std::invalid_argument("coherent: z length mismatch");
  for (const Complex& zk : z)
    if (!std::isfinite(zk.real()) || !std::isfinite(zk.imag()))
      throw std::invalid_argument("coherent: non-finite z");
  return DensityState(CoherentState{std::move(spec), std::move(z)});
}

DensityState DensityState::gauss_laguerre(ModeSpec spec, std::vector<int> m) {
  spec.validate();
  if (m.size() != spec.omegas.size())
    throw std::invalid_argument("gauss_laguerre: m length mismatch");
  for (int mk : m)
    if (mk < 0 || mk > kMaxLaguerreIndex)
      throw std::invalid_argument("gauss_laguerre: m outside [0, 32]");
  return DensityState(GaussLaguerreState{std::move(spec), std::move(m)});
}

DensityState DensityState::grid(GridDensity grid, std::optional<double> omega) {
  if (omega && !(*omega > 0.0)) throw std::invalid_argument("grid: omega must be > 0");
  return DensityState(GridState{std::make_shared<GridDensity>(std::move(grid)), omega, 0.0});
}

DensityState DensityState::grid_shared(std::shared_ptr<const GridDensity> grid,
                                       std::optional<double> omega, double rotation) {
  if (!grid) throw std::invalid_argument("grid_shared: null grid");
  if (omega && !(*omega > 0.0)) throw std::invalid_argument("grid_shared: omega must be > 0");
  return DensityState(GridState{std::move(grid), omega, rotation});
}

DensityState DensityState::product(std::vector<DensityState> factors) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  for (const DensityState& f : factors)
    if (f.mode_count() != 1)
      throw std::invalid_argument("product: factors must be single-mode");
  return DensityState(ProductState{std::move(factors)});
}

int DensityState::mode_count() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>)
          return s.spec.mode_count();
        else if constexpr (std::is_same_v<T, CoherentState>)
          return s.spec.mode_count();
        else if constexpr (std::is_same_v<T, GaussLaguerreState>)
          return s.spec.mode_count();
        else if constexpr (std::is_same_v<T, GridState>)
          return 1;
        else
          return static_cast<int>(s.factors.size());
      },
      kind_);
}

DensityState DensityState::mode_component(int k) const {
  if (k < 0 || k >= mode_count())
    throw std::invalid_argument("mode_component: index out of range");
  return std::visit(
      [&](const auto& s) -> DensityState {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>) {
          return gibbs(ModeSpec{{s.spec.omegas[k]}, s.spec.beta});
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          return coherent(ModeSpec{{s.spec.omegas[k]}, s.spec.beta}, {s.z[k]});
        } else if constexpr (std::is_same_v<T, GaussLaguerreState>) {
          return gauss_laguerre(ModeSpec{{s.spec.omegas[k]}, s.spec.beta}, {s.m[k]});
        } else if constexpr (std::is_same_v<T, GridState>) {
          return DensityState(Kind{s});
        } else {
          return s.factors[k];
        }
      },
      kind_);
}

std::optional<double> DensityState::mode_omega(int k) const {
  if (k < 0 || k >= mode_count())
    throw std::invalid_argument("mode_omega: index out of range");
  return std::visit(
      [&](const auto& s) -> std::optional<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>)
          return s.spec.omegas[k];
        else if constexpr (std::is_same_v<T, CoherentState>)
          return s.spec.omegas[k];
        else if constexpr (std::is_same_v<T, GaussLaguerreState>)
          return s.spec.omegas[k];
        else if constexpr (std::is_same_v<T, GridState>)
          return s.omega;
        else
          return s.factors[k].mode_omega(0);
      },
      kind_);
}

// ---------------------------------------------------------------------------
// Per-mode profiles and evaluation

namespace {

double gibbs_mode_density(double a, double xi, double eta) {
  // a = beta * omega
  return a / kTwoPi * std::exp(-0.5 * a * (xi * xi + eta * eta));
}

ModeProfile gibbs_profile(double beta, double omega) {
  double a = beta * omega;
  double s = 1.0 / std::sqrt(a);
  ModeProfile p;
  p.rho = [a](double xi, double eta) { return gibbs_mode_density(a, xi, eta); };
  p.radius = 12.0 * s;
  p.char_radius = 12.0 / s;
  p.radial = [a](double d) { return gibbs_mode_density(a, d, 0.0); };
  return p;
}

ModeProfile coherent_profile(double omega, Complex z) {
  double cx = std::sqrt(2.0) * z.real();
  double cy = std::sqrt(2.0) * z.imag();
  double s = 1.0 / std::sqrt(omega);
  ModeProfile p;
  p.rho = [omega, cx, cy](double xi, double eta) {
    double dx = xi - cx, dy = eta - cy;
    return omega / kTwoPi * std::exp(-0.5 * omega * (dx * dx + dy * dy));
  };
  p.center_xi = cx;
  p.center_eta = cy;
  p.radius = 12.0 * s;
  p.char_radius = 12.0 / s;
  p.radial = [omega](double d) {
    return omega / kTwoPi * std::exp(-0.5 * omega * d * d);
  };
  return p;
}

ModeProfile gl_profile(double omega, int m) {
  double s = 1.0 / std::sqrt(omega);
  ModeProfile p;
  p.rho = [omega, m](double xi, double eta) {
    double u = 0.5 * omega * (xi * xi + eta * eta);
    double l = laguerre(m, u);
    return omega / kTwoPi * l * l * std::exp(-u);
  };
  // The radial density L_m(u)^2 e^{-u} in u = omega r^2 / 2 reaches its
  // classical turning point at u = 4m + 2; pad well beyond it. At m = 0 the
  // window reduces exactly to the beta = 1 Gibbs one, so the two states
  // produce identical grids.
  p.radius = s * std::sqrt(144.0 + 16.0 * m);
  p.char_radius = std::sqrt(144.0 + 16.0 * m) / s;
  p.radial = [omega, m](double d) {
    double u = 0.5 * omega * d * d;
    double l = laguerre(m, u);
    return omega / kTwoPi * l * l * std::exp(-u);
  };
  return p;
}

ModeProfile grid_profile(const GridState& g) {
  std::shared_ptr<const GridDensity> grid = g.grid;
  double rot = g.rotation;
  ModeProfile p;
  if (rot == 0.0) {
    p.rho = [grid](double xi, double eta) { return grid->value(xi, eta); };
  } else {
    double c = std::cos(rot), sn = std::sin(rot);
    p.rho = [grid, c, sn](double xi, double eta) {
      return grid->value(xi * c - eta * sn, xi * sn + eta * c);
    };
  }
  double cx0 = 0.5 * (grid->xi_min() + grid->xi_max());
  double cy0 = 0.5 * (grid->eta_min() + grid->eta_max());
  // Bulk center in evaluation coordinates (undo the lookup rotation).
  double c = std::cos(rot), sn = std::sin(rot);
  p.center_xi = cx0 * c + cy0 * sn;
  p.center_eta = -cx0 * sn + cy0 * c;
  p.radius = 0.5 * std::hypot(grid->xi_max() - grid->xi_min(),
                              grid->eta_max() - grid->eta_min());
  p.char_radius = 0.5 * M_PI / std::max(grid->dxi(), grid->deta());
  // 2D trapezoid on the grid's own nodes integrates the bilinear
  // interpolant exactly (and equals 1 after construction).
  ArrayXd wx = trapezoid_weights(grid->xi_count(), grid->dxi());
  ArrayXd wy = trapezoid_weights(grid->eta_count(), grid->deta());
  p.exact_mass = (grid->values().colwise() * wx).rowwise().sum().matrix().dot(wy.matrix());
  return p;
}

}  // namespace

ModeProfile mode_profile(const DensityState& state) {
  if (state.mode_count() != 1)
    throw std::invalid_argument("mode_profile: single-mode state required");
  return std::visit(
      [&](const auto& s) -> ModeProfile {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>)
          return gibbs_profile(*s.spec.beta, s.spec.omegas[0]);
        else if constexpr (std::is_same_v<T, CoherentState>)
          return coherent_profile(s.spec.omegas[0], s.z[0]);
        else if constexpr (std::is_same_v<T, GaussLaguerreState>)
          return gl_profile(s.spec.omegas[0], s.m[0]);
        else if constexpr (std::is_same_v<T, GridState>)
          return grid_profile(s);
        else
          return mode_profile(s.factors[0]);
      },
      state.kind());
}

double eval_density(const DensityState& state, const PhasePoint& point) {
  if (point.dim() != state.mode_count())
    throw std::invalid_argument("eval_density: dimension mismatch");
  if (!point.finite()) throw std::invalid_argument("eval_density: non-finite point");
  double v = 1.0;
  for (int k = 0; k < state.mode_count(); ++k) {
    ModeProfile p = mode_profile(state.mode_component(k));
    v *= p.rho(point.xi[k], point.eta[k]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Quadrature: mass and expectations

namespace {

// Tensor-trapezoid mass of one mode at a given per-axis resolution.
double mode_mass(const ModeProfile& p, int n, double radius_sigmas) {
  // R = radius_sigmas * max(scale, |center| + 8 * scale) around the origin,
  // where scale is read off the stored support radius.
  double scale = p.radius / 12.0;
  double off = std::hypot(p.center_xi, p.center_eta);
  double R = radius_sigmas * std::max(scale, off + 8.0 * scale);
  ArrayXd axis = uniform_axis(-R, R, n);
  double h = axis[1] - axis[0];
  ArrayXd w = trapezoid_weights(n, h);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += w[j] * p.rho(axis[i], axis[j]);
    sum += w[i] * row;
  }
  return sum;
}

}  // namespace

double total_mass(const DensityState& state, const QuadSpec& quad) {
  double coarse = 1.0, fine = 1.0;
  for (int k = 0; k < state.mode_count(); ++k) {
    ModeProfile p = mode_profile(state.mode_component(k));
    if (!std::isnan(p.exact_mass)) {
      coarse *= p.exact_mass;
      fine *= p.exact_mass;
      continue;
    }
    coarse *= mode_mass(p, quad.points_per_axis, quad.radius_sigmas);
    fine *= mode_mass(p, 2 * (quad.points_per_axis - 1) + 1, quad.radius_sigmas);
  }
  if (std::abs(fine - coarse) > quad.tolerance * std::max(1.0, std::abs(fine)))
    throw numerics_error("total_mass: quadrature levels disagree (" +
                         std::to_string(coarse) + " vs " + std::to_string(fine) + ")");
  return fine;
}

namespace {

double expectation_impl(const DensityState& state,
                        const std::function<double(const PhasePoint&)>& f, int n_axis,
                        double range_sigmas) {
  int n = state.mode_count();
  std::vector<ModeProfile> profiles;
  profiles.reserve(n);
  for (int k = 0; k < n; ++k) profiles.push_back(mode_profile(state.mode_component(k)));

  if (n == 1) {
    const ModeProfile& p = profiles[0];
    double scale = p.radius / 12.0;
    double R = range_sigmas * std::max(scale, std::hypot(p.center_xi, p.center_eta) + 8.0 * scale);
    ArrayXd axis = uniform_axis(-R, R, n_axis);
    ArrayXd w = trapezoid_weights(n_axis, axis[1] - axis[0]);
    double sum = 0.0;
    PhasePoint pt = PhasePoint::single(0, 0);
    for (int i = 0; i < n_axis; ++i) {
      double row = 0.0;
      for (int j = 0; j < n_axis; ++j) {
        pt.xi[0] = axis[i];
        pt.eta[0] = axis[j];
        row += w[j] * p.rho(axis[i], axis[j]) * f(pt);
      }
      sum += w[i] * row;
    }
    return sum;
  }

  // Two modes: 4D tensor Gauss-Legendre on a tighter window (cost gate).
  const GaussLegendre& rule = GaussLegendre::order(n_axis);
  std::vector<ArrayXd> nodes(4), weights(4);
  for (int k = 0; k < 2; ++k) {
    const ModeProfile& p = profiles[k];
    double scale = p.radius / 12.0;
    double Rx = 13.0 * scale + std::abs(p.center_xi);
    double Ry = 13.0 * scale + std::abs(p.center_eta);
    nodes[2 * k] = (rule.nodes * Rx + p.center_xi).eval();
    weights[2 * k] = rule.weights * Rx;
    nodes[2 * k + 1] = (rule.nodes * Ry + p.center_eta).eval();
    weights[2 * k + 1] = rule.weights * Ry;
  }
  PhasePoint pt;
  pt.xi = VectorXd(2);
  pt.eta = VectorXd(2);
  double sum = 0.0;
  for (int i0 = 0; i0 < n_axis; ++i0)
    for (int j0 = 0; j0 < n_axis; ++j0) {
      double rho0 = profiles[0].rho(nodes[0][i0], nodes[1][j0]);
      if (rho0 == 0.0) continue;
      double w0 = weights[0][i0] * weights[1][j0] * rho0;
      for (int i1 = 0; i1 < n_axis; ++i1)
        for (int j1 = 0; j1 < n_axis; ++j1) {
          double rho1 = profiles[1].rho(nodes[2][i1], nodes[3][j1]);
          if (rho1 == 0.0) continue;
          pt.xi[0] = nodes[0][i0];
          pt.eta[0] = nodes[1][j0];
          pt.xi[1] = nodes[2][i1];
          pt.eta[1] = nodes[3][j1];
          sum += w0 * weights[2][i1] * weights[3][j1] * rho1 * f(pt);
        }
    }
  return sum;
}

}  // namespace

double expectation(const DensityState& state,
                   const std::function<double(const PhasePoint&)>& f,
                   const QuadSpec& quad) {
  int n = state.mode_count();
  if (n > 2)
    throw std::invalid_argument("expectation: dense tensor quadrature capped at 2 modes");
  double coarse, fine;
  if (n == 1) {
    coarse = expectation_impl(state, f, quad.points_per_axis, quad.radius_sigmas);
    fine = expectation_impl(state, f, 2 * (quad.points_per_axis - 1) + 1, quad.radius_sigmas);
  } else {
    coarse = expectation_impl(state, f, 48, quad.radius_sigmas);
    fine = expectation_impl(state, f, 64, quad.radius_sigmas);
  }
  if (std::abs(fine - coarse) > quad.tolerance * std::max(1.0, std::abs(fine)))
    throw numerics_error("expectation: quadrature levels disagree");
  return fine;
}

double partition_function(const ModeSpec& spec) {
  spec.validate();
  if (!spec.beta) throw std::invalid_argument("partition_function: beta required");
  double z = 1.0;
  for (double w : spec.omegas) z *= kTwoPi / (*spec.beta * w);
  return z;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  // Uniform in [0, 1).
  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }
  // Standard normal pair via Box-Muller (explicit, platform-stable).
  std::pair<double, double> normal_pair() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
  }

 private:
  std::mt19937_64 gen_;
};

// Monotone cubic (Fritsch-Carlson) interpolant through strictly increasing
// (x, y) data; used to invert tabulated CDFs.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    int n = static_cast<int>(x_.size());
    std::vector<double> d(n - 1);
    for (int i = 0; i < n - 1; ++i) d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (int i = 1; i < n - 1; ++i)
      m_[i] = (d[i - 1] * d[i] > 0.0) ? 0.5 * (d[i - 1] + d[i]) : 0.0;
    for (int i = 0; i < n - 1; ++i) {
      if (d[i] == 0.0) {
        m_[i] = m_[i + 1] = 0.0;
        continue;
      }
      double a = m_[i] / d[i], b = m_[i + 1] / d[i];
      double s = a * a + b * b;
      if (s > 9.0) {
        double t = 3.0 / std::sqrt(s);
        m_[i] = t * a * d[i];
        m_[i + 1] = t * b * d[i];
      }
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    int i = static_cast<int>(it - x_.begin()) - 1;
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * m_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * m_[i + 1] * (t3 - t2);
  }

 private:
  std::vector<double> x_, y_;
  std::vector<double> m_;
};

// Inverse-CDF table for the Gauss-Laguerre radial variable u = omega r^2 / 2
// with density L_m(u)^2 e^{-u}. The table spans u up to the classical
// turning point 4m + 2 plus a deep-tail margin.
MonotoneCubic gl_radial_inverse_cdf(int m) {
  const int kNodes = 4096;
  double u_max = 4.0 * m + 44.0;
  auto density = [m](double u) {
    double l = laguerre(m, u);
    return l * l * std::exp(-u);
  };
  std::vector<double> u(kNodes), cdf(kNodes);
  double h = u_max / (kNodes - 1);
  const GaussLegendre& rule = GaussLegendre::order(8);
  double acc = 0.0;
  u[0] = 0.0;
  cdf[0] = 0.0;
  for (int i = 1; i < kNodes; ++i) {
    double a = (i - 1) * h, c = a + 0.5 * h;
    double seg = 0.0;
    for (int k = 0; k < 8; ++k) seg += rule.weights[k] * density(c + 0.5 * h * rule.nodes[k]);
    acc += seg * 0.5 * h;
    u[i] = i * h;
    cdf[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-5)
    throw numerics_error("gl sampler: inverse-CDF tabulation fails tolerance (mass " +
                         std::to_string(acc) + ")");
  // Deduplicate CDF values that collapsed to the same double.
  std::vector<double> fx, fy;
  fx.reserve(kNodes);
  fy.reserve(kNodes);
  for (int i = 0; i < kNodes; ++i) {
    double f = cdf[i] / acc;
    if (!fx.empty() && f <= fx.back()) continue;
    fx.push_back(f);
    fy.push_back(u[i]);
  }
  return MonotoneCubic(std::move(fx), std::move(fy));
}

// Exact sampling from a bilinear patch on [0,1]^2 with corner values
// f00, f10 (x side), f01, f11.
double sample_linear_1d(double a, double b, double uu) {
  // density (1-t) a + t b on [0,1], a + b > 0
  double s = a + b;
  double c2 = 0.5 * (b - a);
  if (std::abs(c2) < 1e-300 * s) return uu;
  // solve c2 t^2 + a t = uu * s / 2
  double rhs = 0.5 * uu * s;
  double disc = a * a + 4.0 * c2 * rhs;
  double t = (-a + std::sqrt(std::max(0.0, disc))) / (2.0 * c2);
  return std::clamp(t, 0.0, 1.0);
}

struct ModeSampler {
  std::function<void(Rng&, double&, double&)> draw;
};

ModeSampler make_mode_sampler(const DensityState& mode) {
  return std::visit(
      [&](const auto& s) -> ModeSampler {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GibbsState>) {
          double sigma = 1.0 / std::sqrt(*s.spec.beta * s.spec.omegas[0]);
          return ModeSampler{[sigma](Rng& rng, double& xi, double& eta) {
            auto [a, b] = rng.normal_pair();
            xi = sigma * a;
            eta = sigma * b;
          }};
        } else if constexpr (std::is_same_v<T, CoherentState>) {
          double sigma = 1.0 / std::sqrt(s.spec.omegas[0]);
          double cx = std::sqrt(2.0) * s.z[0].real();
          double cy = std::sqrt(2.0) * s.z[0].imag();
          return ModeSampler{[sigma, cx, cy](Rng& rng, double& xi, double& eta) {
            auto [a, b] = rng.normal_pair();
            xi = cx + sigma * a;
            eta = cy + sigma * b;
          }};
        } else if constexpr (std::is_same_v<T, GaussLaguerreState>) {
          double omega = s.spec.omegas[0];
          auto inv = std::make_shared<MonotoneCubic>(gl_radial_inverse_cdf(s.m[0]));
          return ModeSampler{[omega, inv](Rng& rng, double& xi, double& eta) {
            double u = (*inv)(rng.uniform());
            double r = std::sqrt(2.0 * u / omega);
            double phi = kTwoPi * rng.uniform();
            xi = r * std::cos(phi);
            eta = r * std::sin(phi);
          }};
        } else if constexpr (std::is_same_v<T, GridState>) {
          std::shared_ptr<const GridDensity> g = s.grid;
          double rot = s.rotation;
          int nx = g->xi_count(), ny = g->eta_count();
          auto cellcdf = std::make_shared<std::vector<double>>();
          cellcdf->reserve(static_cast<size_t>(nx - 1) * (ny - 1));
          double acc = 0.0;
          const ArrayXXd& v = g->values();
          for (int i = 0; i < nx - 1; ++i)
            for (int j = 0; j < ny - 1; ++j) {
              acc += 0.25 * (v(i, j) + v(i + 1, j) + v(i, j + 1) + v(i + 1, j + 1));
              cellcdf->push_back(acc);
            }
          return ModeSampler{[g, rot, cellcdf, acc, ny](Rng& rng, double& xi, double& eta) {
            double target = rng.uniform() * acc;
            auto it = std::upper_bound(cellcdf->begin(), cellcdf->end(), target);
            int idx = static_cast<int>(it - cellcdf->begin());
            if (idx >= static_cast<int>(cellcdf->size())) idx = static_cast<int>(cellcdf->size()) - 1;
            int i = idx / (ny - 1), j = idx % (ny - 1);
            const ArrayXXd& val = g->values();
            double f00 = val(i, j), f10 = val(i + 1, j), f01 = val(i, j + 1),
                   f11 = val(i + 1, j + 1);
            double tx = sample_linear_1d(f00 + f01, f10 + f11, rng.uniform());
            double fb = f00 * (1 - tx) + f10 * tx;
            double ft = f01 * (1 - tx) + f11 * tx;
            double ty = (fb + ft > 0.0) ? sample_linear_1d(fb, ft, rng.uniform())
                                        : rng.uniform();
            double x0 = g->xi_min() + (i + tx) * g->dxi();
            double y0 = g->eta_min() + (j + ty) * g->deta();
            // Sample lives in lookup coordinates; undo the stored rotation.
            double c = std::cos(rot), sn = std::sin(rot);
            xi = x0 * c + y0 * sn;
            eta = -x0 * sn + y0 * c;
          }};
        } else {
          throw std::invalid_argument("make_mode_sampler: product factor expected single-mode");
        }
      },
      mode.kind());
}

}  // namespace

std::vector<PhasePoint> sample(const DensityState& state, int count, std::uint64_t seed) {
  if (count <= 0) throw std::invalid_argument("sample: count must be positive");
  int n = state.mode_count();
  std::vector<ModeSampler> samplers;
  samplers.reserve(n);
  for (int k = 0; k < n; ++k) samplers.push_back(make_mode_sampler(state.mode_component(k)));
  Rng rng(seed);
  std::vector<PhasePoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    PhasePoint pt;
    pt.xi = VectorXd(n);
    pt.eta = VectorXd(n);
    for (int k = 0; k < n; ++k) samplers[k].draw(rng, pt.xi[k], pt.eta[k]);
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace tomo
