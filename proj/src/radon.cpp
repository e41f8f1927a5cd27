#include "tomo/radon.hpp"

#include "tomo/fft.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tomo {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Catmull-Rom interpolation on uniform nodes, clamped at the ends.
template <typename T>
T catmull_uniform(const std::vector<T>& y, double x0, double h, double x) {
  int n = static_cast<int>(y.size());
  double f = (x - x0) / h;
  if (f <= 0.0) return y.front();
  if (f >= n - 1.0) return y.back();
  int i = static_cast<int>(f);
  if (i > n - 2) i = n - 2;
  double t = f - i;
  const T& p0 = y[std::max(i - 1, 0)];
  const T& p1 = y[i];
  const T& p2 = y[i + 1];
  const T& p3 = y[std::min(i + 2, n - 1)];
  return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
}

void check_dims(const DensityState& state, const LineCoords& line) {
  if (state.mode_count() != line.dim())
    throw std::invalid_argument("radon: state/line dimension mismatch");
  if (!line.X.allFinite() || !line.mu.allFinite() || !line.nu.allFinite())
    throw std::invalid_argument("radon: non-finite line coordinates");
  line.validate();
}

// W(X, mu, nu) of one mode: (1/r) * integral of rho along the line
// X = mu xi + nu eta, parametrized by arclength.
double mode_symplectic_radon(const ModeProfile& p, double X, double mu, double nu,
                             const QuadSpec& quad) {
  double r = std::hypot(mu, nu);
  // distance from the density center to the line
  double d = std::abs(X - mu * p.center_xi - nu * p.center_eta) / r;
  if (d > p.radius) return 0.0;
  double bx = X * mu / (r * r), by = X * nu / (r * r);  // closest point to origin
  double dx = -nu / r, dy = mu / r;                     // unit direction
  double s0 = (p.center_xi - bx) * dx + (p.center_eta - by) * dy;
  double L = p.radius;
  auto f = [&](double s) { return p.rho(bx + s * dx, by + s * dy); };
  return integrate_gl(f, s0 - L, s0 + L, quad.line_points) / r;
}

}  // namespace

double symplectic_radon(const DensityState& state, const LineCoords& line,
                        const QuadSpec& quad) {
  check_dims(state, line);
  double w = 1.0;
  for (int k = 0; k < state.mode_count(); ++k) {
    ModeProfile p = mode_profile(state.mode_component(k));
    w *= mode_symplectic_radon(p, line.X[k], line.mu[k], line.nu[k], quad);
    if (w == 0.0) return 0.0;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Characteristic-function route

namespace {

// chi(k) = E[exp(i k (mu xi + nu eta))] for one mode. Radial states reduce
// to a Hankel integral (the angular integral yields J0); gridded states use
// a dense tensor sum.
class ModeCharFunction {
 public:
  ModeCharFunction(const ModeProfile& p, double mu, double nu, const QuadSpec& quad)
      : shift_(mu * p.center_xi + nu * p.center_eta), r_(std::hypot(mu, nu)) {
    if (p.radial) {
      const GaussLegendre& rule = GaussLegendre::order(32);
      int panels = std::max(1, quad.radial_points / 32);
      double h = p.radius / panels;
      nodes_.reserve(static_cast<size_t>(panels) * 32);
      weights_.reserve(nodes_.capacity());
      for (int seg = 0; seg < panels; ++seg) {
        double c = (seg + 0.5) * h;
        for (int i = 0; i < 32; ++i) {
          double s = c + 0.5 * h * rule.nodes[i];
          nodes_.push_back(s);
          weights_.push_back(0.5 * h * rule.weights[i] * p.radial(s) * s * kTwoPi);
        }
      }
    } else {
      // dense fallback: trapezoid over the bounding square of the support
      int n = quad.points_per_axis;
      double R = p.radius;
      ArrayXd ax = uniform_axis(p.center_xi - R, p.center_xi + R, n);
      ArrayXd ay = uniform_axis(p.center_eta - R, p.center_eta + R, n);
      ArrayXd wx = trapezoid_weights(n, ax[1] - ax[0]);
      ArrayXd wy = trapezoid_weights(n, ay[1] - ay[0]);
      gx_ = ax;
      gy_ = ay;
      gmu_ = mu;
      gnu_ = nu;
      gvals_.resize(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) gvals_(i, j) = wx[i] * wy[j] * p.rho(ax[i], ay[j]);
    }
  }

  Complex operator()(double k) const {
    if (!nodes_.empty()) {
      double acc = 0.0;
      for (size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * bessel_j0(k * r_ * nodes_[i]);
      return std::polar(1.0, k * shift_) * acc;
    }
    // grid: separable row/column phases; node coordinates are absolute, so
    // no extra center phase here
    Complex sum = 0.0;
    int n = static_cast<int>(gx_.size());
    for (int i = 0; i < n; ++i) {
      Complex row = 0.0;
      for (int j = 0; j < n; ++j) row += gvals_(i, j) * std::polar(1.0, k * gnu_ * gy_[j]);
      sum += row * std::polar(1.0, k * gmu_ * gx_[i]);
    }
    return sum;
  }

 private:
  double shift_;
  double r_;
  std::vector<double> nodes_, weights_;  // radial route
  ArrayXd gx_, gy_;
  ArrayXXd gvals_;
  double gmu_ = 0.0, gnu_ = 0.0;
};

double mode_fourier_slice(const DensityState& mode, double X, double mu, double nu,
                          const QuadSpec& quad) {
  ModeProfile p = mode_profile(mode);
  double r = std::hypot(mu, nu);
  double K = p.char_radius / r;
  ModeCharFunction chi(p, mu, nu, quad);
  int nk = quad.char_k_points;
  ArrayXd ks = uniform_axis(-K, K, nk);
  ArrayXd w = trapezoid_weights(nk, ks[1] - ks[0]);
  double acc = 0.0;
  for (int i = 0; i < nk; ++i)
    acc += w[i] * (chi(ks[i]) * std::polar(1.0, -ks[i] * X)).real();
  return acc / kTwoPi;
}

}  // namespace

double fourier_slice_radon(const DensityState& state, const LineCoords& line,
                           const QuadSpec& quad) {
  check_dims(state, line);
  double w = 1.0;
  for (int k = 0; k < state.mode_count(); ++k)
    w *= mode_fourier_slice(state.mode_component(k), line.X[k], line.mu[k], line.nu[k], quad);
  return w;
}

// ---------------------------------------------------------------------------
// Center-of-mass tomogram

double cm_radon(const DensityState& state, const CmCoords& cm, const QuadSpec& quad) {
  cm.validate();
  int n = state.mode_count();
  if (cm.dim() != n) throw std::invalid_argument("cm_radon: dimension mismatch");
  if (n == 1)  // single constraint and per-mode constraint coincide
    return symplectic_radon(state, LineCoords(VectorXd::Constant(1, cm.X), cm.mu, cm.nu), quad);
  if (n > 3) throw std::invalid_argument("cm_radon: dense hyperplane rule capped at 3 modes");

  int dim = 2 * n;
  VectorXd w(dim);
  w << cm.mu, cm.nu;
  double wn = w.norm();

  // Orthonormal tangent basis of the hyperplane from a Householder QR.
  Eigen::MatrixXd A = w;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd B = Q.rightCols(dim - 1);

  VectorXd x0 = cm.X * w / (wn * wn);

  std::vector<ModeProfile> profiles;
  VectorXd center(dim);
  double max_radius = 0.0, min_scale = 1e300;
  for (int k = 0; k < n; ++k) {
    profiles.push_back(mode_profile(state.mode_component(k)));
    center[k] = profiles[k].center_xi;
    center[n + k] = profiles[k].center_eta;
    max_radius = std::max(max_radius, profiles[k].radius);
    min_scale = std::min(min_scale, profiles[k].radius / 12.0);
  }
  // The product density is negligible outside the ball ||w - c|| <= 1.1 R:
  // the total Gaussian exponent is bounded below by ||w - c||^2 / (2 s_max^2)
  // and R already carries 12 sigma per mode.
  double T = 1.1 * max_radius;
  VectorXd tbar = B.transpose() * (center - x0);

  double h = min_scale / 2.5;
  int m = 2 * static_cast<int>(std::ceil(T / h)) + 1;
  ArrayXd offsets = uniform_axis(-T, T, m);
  h = offsets[1] - offsets[0];

  // Odometer over the (2n-1)-dimensional tangent box, pruned to the ball
  // ||t - tbar|| <= T where the density can be nonzero.
  int axes = dim - 1;
  std::vector<int> idx(axes, 0);
  double sum = 0.0;
  VectorXd pt(dim);
  while (true) {
    double t2 = 0.0;
    for (int a = 0; a < axes; ++a) t2 += offsets[idx[a]] * offsets[idx[a]];
    if (t2 <= T * T) {
      pt = x0;
      for (int a = 0; a < axes; ++a) pt += (tbar[a] + offsets[idx[a]]) * B.col(a);
      double rho = 1.0;
      for (int k = 0; k < n && rho != 0.0; ++k)
        rho *= profiles[k].rho(pt[k], pt[n + k]);
      sum += rho;
    }
    int a = 0;
    while (a < axes && ++idx[a] == m) idx[a++] = 0;
    if (a == axes) break;
  }
  return sum * std::pow(h, axes) / wn;
}

// ---------------------------------------------------------------------------
// Generalized Radon transform (marching squares + co-area weight)

GeneralizedRadonResult generalized_radon(
    const DensityState& state, const std::function<double(double, double)>& phi, double X0,
    const QuadSpec& quad,
    const std::function<std::pair<double, double>(double, double)>& grad_phi) {
  if (state.mode_count() != 1)
    throw std::invalid_argument("generalized_radon: single-mode state required");
  if (!phi) throw std::invalid_argument("generalized_radon: phi required");
  ModeProfile p = mode_profile(state);

  int cells = (quad.points_per_axis >= 1024) ? 2048 : 1024;
  int nn = cells + 1;
  double R = p.radius * 1.02;
  ArrayXd ax = uniform_axis(p.center_xi - R, p.center_xi + R, nn);
  ArrayXd ay = uniform_axis(p.center_eta - R, p.center_eta + R, nn);
  double hx = ax[1] - ax[0], hy = ay[1] - ay[0];

  ArrayXXd g(nn, nn);
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j) {
      double v = phi(ax[i], ay[j]) - X0;
      if (!std::isfinite(v)) throw std::invalid_argument("generalized_radon: non-finite phi");
      g(i, j) = (v == 0.0) ? 1e-300 : v;
    }

  auto gradient = [&](double x, double y) -> std::pair<double, double> {
    if (grad_phi) return grad_phi(x, y);
    double hg = 0.5 * std::min(hx, hy);
    return {(phi(x + hg, y) - phi(x - hg, y)) / (2 * hg),
            (phi(x, y + hg) - phi(x, y - hg)) / (2 * hg)};
  };

  bool found = false;
  double sum = 0.0;
  auto edge_point = [](double xa, double ya, double ga, double xb, double yb, double gb) {
    double t = ga / (ga - gb);
    return std::pair<double, double>{xa + t * (xb - xa), ya + t * (yb - ya)};
  };
  auto accumulate = [&](std::pair<double, double> a, std::pair<double, double> b) {
    double mx = 0.5 * (a.first + b.first), my = 0.5 * (a.second + b.second);
    double len = std::hypot(b.first - a.first, b.second - a.second);
    if (len == 0.0) return;
    auto [gx, gy] = gradient(mx, my);
    double gn = std::hypot(gx, gy);
    if (gn < 1e-12)
      throw numerics_error("generalized_radon: vanishing gradient on the level set");
    found = true;
    sum += p.rho(mx, my) / gn * len;
  };

  for (int i = 0; i < cells; ++i) {
    for (int j = 0; j < cells; ++j) {
      double g00 = g(i, j), g10 = g(i + 1, j), g01 = g(i, j + 1), g11 = g(i + 1, j + 1);
      int pattern = (g00 > 0) | ((g10 > 0) << 1) | ((g11 > 0) << 2) | ((g01 > 0) << 3);
      if (pattern == 0 || pattern == 15) continue;
      double x0 = ax[i], x1 = ax[i + 1], y0 = ay[j], y1 = ay[j + 1];
      // crossing points on the four edges (bottom, right, top, left)
      std::pair<double, double> pb, pr, pt, pl;
      bool eb = (g00 > 0) != (g10 > 0), er = (g10 > 0) != (g11 > 0),
           et = (g01 > 0) != (g11 > 0), el = (g00 > 0) != (g01 > 0);
      if (eb) pb = edge_point(x0, y0, g00, x1, y0, g10);
      if (er) pr = edge_point(x1, y0, g10, x1, y1, g11);
      if (et) pt = edge_point(x0, y1, g01, x1, y1, g11);
      if (el) pl = edge_point(x0, y0, g00, x0, y1, g01);
      int ncross = eb + er + et + el;
      if (ncross == 2) {
        std::vector<std::pair<double, double>> pts;
        if (eb) pts.push_back(pb);
        if (er) pts.push_back(pr);
        if (et) pts.push_back(pt);
        if (el) pts.push_back(pl);
        accumulate(pts[0], pts[1]);
      } else if (ncross == 4) {
        // saddle: split by the sign of the cell-center value
        double gc = 0.25 * (g00 + g10 + g01 + g11);
        if ((g00 > 0) == (gc > 0)) {
          accumulate(pb, pr);
          accumulate(pt, pl);
        } else {
          accumulate(pb, pl);
          accumulate(pt, pr);
        }
      }
    }
  }
  GeneralizedRadonResult res;
  res.value = sum;
  res.empty_level_set = !found;
  return res;
}

// ---------------------------------------------------------------------------
// Optical reparametrization

OpticalCoords to_optical(const LineCoords& line) {
  line.validate();
  OpticalCoords opt;
  opt.xtilde = VectorXd(line.dim());
  opt.theta = VectorXd(line.dim());
  for (int k = 0; k < line.dim(); ++k) {
    double r = std::hypot(line.mu[k], line.nu[k]);
    opt.xtilde[k] = line.X[k] / r;
    opt.theta[k] = std::atan2(line.nu[k], line.mu[k]);
  }
  return opt;
}

LineCoords from_optical(const OpticalCoords& opt) {
  if (opt.xtilde.size() != opt.theta.size())
    throw std::invalid_argument("from_optical: length mismatch");
  int n = opt.dim();
  VectorXd X(n), mu(n), nu(n);
  for (int k = 0; k < n; ++k) {
    X[k] = opt.xtilde[k];
    mu[k] = std::cos(opt.theta[k]);
    nu[k] = std::sin(opt.theta[k]);
  }
  return LineCoords(X, mu, nu);
}

// ---------------------------------------------------------------------------
// Homogeneity audit

double homogeneity_residual(const std::function<double(double, double, double)>& W,
                            const std::vector<HomogeneityProbe>& probes, double floor) {
  double worst = 0.0;
  for (const HomogeneityProbe& p : probes) {
    if (p.lambda == 0.0) throw std::invalid_argument("homogeneity_residual: lambda = 0");
    double base = W(p.X, p.mu, p.nu);
    double scaled = W(p.lambda * p.X, p.lambda * p.mu, p.lambda * p.nu);
    double res = std::abs(scaled * std::abs(p.lambda) - base) / std::max(std::abs(base), floor);
    worst = std::max(worst, res);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Sampled tomograms

TomogramGrid make_tomogram_grid(const DensityState& state, const TomogramGridSpec& spec,
                                const QuadSpec& quad) {
  if (spec.rays < 1 || spec.x_points < 8)
    throw std::invalid_argument("make_tomogram_grid: bad grid spec");
  TomogramGrid grid;
  grid.quad_level = (quad.points_per_axis > 513) ? "fine" : "standard";
  for (int k = 0; k < state.mode_count(); ++k) {
    ModeProfile p = mode_profile(state.mode_component(k));
    ModeTomogramBlock block;
    double xmax = (std::hypot(p.center_xi, p.center_eta) + p.radius) * 1.02;
    block.x_axis = TomogramAxis{-xmax, xmax, spec.x_points};
    ArrayXd xs = block.x_axis.nodes();
    ArrayXd wts = trapezoid_weights(spec.x_points, block.x_axis.step());
    block.values.resize(spec.rays, spec.x_points);
    for (int j = 0; j < spec.rays; ++j) {
      double th = M_PI * j / spec.rays;
      double mu = std::cos(th), nu = std::sin(th);
      block.nodes.emplace_back(mu, nu);
      double mass = 0.0;
      for (int i = 0; i < spec.x_points; ++i) {
        double v = mode_symplectic_radon(p, xs[i], mu, nu, quad);
        block.values(j, i) = v;
        grid.min_value = std::min(grid.min_value, v);
        mass += wts[i] * v;
      }
      grid.max_normalization_error =
          std::max(grid.max_normalization_error, std::abs(mass - 1.0));
    }
    grid.modes.push_back(std::move(block));
  }
  return grid;
}

TomogramGrid make_tomogram_grid_at_nodes(const DensityState& state,
                                         const std::vector<std::pair<double, double>>& nodes,
                                         int x_points, const QuadSpec& quad) {
  if (nodes.empty() || x_points < 8)
    throw std::invalid_argument("make_tomogram_grid_at_nodes: bad grid spec");
  double rmax = 0.0;
  for (size_t j = 0; j < nodes.size(); ++j) {
    auto [mu, nu] = nodes[j];
    if (mu == 0.0 && nu == 0.0)
      throw std::invalid_argument("make_tomogram_grid_at_nodes: degenerate node " +
                                  std::to_string(j));
    rmax = std::max(rmax, std::hypot(mu, nu));
  }
  TomogramGrid grid;
  grid.quad_level = (quad.points_per_axis > 513) ? "fine" : "standard";
  for (int k = 0; k < state.mode_count(); ++k) {
    ModeProfile p = mode_profile(state.mode_component(k));
    ModeTomogramBlock block;
    double xmax = (std::hypot(p.center_xi, p.center_eta) + p.radius) * rmax * 1.02;
    block.x_axis = TomogramAxis{-xmax, xmax, x_points};
    block.nodes = nodes;
    ArrayXd xs = block.x_axis.nodes();
    ArrayXd wts = trapezoid_weights(x_points, block.x_axis.step());
    block.values.resize(static_cast<int>(nodes.size()), x_points);
    for (size_t j = 0; j < nodes.size(); ++j) {
      double mass = 0.0;
      for (int i = 0; i < x_points; ++i) {
        double v = mode_symplectic_radon(p, xs[i], nodes[j].first, nodes[j].second, quad);
        block.values(static_cast<int>(j), i) = v;
        grid.min_value = std::min(grid.min_value, v);
        mass += wts[i] * v;
      }
      grid.max_normalization_error =
          std::max(grid.max_normalization_error, std::abs(mass - 1.0));
    }
    grid.modes.push_back(std::move(block));
  }
  return grid;
}

Complex characteristic_from_tomogram(const ModeTomogramBlock& block, int node_index,
                                     double tail_tolerance) {
  if (node_index < 0 || node_index >= static_cast<int>(block.nodes.size()))
    throw std::invalid_argument("characteristic_from_tomogram: node out of range");
  int n = block.x_axis.count;
  double h = block.x_axis.step();
  ArrayXd xs = block.x_axis.nodes();
  const auto row = block.values.row(node_index);
  double tail = h * (std::abs(row[0]) + std::abs(row[1]) + std::abs(row[n - 2]) +
                     std::abs(row[n - 1]));
  if (tail > tail_tolerance)
    throw numerics_error("characteristic_from_tomogram: X window truncates the tomogram "
                         "(tail mass " + std::to_string(tail) + ")");
  ArrayXd wts = trapezoid_weights(n, h);
  Complex chi = 0.0;
  for (int i = 0; i < n; ++i) chi += wts[i] * row[i] * std::polar(1.0, xs[i]);
  return chi;
}

double cm_from_symplectic(const TomogramGrid& grid, const CmCoords& cm) {
  cm.validate();
  int n = static_cast<int>(grid.modes.size());
  if (cm.dim() != n) throw std::invalid_argument("cm_from_symplectic: dimension mismatch");

  // Per mode: locate the ray, rescale the slice by homogeneity.
  struct Slice {
    double r = 1.0;      // requested radius
    int ray = 0;
    double parity = 1.0;  // -1 when the direction folds across pi
  };
  std::vector<Slice> slices(n);
  for (int k = 0; k < n; ++k) {
    double r = std::hypot(cm.mu[k], cm.nu[k]);
    if (r == 0.0) throw std::invalid_argument("cm_from_symplectic: zero (mu, nu) at mode " +
                                              std::to_string(k));
    double th = std::atan2(cm.nu[k], cm.mu[k]);
    double parity = 1.0;
    if (th < 0.0) {
      th += M_PI;
      parity = -1.0;
    }
    if (th >= M_PI - 1e-12) {
      th -= M_PI;
      parity = -parity;
    }
    const auto& block = grid.modes[k];
    int found = -1;
    for (int j = 0; j < static_cast<int>(block.nodes.size()); ++j) {
      double tj = std::atan2(block.nodes[j].second, block.nodes[j].first);
      if (std::abs(tj - th) < 1e-9) {
        found = j;
        break;
      }
    }
    if (found < 0)
      throw std::invalid_argument("cm_from_symplectic: (mu, nu) direction off the grid rays "
                                  "(grid misalignment) at mode " + std::to_string(k));
    slices[k] = Slice{r, found, parity};
  }

  // Common axis: spacing of the finest rescaled slice, extent = sum of extents.
  double h = 1e300, extent = 0.0;
  for (int k = 0; k < n; ++k) {
    h = std::min(h, slices[k].r * grid.modes[k].x_axis.step());
    extent += slices[k].r * grid.modes[k].x_axis.max;
  }
  int m = 2 * static_cast<int>(std::ceil(extent / h)) + 1;
  if (m > (1 << 17)) throw std::invalid_argument("cm_from_symplectic: axis too fine");

  auto resample = [&](int k) {
    const auto& block = grid.modes[k];
    std::vector<double> src(block.x_axis.count);
    for (int i = 0; i < block.x_axis.count; ++i) src[i] = block.values(slices[k].ray, i);
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) {
      double X = -extent + i * (2.0 * extent / (m - 1));
      double Y = slices[k].parity * X / slices[k].r;  // W(X, r mu, r nu) = W(X/r, mu, nu)/r
      out[i] = catmull_uniform(src, block.x_axis.min, block.x_axis.step(), Y) / slices[k].r;
    }
    return out;
  };

  double hc = 2.0 * extent / (m - 1);
  std::vector<double> acc = resample(0);
  for (int k = 1; k < n; ++k) {
    std::vector<double> f = resample(k);
    std::vector<double> conv(m, 0.0);
    int c = (m - 1) / 2;  // index of X = 0
    for (int i = 0; i < m; ++i) {
      if (acc[i] == 0.0) continue;
      double av = acc[i] * hc;
      int jlo = std::max(0, i - (m - 1 - c)) , jhi = std::min(m - 1, i + c);
      for (int j = jlo; j <= jhi; ++j) {
        int t = j - i + c;  // f sampled at X_j - X_i
        conv[j] += av * f[t];
      }
    }
    acc = std::move(conv);
  }
  return catmull_uniform(acc, -extent, hc, cm.X);
}

// ---------------------------------------------------------------------------
// Inversion through the characteristic function

InversionResult inverse_radon(const TomogramGrid& grid, const InversionSpec& spec) {
  if (grid.modes.size() != 1)
    throw std::invalid_argument("inverse_radon: single-mode tomogram required");
  if (!is_power_of_two(static_cast<size_t>(spec.fft_points)) ||
      !is_power_of_two(static_cast<size_t>(spec.cart_points)))
    throw std::invalid_argument("inverse_radon: FFT grid not power of two");
  const ModeTomogramBlock& block = grid.modes[0];
  int nrays = static_cast<int>(block.nodes.size());
  if (nrays < 32)
    throw std::invalid_argument("inverse_radon: insufficient angular coverage (< 32 rays)");
  // rays must be uniform over [0, pi) at unit radius
  for (int j = 0; j < nrays; ++j) {
    auto [mu, nu] = block.nodes[j];
    if (std::abs(std::hypot(mu, nu) - 1.0) > 1e-9)
      throw std::invalid_argument("inverse_radon: rays must have unit radius");
    double want = M_PI * j / nrays;
    if (std::abs(std::atan2(nu, mu) - want) > 1e-9)
      throw std::invalid_argument("inverse_radon: rays must be uniform over [0, pi)");
  }

  int nx = block.x_axis.count;
  double hx = block.x_axis.step();
  ArrayXd xs = block.x_axis.nodes();
  ArrayXd wts = trapezoid_weights(nx, hx);

  // weighted slice values: chi_j(r) = sum_i wv(j, i) exp(i r x_i)
  ArrayXXd wv(nrays, nx);
  for (int j = 0; j < nrays; ++j)
    for (int i = 0; i < nx; ++i) wv(j, i) = wts[i] * block.values(j, i);

  auto chi_at = [&](int ray, double r) {
    Complex acc = 0.0;
    for (int i = 0; i < nx; ++i) acc += wv(ray, i) * std::polar(1.0, r * xs[i]);
    return acc;
  };

  // Data-driven radial cutoff: march outward until every ray's |chi| decays,
  // capped by the X-sampling Nyquist radius.
  double r_cap = 0.8 * M_PI / hx;
  double r_max = r_cap;
  {
    const int probes = 192;
    int quiet = 0;
    for (int t = 1; t <= probes; ++t) {
      double r = r_cap * t / probes;
      double worst = 0.0;
      for (int j = 0; j < nrays; ++j) worst = std::max(worst, std::abs(chi_at(j, r)));
      quiet = (worst < 1e-9) ? quiet + 1 : 0;
      if (quiet >= 3) {
        r_max = r;
        break;
      }
    }
  }

  // Per-ray radial tables (uniform in r), cubic-interpolated later.
  int nr = spec.radial_points;
  double dr = r_max / (nr - 1);
  std::vector<std::vector<Complex>> table(nrays, std::vector<Complex>(nr));
  for (int j = 0; j < nrays; ++j)
    for (int i = 0; i < nr; ++i) table[j][i] = chi_at(j, i * dr);

  // chi on the Cartesian (mu, nu) grid via angular (periodic, conjugate-fold)
  // and radial Catmull-Rom interpolation.
  int nc = spec.cart_points;
  double da = 2.0 * r_max / nc;
  int c = nc / 2;
  auto ray_chi = [&](int ray_idx, double r) -> Complex {
    int j = ray_idx % (2 * nrays);
    if (j < 0) j += 2 * nrays;
    bool conj = j >= nrays;
    if (conj) j -= nrays;
    Complex v = catmull_uniform(table[j], 0.0, dr, r);
    return conj ? std::conj(v) : v;
  };
  Eigen::MatrixXcd chi_grid = Eigen::MatrixXcd::Zero(nc, nc);
  double dth = M_PI / nrays;
  for (int ja = 0; ja < nc; ++ja) {
    double a = (ja - c) * da;
    for (int jb = 0; jb < nc; ++jb) {
      double b = (jb - c) * da;
      double r = std::hypot(a, b);
      if (r > r_max) continue;
      if (r == 0.0) {
        chi_grid(ja, jb) = 1.0;
        continue;
      }
      double th = std::atan2(b, a);
      bool flip = false;
      if (th < 0.0) {
        th += M_PI;
        flip = true;  // chi(-v) = conj chi(v)
      }
      double fj = th / dth;
      int j0 = static_cast<int>(std::floor(fj));
      double t = fj - j0;
      Complex p0 = ray_chi(j0 - 1, r), p1 = ray_chi(j0, r), p2 = ray_chi(j0 + 1, r),
              p3 = ray_chi(j0 + 2, r);
      Complex v = 0.5 * ((2.0 * p1) + (-p0 + p2) * t +
                         (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                         (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
      chi_grid(ja, jb) = flip ? std::conj(v) : v;
    }
  }
  // Hermitian symmetrization keeps the reconstruction real.
  for (int ja = 1; ja < nc; ++ja)
    for (int jb = 1; jb < nc; ++jb) {
      Complex avg = 0.5 * (chi_grid(ja, jb) + std::conj(chi_grid(nc - ja, nc - jb)));
      chi_grid(ja, jb) = avg;
      chi_grid(nc - ja, nc - jb) = std::conj(avg);
    }

  // rho(xi, eta) = (1/(2 pi)^2) int chi(a, b) exp(-i (a xi + b eta)) da db
  // as a zero-padded 2D FFT.
  int N = spec.fft_points;
  if (N < nc) throw std::invalid_argument("inverse_radon: fft_points < cart_points");
  std::vector<std::vector<Complex>> padded(N, std::vector<Complex>(N, Complex(0, 0)));
  for (int ja = 0; ja < nc; ++ja)
    for (int jb = 0; jb < nc; ++jb) {
      int pa = (ja - c) & (N - 1);
      int pb = (jb - c) & (N - 1);
      padded[pa][pb] = chi_grid(ja, jb);
    }
  for (int row = 0; row < N; ++row) fft_inplace(padded[row], false);
  std::vector<Complex> col(N);
  for (int jcol = 0; jcol < N; ++jcol) {
    for (int row = 0; row < N; ++row) col[row] = padded[row][jcol];
    fft_inplace(col, false);
    for (int row = 0; row < N; ++row) padded[row][jcol] = col[row];
  }

  double dxi = kTwoPi / (N * da);
  int half = static_cast<int>(std::floor(spec.out_extent / dxi));
  if (half < 2) throw std::invalid_argument("inverse_radon: output extent below grid step");
  int nout = 2 * half + 1;
  ArrayXXd raw(nout, nout);
  double scale = da * da / (kTwoPi * kTwoPi);
  for (int p = 0; p < nout; ++p) {
    int pp = (p - half) & (N - 1);
    for (int q = 0; q < nout; ++q) {
      int qq = (q - half) & (N - 1);
      raw(p, q) = padded[pp][qq].real() * scale;
    }
  }

  InversionResult res{
      GridDensity(-half * dxi, half * dxi, -half * dxi, half * dxi, raw),
      raw.minCoeff(),
      0.0,
      r_max};
  ArrayXd wq = trapezoid_weights(nout, dxi);
  res.mass_pre_clamp = (raw.colwise() * wq).rowwise().sum().matrix().dot(wq.matrix());
  return res;
}

}  // namespace tomo
