#include "tomo/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace tomo {

namespace {

GaussLegendre compute_gl(int n) {
  GaussLegendre rule;
  rule.nodes = ArrayXd::Zero(n);
  rule.weights = ArrayXd::Zero(n);
  // Newton iteration from the Chebyshev-angle initial guess; symmetric pairs.
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& GaussLegendre::order(int n) {
  if (n < 1) throw std::invalid_argument("GaussLegendre: order < 1");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int total_points) {
  if (!(b > a)) throw std::invalid_argument("integrate_gl: empty interval");
  int per_panel = 32;
  int panels = std::max(1, (total_points + per_panel - 1) / per_panel);
  const GaussLegendre& rule = GaussLegendre::order(per_panel);
  double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h;
    double half = 0.5 * h;
    for (int i = 0; i < per_panel; ++i)
      sum += rule.weights[i] * f(c + half * rule.nodes[i]);
    // weights are for [-1, 1]; panel scaling applied once below
  }
  return sum * 0.5 * h;
}

double integrate_trapezoid(const std::function<double(double)>& f, double a, double b,
                           int n) {
  if (n < 2) throw std::invalid_argument("integrate_trapezoid: need >= 2 nodes");
  double h = (b - a) / (n - 1);
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n - 1; ++i) sum += f(a + i * h);
  return sum * h;
}

ArrayXd trapezoid_weights(int n, double h) {
  ArrayXd w = ArrayXd::Constant(n, h);
  w[0] = 0.5 * h;
  w[n - 1] = 0.5 * h;
  return w;
}

ArrayXd uniform_axis(double a, double b, int n) {
  return ArrayXd::LinSpaced(n, a, b);
}

}  // namespace tomo
