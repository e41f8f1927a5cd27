#pragma once

#include "tomo/types.hpp"

#include <functional>

namespace tomo {

/// Gauss-Legendre rule on [-1, 1]; nodes/weights via Newton on the Legendre
/// recurrence, cached per order.
struct GaussLegendre {
  ArrayXd nodes;
  ArrayXd weights;

  static const GaussLegendre& order(int n);
};

/// Integrate f over [a, b] with a composite Gauss-Legendre rule of
/// total_points nodes split over panels of <= 32 nodes each.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int total_points);

/// Uniform trapezoid rule over [a, b] with n nodes (n >= 2).
double integrate_trapezoid(const std::function<double(double)>& f, double a, double b,
                           int n);

/// Trapezoid weights on a uniform axis of n nodes and spacing h.
ArrayXd trapezoid_weights(int n, double h);

/// Uniform axis with n nodes spanning [a, b] inclusive.
ArrayXd uniform_axis(double a, double b, int n);

}  // namespace tomo
