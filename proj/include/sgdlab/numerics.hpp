#ifndef SGDLAB_NUMERICS_HPP_
#define SGDLAB_NUMERICS_HPP_

#include <functional>
#include <vector>

#include "sgdlab/core.hpp"

namespace sgdlab {

// Uniform axis with n nodes including both endpoints.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int n = 2;

  double step() const { return (hi - lo) / (n - 1); }
  double at(int i) const { return i == n - 1 ? hi : lo + i * step(); }
  Vec nodes() const;
  bool operator==(const Axis&) const = default;
};

// Tensor-product grid over 1 or 2 axes, row-major (last axis fastest).
struct Grid {
  std::vector<Axis> axes;

  static Grid line(double lo, double hi, int n) { return Grid{{Axis{lo, hi, n}}}; }
  static Grid plane(const Axis& a, const Axis& b) { return Grid{{a, b}}; }
  static Grid over(const Box& box, int n_per_axis);

  int dim() const { return static_cast<int>(axes.size()); }
  long size() const;
  Vec point(long flat) const;
  // Trapezoid weights (product of 1D trapezoid weights times steps).
  Vec weights() const;
  bool operator==(const Grid&) const = default;
};

double trapezoid(const Vec& values, const Grid& grid);

// 1D derivative of samples on a uniform grid: sixth-order central stencil in
// the interior, lower order toward the ends.
Vec grid_derivative(const Vec& values, double step);

// Derivative along one axis of a 2D row-major field.
Vec grid_derivative_axis(const Vec& values, const Grid& grid, int axis);

// 15-point Gauss-Legendre panels with recursive bisection until a panel
// estimate and its halves agree within max(tol_share, rel_tol·|panel|), where
// the shares of max(abs_tol, rel_tol·∫|f|) are split by panel width.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                 double abs_tol = 1e-300);

// Central differences.
double fd_derivative(const std::function<double(double)>& f, double x, double h);
double fd_second_derivative(const std::function<double(double)>& f, double x, double h);
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);
// Jacobian of a vector field by central differences; row i = ∂F_i/∂x.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h);

// Log-sum-exp of a vector.
double log_sum_exp(const Vec& a);

}  // namespace sgdlab

#endif  // SGDLAB_NUMERICS_HPP_
