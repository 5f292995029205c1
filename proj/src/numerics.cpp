#include "sgdlab/numerics.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace sgdlab {

Vec Axis::nodes() const {
  Vec x(n);
  for (int i = 0; i < n; ++i) x[i] = at(i);
  return x;
}

Grid Grid::over(const Box& box, int n_per_axis) {
  Grid g;
  for (int i = 0; i < box.dim(); ++i) g.axes.push_back(Axis{box.lo[i], box.hi[i], n_per_axis});
  return g;
}

long Grid::size() const {
  long s = 1;
  for (const auto& a : axes) s *= a.n;
  return s;
}

Vec Grid::point(long flat) const {
  Vec x(dim());
  for (int d = dim() - 1; d >= 0; --d) {
    const int n = axes[d].n;
    x[d] = axes[d].at(static_cast<int>(flat % n));
    flat /= n;
  }
  return x;
}

namespace {

Vec axis_weights(const Axis& a) {
  Vec w = Vec::Constant(a.n, a.step());
  w[0] *= 0.5;
  w[a.n - 1] *= 0.5;
  return w;
}

}  // namespace

Vec Grid::weights() const {
  if (dim() == 1) return axis_weights(axes[0]);
  const Vec w0 = axis_weights(axes[0]);
  const Vec w1 = axis_weights(axes[1]);
  Vec w(size());
  for (int i = 0; i < axes[0].n; ++i)
    for (int j = 0; j < axes[1].n; ++j) w[static_cast<long>(i) * axes[1].n + j] = w0[i] * w1[j];
  return w;
}

double trapezoid(const Vec& values, const Grid& grid) { return values.dot(grid.weights()); }

Vec grid_derivative(const Vec& v, double h) {
  const Eigen::Index n = v.size();
  Vec d(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i >= 3 && i + 3 < n) {
      d[i] = (-v[i - 3] + 9.0 * v[i - 2] - 45.0 * v[i - 1] + 45.0 * v[i + 1] - 9.0 * v[i + 2] + v[i + 3]) /
             (60.0 * h);
    } else if (i >= 2 && i + 2 < n) {
      d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    } else if (i >= 1 && i + 1 < n) {
      d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    } else if (i == 0) {
      d[i] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    } else {
      d[i] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    }
  }
  return d;
}

Vec grid_derivative_axis(const Vec& values, const Grid& grid, int axis) {
  if (grid.dim() == 1) return grid_derivative(values, grid.axes[0].step());
  const int n0 = grid.axes[0].n, n1 = grid.axes[1].n;
  Vec out(values.size());
  if (axis == 0) {
    Vec col(n0);
    for (int j = 0; j < n1; ++j) {
      for (int i = 0; i < n0; ++i) col[i] = values[static_cast<long>(i) * n1 + j];
      const Vec d = grid_derivative(col, grid.axes[0].step());
      for (int i = 0; i < n0; ++i) out[static_cast<long>(i) * n1 + j] = d[i];
    }
  } else {
    for (int i = 0; i < n0; ++i) {
      const Vec row = values.segment(static_cast<long>(i) * n1, n1);
      out.segment(static_cast<long>(i) * n1, n1) = grid_derivative(row, grid.axes[1].step());
    }
  }
  return out;
}

namespace {

struct GaussLegendre {
  static constexpr int kN = 15;
  std::array<double, kN> x{};
  std::array<double, kN> w{};

  GaussLegendre() {
    for (int i = 0; i < kN; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (kN + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= kN; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = kN * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }

  double panel(const std::function<double(double)>& f, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < kN; ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre gl;
  return gl;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole, double rel_tol,
             double abs_tol, int depth) {
  const auto& gl = gauss_legendre();
  const double m = 0.5 * (a + b);
  const double left = gl.panel(f, a, m), right = gl.panel(f, m, b);
  const double both = left + right;
  if (depth >= 48 || std::abs(both - whole) <= std::max(abs_tol, rel_tol * std::abs(both))) return both;
  return adapt(f, a, m, left, rel_tol, 0.5 * abs_tol, depth + 1) +
         adapt(f, m, b, right, rel_tol, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  // A 16-panel pass sets the scale, so that the tolerance of a panel deep in
  // a negligible tail is a share of the whole integral rather than of itself.
  const auto& gl = gauss_legendre();
  constexpr int kPanels = 16;
  double scale = 0.0;
  double parts[kPanels];
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + (b - a) * i / kPanels, hi = i == kPanels - 1 ? b : a + (b - a) * (i + 1) / kPanels;
    parts[i] = gl.panel(f, lo, hi);
    scale += std::abs(parts[i]);
  }
  const double share = std::max(abs_tol, rel_tol * scale) / kPanels;
  double acc = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + (b - a) * i / kPanels, hi = i == kPanels - 1 ? b : a + (b - a) * (i + 1) / kPanels;
    acc += adapt(f, lo, hi, parts[i], rel_tol, share, 0);
  }
  return acc;
}

double fd_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

double fd_second_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Eigen::Index p = x.size();
  Mat j(f(x).size(), p);
  for (Eigen::Index k = 0; k < p; ++k) {
    Vec a = x, b = x;
    a[k] += h;
    b[k] -= h;
    j.col(k) = (f(a) - f(b)) / (2.0 * h);
  }
  return j;
}

double log_sum_exp(const Vec& a) {
  const double m = a.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((a.array() - m).exp().sum());
}

}  // namespace sgdlab
