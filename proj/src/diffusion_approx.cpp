#include "sgdlab/diffusion_approx.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace sgdlab {

void CumulantSet::validate() const {
  if (values.empty() || values.size() > 6) throw ConfigError("cumulants: order must be in 1..6");
  if (values.size() >= 2 && values[1] < 0.0) throw ConfigError("cumulants: κ_2 must be >= 0");
}

namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<double> moments_from_cumulants(const CumulantSet& c) {
  c.validate();
  const int n = c.order();
  std::vector<double> m(n + 1, 0.0);
  m[0] = 1.0;
  for (int j = 1; j <= n; ++j) {
    double s = 0.0;
    for (int k = 1; k <= j; ++k) s += binom(j - 1, k - 1) * c.values[k - 1] * m[j - k];
    m[j] = s;
  }
  return {m.begin() + 1, m.end()};
}

CumulantSet cumulants_from_moments(const std::vector<double>& moments) {
  const int n = static_cast<int>(moments.size());
  if (n < 1 || n > 6) throw ConfigError("cumulants: order must be in 1..6");
  std::vector<double> m(n + 1);
  m[0] = 1.0;
  for (int j = 1; j <= n; ++j) m[j] = moments[j - 1];
  std::vector<double> kappa(n);
  for (int j = 1; j <= n; ++j) {
    double s = m[j];
    for (int k = 1; k < j; ++k) s -= binom(j - 1, k - 1) * kappa[k - 1] * m[j - k];
    kappa[j - 1] = s;
  }
  return CumulantSet{kappa};
}

std::vector<double> increment_matching_error(const CumulantSet& target, int k, int trials, std::uint64_t seed) {
  target.validate();
  if (k < 1) throw ConfigError("increment matching: K must be >= 1");
  if (trials < 2) throw ConfigError("increment matching: need at least 2 trials");
  const double mean = target.values[0] / k;
  const double var = target.order() >= 2 ? target.values[1] / k : 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(var);
  const int orders = std::min(target.order(), 4);

  // Central moments about the target mean keep the estimate well conditioned.
  std::vector<double> central(4, 0.0);
  const double anchor = target.values[0];
  for (int t = 0; t < trials; ++t) {
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += mean + sd * normal(rng);
    const double d = s - anchor;
    double pw = 1.0;
    for (int j = 0; j < 4; ++j) {
      pw *= d;
      central[j] += pw;
    }
  }
  for (double& c : central) c /= trials;
  const CumulantSet shifted = cumulants_from_moments(central);
  std::vector<double> err(orders);
  for (int j = 0; j < orders; ++j) {
    // Shifting by a constant changes only κ_1.
    const double est = (j == 0) ? shifted.values[0] + anchor : shifted.values[j];
    err[j] = std::abs(est - target.values[j]);
  }
  return err;
}

// ---------------------------------------------------------------------------
// Fokker-Planck

namespace {

struct Interfaces {
  Vec upper;  // coefficient of ρ_{i+1} in J_{i+1/2}
  Vec lower;  // coefficient of ρ_i (enters with a minus sign)
  double max_d = 0.0;
};

double chang_cooper_delta(double w) {
  if (std::abs(w) < 1e-6) return 0.5 - w / 12.0;
  return 1.0 / w - 1.0 / std::expm1(w);
}

Interfaces build_interfaces(const Landscape& landscape, const DiffusionField& field, double temperature,
                            const Axis& grid) {
  const int n = grid.n;
  const double h = grid.step();
  Interfaces out{Vec(n - 1), Vec(n - 1)};
  for (int i = 0; i + 1 < n; ++i) {
    const double x = 0.5 * (grid.at(i) + grid.at(i + 1));
    const DiffusionEval de = field.eval(vec1(x));
    const double d = de.d(0, 0);
    out.max_d = std::max(out.max_d, d);
    const double b = landscape.grad(x) + 0.5 * temperature * de.div[0];
    const double c = 0.5 * temperature * d;
    if (!(c > 0.0)) throw NumericError("fp_evolve_1d: D must be positive on the grid");
    const double w = h * b / c;
    const double delta = chang_cooper_delta(w);
    out.upper[i] = b * (1.0 - delta) + c / h;
    out.lower[i] = c / h - b * delta;
  }
  return out;
}

Vec control_volumes(const Axis& grid) {
  Vec v = Vec::Constant(grid.n, grid.step());
  v[0] *= 0.5;
  v[grid.n - 1] *= 0.5;
  return v;
}

}  // namespace

double fp_stable_dt(const Landscape& landscape, const DiffusionField& field, double temperature, const Axis& grid) {
  const Interfaces itf = build_interfaces(landscape, field, temperature, grid);
  const Vec vol = control_volumes(grid);
  const double h = grid.step();
  double dt = 0.9 * h * h / (temperature * itf.max_d);
  for (int i = 0; i < grid.n; ++i) {
    double out_rate = 0.0;
    if (i + 1 < grid.n) out_rate += itf.lower[i];
    if (i > 0) out_rate += itf.upper[i - 1];
    if (out_rate > 0.0) dt = std::min(dt, 0.9 * vol[i] / out_rate);
  }
  return dt;
}

DensityTrace fp_evolve_1d(const Landscape& landscape, const DiffusionField& field, double temperature,
                          const Axis& grid, double dt, double t_end, const Vec& rho0, const FpOptions& opts) {
  if (landscape.dim() != 1 || field.dim() != 1) throw ConfigError("fp_evolve_1d: one-dimensional problems only");
  if (rho0.size() != grid.n) throw ConfigError("fp_evolve_1d: initial density does not match the grid");
  if (!(temperature > 0.0)) throw ConfigError("fp_evolve_1d: temperature must be positive");
  const Interfaces itf = build_interfaces(landscape, field, temperature, grid);
  const Vec vol = control_volumes(grid);
  const double h = grid.step();
  const double diffusive_bound = 0.9 * h * h / (temperature * itf.max_d);
  if (dt > diffusive_bound) {
    std::ostringstream os;
    os << "fp_evolve_1d: dt = " << dt << " violates the stability bound dt <= 0.9 Δθ²/(T max D) = "
       << diffusive_bound;
    throw NumericError(os.str());
  }
  const double positivity_bound = fp_stable_dt(landscape, field, temperature, grid) / 0.9;
  if (dt > positivity_bound) {
    std::ostringstream os;
    os << "fp_evolve_1d: dt = " << dt << " violates the positivity bound " << positivity_bound
       << " of the drift-diffusion scheme";
    throw NumericError(os.str());
  }

  const Grid g1 = Grid{{grid}};
  Vec rho = rho0 / trapezoid(rho0, g1);
  DensityTrace trace{grid, {{0.0, rho}}};
  const int n = grid.n;
  Vec flux(n - 1);
  double t = 0.0;
  double next_snapshot = opts.snapshot_interval > 0.0 ? opts.snapshot_interval : t_end;
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  for (long s = 0; s < steps; ++s) {
    const double step = std::min(dt, t_end - t);
    for (int i = 0; i + 1 < n; ++i) flux[i] = itf.upper[i] * rho[i + 1] - itf.lower[i] * rho[i];
    for (int i = 0; i < n; ++i) {
      double div = 0.0;
      if (i + 1 < n) div += flux[i];
      if (i > 0) div -= flux[i - 1];
      rho[i] += step * div / vol[i];
    }
    t += step;
    if (!rho.allFinite() || rho.minCoeff() < -1e-8) {
      std::ostringstream os;
      os << "fp_evolve_1d: instability at t = " << t << " (non-finite or negative mass beyond -1e-8)";
      throw NumericError(os.str());
    }
    if (t >= next_snapshot - 1e-12 * t_end || s + 1 == steps) {
      if (trace.snapshots.back().time < t) trace.snapshots.push_back({t, rho});
      next_snapshot += opts.snapshot_interval > 0.0 ? opts.snapshot_interval : t_end;
    }
  }
  return trace;
}

std::vector<Vec> probability_current(const GriddedDensity& density, const Landscape& landscape,
                                     const DiffusionField& field, double temperature) {
  const Grid& grid = density.grid;
  const int p = grid.dim();
  if (landscape.dim() != p) throw ConfigError("probability_current: dimension mismatch");
  const long n = grid.size();
  std::vector<Vec> current(p, Vec(n));
  // D_ij ρ sampled on the grid, one field per (i, j).
  std::vector<Vec> d_rho(static_cast<std::size_t>(p * p), Vec(n));
  for (long k = 0; k < n; ++k) {
    const Vec x = grid.point(k);
    const Vec g = landscape.grad(x);
    const Mat d = field.eval(x).d;
    for (int i = 0; i < p; ++i) {
      current[i][k] = g[i] * density.values[k];
      for (int j = 0; j < p; ++j) d_rho[static_cast<std::size_t>(i * p + j)][k] = d(i, j) * density.values[k];
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      current[i] += 0.5 * temperature * grid_derivative_axis(d_rho[static_cast<std::size_t>(i * p + j)], grid, j);
    }
  }
  return current;
}

double relative_current(const GriddedDensity& density, const Landscape& landscape, const DiffusionField& field,
                        double temperature) {
  const auto j = probability_current(density, landscape, field, temperature);
  double num = 0.0, den = 0.0;
  for (long k = 0; k < density.grid.size(); ++k) {
    const Vec g = landscape.grad(density.grid.point(k));
    for (std::size_t i = 0; i < j.size(); ++i) {
      num = std::max(num, std::abs(j[i][k]));
      den = std::max(den, std::abs(g[static_cast<Eigen::Index>(i)] * density.values[k]));
    }
  }
  return den > 0.0 ? num / den : num;
}

double l1_distance(const Vec& a, const Vec& b, const Grid& grid) { return trapezoid((a - b).cwiseAbs(), grid); }

}  // namespace sgdlab
