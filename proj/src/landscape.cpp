#include "sgdlab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sgdlab/log.hpp"

namespace sgdlab {

void BumpSpec::validate() const {
  if (minima.empty()) throw ConfigError("landscape: at least one minimum is required");
  if (weights.size() != minima.size() || sigmas.size() != minima.size()) {
    throw ConfigError("landscape: minima, weights and sigmas must have equal length (got " +
                      std::to_string(minima.size()) + ", " + std::to_string(weights.size()) +
                      ", " + std::to_string(sigmas.size()) + ")");
  }
  const auto p = minima.front().size();
  if (p == 0) throw ConfigError("landscape: minima must have dimension >= 1");
  for (const auto& m : minima) {
    if (m.size() != p) throw ConfigError("landscape: minima have inconsistent dimensions");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw ConfigError("landscape: weights must be positive");
  }
  for (double s : sigmas) {
    if (!(s > 0.0)) throw ConfigError("landscape: sigmas must be positive");
  }
  if (!(confinement >= 0.0)) throw ConfigError("landscape: confinement c must be >= 0");
  if (!std::isfinite(loss_scale)) throw ConfigError("landscape: lscale must be finite");
}

std::vector<double> BumpSpec::effective_weights() const {
  std::vector<double> w = weights;
  if (weight_perturb == 0.0) return w;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& wi : w) wi += weight_perturb * normal(rng);
  for (double wi : w) {
    if (!(wi > 0.0)) throw ConfigError("landscape: wscale perturbation produced a nonpositive weight");
  }
  return w;
}

Landscape::Landscape(int dim, std::string tag, ValueFn value, GradFn grad, HessFn hess)
    : impl_(std::make_shared<const Impl>(
          Impl{dim, std::move(tag), std::move(value), std::move(grad), std::move(hess)})) {}

Mat Landscape::hessian(const Vec& theta) const {
  Mat h = impl_->hess(theta);
  return 0.5 * (h + h.transpose());
}

double Landscape::loss(double x) const { return loss(vec1(x)); }
double Landscape::grad(double x) const { return grad(vec1(x))[0]; }
double Landscape::hessian(double x) const { return hessian(vec1(x))(0, 0); }

namespace {

struct Bump {
  Vec center;
  double amplitude;
  double inv_var;
};

}  // namespace

Landscape build_landscape(const BumpSpec& spec) {
  spec.validate();
  const int p = spec.dim();
  const auto w = spec.effective_weights();
  std::vector<Bump> bumps;
  for (std::size_t i = 0; i < spec.minima.size(); ++i) {
    const double var = spec.sigmas[i] * spec.sigmas[i];
    double amp = w[i];
    if (spec.form == BumpForm::kDensity) amp /= std::pow(2.0 * std::numbers::pi * var, 0.5 * p);
    bumps.push_back({spec.minima[i], amp, 1.0 / var});
  }
  const double c = spec.confinement;
  const double scale = spec.loss_scale;

  auto value = [bumps, c, scale](const Vec& x) {
    double u = 0.5 * c * x.squaredNorm();
    for (const auto& b : bumps) u -= b.amplitude * std::exp(-0.5 * (x - b.center).squaredNorm() * b.inv_var);
    return scale * u;
  };
  auto grad = [bumps, c, scale](const Vec& x) {
    Vec g = c * x;
    for (const auto& b : bumps) {
      const Vec r = x - b.center;
      const double e = b.amplitude * std::exp(-0.5 * r.squaredNorm() * b.inv_var);
      g += e * b.inv_var * r;
    }
    return Vec(scale * g);
  };
  auto hess = [bumps, c, scale, p](const Vec& x) {
    Mat h = c * Mat::Identity(p, p);
    for (const auto& b : bumps) {
      const Vec r = x - b.center;
      const double e = b.amplitude * std::exp(-0.5 * r.squaredNorm() * b.inv_var);
      h += e * b.inv_var * (Mat::Identity(p, p) - b.inv_var * r * r.transpose());
    }
    return Mat(scale * h);
  };
  return Landscape(p, "bumps", value, grad, hess);
}

Landscape quadratic_landscape(const Mat& hessian, const Vec& center, double offset) {
  const Mat h = 0.5 * (hessian + hessian.transpose());
  const int p = static_cast<int>(center.size());
  return Landscape(
      p, "quadratic",
      [h, center, offset](const Vec& x) {
        const Vec r = x - center;
        return 0.5 * r.dot(h * r) + offset;
      },
      [h, center](const Vec& x) { return Vec(h * (x - center)); },
      [h](const Vec&) { return h; });
}

Landscape linear_landscape(const Vec& slope, double offset) {
  const int p = static_cast<int>(slope.size());
  return Landscape(
      p, "linear", [slope, offset](const Vec& x) { return slope.dot(x) + offset; },
      [slope](const Vec&) { return slope; }, [p](const Vec&) { return Mat(Mat::Zero(p, p)); });
}

Landscape separable_landscape(const std::vector<Landscape>& parts) {
  for (const auto& part : parts) {
    if (part.dim() != 1) throw ConfigError("separable landscape: every part must be one-dimensional");
  }
  const int p = static_cast<int>(parts.size());
  return Landscape(
      p, "separable",
      [parts](const Vec& x) {
        double u = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) u += parts[i].loss(x[i]);
        return u;
      },
      [parts, p](const Vec& x) {
        Vec g(p);
        for (int i = 0; i < p; ++i) g[i] = parts[i].grad(x[i]);
        return g;
      },
      [parts, p](const Vec& x) {
        Mat h = Mat::Zero(p, p);
        for (int i = 0; i < p; ++i) h(i, i) = parts[i].hessian(x[i]);
        return h;
      });
}

Landscape shifted_landscape(const Landscape& base, const Vec& shift) {
  return Landscape(
      base.dim(), base.tag() + "+shift", [base, shift](const Vec& x) { return base.loss(Vec(x + shift)); },
      [base, shift](const Vec& x) { return base.grad(Vec(x + shift)); },
      [base, shift](const Vec& x) { return base.hessian(Vec(x + shift)); });
}

TrainTestPair make_shifted_pair(const Landscape& train, const Vec& shift) {
  if (shift.size() != train.dim()) {
    throw ConfigError("shift dimension " + std::to_string(shift.size()) +
                      " does not match landscape dimension " + std::to_string(train.dim()));
  }
  return TrainTestPair{train, shifted_landscape(train, shift), shift};
}

TrainTestPair make_shifted_pair(const BumpSpec& spec, const Vec& shift) {
  return make_shifted_pair(build_landscape(spec), shift);
}

Vec sample_shift(int dim, double stddev, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, stddev);
  Vec s(dim);
  for (int i = 0; i < dim; ++i) s[i] = normal(rng);
  return s;
}

// ---------------------------------------------------------------------------
// Minima search

namespace {

bool is_pd(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() > 0.0;
}

// Bracketed Newton on g(x) = U'(x) with a sign change g(a) < 0 < g(b).
std::optional<double> bracketed_root(const Landscape& u, double a, double b, const MinimaOptions& opts) {
  double ga = u.grad(a), gb = u.grad(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  double x = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double g = u.grad(x);
    if (std::abs(g) <= 0.01 * opts.grad_tol) return x;
    if (g < 0.0) a = x; else b = x;
    const double h = u.hessian(x);
    double next = (h > 0.0) ? x - g / h : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

std::optional<Minimum> polish_minimum(const Landscape& landscape, const Vec& start, const MinimaOptions& opts) {
  Vec x = start;
  Vec g = landscape.grad(x);
  const double stop_tol = 1e-3 * opts.grad_tol;
  for (int it = 0; it < opts.max_newton_iters && g.norm() > stop_tol; ++it) {
    const Mat h = landscape.hessian(x);
    Eigen::LLT<Mat> llt(h);
    Vec step;
    if (llt.info() == Eigen::Success) {
      step = -llt.solve(g);
    } else {
      const double scale = std::max(1.0, h.norm());
      step = -g / scale;
    }
    // Damping: halve until the gradient norm decreases.
    double t = 1.0;
    Vec trial = x + step;
    Vec gt = landscape.grad(trial);
    int halvings = 0;
    while (!(gt.norm() < g.norm()) && halvings < 40) {
      t *= 0.5;
      trial = x + t * step;
      gt = landscape.grad(trial);
      ++halvings;
    }
    if (!gt.allFinite()) break;
    if (!(gt.norm() < g.norm())) break;  // stagnation at roundoff
    const double moved = (trial - x).norm();
    x = trial;
    g = gt;
    if (moved <= 1e-15 * (1.0 + x.norm())) break;
  }
  if (!x.allFinite() || !(g.norm() <= opts.grad_tol)) return std::nullopt;
  const Mat h = landscape.hessian(x);
  if (!is_pd(h)) return std::nullopt;
  Minimum m;
  m.theta = x;
  m.hessian = h;
  m.value = opts.skip_values ? std::numeric_limits<double>::quiet_NaN() : landscape.loss(x);
  return m;
}

std::vector<Minimum> local_minima(const Landscape& landscape, const Box& domain, int grid_n,
                                  const MinimaOptions& opts) {
  const int p = landscape.dim();
  if (grid_n < 3) throw ConfigError("local_minima: grid_n must be >= 3");
  if (domain.dim() != p) throw ConfigError("local_minima: domain dimension mismatch");
  if (p > 2) throw ConfigError("local_minima: grid scan supports p <= 2 only");

  std::vector<Vec> candidates;
  if (p == 1) {
    const double lo = domain.lo[0], hi = domain.hi[0];
    const double h = (hi - lo) / (grid_n - 1);
    double prev_x = lo, prev_g = landscape.grad(lo);
    for (int j = 1; j < grid_n; ++j) {
      const double x = (j == grid_n - 1) ? hi : lo + j * h;
      const double g = landscape.grad(x);
      if (prev_g < 0.0 && g >= 0.0) {
        if (auto r = bracketed_root(landscape, prev_x, x, opts)) candidates.push_back(vec1(*r));
      }
      prev_x = x;
      prev_g = g;
    }
  } else {
    const int n = std::max(3, grid_n);
    const Vec step = (domain.hi - domain.lo) / (n - 1);
    std::vector<Vec> grads(static_cast<std::size_t>(n) * n);
    auto at = [&](int i, int j) -> Vec& { return grads[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        Vec x(2);
        x << domain.lo[0] + i * step[0], domain.lo[1] + j * step[1];
        at(i, j) = landscape.grad(x);
      }
    }
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) {
        bool straddles = true;
        for (int c = 0; c < 2 && straddles; ++c) {
          double lo = at(i, j)[c], hi = lo;
          for (const Vec* g : {&at(i + 1, j), &at(i, j + 1), &at(i + 1, j + 1)}) {
            lo = std::min(lo, (*g)[c]);
            hi = std::max(hi, (*g)[c]);
          }
          straddles = lo <= 0.0 && hi >= 0.0;
        }
        if (!straddles) continue;
        Vec x(2);
        x << domain.lo[0] + (i + 0.5) * step[0], domain.lo[1] + (j + 0.5) * step[1];
        candidates.push_back(x);
      }
    }
  }

  std::vector<Minimum> found;
  for (const Vec& c : candidates) {
    auto m = polish_minimum(landscape, c, opts);
    if (!m) {
      // Saddles and maxima in 2D also straddle; only warn in 1D where the
      // bracket guarantees a minimum.
      if (p == 1) warn("local_minima: Newton polish failed near " + format_vec(c) + "; candidate dropped");
      continue;
    }
    if (!domain.contains(m->theta)) continue;
    const bool dup = std::any_of(found.begin(), found.end(), [&](const Minimum& f) {
      return (f.theta - m->theta).norm() <= opts.dedupe_tol;
    });
    if (!dup) found.push_back(std::move(*m));
  }
  std::sort(found.begin(), found.end(), [](const Minimum& a, const Minimum& b) {
    return std::lexicographical_compare(a.theta.data(), a.theta.data() + a.theta.size(), b.theta.data(),
                                        b.theta.data() + b.theta.size());
  });
  return found;
}

}  // namespace sgdlab
