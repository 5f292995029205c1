#include "sgdlab/reparam.hpp"

#include <algorithm>
#include <cmath>

#include "sgdlab/numerics.hpp"

namespace sgdlab {

Reparametrization::Reparametrization(int dim, std::string tag, bool linear, Map forward, Map inverse,
                                     JacFn jacobian, CurvFn curvature)
    : dim_(dim),
      tag_(std::move(tag)),
      linear_(linear),
      forward_(std::move(forward)),
      inverse_(std::move(inverse)),
      jacobian_(std::move(jacobian)),
      curvature_(std::move(curvature)) {}

namespace {

std::vector<Mat> zero_curvature(int dim) { return std::vector<Mat>(dim, Mat::Zero(dim, dim)); }

double monotone_inverse_1d(double theta, double amp) {
  // y + amp·tanh(y) = θ; the root lies within |amp| of θ.
  double lo = theta - std::abs(amp) - 1.0, hi = theta + std::abs(amp) + 1.0;
  double y = theta;
  for (int it = 0; it < 200; ++it) {
    const double f = y + amp * std::tanh(y) - theta;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(theta))) break;
    if (f > 0) hi = y; else lo = y;
    const double sech = 1.0 / std::cosh(y);
    double next = y - f / (1.0 + amp * sech * sech);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == y) break;
    y = next;
  }
  return y;
}

}  // namespace

Reparametrization Reparametrization::linear_scale(int dim, double a) {
  if (!(a != 0.0) || !std::isfinite(a)) throw ConfigError("linear_scale: factor must be finite and nonzero");
  return Reparametrization(
      dim, "linear_scale(" + std::to_string(a) + ")", true, [a](const Vec& y) { return Vec(a * y); },
      [a](const Vec& t) { return Vec(t / a); },
      [a, dim](const Vec&) { return Mat(a * Mat::Identity(dim, dim)); },
      [dim](const Vec&) { return zero_curvature(dim); });
}

Reparametrization Reparametrization::affine(const Mat& a, const Vec& b) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw ConfigError("affine: shape mismatch");
  const int dim = static_cast<int>(b.size());
  Eigen::FullPivLU<Mat> lu(a);
  if (!lu.isInvertible()) throw NumericError("affine: matrix is singular");
  const Mat inv = lu.inverse();
  return Reparametrization(
      dim, "affine", true, [a, b](const Vec& y) { return Vec(a * y + b); },
      [inv, b](const Vec& t) { return Vec(inv * (t - b)); }, [a](const Vec&) { return a; },
      [dim](const Vec&) { return zero_curvature(dim); });
}

Reparametrization Reparametrization::smooth_monotone(int dim, double amp) {
  if (!(amp > -1.0)) throw ConfigError("smooth_monotone: amplitude must exceed -1");
  return Reparametrization(
      dim, "smooth_monotone(" + std::to_string(amp) + ")", false,
      [amp](const Vec& y) { return Vec(y.array() + amp * y.array().tanh()); },
      [amp](const Vec& t) {
        Vec y(t.size());
        for (Eigen::Index i = 0; i < t.size(); ++i) y[i] = monotone_inverse_1d(t[i], amp);
        return y;
      },
      [amp](const Vec& y) {
        Vec d(y.size());
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          const double s = 1.0 / std::cosh(y[i]);
          d[i] = 1.0 + amp * s * s;
        }
        return Mat(d.asDiagonal());
      },
      [amp, dim](const Vec& y) {
        std::vector<Mat> out = zero_curvature(dim);
        for (int i = 0; i < dim; ++i) {
          const double s = 1.0 / std::cosh(y[i]);
          out[i](i, i) = -2.0 * amp * s * s * std::tanh(y[i]);
        }
        return out;
      });
}

double check_invertible(const Reparametrization& rep, const Box& theta_domain, int n) {
  if (theta_domain.dim() != rep.dim()) throw ConfigError("check_invertible: dimension mismatch");
  const Grid grid = Grid::over(theta_domain, n);
  if (rep.dim() > 2) {
    // Probe the diagonal only.
    Vec t = theta_domain.lo;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      t = theta_domain.lo + (theta_domain.hi - theta_domain.lo) * (double(i) / (n - 1));
      const Vec y = rep.inverse(t);
      if (std::abs(rep.jacobian(y).determinant()) < 1e-12) throw NumericError("reparametrization is singular");
      worst = std::max(worst, (rep.forward(y) - t).cwiseAbs().maxCoeff());
    }
    return worst;
  }
  double worst = 0.0;
  for (long j = 0; j < grid.size(); ++j) {
    const Vec t = grid.point(j);
    const Vec y = rep.inverse(t);
    if (std::abs(rep.jacobian(y).determinant()) < 1e-12) {
      throw NumericError("reparametrization is singular at theta = " + format_vec(t));
    }
    worst = std::max(worst, (rep.forward(y) - t).cwiseAbs().maxCoeff());
  }
  if (worst > 1e-10) throw NumericError("reparametrization does not invert on the domain");
  return worst;
}

Landscape pushforward_landscape(const Landscape& landscape, const Reparametrization& rep,
                                const std::optional<Box>& theta_domain) {
  if (landscape.dim() != rep.dim()) throw ConfigError("pushforward_landscape: dimension mismatch");
  if (theta_domain) check_invertible(rep, *theta_domain);
  return Landscape(
      landscape.dim(), landscape.tag() + "@" + rep.tag(),
      [landscape, rep](const Vec& y) { return landscape.loss(rep.forward(y)); },
      [landscape, rep](const Vec& y) { return Vec(rep.jacobian(y).transpose() * landscape.grad(rep.forward(y))); },
      [landscape, rep](const Vec& y) {
        const Vec t = rep.forward(y);
        const Mat j = rep.jacobian(y);
        Mat h = j.transpose() * landscape.hessian(t) * j;
        if (!rep.is_linear()) {
          const Vec g = landscape.grad(t);
          const auto curv = rep.curvature(y);
          for (int i = 0; i < rep.dim(); ++i) h += g[i] * curv[i];
        }
        return h;
      });
}

const InvarianceRow& InvarianceReport::row(const std::string& term) const {
  for (const auto& r : rows)
    if (r.term == term) return r;
  throw NumericError("invariance report has no term " + term);
}

double InvarianceReport::max_delta(const std::string& prefix) const {
  double m = 0.0;
  for (const auto& r : rows)
    if (r.term.rfind(prefix, 0) == 0) m = std::max(m, r.delta);
  return m;
}

namespace {

double mixture_pdf(const MixtureApprox& mix, double x) {
  double acc = 0.0;
  for (const auto& c : mix.components) {
    const double var = c.cov(0, 0);
    const double z = x - c.mu[0];
    acc += c.weight * std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * M_PI * var);
  }
  return acc;
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12 * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Adaptive integral over [a, b] split at the interior breakpoints.
double piecewise_integral(const std::function<double(double)>& f, double a, double b, std::vector<double> cuts) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
    if (hi > lo) acc += integrate(f, lo, hi, 1e-13, 1e-300);
  }
  return acc;
}

void push(InvarianceReport& rep, const std::string& term, double tv, double yv) {
  rep.rows.push_back({term, tv, yv, std::abs(yv - tv)});
}

}  // namespace

InvarianceReport invariance_report(const TrainTestPair& pair, const MixtureApprox& mix,
                                   const std::vector<ShiftRecord>& records, const Reparametrization& rep,
                                   const Box& theta_domain) {
  const int p = pair.train.dim();
  if (rep.dim() != p) throw ConfigError("invariance_report: dimension mismatch");
  const Landscape test_y = pushforward_landscape(pair.test, rep);
  InvarianceReport out;

  for (const auto& rec : records) {
    const std::string k = std::to_string(rec.k);
    const Vec y_tr = rep.inverse(rec.train_min);
    const Vec y_te = rep.inverse(rec.test_min);
    const Mat c_y = test_y.hessian(y_te);
    const Vec s_y = y_te - y_tr;
    push(out, "test_min_loss_" + k, rec.test_min_loss, test_y.loss(y_te));
    push(out, "shift_curvature_" + k, rec.shift_curvature, s_y.dot(c_y * s_y));

    const BasinComponent* comp = nullptr;
    for (const auto& c : mix.components)
      if ((c.train_min - rec.train_min).norm() <= 1e-6) comp = &c;
    if (comp == nullptr) continue;
    const Vec y_mu = rep.inverse(comp->mu);
    const Mat j_mu_inv = rep.jacobian(y_mu).inverse();
    const Mat cov_y = j_mu_inv * comp->cov * j_mu_inv.transpose();
    push(out, "covariance_" + k, (comp->cov * rec.test_hessian).trace(), (cov_y * c_y).trace());
    const Vec b_y = y_tr - y_mu;
    const double bias_t = comp->bias.dot(rec.test_hessian * rec.shift) + 0.5 * comp->bias.dot(rec.test_hessian * comp->bias);
    const double bias_y = b_y.dot(c_y * s_y) + 0.5 * b_y.dot(c_y * b_y);
    push(out, "bias_" + k, bias_t, bias_y);
  }
  if (!records.empty()) {
    const auto& rec = records.front();
    const Mat c_y = test_y.hessian(rep.inverse(rec.test_min));
    out.raw_curvature_ratio = c_y.trace() / rec.test_hessian.trace();
    push(out, "raw_curvature", rec.test_hessian.trace(), c_y.trace());
  }

  if (p == 1 && !mix.components.empty()) {
    const double lo = theta_domain.lo[0], hi = theta_domain.hi[0];
    std::vector<const BasinComponent*> comps;
    for (const auto& c : mix.components) comps.push_back(&c);
    std::sort(comps.begin(), comps.end(), [](auto* a, auto* b) { return a->mu[0] < b->mu[0]; });
    auto rho = [&mix](double x) { return mixture_pdf(mix, x); };
    std::vector<double> bounds{lo};
    std::vector<double> cuts;
    for (size_t i = 0; i < comps.size(); ++i) {
      cuts.push_back(comps[i]->mu[0]);
      if (i + 1 < comps.size()) bounds.push_back(golden_min(rho, comps[i]->mu[0], comps[i + 1]->mu[0]));
    }
    bounds.push_back(hi);
    cuts.insert(cuts.end(), bounds.begin(), bounds.end());

    auto to_y = [&rep](double t) { return rep.inverse(vec1(t))[0]; };
    auto rho_y = [&rep, &mix](double y) {
      const Vec yv = vec1(y);
      return mixture_pdf(mix, rep.forward(yv)[0]) * std::abs(rep.jacobian(yv)(0, 0));
    };
    std::vector<double> cuts_y;
    for (double c : cuts) cuts_y.push_back(to_y(c));
    double ylo = to_y(lo), yhi = to_y(hi);
    if (ylo > yhi) std::swap(ylo, yhi);

    const double z_t = piecewise_integral(rho, lo, hi, cuts);
    const double z_y = piecewise_integral(rho_y, ylo, yhi, cuts_y);
    for (size_t i = 0; i < comps.size(); ++i) {
      const double a = bounds[i], b = bounds[i + 1];
      double ya = to_y(a), yb = to_y(b);
      if (ya > yb) std::swap(ya, yb);
      const double wt = piecewise_integral(rho, a, b, cuts) / z_t;
      const double wy = piecewise_integral(rho_y, ya, yb, cuts_y) / z_y;
      push(out, "weight_" + std::to_string(i), wt, wy);
    }
    auto f_t = [&](double x) { return rho(x) * pair.test.loss(x); };
    auto f_y = [&](double y) { return rho_y(y) * test_y.loss(y); };
    push(out, "expected_test_loss", piecewise_integral(f_t, lo, hi, cuts) / z_t,
         piecewise_integral(f_y, ylo, yhi, cuts_y) / z_y);
  }
  return out;
}

}  // namespace sgdlab
