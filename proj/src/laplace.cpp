#include "sgdlab/laplace.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sgdlab/numerics.hpp"

namespace sgdlab {

Vec MixtureApprox::weights() const {
  Vec w(components.size());
  for (std::size_t k = 0; k < components.size(); ++k) w[static_cast<Eigen::Index>(k)] = components[k].weight;
  return w;
}

namespace {

double log_det_pd(const Mat& h, std::size_t basin) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
  const Vec ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) {
    std::ostringstream os;
    os << "basin " << basin << ": Hessian of v is not positive definite (min eigenvalue " << ev.minCoeff()
       << "); degenerate curvature needs the higher-order weight";
    throw NumericError(os.str());
  }
  return ev.array().log().sum();
}

}  // namespace

Vec basin_weights(const std::vector<double>& v_values, const std::vector<Mat>& hessians, double temperature) {
  if (v_values.size() != hessians.size() || v_values.empty()) {
    throw ConfigError("basin_weights: need one Hessian per basin and at least one basin");
  }
  if (!(temperature > 0.0)) throw ConfigError("basin_weights: temperature must be positive");
  Vec logw(v_values.size());
  for (std::size_t k = 0; k < v_values.size(); ++k) {
    logw[static_cast<Eigen::Index>(k)] = -2.0 * v_values[k] / temperature - 0.5 * log_det_pd(hessians[k], k);
  }
  return (logw.array() - log_sum_exp(logw)).exp().matrix();
}

Vec component_bias(const Vec& train_min, const Mat& train_hessian, const DiffusionField& field, double temperature) {
  const Vec div = field.eval(train_min).div;
  Eigen::LDLT<Mat> ldlt(train_hessian);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().cwiseAbs().minCoeff() == 0.0) {
    throw NumericError("component_bias: train Hessian is singular at " + format_vec(train_min));
  }
  return 0.5 * temperature * ldlt.solve(div);
}

Mat component_cov(const Mat& hess_v, double temperature) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hess_v + hess_v.transpose()));
  const Vec ev = es.eigenvalues();
  if (!(ev.minCoeff() > 0.0)) throw NumericError("component_cov: Hessian of v is singular or indefinite");
  return 0.5 * temperature * es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

double higher_order_log_weight(int order, const Vec& eigenvalues, double v_k, double temperature) {
  if (order < 2 || order % 2 != 0) {
    throw NumericError("higher_order_weight: order " + std::to_string(order) + " is not even; not a local minimum");
  }
  if (eigenvalues.size() == 0 || !(eigenvalues.minCoeff() > 0.0)) {
    throw NumericError("higher_order_weight: eigenvalues must be positive at a local minimum");
  }
  const double j = order;
  const double p = static_cast<double>(eigenvalues.size());
  const double log_fact = std::lgamma(j + 1.0);
  return -2.0 * v_k / temperature - eigenvalues.array().log().sum() / j +
         (p / j) * (std::log(temperature) + log_fact - std::log(2.0)) +
         p * (std::log(2.0) + std::lgamma((j + 1.0) / j));
}

double higher_order_weight(int order, const Vec& eigenvalues, double v_k, double temperature) {
  return std::exp(higher_order_log_weight(order, eigenvalues, v_k, temperature));
}

MixtureApprox build_mixture(const Landscape& train, const DiffusionField& field, double temperature,
                            const Box& domain, const MixtureOptions& opts) {
  return build_mixture(train, effective_potential(train, field, temperature, domain), temperature, domain, opts);
}

MixtureApprox build_mixture(const Landscape& train, const EffectivePotential& potential, double temperature,
                            const Box& domain, const MixtureOptions& opts) {
  const int n = train.dim() == 1 ? opts.grid_n : std::min(opts.grid_n, 256);
  MinimaOptions mopts;
  mopts.skip_values = true;
  const auto v_minima = local_minima(potential.as_landscape(), domain, n, mopts);
  const auto train_minima = local_minima(train, domain, n);
  if (v_minima.empty()) throw NumericError("build_mixture: the effective potential has no minimum in the domain");
  if (train_minima.empty()) throw NumericError("build_mixture: the train loss has no minimum in the domain");

  MixtureApprox mix;
  mix.temperature = temperature;
  std::vector<double> v_values;
  std::vector<Mat> hessians;
  for (const auto& m : v_minima) {
    BasinComponent c;
    c.mu = m.theta;
    c.v_value = potential.value(m.theta);
    c.hess_v = potential.hessian(m.theta);
    c.cov = component_cov(c.hess_v, temperature);
    std::size_t best = 0;
    for (std::size_t t = 1; t < train_minima.size(); ++t) {
      if ((train_minima[t].theta - m.theta).norm() < (train_minima[best].theta - m.theta).norm()) best = t;
    }
    c.train_min = train_minima[best].theta;
    c.train_hessian = train_minima[best].hessian;
    c.bias = c.train_min - c.mu;
    c.weight = 0.0;
    v_values.push_back(c.v_value);
    hessians.push_back(c.hess_v);
    mix.components.push_back(std::move(c));
  }
  const Vec w = basin_weights(v_values, hessians, temperature);
  for (std::size_t k = 0; k < mix.components.size(); ++k) mix.components[k].weight = w[static_cast<Eigen::Index>(k)];
  return mix;
}

GriddedDensity mixture_density(const MixtureApprox& mix, const Grid& grid) {
  const int p = grid.dim();
  Vec values = Vec::Zero(grid.size());
  for (const auto& c : mix.components) {
    if (c.mu.size() != p) throw ConfigError("mixture_density: component dimension does not match the grid");
    const Eigen::LLT<Mat> llt(c.cov);
    if (llt.info() != Eigen::Success) throw NumericError("mixture_density: covariance is not positive definite");
    const Mat l = llt.matrixL();
    const double log_norm = -0.5 * p * std::log(2.0 * std::numbers::pi) - l.diagonal().array().log().sum();
    for (long k = 0; k < grid.size(); ++k) {
      const Vec z = l.triangularView<Eigen::Lower>().solve(Vec(grid.point(k) - c.mu));
      values[k] += c.weight * std::exp(log_norm - 0.5 * z.squaredNorm());
    }
  }
  return density_from_values(values, grid, mix.temperature);
}

}  // namespace sgdlab
