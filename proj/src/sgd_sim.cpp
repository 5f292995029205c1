#include "sgdlab/sgd_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sgdlab {

SGDConfig SGDConfig::from_temperature(double learning_rate, double temperature, long steps, std::uint64_t seed,
                                      Vec init) {
  SGDConfig cfg;
  cfg.learning_rate = learning_rate;
  cfg.batch_size = learning_rate / temperature;
  cfg.steps = steps;
  cfg.burn_in = steps / 5;
  cfg.seed = seed;
  cfg.init = std::move(init);
  return cfg;
}

void SGDConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("sgd: learning_rate must be positive");
  if (!(batch_size > 0.0)) throw ConfigError("sgd: batch_size must be positive");
  if (steps <= 0) throw ConfigError("sgd: steps must be positive");
  if (burn_in < 0 || burn_in >= steps) throw ConfigError("sgd: burn_in must satisfy 0 <= burn_in < steps");
  if (init.size() == 0) throw ConfigError("sgd: init must be set");
}

void ModifiedSGDConfig::validate() const {
  base.validate();
  if (!(alpha >= 0.0)) throw ConfigError("sgd: alpha must be >= 0");
  if (!(beta >= 0.0)) throw ConfigError("sgd: beta must be >= 0");
}

Histogram merge_histograms(const std::vector<Histogram>& parts) {
  if (parts.empty()) throw ConfigError("merge_histograms: nothing to merge");
  Histogram out{parts.front().edges, Vec::Zero(parts.front().masses.size()), 0};
  for (const auto& h : parts) {
    if (h.edges.size() != out.edges.size() || (h.edges - out.edges).cwiseAbs().maxCoeff() > 0.0) {
      throw ConfigError("merge_histograms: bin edges differ");
    }
    out.masses += static_cast<double>(h.sample_count) * h.masses;
    out.sample_count += h.sample_count;
  }
  if (out.sample_count > 0) out.masses /= static_cast<double>(out.sample_count);
  return out;
}

double histogram_l1(const Histogram& a, const Histogram& b) {
  if (a.masses.size() != b.masses.size()) throw ConfigError("histogram_l1: bin counts differ");
  return (a.masses - b.masses).cwiseAbs().sum();
}

Mat psd_sqrt(const Mat& d) {
  if (d.rows() == 1) return Mat::Constant(1, 1, std::sqrt(std::max(0.0, d(0, 0))));
  Eigen::SelfAdjointEigenSolver<Mat> es(d);
  Vec ev = es.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = ev[i] > tol ? std::sqrt(ev[i]) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

Vec step_impl(const Vec& theta, const Landscape& landscape, const DiffusionField& field, double lr, double temp,
              double alpha, double beta2, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index p = theta.size();
  Mat d = field.eval(theta).d;
  if (beta2 > 0.0) d += beta2 * Mat::Identity(p, p);
  Vec xi(p);
  for (Eigen::Index i = 0; i < p; ++i) xi[i] = normal(rng);
  Vec drift = landscape.grad(theta);
  if (alpha > 0.0) drift += alpha * theta;
  return theta - lr * drift + std::sqrt(lr * temp) * (psd_sqrt(d) * xi);
}

void check_finite(const Vec& next, const Vec& prev, const Landscape& landscape, long step) {
  if (next.allFinite() && std::isfinite(landscape.loss(next))) return;
  std::ostringstream os;
  os << "sgd: iterate diverged at step " << step << "; last finite state " << format_vec(prev);
  throw DivergenceError(os.str(), step, prev);
}

}  // namespace

Vec sgd_step(const Vec& theta, const Landscape& landscape, const DiffusionField& field, const SGDConfig& cfg,
             Rng& rng) {
  Vec next = step_impl(theta, landscape, field, cfg.learning_rate, cfg.temperature(), 0.0, 0.0, rng);
  check_finite(next, theta, landscape, 0);
  return next;
}

Vec sgd_step_modified(const Vec& theta, const Landscape& landscape, const DiffusionField& field,
                      const ModifiedSGDConfig& cfg, Rng& rng) {
  Vec next = step_impl(theta, landscape, field, cfg.base.learning_rate, cfg.base.temperature(), cfg.alpha,
                       cfg.beta * cfg.beta, rng);
  check_finite(next, theta, landscape, 0);
  return next;
}

ChainResult run_chain(const Landscape& landscape, const DiffusionField& field, const SGDConfig& cfg,
                      const std::optional<ModifiedSGDConfig>& modified, const ChainOptions& opts) {
  const SGDConfig& base = modified ? modified->base : cfg;
  if (modified) modified->validate(); else cfg.validate();
  if (base.init.size() != landscape.dim()) throw ConfigError("sgd: init dimension does not match the landscape");
  if (opts.axis < 0 || opts.axis >= landscape.dim()) throw ConfigError("sgd: histogram axis out of range");
  if (base.steps < base.burn_in + 1000) throw ConfigError("sgd: need at least 1000 post-burn-in steps");
  const double lr = base.learning_rate, temp = base.temperature();
  const double alpha = modified ? modified->alpha : 0.0;
  const double beta2 = modified ? modified->beta * modified->beta : 0.0;

  Rng rng(base.seed);
  const int nbins = opts.bins.n - 1;
  std::vector<long> counts(nbins, 0);
  const double lo = opts.bins.lo, width = opts.bins.step();
  ChainResult out;
  Vec theta = base.init;
  for (long s = 0; s < base.steps; ++s) {
    Vec next = step_impl(theta, landscape, field, lr, temp, alpha, beta2, rng);
    if (!next.allFinite() || !std::isfinite(landscape.loss(next))) {
      std::ostringstream os;
      os << "sgd: iterate diverged at step " << s << "; last finite state " << format_vec(theta);
      throw DivergenceError(os.str(), s, theta);
    }
    theta = std::move(next);
    if (s < base.burn_in) continue;
    const long post = s - base.burn_in;
    const int bin = std::clamp(static_cast<int>(std::floor((theta[opts.axis] - lo) / width)), 0, nbins - 1);
    ++counts[bin];
    if (opts.keep_trace && post % std::max<long>(1, opts.thin) == 0) out.trace.push_back(theta);
  }
  const long total = base.steps - base.burn_in;
  out.histogram.edges = opts.bins.nodes();
  out.histogram.masses = Vec(nbins);
  for (int i = 0; i < nbins; ++i) out.histogram.masses[i] = static_cast<double>(counts[i]) / total;
  out.histogram.sample_count = total;
  out.final_state = theta;
  return out;
}

MeanEstimate batch_means(const std::vector<double>& series, int batches) {
  const long n = static_cast<long>(series.size());
  if (n < 2 * batches) throw NumericError("batch_means: series too short for the requested batches");
  const long size = n / batches;
  std::vector<double> means(batches, 0.0);
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (long i = 0; i < size; ++i) s += series[static_cast<std::size_t>(b * size + i)];
    means[b] = s / size;
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= batches;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (batches - 1);
  return {mean, std::sqrt(var / batches)};
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  if (m < 2) return 1.0;
  const std::size_t n = chains.front().size();
  if (n < 2) return 1.0;
  std::vector<double> means(m), vars(m);
  for (std::size_t c = 0; c < m; ++c) {
    double s = 0.0;
    for (double x : chains[c]) s += x;
    means[c] = s / n;
    double v = 0.0;
    for (double x : chains[c]) v += (x - means[c]) * (x - means[c]);
    vars[c] = v / (n - 1);
  }
  double grand = 0.0;
  for (double x : means) grand += x;
  grand /= m;
  double b = 0.0;
  for (double x : means) b += (x - grand) * (x - grand);
  b *= static_cast<double>(n) / (m - 1);
  double w = 0.0;
  for (double v : vars) w += v;
  w /= m;
  if (w <= 0.0) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double var_plus = (n - 1.0) / n * w + b / n;
  return std::sqrt(var_plus / w);
}

}  // namespace sgdlab
