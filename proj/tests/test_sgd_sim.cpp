#include <doctest.h>

#include <cmath>
#include <limits>

#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/sgd_sim.hpp"
#include "sgdlab/steady_state.hpp"

using namespace sgdlab;

namespace {

Landscape parabola(double c) { return quadratic_landscape(Mat::Constant(1, 1, c), vec1(0.0)); }

Landscape two_basin() {
  BumpSpec s;
  s.minima = {vec1(-1.0), vec1(1.0)};
  s.weights = {0.021, 0.1};
  s.sigmas = {0.1, 0.5};
  s.confinement = 0.001;
  s.form = BumpForm::kDensity;
  return build_landscape(s);
}

double sample_variance(const std::vector<Vec>& trace, int axis = 0) {
  double s = 0, s2 = 0;
  for (const Vec& x : trace) {
    s += x[axis];
    s2 += x[axis] * x[axis];
  }
  const double n = static_cast<double>(trace.size());
  return s2 / n - (s / n) * (s / n);
}

}  // namespace

TEST_CASE("temperature is learning rate over batch size") {
  SGDConfig c;
  c.learning_rate = 0.3;
  c.batch_size = 7;
  CHECK(c.temperature() == 0.3 / 7);
  const SGDConfig d = SGDConfig::from_temperature(1e-3, 0.01, 10000, 1, vec1(0.0));
  CHECK(d.temperature() == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(d.burn_in == 2000);
}

TEST_CASE("config validation") {
  SGDConfig c = SGDConfig::from_temperature(1e-3, 0.01, 10000, 1, vec1(0.0));
  c.burn_in = c.steps;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.burn_in = 0;
  c.learning_rate = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  ModifiedSGDConfig m{SGDConfig::from_temperature(1e-3, 0.01, 10000, 1, vec1(0.0)), -1.0, 0.0};
  CHECK_THROWS_AS(m.validate(), ConfigError);
  SGDConfig short_run = SGDConfig::from_temperature(1e-3, 0.01, 1100, 1, vec1(0.0));
  CHECK_THROWS_AS(run_chain(parabola(1.0), DiffusionField::constant_scalar(1, 1.0), short_run), ConfigError);
}

TEST_CASE("noise-free steps contract geometrically") {
  SGDConfig c = SGDConfig::from_temperature(0.1, 0.0, 10000, 1, vec1(1.0));
  CHECK(c.temperature() == 0.0);
  const Landscape u = parabola(2.0);
  const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
  Rng rng(1);
  Vec x = vec1(1.0);
  for (int i = 1; i <= 20; ++i) {
    x = sgd_step(x, u, f, c, rng);
    CHECK(x[0] == doctest::Approx(std::pow(0.8, i)).epsilon(1e-12));
  }
}

TEST_CASE("step covariance is lambda T D") {
  const double lr = 0.01, T = 0.5;
  const Mat d = (Mat(2, 2) << 2.0, 0.6, 0.6, 1.0).finished();
  const DiffusionField f = DiffusionField::constant_matrix(d);
  const Landscape u = quadratic_landscape(Mat::Identity(2, 2), Vec::Zero(2));
  SGDConfig c = SGDConfig::from_temperature(lr, T, 10000, 3, Vec::Zero(2));
  Rng rng(3);
  const int n = 100000;
  const Vec theta = Vec::Zero(2);
  Vec mean = Vec::Zero(2);
  Mat cov = Mat::Zero(2, 2);
  for (int i = 0; i < n; ++i) {
    const Vec delta = sgd_step(theta, u, f, c, rng) - theta;
    mean += delta;
    cov += delta * delta.transpose();
  }
  mean /= n;
  cov = cov / n - mean * mean.transpose();
  const Mat expect = lr * T * d;
  CHECK(std::abs(mean[0]) <= 4.0 * std::sqrt(expect(0, 0) / n));
  for (int i = 0; i < 2; ++i) CHECK(cov(i, i) == doctest::Approx(expect(i, i)).epsilon(0.03));
  CHECK(cov(0, 1) == doctest::Approx(expect(0, 1)).epsilon(0.06));
}

TEST_CASE("modified step with zero alpha and beta equals the plain step") {
  const Landscape u = two_basin();
  const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
  const SGDConfig c = SGDConfig::from_temperature(1e-2, 0.05, 10000, 9, vec1(0.2));
  const ModifiedSGDConfig m{c, 0.0, 0.0};
  Rng a(9), b(9);
  Vec x = vec1(0.2), y = vec1(0.2);
  for (int i = 0; i < 200; ++i) {
    x = sgd_step(x, u, f, c, a);
    y = sgd_step_modified(y, u, f, m, b);
    CHECK(x[0] == y[0]);
  }
}

TEST_CASE("modified SGD on a flat loss is an OU process with variance T beta^2 / (2 alpha)") {
  const Landscape flat = linear_landscape(vec1(0.0), 0.0);
  const DiffusionField zero = DiffusionField::constant_scalar(1, 0.0);
  const double alpha = 1.0, beta = 0.5, T = 0.04, lr = 1e-2;
  ModifiedSGDConfig m{SGDConfig::from_temperature(lr, T, 2000000, 21, vec1(0.0)), alpha, beta};
  ChainOptions co;
  co.bins = Axis{-1.0, 1.0, 65};
  co.keep_trace = true;
  const ChainResult r = run_chain(flat, zero, m.base, m, co);
  const double expect = T * beta * beta / (2.0 * alpha);
  CHECK(sample_variance(r.trace) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("isotropic augmentation spreads mass along a noise-free axis") {
  const Landscape u = quadratic_landscape(Mat::Identity(2, 2), Vec::Zero(2));
  const DiffusionField rank1 = DiffusionField::constant_matrix((Mat(2, 2) << 1, 0, 0, 0).finished());
  ChainOptions co;
  co.axis = 1;
  co.keep_trace = true;
  const SGDConfig c = SGDConfig::from_temperature(1e-2, 0.1, 50000, 4, Vec::Zero(2));
  const ChainResult plain = run_chain(u, rank1, c, std::nullopt, co);
  CHECK(sample_variance(plain.trace, 1) == 0.0);
  const ChainResult mod = run_chain(u, rank1, c, ModifiedSGDConfig{c, 0.0, 0.3}, co);
  CHECK(sample_variance(mod.trace, 1) > 1e-4);
}

TEST_CASE("quadratic stationary variance") {
  const SGDConfig c = SGDConfig::from_temperature(1e-3, 0.01, 2000000, 1, vec1(0.0));
  ChainOptions co;
  co.bins = Axis{-1.0, 1.0, 513};
  co.keep_trace = true;
  const ChainResult r = run_chain(parabola(1.0), DiffusionField::constant_scalar(1, 1.0), c, std::nullopt, co);
  CHECK(sample_variance(r.trace) == doctest::Approx(0.005).epsilon(0.05));
}

TEST_CASE("quadratic histogram against the analytic density") {
  const double T = 0.01;
  const SGDConfig c = SGDConfig::from_temperature(1e-2, T, 2000000, 2, vec1(0.0));
  ChainOptions co;
  co.bins = Axis{-0.5, 0.5, 65};
  const ChainResult r = run_chain(parabola(1.0), DiffusionField::constant_scalar(1, 1.0), c, std::nullopt, co);
  CHECK(r.histogram.masses.sum() == doctest::Approx(1.0).epsilon(1e-12));
  Vec analytic(64);
  for (int b = 0; b < 64; ++b) {
    const double lo = r.histogram.edges[b], hi = r.histogram.edges[b + 1];
    analytic[b] = 0.5 * (std::erf(hi / std::sqrt(T)) - std::erf(lo / std::sqrt(T)));
  }
  CHECK((r.histogram.masses - analytic).cwiseAbs().sum() <= 0.05);
}

TEST_CASE("two-basin occupation shifts with temperature") {
  const Landscape u = two_basin();
  const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
  ChainOptions co;
  co.bins = Axis{-4.0, 4.0, 513};
  auto mass_left = [](const Histogram& h) {
    double m = 0;
    for (Eigen::Index b = 0; b < h.masses.size(); ++b)
      if (h.edges[b + 1] <= 0.0) m += h.masses[b];
    return m;
  };
  const ChainResult cold = run_chain(u, f, SGDConfig::from_temperature(1e-2, 2e-4, 200000, 5, vec1(-1.0)),
                                     std::nullopt, co);
  CHECK(mass_left(cold.histogram) >= 0.99);
  const ChainResult warm = run_chain(u, f, SGDConfig::from_temperature(1e-2, 0.03, 2000000, 6, vec1(-1.0)),
                                     std::nullopt, co);
  CHECK(1.0 - mass_left(warm.histogram) >= 0.3);
}

TEST_CASE("chains are deterministic for a seed") {
  const SGDConfig c = SGDConfig::from_temperature(1e-2, 0.05, 20000, 77, vec1(0.5));
  ChainOptions co;
  co.keep_trace = true;
  const auto a = run_chain(two_basin(), DiffusionField::constant_scalar(1, 1.0), c, std::nullopt, co);
  const auto b = run_chain(two_basin(), DiffusionField::constant_scalar(1, 1.0), c, std::nullopt, co);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i][0] == b.trace[i][0]);
  CHECK((a.histogram.masses - b.histogram.masses).norm() == 0.0);
}

TEST_CASE("divergence reports the step") {
  const Landscape steep = parabola(100.0);
  SGDConfig c = SGDConfig::from_temperature(0.5, 0.0, 5000, 1, vec1(1.0));
  try {
    run_chain(steep, DiffusionField::constant_scalar(1, 1.0), c);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.last_finite().allFinite());
  }
}

TEST_CASE("stationarity relation on the trace") {
  const double T = 0.05;
  const Landscape u = parabola(1.0);
  const SGDConfig c = SGDConfig::from_temperature(1e-2, T, 1000000, 8, vec1(0.0));
  ChainOptions co;
  co.keep_trace = true;
  const auto r = run_chain(u, DiffusionField::constant_scalar(1, 1.0), c, std::nullopt, co);
  std::vector<double> g;
  for (const Vec& x : r.trace) g.push_back(x[0] * u.grad(x[0]) - 0.5 * T);
  const MeanEstimate m = batch_means(g);
  // Discrete-time SGD carries an O(λ) bias on top of the Monte Carlo error.
  CHECK(std::abs(m.mean) <= 3.0 * m.standard_error + 0.5 * T * 1e-2);
}

TEST_CASE("histogram merging weights by sample count") {
  Histogram a{(Vec(3) << 0, 1, 2).finished(), (Vec(2) << 1, 0).finished(), 10};
  Histogram b{(Vec(3) << 0, 1, 2).finished(), (Vec(2) << 0, 1).finished(), 30};
  const Histogram m = merge_histograms({a, b});
  CHECK(m.masses[0] == doctest::Approx(0.25));
  CHECK(m.sample_count == 40);
  CHECK(histogram_l1(a, b) == 2.0);
  Histogram c{(Vec(3) << 0, 1, 3).finished(), (Vec(2) << 1, 0).finished(), 1};
  CHECK_THROWS_AS(merge_histograms({a, c}), ConfigError);
}

TEST_CASE("PSD square root clips negative eigenvalues") {
  const Mat d = (Mat(2, 2) << 1, 1, 1, 1).finished();
  const Mat l = psd_sqrt(d);
  CHECK((l * l.transpose() - d).norm() <= 1e-12);
  const Mat neg = (Mat(2, 2) << 1, 0, 0, -1e-14).finished();
  const Mat ln = psd_sqrt(neg);
  CHECK(ln(1, 1) == 0.0);
}

TEST_CASE("batch means and Gelman-Rubin") {
  std::vector<double> constant(1000, 2.0);
  CHECK(batch_means(constant).mean == 2.0);
  CHECK(batch_means(constant).standard_error == 0.0);
  Rng rng(1);
  std::normal_distribution<double> n(0, 1);
  std::vector<std::vector<double>> same(4), apart(4);
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < 2000; ++i) {
      const double z = n(rng);
      same[c].push_back(z);
      apart[c].push_back(z + 3.0 * c);
    }
  CHECK(gelman_rubin(same) < 1.01);
  CHECK(gelman_rubin(apart) > 2.0);
}
