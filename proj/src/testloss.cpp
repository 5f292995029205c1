#include "sgdlab/testloss.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sgdlab/log.hpp"

namespace sgdlab {

double TestLossBreakdown::weighted(double TestLossTerms::*term) const {
  double s = 0.0;
  for (const auto& b : basins) s += b.weight * (b.*term);
  return s;
}

std::vector<ShiftRecord> pair_minima(const std::vector<Minimum>& train_minima,
                                     const std::vector<Minimum>& test_minima) {
  if (test_minima.empty()) throw NumericError("pair_minima: no test minima");
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < train_minima.size(); ++a)
    for (std::size_t b = a + 1; b < train_minima.size(); ++b)
      spacing = std::min(spacing, (train_minima[a].theta - train_minima[b].theta).norm());

  std::vector<ShiftRecord> out;
  for (std::size_t k = 0; k < train_minima.size(); ++k) {
    const auto& tr = train_minima[k];
    std::size_t best = 0;
    for (std::size_t t = 1; t < test_minima.size(); ++t) {
      if ((test_minima[t].theta - tr.theta).norm() < (test_minima[best].theta - tr.theta).norm()) best = t;
    }
    const auto& te = test_minima[best];
    const double dist = (te.theta - tr.theta).norm();
    if (!(dist < 0.5 * spacing)) {
      std::ostringstream os;
      os << "pair_minima: train minimum " << format_vec(tr.theta) << " has no test minimum within half the "
         << "inter-minimum spacing (nearest at distance " << dist << ")";
      throw NumericError(os.str());
    }
    ShiftRecord r;
    r.k = static_cast<int>(k);
    r.train_min = tr.theta;
    r.test_min = te.theta;
    r.shift = te.theta - tr.theta;
    r.test_hessian = te.hessian;
    r.test_min_loss = te.value;
    r.shift_curvature = r.shift.dot(te.hessian * r.shift);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ShiftRecord> shift_records(const TrainTestPair& pair, const Box& domain, int grid_n) {
  const int n = pair.train.dim() == 1 ? grid_n : std::min(grid_n, 256);
  return pair_minima(local_minima(pair.train, domain, n), local_minima(pair.test, domain, n));
}

TaylorPrediction taylor_test_at(const Vec& theta_hat, const TrainTestPair& pair, const ShiftRecord& record) {
  const Vec b_hat = record.train_min - theta_hat;
  const Vec e = record.shift + b_hat;
  TaylorPrediction out;
  out.basin = record.k;
  out.predicted = record.test_min_loss + 0.5 * e.dot(record.test_hessian * e);
  out.actual = pair.test.loss(theta_hat);
  out.gap = out.predicted - out.actual;
  return out;
}

TaylorPrediction taylor_test_at(const Vec& theta_hat, const TrainTestPair& pair,
                                const std::vector<ShiftRecord>& records) {
  if (records.empty()) throw NumericError("taylor_test_at: no basins");
  std::size_t best = 0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    if ((records[k].train_min - theta_hat).norm() < (records[best].train_min - theta_hat).norm()) best = k;
  }
  const double d_best = (records[best].train_min - theta_hat).norm();
  std::ostringstream candidates;
  int ties = 0;
  for (const auto& r : records) {
    const double d = (r.train_min - theta_hat).norm();
    if (std::abs(d - d_best) <= 1e-9 * (1.0 + d_best)) {
      ++ties;
      candidates << ' ' << format_vec(r.train_min);
    }
  }
  if (ties > 1) {
    throw NumericError("taylor_test_at: ambiguous basin for " + format_vec(theta_hat) + "; candidates:" +
                       candidates.str());
  }
  return taylor_test_at(theta_hat, pair, records[best]);
}

TestLossBreakdown expected_test_loss_mixture(const MixtureApprox& mix, const std::vector<ShiftRecord>& records) {
  TestLossBreakdown out;
  for (const auto& c : mix.components) {
    const ShiftRecord* match = nullptr;
    for (const auto& r : records) {
      if ((r.train_min - c.train_min).norm() <= 1e-6) match = &r;
    }
    if (!match) {
      throw NumericError("expected_test_loss_mixture: no test basin matches the component at " + format_vec(c.mu));
    }
    const Mat& h = match->test_hessian;
    TestLossTerms t;
    t.weight = c.weight;
    t.test_min_loss = match->test_min_loss;
    t.covariance = 0.5 * (c.cov * h).trace();
    t.shift = 0.5 * match->shift_curvature;
    t.bias = c.bias.dot(h * match->shift) + 0.5 * c.bias.dot(h * c.bias);
    out.total += t.weight * t.total();
    out.basins.push_back(t);
  }
  return out;
}

double sgd_expected_test_loss(const Vec& weights, const std::vector<ShiftRecord>& records) {
  if (weights.size() != static_cast<Eigen::Index>(records.size())) {
    throw ConfigError("sgd_expected_test_loss: one weight per basin required");
  }
  double s = 0.0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    s += weights[static_cast<Eigen::Index>(k)] * (records[k].test_min_loss + 0.5 * records[k].shift_curvature);
  }
  return s;
}

Vec projected_shift(const std::vector<Vec>& gradients, const Vec& test_min, const Vec& train_min) {
  const Vec diff = test_min - train_min;
  if (gradients.empty()) {
    warn("projected_shift: empty gradient list; shift set to zero");
    return Vec::Zero(diff.size());
  }
  Mat g(diff.size(), static_cast<Eigen::Index>(gradients.size()));
  for (std::size_t i = 0; i < gradients.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = gradients[i];
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeThinU);
  const Vec sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * top && sv[i] > 0.0) ++rank;
  }
  if (rank == 0) {
    warn("projected_shift: gradients span a zero-dimensional space; shift set to zero");
    return Vec::Zero(diff.size());
  }
  const Mat basis = svd.matrixU().leftCols(rank);
  return basis * (basis.transpose() * diff);
}

}  // namespace sgdlab
