#ifndef SGDLAB_TESTLOSS_HPP_
#define SGDLAB_TESTLOSS_HPP_

#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/laplace.hpp"

namespace sgdlab {

// A train local minimum paired with its nearby test local minimum.
struct ShiftRecord {
  int k = 0;
  Vec train_min;
  Vec test_min;
  Vec shift;                   // s_k = θ_k^test − θ_k^tr
  double shift_curvature = 0;  // s_kᵀ C_k^test s_k
  double test_min_loss = 0;    // U_k^test
  Mat test_hessian;            // C_k^test
};

// Nearest-neighbour pairing of train and test minima. Each pairing distance
// must stay below half of the smallest spacing between train minima.
std::vector<ShiftRecord> pair_minima(const std::vector<Minimum>& train_minima,
                                     const std::vector<Minimum>& test_minima);
std::vector<ShiftRecord> shift_records(const TrainTestPair& pair, const Box& domain, int grid_n = 4096);

struct TaylorPrediction {
  int basin = 0;
  double predicted = 0;  // U_k^test + ½ (s_k + b̂)ᵀ C_k^test (s_k + b̂)
  double actual = 0;     // U^test(θ̂)
  double gap = 0;        // predicted − actual
};

TaylorPrediction taylor_test_at(const Vec& theta_hat, const TrainTestPair& pair, const ShiftRecord& record);
// Assigns θ̂ to the nearest train minimum; throws NumericError listing the
// candidates when two are equally near.
TaylorPrediction taylor_test_at(const Vec& theta_hat, const TrainTestPair& pair,
                                const std::vector<ShiftRecord>& records);

struct TestLossTerms {
  double weight = 0;
  double test_min_loss = 0;  // U_k^test
  double covariance = 0;     // ½ Tr[Σ_k C_k^test]
  double shift = 0;          // ½ s_kᵀ C_k^test s_k
  double bias = 0;           // b_kᵀ C_k^test s_k + ½ b_kᵀ C_k^test b_k
  double total() const { return test_min_loss + covariance + shift + bias; }
};

struct TestLossBreakdown {
  std::vector<TestLossTerms> basins;
  double total = 0;  // Σ_k w_k total_k

  double weighted(double TestLossTerms::*term) const;
};

// Σ_k w_k { U_k^test + ½Tr[Σ_k C_k^test] + ½ (s_k + b_k)ᵀ C_k^test (s_k + b_k) }.
// Components are matched to records through their train minimum.
TestLossBreakdown expected_test_loss_mixture(const MixtureApprox& mix, const std::vector<ShiftRecord>& records);

// Σ_k w_k (U_k^test + ½ s_kᵀ C_k^test s_k): the small-T form without the O(T)
// bias and covariance terms.
double sgd_expected_test_loss(const Vec& weights, const std::vector<ShiftRecord>& records);

// Projection of θ_k^test − θ_k^tr onto the span of the per-sample test
// gradients (rank tolerance 1e-10 relative to the largest singular value).
Vec projected_shift(const std::vector<Vec>& gradients, const Vec& test_min, const Vec& train_min);

}  // namespace sgdlab

#endif  // SGDLAB_TESTLOSS_HPP_
