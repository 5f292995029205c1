#ifndef SGDLAB_SGD_SIM_HPP_
#define SGDLAB_SGD_SIM_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/numerics.hpp"

namespace sgdlab {

using Rng = std::mt19937_64;

struct SGDConfig {
  double learning_rate = 1e-3;
  // Effective batch size. Only T = λ/B enters the Gaussian noise model, so
  // non-integer values are accepted (see from_temperature).
  double batch_size = 1.0;
  long steps = 100000;
  long burn_in = 20000;
  std::uint64_t seed = 0;
  Vec init;

  double temperature() const { return learning_rate / batch_size; }
  // B = λ/T; burn-in defaults to 20% of the steps.
  static SGDConfig from_temperature(double learning_rate, double temperature, long steps, std::uint64_t seed,
                                    Vec init);
  void validate() const;
};

struct ModifiedSGDConfig {
  SGDConfig base;
  double alpha = 0.0;  // ℓ2 strength
  double beta = 0.0;   // isotropic noise amplitude; adds β² I to D

  void validate() const;
};

struct Histogram {
  Vec edges;
  Vec masses;
  long sample_count = 0;

  double bin_width(int i) const { return edges[i + 1] - edges[i]; }
};

// Merges histograms with identical edges, weighting by sample counts.
Histogram merge_histograms(const std::vector<Histogram>& parts);

// L1 distance between the bin masses of two histograms with equal edges.
double histogram_l1(const Histogram& a, const Histogram& b);

// Symmetric PSD square root with eigenvalues clipped at zero.
Mat psd_sqrt(const Mat& d);

// θ + Δ with Δ = −λ ∂U(θ) + sqrt(λT) L(θ) ξ, L Lᵀ = D(θ), ξ ~ N(0, I).
Vec sgd_step(const Vec& theta, const Landscape& landscape, const DiffusionField& field, const SGDConfig& cfg,
             Rng& rng);

// As sgd_step with drift −λ(∂U + αθ) and noise covariance λT (D + β² I).
Vec sgd_step_modified(const Vec& theta, const Landscape& landscape, const DiffusionField& field,
                      const ModifiedSGDConfig& cfg, Rng& rng);

struct ChainOptions {
  Axis bins{-4.0, 4.0, 513};  // histogram edges (n nodes -> n-1 bins)
  int axis = 0;               // coordinate histogrammed
  bool keep_trace = false;
  long thin = 1;              // trace keeps every thin-th post-burn-in iterate
};

struct ChainResult {
  Histogram histogram;
  std::vector<Vec> trace;  // post-burn-in iterates (thinned) when requested
  Vec final_state;
};

// Runs the chain from cfg.init; deterministic for a fixed seed. Samples that
// leave the histogram range are counted in the nearest end bin.
ChainResult run_chain(const Landscape& landscape, const DiffusionField& field, const SGDConfig& cfg,
                      const std::optional<ModifiedSGDConfig>& modified = std::nullopt,
                      const ChainOptions& opts = {});

// Mean and batch-means standard error of a correlated series.
struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};
MeanEstimate batch_means(const std::vector<double>& series, int batches = 32);

// Gelman-Rubin potential scale reduction across chains of equal length.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

}  // namespace sgdlab

#endif  // SGDLAB_SGD_SIM_HPP_
