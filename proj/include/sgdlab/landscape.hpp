#ifndef SGDLAB_LANDSCAPE_HPP_
#define SGDLAB_LANDSCAPE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/core.hpp"

namespace sgdlab {

// How a bump's weight maps to its depth.
//   amplitude: bump_i(θ) = w_i exp(-|θ-m_i|^2 / (2σ_i^2))
//   density:   bump_i(θ) = w_i N(θ; m_i, σ_i^2 I), i.e. the amplitude form
//              divided by (2πσ_i^2)^{p/2}. The published synthetic tables
//              are written in this convention.
enum class BumpForm { kAmplitude, kDensity };

struct BumpSpec {
  std::vector<Vec> minima;
  std::vector<double> weights;
  std::vector<double> sigmas;
  double confinement = 0.0;
  double loss_scale = 1.0;
  double weight_perturb = 0.0;
  std::uint64_t seed = 0;
  BumpForm form = BumpForm::kAmplitude;

  int dim() const { return minima.empty() ? 0 : static_cast<int>(minima.front().size()); }
  // Throws ConfigError on mismatched lengths, nonpositive widths/weights,
  // negative confinement or inconsistent point dimensions.
  void validate() const;
  // Weights after the seeded additive perturbation (identity when
  // weight_perturb == 0).
  std::vector<double> effective_weights() const;
};

// A smooth scalar loss over R^p with analytic gradient and Hessian.
// Immutable; copies share the underlying callables.
class Landscape {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  Landscape(int dim, std::string tag, ValueFn value, GradFn grad, HessFn hess);

  int dim() const { return impl_->dim; }
  const std::string& tag() const { return impl_->tag; }

  double loss(const Vec& theta) const { return impl_->value(theta); }
  Vec grad(const Vec& theta) const { return impl_->grad(theta); }
  // Always exactly symmetric.
  Mat hessian(const Vec& theta) const;

  // Scalar conveniences for p == 1.
  double loss(double x) const;
  double grad(double x) const;
  double hessian(double x) const;

  bool same_as(const Landscape& other) const { return impl_ == other.impl_; }

 private:
  struct Impl {
    int dim;
    std::string tag;
    ValueFn value;
    GradFn grad;
    HessFn hess;
  };
  std::shared_ptr<const Impl> impl_;
};

inline Vec vec1(double x) { return Vec::Constant(1, x); }

Landscape build_landscape(const BumpSpec& spec);

// ½(θ-c)ᵀ H (θ-c) + offset.
Landscape quadratic_landscape(const Mat& hessian, const Vec& center, double offset = 0.0);

// gᵀθ + offset.
Landscape linear_landscape(const Vec& slope, double offset);

// Σ_i parts[i](θ_i), each part one-dimensional.
Landscape separable_landscape(const std::vector<Landscape>& parts);

// θ ↦ base(θ + shift).
Landscape shifted_landscape(const Landscape& base, const Vec& shift);

struct TrainTestPair {
  Landscape train;
  Landscape test;
  Vec shift;
};

// test(θ) = train(θ + s): every test minimum is its train minimum minus s,
// with identical depth and curvature.
TrainTestPair make_shifted_pair(const Landscape& train, const Vec& shift);
TrainTestPair make_shifted_pair(const BumpSpec& spec, const Vec& shift);

// Seeded normal draw with the given standard deviation per coordinate.
Vec sample_shift(int dim, double stddev, std::uint64_t seed);

struct Minimum {
  Vec theta;
  double value = 0.0;
  Mat hessian;
};

struct MinimaOptions {
  double grad_tol = 1e-10;
  double dedupe_tol = 1e-6;
  int max_newton_iters = 100;
  // Skip evaluating loss values (useful when the value is expensive, e.g. a
  // line-integral potential). Minimum::value is then NaN.
  bool skip_values = false;
};

// Damped Newton from a starting point. Returns nullopt when the iteration
// fails to reach grad_tol or lands on a non-PD Hessian.
std::optional<Minimum> polish_minimum(const Landscape& landscape, const Vec& start,
                                      const MinimaOptions& opts = {});

// Grid scan for sign changes of the gradient followed by Newton polish.
// Supports p = 1 and p = 2. Result sorted lexicographically.
std::vector<Minimum> local_minima(const Landscape& landscape, const Box& domain,
                                  int grid_n = 4096, const MinimaOptions& opts = {});

}  // namespace sgdlab

#endif  // SGDLAB_LANDSCAPE_HPP_
