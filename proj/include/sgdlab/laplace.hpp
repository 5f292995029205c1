#ifndef SGDLAB_LAPLACE_HPP_
#define SGDLAB_LAPLACE_HPP_

#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/steady_state.hpp"

namespace sgdlab {

// One Gaussian component of the steady-state approximation.
struct BasinComponent {
  Vec mu;         // local minimum of v
  Vec bias;       // θ_k^tr − μ_k
  Mat cov;        // (T/2) (∂²v(μ_k))⁻¹
  double weight;  // normalized basin weight
  double v_value; // v(μ_k)
  Mat hess_v;     // ∂²v(μ_k)
  Vec train_min;  // paired train minimum θ_k^tr
  Mat train_hessian;
};

struct MixtureApprox {
  std::vector<BasinComponent> components;
  double temperature = 0.0;

  Vec weights() const;
};

// w_k ∝ exp(−2 v_k / T) |∂²v(μ_k)|^{-1/2}, normalized in the log domain.
// Throws NumericError naming the basin when a Hessian is not positive definite.
Vec basin_weights(const std::vector<double>& v_values, const std::vector<Mat>& hessians, double temperature);

// b_k = (T/2) (C_k^tr)⁻¹ (∂·D)(θ_k^tr). Zero for constant D.
Vec component_bias(const Vec& train_min, const Mat& train_hessian, const DiffusionField& field, double temperature);

// Σ_k = (T/2) (∂²v(μ_k))⁻¹.
Mat component_cov(const Mat& hess_v, double temperature);

// Basin integral of exp(−2v/T) when v − v_k is a single even-order term
// (1/J!) Σ_i λ_i z_i^J in diagonal form:
//   exp(−2 v_k / T) · (Π λ_i)^{-1/J} · (T J!/2)^{p/J} · (2 Γ((J+1)/J))^p.
// J = 2 recovers the Gaussian integral exactly.
double higher_order_log_weight(int order, const Vec& eigenvalues, double v_k, double temperature);
double higher_order_weight(int order, const Vec& eigenvalues, double v_k, double temperature);

struct MixtureOptions {
  int grid_n = 4096;  // minima scan resolution (per axis; 2D uses min(grid_n, 256))
};

// Finds the minima of the effective potential, pairs each with its nearest
// train minimum and assembles the Gaussian mixture.
MixtureApprox build_mixture(const Landscape& train, const DiffusionField& field, double temperature,
                            const Box& domain, const MixtureOptions& opts = {});
MixtureApprox build_mixture(const Landscape& train, const EffectivePotential& potential, double temperature,
                            const Box& domain, const MixtureOptions& opts = {});

// Σ_k w_k N(μ_k, Σ_k) on the grid, renormalized on the truncated domain.
GriddedDensity mixture_density(const MixtureApprox& mix, const Grid& grid);

}  // namespace sgdlab

#endif  // SGDLAB_LAPLACE_HPP_
