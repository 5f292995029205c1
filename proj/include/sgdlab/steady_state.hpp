#ifndef SGDLAB_STEADY_STATE_HPP_
#define SGDLAB_STEADY_STATE_HPP_

#include <functional>
#include <optional>

#include "sgdlab/core.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/numerics.hpp"

namespace sgdlab {

using VectorField = std::function<Vec(const Vec&)>;

// D(θ)⁻¹ (∂U(θ) + (T/2) ∂·D(θ)). Throws NumericError when D(θ) is singular
// (condition number above 1e12).
Vec effective_drift(const Landscape& landscape, const DiffusionField& field, double temperature,
                    const Vec& theta);

// max over grid nodes of |∂_j V_i − ∂_i V_j|, central differences. Zero for p = 1.
double curl_defect(const VectorField& drift, const Box& domain, int grid_n);

enum class PotentialSource { kNumericLineIntegral, kClosedForm };

// v(θ, T) with ∂v = V. Values are defined up to an additive constant.
class EffectivePotential {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using HessFn = std::function<Mat(const Vec&)>;

  EffectivePotential(int dim, PotentialSource source, ValueFn value, VectorField gradient,
                     HessFn hessian = nullptr);

  int dim() const { return dim_; }
  PotentialSource source() const { return source_; }
  double value(const Vec& theta) const { return value_(theta); }
  Vec gradient(const Vec& theta) const { return gradient_(theta); }
  // Analytic when supplied, otherwise central differences of the gradient.
  Mat hessian(const Vec& theta) const;

  // Values on a grid. In 1D the numeric potential is accumulated panel by
  // panel, which is exact up to quadrature error and much cheaper.
  Vec values_on(const Grid& grid) const;

  // Exposes v as a Landscape so the minima machinery can run on it.
  Landscape as_landscape() const;

 private:
  int dim_;
  PotentialSource source_;
  ValueFn value_;
  VectorField gradient_;
  HessFn hessian_;
};

struct PotentialOptions {
  double rel_tol = 1e-10;
  // When set (and p ≥ 2) the curl defect is measured on this box and must
  // not exceed curl_tol.
  std::optional<Box> curl_domain;
  int curl_grid_n = 21;
  double curl_tol = 1e-4;
};

// Straight-segment line integral of V from `reference`.
EffectivePotential effective_potential_numeric(const Landscape& landscape, const DiffusionField& field,
                                               double temperature, const Vec& reference,
                                               const PotentialOptions& opts = {});

// Closed forms:
//   constant scalar d           -> U/d
//   isotropic_of_loss on U      -> f(U) − (T/2) log f'(U)
// Returns nullopt when the pair (landscape, field) has no known closed form.
std::optional<EffectivePotential> effective_potential_closed_form(const Landscape& landscape,
                                                                  const DiffusionField& field,
                                                                  double temperature);

// Σ_i f(U_i(θ_i)) − (T/2) Σ_i log f'(U_i(θ_i)), valid when the train loss is
// the separable sum of `potentials` and D = diag(1/f'(U_i)).
EffectivePotential separable_closed_form_potential(const std::vector<Landscape>& potentials, NoiseShape f,
                                                   double temperature);

// Closed form when available, else numeric from the domain center.
EffectivePotential effective_potential(const Landscape& landscape, const DiffusionField& field,
                                       double temperature, const Box& domain);

struct GriddedDensity {
  Grid grid;
  Vec values;         // normalized: trapezoid(values) == 1
  Vec potential;      // v on the grid (may be empty for densities not built from v)
  double partition = 1.0;       // Z of exp(−(2/T)(v − min v))
  double min_potential = 0.0;   // min v over the grid
  double temperature = 0.0;

  double mass() const { return trapezoid(values, grid); }
};

// ρ = exp(−(2/T)(v − min v)) / Z on the grid.
GriddedDensity steady_density(const EffectivePotential& potential, double temperature, const Grid& grid);
GriddedDensity density_from_potential(const Vec& potential, double temperature, const Grid& grid);
// Renormalizes arbitrary nonnegative samples.
GriddedDensity density_from_values(const Vec& values, const Grid& grid, double temperature = 0.0);

struct StationarityResiduals {
  double mean_gradient;  // |E[∂U]|
  double fluctuation;    // |2 E[θ ∂U] − T E[D]|
};

// 1D moment identities that hold at the Fokker-Planck steady state.
StationarityResiduals stationarity_check(const GriddedDensity& density, const Landscape& landscape,
                                         const DiffusionField& field, double temperature);

}  // namespace sgdlab

#endif  // SGDLAB_STEADY_STATE_HPP_
