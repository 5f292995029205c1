#ifndef SGDLAB_DIFFUSION_APPROX_HPP_
#define SGDLAB_DIFFUSION_APPROX_HPP_

#include <cstdint>
#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/numerics.hpp"
#include "sgdlab/steady_state.hpp"

namespace sgdlab {

// Cumulants κ_1..κ_n of a scalar random variable, n ≤ 6.
struct CumulantSet {
  std::vector<double> values;

  int order() const { return static_cast<int>(values.size()); }
  void validate() const;
};

// Raw moments m_1..m_n from cumulants via
//   m_n = Σ_{k=1}^{n} C(n-1, k-1) κ_k m_{n-k},  m_0 = 1.
std::vector<double> moments_from_cumulants(const CumulantSet& c);
CumulantSet cumulants_from_moments(const std::vector<double>& moments);

// Simulates S_K = Σ_{i=1}^K X_i with Gaussian X_i ~ N(κ_1/K, κ_2/K) over
// `trials` draws and returns |κ̂_j(S_K) − κ_j| for j = 1..min(order, 4).
// Orders 1-2 carry only Monte Carlo error; orders 3-4 expose what the
// second-order (Fokker-Planck) truncation drops.
std::vector<double> increment_matching_error(const CumulantSet& target, int k, int trials, std::uint64_t seed);

struct DensitySnapshot {
  double time;
  Vec density;
};

struct DensityTrace {
  Axis grid;
  std::vector<DensitySnapshot> snapshots;

  const Vec& final_density() const { return snapshots.back().density; }
};

struct FpOptions {
  // Record a snapshot every this many time units (plus t = 0 and t_end).
  double snapshot_interval = 0.0;
};

// Largest explicit step allowed: min of 0.9 Δ²/(T max D) and the
// positivity bound of the Chang-Cooper scheme.
double fp_stable_dt(const Landscape& landscape, const DiffusionField& field, double temperature, const Axis& grid);

// Evolves ∂_t ρ = ∂_θ[∂U ρ] + (T/2) ∂²_θ[D ρ] on a vertex-centred grid with
// Chang-Cooper fluxes, explicit Euler in time and zero flux at both ends.
// The trapezoid mass Σ V_i ρ_i is conserved exactly by construction.
DensityTrace fp_evolve_1d(const Landscape& landscape, const DiffusionField& field, double temperature,
                          const Axis& grid, double dt, double t_end, const Vec& rho0, const FpOptions& opts = {});

// J_i = ∂_i U ρ + (T/2) Σ_j ∂_j (D_ij ρ), one vector per component.
std::vector<Vec> probability_current(const GriddedDensity& density, const Landscape& landscape,
                                     const DiffusionField& field, double temperature);

// max_i ‖J_i‖_∞ / max_i ‖∂_i U ρ‖_∞.
double relative_current(const GriddedDensity& density, const Landscape& landscape, const DiffusionField& field,
                        double temperature);

// Σ |a − b| Δ by trapezoid.
double l1_distance(const Vec& a, const Vec& b, const Grid& grid);

}  // namespace sgdlab

#endif  // SGDLAB_DIFFUSION_APPROX_HPP_
