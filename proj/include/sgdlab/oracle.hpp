#ifndef SGDLAB_ORACLE_HPP_
#define SGDLAB_ORACLE_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/steady_state.hpp"
#include "sgdlab/testloss.hpp"

namespace sgdlab {

struct QuadResult {
  double value = 0;
  double coarse = 0;      // same rule on every other node
  double rel_change = 0;  // |value − coarse| / max(|value|, 1e-300)
};

// ∫ f ρ by the trapezoid rule on the density grid. The coarse estimate uses
// every other node (requires an odd node count in 1D).
QuadResult quad_expectation(const GriddedDensity& density, const Vec& f_values);
QuadResult quad_expectation(const GriddedDensity& density, const std::function<double(const Vec&)>& f);

// Evaluates E_ρ[f] for ρ ∝ exp(−2v/T) on an n-node line and on the (2n−1)-node
// refinement; returns the fine value and the relative change.
QuadResult refined_expectation(const EffectivePotential& potential, double temperature, const Box& domain, int n,
                               const std::function<double(const Vec&)>& f);

struct BasinMasses {
  Vec masses;
  std::vector<double> boundaries;  // interior maxima of the potential, ascending
  std::vector<double> minima;      // grid minimum of the potential inside each basin
};

// 1D: integrates ρ between consecutive local maxima of `potential` (domain
// ends are the outer boundaries).
BasinMasses basin_masses(const GriddedDensity& density, const Vec& potential);
BasinMasses basin_masses(const GriddedDensity& density);

enum class Method { kQuadrature, kLaplace, kSgdMc };
std::string method_name(Method m);
Method parse_method(const std::string& name);
std::vector<Method> parse_methods(const std::string& csv);

struct SweepRow {
  double temperature = 0;
  Method method = Method::kQuadrature;
  double e_train = 0;
  double e_test = 0;
  Vec basin_probs;       // indexed like the train minima (ascending θ)
  Vec shift_curv_terms;  // p_k · ½ s_kᵀ C_k s_k
  // sgd_mc only
  double e_train_se = 0;
  double e_test_se = 0;
  double r_hat = 0;  // max of Gelman-Rubin on θ and on the train loss
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<SweepRow> of(Method m) const;
};

struct SweepOptions {
  Box domain;
  int grid_n = 8193;          // quadrature nodes
  int minima_grid_n = 4096;
  double learning_rate = 1e-2;  // sgd_mc
  long sgd_steps = 200000;
  int chains = 8;
  long thin = 10;
  std::uint64_t seed = 0;
  int threads = 1;
};

// 32 log-spaced temperatures in [1e-4, 1] by default.
std::vector<double> log_space(double lo, double hi, int n);
std::vector<double> default_temperature_grid();

// One row per (T, method), T-major. Sub-method failures are rethrown with the
// temperature in the message.
SweepTable temperature_sweep(const TrainTestPair& pair, const DiffusionField& field, const std::vector<double>& temperatures,
                             const std::vector<Method>& methods, const SweepOptions& opts);

struct FdReport {
  double gradient = 0;  // max ‖a − fd‖∞ / max(1, ‖a‖∞)
  double hessian = 0;
  double divergence = 0;
  int probes = 0;
  double max() const { return std::max(gradient, std::max(hessian, divergence)); }
};

// Central-difference check of analytic derivatives at seeded uniform probes
// in the box.
FdReport fd_check(const Landscape& landscape, int probe_count, std::uint64_t seed, const Box& box);
// Divergence of D against differences of D; probes outside the field's
// domain are redrawn.
FdReport fd_check(const DiffusionField& field, int probe_count, std::uint64_t seed, const Box& box);

}  // namespace sgdlab

#endif  // SGDLAB_ORACLE_HPP_
