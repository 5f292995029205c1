#ifndef SGDLAB_REPARAM_HPP_
#define SGDLAB_REPARAM_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/laplace.hpp"
#include "sgdlab/testloss.hpp"

namespace sgdlab {

// θ = r(y), invertible. `curvature(y)[i]` is the Hessian of r_i.
class Reparametrization {
 public:
  using Map = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;
  using CurvFn = std::function<std::vector<Mat>(const Vec&)>;

  Reparametrization(int dim, std::string tag, bool linear, Map forward, Map inverse, JacFn jacobian,
                    CurvFn curvature);

  // y ↦ a·y.
  static Reparametrization linear_scale(int dim, double a);
  // y ↦ A y + b with A invertible.
  static Reparametrization affine(const Mat& a, const Vec& b);
  // y ↦ y + amp·tanh(y) coordinatewise; monotone for amp > −1.
  static Reparametrization smooth_monotone(int dim, double amp = 0.2);

  int dim() const { return dim_; }
  const std::string& tag() const { return tag_; }
  bool is_linear() const { return linear_; }
  Vec forward(const Vec& y) const { return forward_(y); }
  Vec inverse(const Vec& theta) const { return inverse_(theta); }
  Mat jacobian(const Vec& y) const { return jacobian_(y); }
  std::vector<Mat> curvature(const Vec& y) const { return curvature_(y); }

 private:
  int dim_;
  std::string tag_;
  bool linear_;
  Map forward_;
  Map inverse_;
  JacFn jacobian_;
  CurvFn curvature_;
};

// max |r(r⁻¹(θ)) − θ| over a probe grid on the box (per-axis n points), and
// throws NumericError when the Jacobian is singular anywhere on it.
double check_invertible(const Reparametrization& rep, const Box& theta_domain, int n = 33);

// U^r(y) = U(r(y)); Hessian Jᵀ H J + Σ_i ∂_i U ∂²r_i. When `theta_domain`
// is given the rep is checked for invertibility there first.
Landscape pushforward_landscape(const Landscape& landscape, const Reparametrization& rep,
                                const std::optional<Box>& theta_domain = std::nullopt);

struct InvarianceRow {
  std::string term;
  double theta_value = 0;
  double y_value = 0;
  double delta = 0;  // |y_value − theta_value|
};

struct InvarianceReport {
  std::vector<InvarianceRow> rows;
  double raw_curvature_ratio = 0;  // Tr[C^r] / Tr[C] at the first test minimum

  const InvarianceRow& row(const std::string& term) const;
  double max_delta(const std::string& prefix) const;
};

// Recomputes every test-loss ingredient in y-coordinates. Basin weights and
// the expected test loss use the mixture density as ρ and change-of-variables
// quadrature (p = 1 only; skipped otherwise). Basin boundaries are the
// minima of ρ between adjacent component means, clipped to `theta_domain`.
InvarianceReport invariance_report(const TrainTestPair& pair, const MixtureApprox& mix,
                                   const std::vector<ShiftRecord>& records, const Reparametrization& rep,
                                   const Box& theta_domain);

}  // namespace sgdlab

#endif  // SGDLAB_REPARAM_HPP_
