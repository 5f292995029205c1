#ifndef SGDLAB_DIFFUSION_HPP_
#define SGDLAB_DIFFUSION_HPP_

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "sgdlab/core.hpp"
#include "sgdlab/landscape.hpp"

namespace sgdlab {

// Scalar shaping function f for the loss-dependent noise families, where
// the noise scale is 1/f'(U):
//   log      -> D = U       (requires U > 0)
//   identity -> D = 1
//   exp      -> D = exp(-U)
enum class NoiseShape { kLog, kIdentity, kExp };

std::string to_string(NoiseShape f);
NoiseShape noise_shape_from_string(const std::string& name);

// f, f' and the induced scale g(u) = 1/f'(u) with its derivative.
double shape_f(NoiseShape f, double u);
double shape_fprime(NoiseShape f, double u);
double shape_scale(NoiseShape f, double u);
double shape_scale_deriv(NoiseShape f, double u);
bool shape_in_domain(NoiseShape f, double u);

class DiffusionField;

struct ConstantScalar {
  double d;
};
struct ConstantMatrix {
  Mat d;
};
struct IsotropicOfLoss {
  NoiseShape f;
  Landscape base;
};
// D = diag(1/f'(U_i(θ_i))), one 1D potential per coordinate.
struct DiagonalSeparable {
  std::vector<Landscape> potentials;
  NoiseShape f;
};
// base + β² I.
struct Augmented {
  std::shared_ptr<const DiffusionField> base;
  double beta2;
};

struct DiffusionEval {
  Mat d;    // D(θ), symmetric PSD
  Vec div;  // (∂·D)_i = Σ_j ∂_j D_ij
};

// State-dependent gradient-noise covariance D(θ).
class DiffusionField {
 public:
  using Variant = std::variant<ConstantScalar, ConstantMatrix, IsotropicOfLoss, DiagonalSeparable, Augmented>;

  DiffusionField(int dim, Variant v);

  static DiffusionField constant_scalar(int dim, double d);
  static DiffusionField constant_matrix(const Mat& d);
  static DiffusionField isotropic_of_loss(NoiseShape f, const Landscape& base);
  static DiffusionField diagonal_separable(const std::vector<Landscape>& potentials, NoiseShape f);
  static DiffusionField augmented(const DiffusionField& base, double beta2);

  int dim() const { return dim_; }
  const Variant& variant() const { return variant_; }
  std::string describe() const;

  // Throws NumericError naming θ when U(θ) leaves the domain of f'.
  DiffusionEval eval(const Vec& theta) const;
  Mat matrix(const Vec& theta) const { return eval(theta).d; }

  // True when D does not depend on θ.
  bool is_constant() const;

 private:
  int dim_;
  Variant variant_;
};

inline DiffusionEval eval_diffusion(const DiffusionField& field, const Vec& theta) { return field.eval(theta); }

}  // namespace sgdlab

#endif  // SGDLAB_DIFFUSION_HPP_
