#include "sgdlab/diffusion.hpp"

#include <cmath>
#include <sstream>

namespace sgdlab {

std::string to_string(NoiseShape f) {
  switch (f) {
    case NoiseShape::kLog: return "log";
    case NoiseShape::kIdentity: return "identity";
    case NoiseShape::kExp: return "exp";
  }
  return "?";
}

NoiseShape noise_shape_from_string(const std::string& name) {
  if (name == "log") return NoiseShape::kLog;
  if (name == "identity") return NoiseShape::kIdentity;
  if (name == "exp") return NoiseShape::kExp;
  throw ConfigError("unknown noise shape '" + name + "' (expected log, identity or exp)");
}

double shape_f(NoiseShape f, double u) {
  switch (f) {
    case NoiseShape::kLog: return std::log(u);
    case NoiseShape::kIdentity: return u;
    case NoiseShape::kExp: return std::exp(u);
  }
  return 0.0;
}

double shape_fprime(NoiseShape f, double u) {
  switch (f) {
    case NoiseShape::kLog: return 1.0 / u;
    case NoiseShape::kIdentity: return 1.0;
    case NoiseShape::kExp: return std::exp(u);
  }
  return 0.0;
}

double shape_scale(NoiseShape f, double u) {
  switch (f) {
    case NoiseShape::kLog: return u;
    case NoiseShape::kIdentity: return 1.0;
    case NoiseShape::kExp: return std::exp(-u);
  }
  return 0.0;
}

double shape_scale_deriv(NoiseShape f, double u) {
  switch (f) {
    case NoiseShape::kLog: return 1.0;
    case NoiseShape::kIdentity: return 0.0;
    case NoiseShape::kExp: return -std::exp(-u);
  }
  return 0.0;
}

bool shape_in_domain(NoiseShape f, double u) {
  if (!std::isfinite(u)) return false;
  return f != NoiseShape::kLog || u > 0.0;
}

DiffusionField::DiffusionField(int dim, Variant v) : dim_(dim), variant_(std::move(v)) {}

DiffusionField DiffusionField::constant_scalar(int dim, double d) {
  if (!(d >= 0.0)) throw ConfigError("diffusion: constant scalar d must be >= 0");
  return DiffusionField(dim, ConstantScalar{d});
}

DiffusionField DiffusionField::constant_matrix(const Mat& d) {
  if (d.rows() != d.cols()) throw ConfigError("diffusion: matrix must be square");
  const Mat sym = 0.5 * (d + d.transpose());
  if ((sym - d).norm() > 1e-12 * (1.0 + d.norm())) throw ConfigError("diffusion: matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + sym.norm())) {
    throw ConfigError("diffusion: matrix must be positive semidefinite");
  }
  return DiffusionField(static_cast<int>(d.rows()), ConstantMatrix{sym});
}

DiffusionField DiffusionField::isotropic_of_loss(NoiseShape f, const Landscape& base) {
  return DiffusionField(base.dim(), IsotropicOfLoss{f, base});
}

DiffusionField DiffusionField::diagonal_separable(const std::vector<Landscape>& potentials, NoiseShape f) {
  for (const auto& u : potentials) {
    if (u.dim() != 1) throw ConfigError("diffusion: separable potentials must be one-dimensional");
  }
  return DiffusionField(static_cast<int>(potentials.size()), DiagonalSeparable{potentials, f});
}

DiffusionField DiffusionField::augmented(const DiffusionField& base, double beta2) {
  if (!(beta2 >= 0.0)) throw ConfigError("diffusion: beta^2 must be >= 0");
  return DiffusionField(base.dim(), Augmented{std::make_shared<const DiffusionField>(base), beta2});
}

namespace {

[[noreturn]] void domain_error(NoiseShape f, const Vec& theta, double u) {
  std::ostringstream os;
  os << "diffusion: U(θ) = " << u << " outside the domain of f' for f = " << to_string(f)
     << " at θ = " << format_vec(theta);
  throw NumericError(os.str());
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

DiffusionEval DiffusionField::eval(const Vec& theta) const {
  const int p = dim_;
  return std::visit(
      overloaded{
          [&](const ConstantScalar& c) {
            return DiffusionEval{c.d * Mat::Identity(p, p), Vec::Zero(p)};
          },
          [&](const ConstantMatrix& c) { return DiffusionEval{c.d, Vec::Zero(p)}; },
          [&](const IsotropicOfLoss& c) {
            const double u = c.base.loss(theta);
            if (!shape_in_domain(c.f, u)) domain_error(c.f, theta, u);
            const double g = shape_scale(c.f, u);
            // ∂_i (g(U) δ_ij) summed over j = g'(U) ∂_i U
            return DiffusionEval{g * Mat::Identity(p, p), shape_scale_deriv(c.f, u) * c.base.grad(theta)};
          },
          [&](const DiagonalSeparable& c) {
            DiffusionEval out{Mat::Zero(p, p), Vec::Zero(p)};
            for (int i = 0; i < p; ++i) {
              const double xi = theta[i];
              const double u = c.potentials[i].loss(xi);
              if (!shape_in_domain(c.f, u)) domain_error(c.f, theta, u);
              out.d(i, i) = shape_scale(c.f, u);
              out.div[i] = shape_scale_deriv(c.f, u) * c.potentials[i].grad(xi);
            }
            return out;
          },
          [&](const Augmented& a) {
            DiffusionEval out = a.base->eval(theta);
            out.d += a.beta2 * Mat::Identity(p, p);
            return out;
          },
      },
      variant_);
}

bool DiffusionField::is_constant() const {
  return std::visit(overloaded{
                        [](const ConstantScalar&) { return true; },
                        [](const ConstantMatrix&) { return true; },
                        [](const IsotropicOfLoss& c) { return c.f == NoiseShape::kIdentity; },
                        [](const DiagonalSeparable& c) { return c.f == NoiseShape::kIdentity; },
                        [](const Augmented& a) { return a.base->is_constant(); },
                    },
                    variant_);
}

std::string DiffusionField::describe() const {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const ConstantScalar& c) { os << "constant_scalar(d=" << c.d << ")"; },
                 [&](const ConstantMatrix&) { os << "constant_matrix"; },
                 [&](const IsotropicOfLoss& c) { os << "isotropic_of_loss(f=" << to_string(c.f) << ")"; },
                 [&](const DiagonalSeparable& c) { os << "diagonal_separable(f=" << to_string(c.f) << ")"; },
                 [&](const Augmented& a) { os << "augmented(" << a.base->describe() << ", beta2=" << a.beta2 << ")"; },
             },
             variant_);
  return os.str();
}

}  // namespace sgdlab
