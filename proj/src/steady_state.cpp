#include "sgdlab/steady_state.hpp"

#include <cmath>
#include <sstream>

namespace sgdlab {

Vec effective_drift(const Landscape& landscape, const DiffusionField& field, double temperature,
                    const Vec& theta) {
  const DiffusionEval de = field.eval(theta);
  const Vec rhs = landscape.grad(theta) + 0.5 * temperature * de.div;
  if (de.d.rows() == 1) {
    const double d = de.d(0, 0);
    if (!(d > 0.0)) {
      throw NumericError("effective drift: D(θ) is singular at θ = " + format_vec(theta) +
                         "; use an augmented (β²I) field");
    }
    return Vec::Constant(1, rhs[0] / d);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(de.d);
  const Vec ev = es.eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "effective drift: D(θ) is singular (eigenvalues " << lo << " .. " << hi << ") at θ = "
       << format_vec(theta) << "; use an augmented (β²I) field";
    throw NumericError(os.str());
  }
  return es.eigenvectors() * (ev.cwiseInverse().asDiagonal() * (es.eigenvectors().transpose() * rhs));
}

double curl_defect(const VectorField& drift, const Box& domain, int grid_n) {
  const int p = domain.dim();
  if (p < 2) return 0.0;
  const Grid grid = Grid::over(domain, std::max(2, grid_n));
  const double h = 1e-5 * std::max(1.0, (domain.hi - domain.lo).maxCoeff());
  double worst = 0.0;
  for (long k = 0; k < grid.size(); ++k) {
    const Mat jac = fd_jacobian(drift, grid.point(k), h);
    worst = std::max(worst, (jac - jac.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

EffectivePotential::EffectivePotential(int dim, PotentialSource source, ValueFn value, VectorField gradient,
                                       HessFn hessian)
    : dim_(dim),
      source_(source),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {}

Mat EffectivePotential::hessian(const Vec& theta) const {
  if (hessian_) return hessian_(theta);
  const double h = 1e-5 * (1.0 + theta.norm());
  const Mat j = fd_jacobian(gradient_, theta, h);
  return 0.5 * (j + j.transpose());
}

Vec EffectivePotential::values_on(const Grid& grid) const {
  Vec out(grid.size());
  if (grid.dim() == 1 && source_ == PotentialSource::kNumericLineIntegral) {
    const Axis& ax = grid.axes[0];
    const auto g = [this](double x) { return gradient_(vec1(x))[0]; };
    out[0] = value_(vec1(ax.at(0)));
    for (int i = 1; i < ax.n; ++i) out[i] = out[i - 1] + integrate(g, ax.at(i - 1), ax.at(i), 1e-12, 1e-16);
    return out;
  }
  for (long k = 0; k < grid.size(); ++k) out[k] = value_(grid.point(k));
  return out;
}

Landscape EffectivePotential::as_landscape() const {
  auto self = *this;
  return Landscape(
      dim_, "effective_potential", [self](const Vec& x) { return self.value(x); },
      [self](const Vec& x) { return self.gradient(x); }, [self](const Vec& x) { return self.hessian(x); });
}

EffectivePotential effective_potential_numeric(const Landscape& landscape, const DiffusionField& field,
                                               double temperature, const Vec& reference,
                                               const PotentialOptions& opts) {
  if (field.dim() != landscape.dim()) throw ConfigError("effective potential: field/landscape dimension mismatch");
  VectorField drift = [landscape, field, temperature](const Vec& x) {
    return effective_drift(landscape, field, temperature, x);
  };
  if (landscape.dim() >= 2 && opts.curl_domain) {
    const double defect = curl_defect(drift, *opts.curl_domain, opts.curl_grid_n);
    if (defect > opts.curl_tol) {
      std::ostringstream os;
      os << "effective potential: curl defect " << defect << " exceeds " << opts.curl_tol
         << "; the drift is not a gradient, so no potential exists (try an isotropic or augmented field)";
      throw NumericError(os.str());
    }
  }
  const double rel_tol = opts.rel_tol;
  auto value = [drift, reference, rel_tol](const Vec& x) {
    const Vec delta = x - reference;
    const double len = delta.norm();
    if (len == 0.0) return 0.0;
    auto integrand = [&](double t) { return drift(Vec(reference + t * delta)).dot(delta); };
    return integrate(integrand, 0.0, 1.0, rel_tol, 1e-14 * len);
  };
  return EffectivePotential(landscape.dim(), PotentialSource::kNumericLineIntegral, value, drift);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::optional<EffectivePotential> effective_potential_closed_form(const Landscape& landscape,
                                                                  const DiffusionField& field,
                                                                  double temperature) {
  const int p = landscape.dim();
  const double t = temperature;
  return std::visit(
      overloaded{
          [&](const ConstantScalar& c) -> std::optional<EffectivePotential> {
            if (!(c.d > 0.0)) return std::nullopt;
            const double d = c.d;
            return EffectivePotential(
                p, PotentialSource::kClosedForm, [landscape, d](const Vec& x) { return landscape.loss(x) / d; },
                [landscape, d](const Vec& x) { return Vec(landscape.grad(x) / d); },
                [landscape, d](const Vec& x) { return Mat(landscape.hessian(x) / d); });
          },
          [&](const IsotropicOfLoss& c) -> std::optional<EffectivePotential> {
            if (!c.base.same_as(landscape)) return std::nullopt;
            const NoiseShape f = c.f;
            auto value = [landscape, f, t](const Vec& x) {
              const double u = landscape.loss(x);
              if (!shape_in_domain(f, u)) throw NumericError("effective potential: U outside f' domain at " + format_vec(x));
              return shape_f(f, u) - 0.5 * t * std::log(shape_fprime(f, u));
            };
            VectorField grad = [landscape, field, t](const Vec& x) { return effective_drift(landscape, field, t, x); };
            return EffectivePotential(p, PotentialSource::kClosedForm, value, grad);
          },
          [&](const auto&) -> std::optional<EffectivePotential> { return std::nullopt; },
      },
      field.variant());
}

EffectivePotential separable_closed_form_potential(const std::vector<Landscape>& potentials, NoiseShape f,
                                                   double temperature) {
  const double t = temperature;
  const int p = static_cast<int>(potentials.size());
  auto value = [potentials, f, t](const Vec& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < potentials.size(); ++i) {
      const double u = potentials[i].loss(x[i]);
      if (!shape_in_domain(f, u)) throw NumericError("effective potential: U_i outside f' domain at " + format_vec(x));
      v += shape_f(f, u) - 0.5 * t * std::log(shape_fprime(f, u));
    }
    return v;
  };
  const Landscape sum = separable_landscape(potentials);
  const DiffusionField field = DiffusionField::diagonal_separable(potentials, f);
  VectorField grad = [sum, field, t](const Vec& x) { return effective_drift(sum, field, t, x); };
  return EffectivePotential(p, PotentialSource::kClosedForm, value, grad);
}

EffectivePotential effective_potential(const Landscape& landscape, const DiffusionField& field,
                                       double temperature, const Box& domain) {
  if (auto closed = effective_potential_closed_form(landscape, field, temperature)) return *closed;
  PotentialOptions opts;
  if (landscape.dim() >= 2) opts.curl_domain = domain;
  return effective_potential_numeric(landscape, field, temperature, domain.center(), opts);
}

GriddedDensity density_from_potential(const Vec& potential, double temperature, const Grid& grid) {
  if (!(temperature > 0.0)) throw NumericError("steady density: temperature must be positive");
  if (!potential.allFinite()) throw NumericError("steady density: effective potential is not finite on the grid");
  GriddedDensity out;
  out.grid = grid;
  out.potential = potential;
  out.temperature = temperature;
  out.min_potential = potential.minCoeff();
  const Vec unnorm = (-(2.0 / temperature) * (potential.array() - out.min_potential)).exp().matrix();
  const double z = trapezoid(unnorm, grid);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw NumericError("steady density: partition function under/overflow; use log-domain output");
  }
  out.partition = z;
  out.values = unnorm / z;
  return out;
}

GriddedDensity steady_density(const EffectivePotential& potential, double temperature, const Grid& grid) {
  return density_from_potential(potential.values_on(grid), temperature, grid);
}

GriddedDensity density_from_values(const Vec& values, const Grid& grid, double temperature) {
  GriddedDensity out;
  out.grid = grid;
  out.temperature = temperature;
  const double z = trapezoid(values, grid);
  if (!(z > 0.0)) throw NumericError("density: total mass must be positive");
  out.partition = z;
  out.values = values / z;
  return out;
}

StationarityResiduals stationarity_check(const GriddedDensity& density, const Landscape& landscape,
                                         const DiffusionField& field, double temperature) {
  if (density.grid.dim() != 1) throw ConfigError("stationarity_check: 1D densities only");
  const Axis& ax = density.grid.axes[0];
  Vec grad(ax.n), theta_grad(ax.n), dvals(ax.n);
  for (int i = 0; i < ax.n; ++i) {
    const double x = ax.at(i);
    const double g = landscape.grad(x);
    grad[i] = g;
    theta_grad[i] = x * g;
    dvals[i] = field.eval(vec1(x)).d(0, 0);
  }
  const Vec& rho = density.values;
  const double e_grad = trapezoid(grad.cwiseProduct(rho), density.grid);
  const double e_tg = trapezoid(theta_grad.cwiseProduct(rho), density.grid);
  const double e_d = trapezoid(dvals.cwiseProduct(rho), density.grid);
  // On a truncated domain with zero-flux ends the identities pick up the
  // boundary terms [Dρ] and [θDρ]; both vanish as the domain grows.
  const int last = ax.n - 1;
  const double d_rho_bdy = dvals[last] * rho[last] - dvals[0] * rho[0];
  const double td_rho_bdy = ax.at(last) * dvals[last] * rho[last] - ax.at(0) * dvals[0] * rho[0];
  return {std::abs(e_grad + 0.5 * temperature * d_rho_bdy),
          std::abs(2.0 * e_tg - temperature * e_d + temperature * td_rho_bdy)};
}

}  // namespace sgdlab
