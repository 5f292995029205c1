#include <doctest.h>

#include <cmath>

#include "sgdlab/diffusion_approx.hpp"
#include "sgdlab/laplace.hpp"
#include "sgdlab/oracle.hpp"

using namespace sgdlab;

namespace {

Landscape bumps(std::vector<double> minima, std::vector<double> weights, std::vector<double> sigmas) {
  BumpSpec s;
  for (double m : minima) s.minima.push_back(vec1(m));
  s.weights = std::move(weights);
  s.sigmas = std::move(sigmas);
  s.confinement = 0.001;
  s.form = BumpForm::kDensity;
  return build_landscape(s);
}

Landscape two_basin_left() { return bumps({-1, 1}, {0.021, 0.1}, {0.1, 0.5}); }

GriddedDensity exact_density(const Landscape& u, const DiffusionField& f, double T, double lo, double hi, int n) {
  return steady_density(effective_potential(u, f, T, Box::cube(1, lo, hi)), T, Grid::line(lo, hi, n));
}

}  // namespace

TEST_CASE("basin weights") {
  SUBCASE("one basin") {
    const Vec w = basin_weights({0.3}, {Mat::Constant(1, 1, 2.0)}, 0.01);
    CHECK(w.size() == 1);
    CHECK(w[0] == 1.0);
  }
  SUBCASE("equal depth, curvature c and 4c") {
    const double c = 1.0, T = 0.01;
    const Vec w = basin_weights({0.0, 0.0}, {Mat::Constant(1, 1, c), Mat::Constant(1, 1, 4 * c)}, T);
    CHECK(w[0] / w[1] == doctest::Approx(2.0).epsilon(1e-12));

    // Two parabolas of depth 0 meeting at θ = 1/3.
    const Grid g = Grid::line(-3, 3, 60001);
    Vec pot(g.size());
    for (long i = 0; i < g.size(); ++i) {
      const double x = g.point(i)[0];
      pot[i] = std::min(0.5 * (x + 1) * (x + 1), 2.0 * (x - 1) * (x - 1));
    }
    const GriddedDensity d = density_from_potential(pot, T, g);
    const BasinMasses m = basin_masses(d, pot);
    REQUIRE(m.masses.size() == 2);
    CHECK(m.masses[0] / m.masses[1] == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("deepest basin takes all mass at small T") {
    const Landscape u = two_basin_left();
    const MixtureApprox mix = build_mixture(u, DiffusionField::constant_scalar(1, 1.0), 2e-4, Box::cube(1, -4, 4));
    REQUIRE(mix.components.size() == 2);
    CHECK(mix.weights()[0] > 1.0 - 1e-10);
  }
  SUBCASE("non positive-definite Hessian names the basin") {
    try {
      basin_weights({0.0, 0.0}, {Mat::Constant(1, 1, 1.0), Mat::Constant(1, 1, 0.0)}, 0.1);
      FAIL("expected an error");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).find('1') != std::string::npos);
    }
  }
}

TEST_CASE("component bias") {
  const double T = 0.02, c = 2.0;
  SUBCASE("constant diffusion") {
    const Vec b = component_bias(vec1(0.0), Mat::Constant(1, 1, c), DiffusionField::constant_scalar(1, 3.0), T);
    CHECK(b.norm() == 0.0);
  }
  SUBCASE("D = U at a critical point") {
    const Landscape u = quadratic_landscape(Mat::Constant(1, 1, c), vec1(0.0), 1.0);
    const Vec b = component_bias(vec1(0.0), Mat::Constant(1, 1, c), DiffusionField::isotropic_of_loss(NoiseShape::kLog, u), T);
    CHECK(std::abs(b[0]) <= 1e-15);
  }
  SUBCASE("linear diffusion 1 + εθ") {
    const double eps = 0.4;
    const Landscape u = quadratic_landscape(Mat::Constant(1, 1, c), vec1(0.0));
    const DiffusionField f = DiffusionField::isotropic_of_loss(NoiseShape::kLog, linear_landscape(vec1(eps), 1.0));
    const Vec b = component_bias(vec1(0.0), Mat::Constant(1, 1, c), f, T);
    CHECK(b[0] == doctest::Approx(T / 2 * eps / c).epsilon(1e-12));
    const MixtureApprox mix = build_mixture(u, f, T, Box::cube(1, -1, 1));
    REQUIRE(mix.components.size() == 1);
    CHECK(mix.components[0].bias[0] == doctest::Approx(T / 2 * eps / c).epsilon(1e-6));
    CHECK(-mix.components[0].mu[0] == doctest::Approx(T / 2 * eps / c).epsilon(1e-6));
  }
  SUBCASE("bias is linear in T") {
    const Landscape u = two_basin_left();
    const DiffusionField f = DiffusionField::isotropic_of_loss(
        NoiseShape::kLog, quadratic_landscape(Mat::Constant(1, 1, 1.0), vec1(0.0), 0.5));
    const Box dom = Box::cube(1, -4, 4);
    const MixtureApprox lo = build_mixture(u, f, 0.002, dom), mid = build_mixture(u, f, 0.001, dom),
                        hi = build_mixture(u, f, 0.02, dom);
    REQUIRE(lo.components.size() == hi.components.size());
    for (size_t k = 0; k < lo.components.size(); ++k) {
      const double r_lo = lo.components[k].bias.norm() / 0.002, r_hi = hi.components[k].bias.norm() / 0.02;
      CHECK(r_hi == doctest::Approx(r_lo).epsilon(0.1));
      CHECK(mid.components[k].bias.norm() == doctest::Approx(lo.components[k].bias.norm() / 2).epsilon(0.2));
    }
  }
}

TEST_CASE("component covariance") {
  const double T = 0.01;
  const Mat h = Mat::Constant(1, 1, 1.0);
  CHECK(component_cov(h, T)(0, 0) == doctest::Approx(0.005).epsilon(1e-15));
  CHECK(component_cov(h, 2 * T)(0, 0) == 2 * component_cov(h, T)(0, 0));
  const Mat d2 = component_cov(Vec{{2.0, 5.0}}.asDiagonal(), T);
  CHECK(d2(0, 1) == 0.0);
  CHECK(d2(0, 0) == doctest::Approx(T / 4).epsilon(1e-15));
  CHECK(d2(1, 1) == doctest::Approx(T / 10).epsilon(1e-15));
  CHECK_THROWS_AS(component_cov(Mat::Zero(1, 1), T), NumericError);

  const Landscape u = quadratic_landscape(Mat::Constant(1, 1, 1.0), vec1(0.0));
  const GriddedDensity rho = exact_density(u, DiffusionField::constant_scalar(1, 1.0), T, -1, 1, 8001);
  const Vec x = rho.grid.axes[0].nodes();
  const double var = trapezoid(rho.values.cwiseProduct(x.cwiseProduct(x)), rho.grid);
  CHECK(std::abs(var - component_cov(h, T)(0, 0)) <= 1e-6);
}

TEST_CASE("higher-order weights") {
  SUBCASE("J = 2 matches the Gaussian weights") {
    const std::vector<double> v = {0.1, 0.13, 0.2};
    const std::vector<double> lam = {3.0, 0.7, 9.0};
    const double T = 0.05;
    std::vector<Mat> hs;
    for (double l : lam) hs.push_back(Mat::Constant(1, 1, l));
    const Vec w = basin_weights(v, hs, T);
    Vec h(3);
    for (int k = 0; k < 3; ++k) h[k] = higher_order_weight(2, vec1(lam[k]), v[k], T);
    h /= h.sum();
    CHECK((w - h).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("quartic against quadrature") {
    const double T = 0.1;
    const double w = higher_order_weight(4, vec1(1.0), 0.0, T);
    CHECK(w == doctest::Approx(std::pow(0.1 * 24 / 2, 0.25) * 2 * std::tgamma(1.25)).epsilon(1e-13));
    const double direct = integrate([&](double x) { return std::exp(-2.0 / T * std::pow(x, 4) / 24); }, -10, 10);
    CHECK(w == doctest::Approx(direct).epsilon(0.02));
  }
  SUBCASE("homogeneity in λ") {
    const double a = higher_order_weight(4, vec1(1.0), 0.0, 0.1), b = higher_order_weight(4, vec1(2.0), 0.0, 0.1);
    CHECK(b / a == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-14));
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS(higher_order_weight(3, vec1(1.0), 0.0, 0.1));
    CHECK_THROWS(higher_order_weight(4, vec1(-1.0), 0.0, 0.1));
  }
}

TEST_CASE("mixture density") {
  SUBCASE("one component is its Gaussian") {
    const Landscape u = quadratic_landscape(Mat::Constant(1, 1, 2.0), vec1(0.25));
    const double T = 0.02;
    const MixtureApprox mix = build_mixture(u, DiffusionField::constant_scalar(1, 1.0), T, Box::cube(1, -2, 2));
    const Grid g = Grid::line(-2, 2, 4001);
    const GriddedDensity d = mixture_density(mix, g);
    const double var = T / 4;
    for (long i = 0; i < g.size(); i += 97) {
      const double x = g.point(i)[0];
      const double expect = std::exp(-0.5 * (x - 0.25) * (x - 0.25) / var) / std::sqrt(2 * M_PI * var);
      CHECK(std::abs(d.values[i] - expect) <= 1e-9 * (1.0 + expect));
    }
  }
  SUBCASE("two basins at T = 0.01") {
    const Landscape u = two_basin_left();
    const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
    const double T = 0.01;
    const Grid g = Grid::line(-4, 4, 16001);
    const MixtureApprox mix = build_mixture(u, f, T, Box::cube(1, -4, 4));
    CHECK(mix.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
    const GriddedDensity approx = mixture_density(mix, g);
    const GriddedDensity exact = exact_density(u, f, T, -4, 4, 16001);
    CHECK(l1_distance(approx.values, exact.values, g) <= 0.05);
  }
}

TEST_CASE("Laplace weights agree with quadrature basin masses") {
  struct Case {
    const char* name;
    Landscape u;
  };
  const std::vector<Case> cases = {
      {"two_basin_left", two_basin_left()},
      {"two_basin_right", bumps({-1, 1}, {0.019, 0.1}, {0.1, 0.5})},
      {"three_basin", bumps({-1, 0, 1}, {0.1, 0.051, 0.3}, {0.1, 0.05, 0.3})},
  };
  const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
  for (const auto& c : cases) {
    for (double T : {0.002, 0.005, 0.01, 0.02}) {
      CAPTURE(c.name);
      CAPTURE(T);
      const MixtureApprox mix = build_mixture(c.u, f, T, Box::cube(1, -4, 4));
      const GriddedDensity exact = exact_density(c.u, f, T, -4, 4, 32001);
      const BasinMasses m = basin_masses(exact);
      REQUIRE(m.masses.size() == static_cast<Eigen::Index>(mix.components.size()));
      const Vec w = mix.weights();
      for (Eigen::Index k = 0; k < w.size(); ++k) {
        CAPTURE(k);
        CHECK(std::abs(w[k] - m.masses[k]) <= 0.1 * w[k]);
      }
    }
  }
}
