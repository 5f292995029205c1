#include <doctest.h>

#include <cmath>

#include "sgdlab/reparam.hpp"

using namespace sgdlab;

namespace {

const Box kDomain = Box::cube(1, -4, 4);

BumpSpec two_basin_spec() {
  BumpSpec s;
  s.minima = {vec1(-1.0), vec1(1.0)};
  s.weights = {0.021, 0.1};
  s.sigmas = {0.1, 0.5};
  s.confinement = 0.001;
  s.form = BumpForm::kDensity;
  return s;
}

InvarianceReport report_for(const TrainTestPair& pair, const DiffusionField& f, double T,
                            const Reparametrization& rep) {
  const MixtureApprox mix = build_mixture(pair.train, f, T, kDomain);
  return invariance_report(pair, mix, shift_records(pair, kDomain), rep, kDomain);
}

}  // namespace

TEST_CASE("reparametrization families are invertible with consistent Jacobians") {
  const std::vector<Reparametrization> reps = {
      Reparametrization::linear_scale(2, 2.0),
      Reparametrization::affine(Mat{{1.0, 0.5}, {-0.3, 2.0}}, Vec{{0.1, -0.2}}),
      Reparametrization::smooth_monotone(2, 0.2),
  };
  for (const auto& rep : reps) {
    CAPTURE(rep.tag());
    CHECK(check_invertible(rep, Box::cube(2, -3, 3)) <= 1e-10);
    for (const Vec& y : {Vec{{0.3, -1.1}}, Vec{{-2.0, 0.7}}}) {
      const Mat fd = fd_jacobian([&](const Vec& z) { return rep.forward(z); }, y, 1e-6);
      CHECK((fd - rep.jacobian(y)).cwiseAbs().maxCoeff() <= 1e-6);
      for (int i = 0; i < 2; ++i) {
        const Mat fdc = fd_jacobian([&](const Vec& z) { return Vec(rep.jacobian(z).row(i).transpose()); }, y, 1e-5);
        CHECK((fdc - rep.curvature(y)[static_cast<size_t>(i)]).cwiseAbs().maxCoeff() <= 1e-6);
      }
    }
  }
  CHECK_THROWS_AS(Reparametrization::affine(Mat{{1.0, 2.0}, {2.0, 4.0}}, Vec::Zero(2)), NumericError);
}

TEST_CASE("pushforward landscape") {
  SUBCASE("identity") {
    const Landscape u = build_landscape(two_basin_spec());
    const Landscape ur = pushforward_landscape(u, Reparametrization::linear_scale(1, 1.0));
    for (double x : {-1.3, 0.0, 0.9}) {
      CHECK(ur.loss(x) == u.loss(x));
      CHECK(ur.grad(x) == u.grad(x));
      CHECK(ur.hessian(x) == u.hessian(x));
    }
  }
  SUBCASE("doubling on a parabola") {
    const Landscape u = quadratic_landscape(Mat::Identity(1, 1), vec1(0.0));
    const Landscape ur = pushforward_landscape(u, Reparametrization::linear_scale(1, 2.0));
    CHECK(ur.loss(0.7) == doctest::Approx(2 * 0.49).epsilon(1e-15));
    CHECK(ur.hessian(0.0) == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("chain-rule Hessian matches finite differences under a nonlinear map") {
    const Landscape u = build_landscape(two_basin_spec());
    const Landscape ur = pushforward_landscape(u, Reparametrization::smooth_monotone(1, 0.2), kDomain);
    for (double y : {-0.8, 0.1, 0.9}) {
      CHECK(ur.hessian(y) == doctest::Approx(fd_second_derivative([&](double z) { return ur.loss(z); }, y, 1e-4)).epsilon(1e-5));
    }
  }
  SUBCASE("minima counts are preserved") {
    const Landscape u = build_landscape(two_basin_spec());
    const auto rep = Reparametrization::smooth_monotone(1, 0.2);
    const Landscape ur = pushforward_landscape(u, rep, kDomain);
    const Box y_dom{rep.inverse(kDomain.lo), rep.inverse(kDomain.hi)};
    const auto before = local_minima(u, kDomain), after = local_minima(ur, y_dom);
    REQUIRE(after.size() == before.size());
    for (size_t k = 0; k < before.size(); ++k) {
      CHECK(std::abs(rep.forward(after[k].theta)[0] - before[k].theta[0]) <= 1e-8);
      CHECK(after[k].value == doctest::Approx(before[k].value).epsilon(1e-12));
    }
  }
}

TEST_CASE("linear reparametrization cancels exactly") {
  const TrainTestPair pair = make_shifted_pair(two_basin_spec(), vec1(0.1));
  const DiffusionField f = DiffusionField::constant_scalar(1, 1.0);
  const InvarianceReport r = report_for(pair, f, 0.01, Reparametrization::linear_scale(1, 2.0));
  CHECK(r.raw_curvature_ratio == doctest::Approx(4.0).epsilon(1e-12));
  for (const char* prefix : {"test_min_loss", "shift_curvature", "covariance", "bias"}) {
    CAPTURE(prefix);
    CHECK(r.max_delta(prefix) <= 1e-10);
  }
  CHECK(r.max_delta("weight") <= 1e-8);
  CHECK(r.row("expected_test_loss").delta <= 1e-8);
}

TEST_CASE("affine reparametrization in two dimensions") {
  BumpSpec s;
  s.minima = {Vec{{-1.0, 0.0}}, Vec{{1.0, 0.5}}};
  s.weights = {1.0, 1.2};
  s.sigmas = {0.4, 0.6};
  s.confinement = 0.01;
  const TrainTestPair pair = make_shifted_pair(s, Vec{{0.05, -0.03}});
  const DiffusionField f = DiffusionField::constant_scalar(2, 1.0);
  const Box dom = Box::cube(2, -3, 3);
  const MixtureApprox mix = build_mixture(pair.train, f, 0.05, dom);
  const auto rep = Reparametrization::affine(Mat{{1.0, 0.5}, {-0.3, 2.0}}, Vec{{0.1, -0.2}});
  const InvarianceReport r = invariance_report(pair, mix, shift_records(pair, dom), rep, dom);
  for (const char* prefix : {"test_min_loss", "shift_curvature", "covariance", "bias"}) {
    CAPTURE(prefix);
    CHECK(r.max_delta(prefix) <= 1e-10);
  }
  CHECK(r.raw_curvature_ratio != doctest::Approx(1.0));
}

TEST_CASE("smooth monotone reparametrization") {
  const DiffusionField f = DiffusionField::isotropic_of_loss(
      NoiseShape::kLog, quadratic_landscape(Mat::Constant(1, 1, 1.0), vec1(0.0), 0.5));
  const auto rep = Reparametrization::smooth_monotone(1, 0.2);
  SUBCASE("expected loss and weights are invariant") {
    const TrainTestPair pair = make_shifted_pair(two_basin_spec(), vec1(0.1));
    for (double T : {0.003, 0.01, 0.05}) {
      CAPTURE(T);
      const InvarianceReport r = report_for(pair, f, T, rep);
      CHECK(r.row("expected_test_loss").delta <= 1e-8);
      CHECK(r.max_delta("weight") <= 1e-8);
      CHECK(r.raw_curvature_ratio != doctest::Approx(1.0));
    }
  }
  SUBCASE("shift-curvature error is second order in the shift") {
    const InvarianceReport full = report_for(make_shifted_pair(two_basin_spec(), vec1(0.1)), f, 0.01, rep);
    const InvarianceReport half = report_for(make_shifted_pair(two_basin_spec(), vec1(0.05)), f, 0.01, rep);
    for (const char* term : {"shift_curvature_0", "shift_curvature_1"}) {
      CAPTURE(term);
      CHECK(full.row(term).delta > 0.0);
      CHECK(full.row(term).delta >= 3.0 * half.row(term).delta);
    }
  }
}
