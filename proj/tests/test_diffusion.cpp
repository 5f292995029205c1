#include <doctest.h>

#include <cmath>

#include "sgdlab/diffusion.hpp"
#include "sgdlab/landscape.hpp"
#include "sgdlab/oracle.hpp"

using namespace sgdlab;

namespace {

// 1 + θ² in any dimension (sum over coordinates).
Landscape one_plus_square(int dim) {
  return quadratic_landscape(2.0 * Mat::Identity(dim, dim), Vec::Zero(dim), 1.0);
}

}  // namespace

TEST_CASE("constant scalar field") {
  const DiffusionField f = DiffusionField::constant_scalar(2, 0.5);
  const DiffusionEval e = eval_diffusion(f, (Vec(2) << 3, -1).finished());
  CHECK((e.d - 0.5 * Mat::Identity(2, 2)).norm() == 0.0);
  CHECK(e.div.norm() == 0.0);
  CHECK(f.is_constant());
  CHECK(fd_check(f, 10, 1, Box::cube(2, -1, 1)).divergence == 0.0);
}

TEST_CASE("isotropic field with log shape is D = U I") {
  const DiffusionField f = DiffusionField::isotropic_of_loss(NoiseShape::kLog, one_plus_square(1));
  const DiffusionEval e = f.eval(vec1(1.0));
  CHECK(e.d(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(e.div[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_FALSE(f.is_constant());
}

TEST_CASE("isotropic field divergence matches differences") {
  for (NoiseShape s : {NoiseShape::kLog, NoiseShape::kIdentity, NoiseShape::kExp}) {
    const DiffusionField f = DiffusionField::isotropic_of_loss(s, one_plus_square(2));
    CHECK(fd_check(f, 30, 2, Box::cube(2, -2, 2)).divergence <= 1e-5);
  }
}

TEST_CASE("log shape outside its domain names the point") {
  const Landscape neg = quadratic_landscape(Mat::Identity(1, 1), vec1(0.0), -1.0);
  const DiffusionField f = DiffusionField::isotropic_of_loss(NoiseShape::kLog, neg);
  try {
    f.eval(vec1(0.25));
    FAIL("expected a domain error");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("0.25") != std::string::npos);
  }
}

TEST_CASE("augmented field adds beta squared") {
  const DiffusionField zero = DiffusionField::constant_scalar(1, 0.0);
  const DiffusionField f = DiffusionField::augmented(zero, 0.01);
  CHECK(f.eval(vec1(0.3)).d(0, 0) == doctest::Approx(0.01).epsilon(1e-15));

  const Mat d = (Mat(2, 2) << 2, 1, 1, 1).finished();
  const DiffusionField g = DiffusionField::augmented(DiffusionField::constant_matrix(d), 0.3);
  const Vec ev0 = Eigen::SelfAdjointEigenSolver<Mat>(d).eigenvalues();
  const Vec ev1 = Eigen::SelfAdjointEigenSolver<Mat>(g.matrix(Vec::Zero(2))).eigenvalues();
  CHECK((ev1 - ev0 - Vec::Constant(2, 0.3)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("diagonal separable field") {
  const Landscape u1 = one_plus_square(1);
  const Landscape u2 = quadratic_landscape(Mat::Identity(1, 1), vec1(0.5), 2.0);
  const DiffusionField f = DiffusionField::diagonal_separable({u1, u2}, NoiseShape::kLog);
  const Vec x = (Vec(2) << 0.3, -0.4).finished();
  const DiffusionEval e = f.eval(x);
  CHECK(e.d(0, 0) == doctest::Approx(u1.loss(0.3)));
  CHECK(e.d(1, 1) == doctest::Approx(u2.loss(-0.4)));
  CHECK(e.d(0, 1) == 0.0);
  CHECK(e.div[0] == doctest::Approx(u1.grad(0.3)));
  CHECK(e.div[1] == doctest::Approx(u2.grad(-0.4)));
  CHECK(fd_check(f, 30, 3, Box::cube(2, -2, 2)).divergence <= 1e-5);
}

TEST_CASE("fields are symmetric positive semidefinite at probes") {
  const Landscape u = one_plus_square(2);
  const std::vector<DiffusionField> fields = {
      DiffusionField::constant_scalar(2, 1.0),
      DiffusionField::constant_matrix((Mat(2, 2) << 1, 0.5, 0.5, 2).finished()),
      DiffusionField::isotropic_of_loss(NoiseShape::kLog, u),
      DiffusionField::diagonal_separable({one_plus_square(1), one_plus_square(1)}, NoiseShape::kExp),
      DiffusionField::augmented(DiffusionField::isotropic_of_loss(NoiseShape::kExp, u), 0.1)};
  for (const auto& f : fields) {
    for (double a = -1.5; a <= 1.5; a += 0.5) {
      const Mat d = f.matrix((Vec(2) << a, -a / 2).finished());
      CHECK((d - d.transpose()).norm() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Mat>(d).eigenvalues().minCoeff() >= -1e-14);
    }
  }
}

TEST_CASE("invalid fields are rejected") {
  CHECK_THROWS_AS(DiffusionField::constant_scalar(1, -1.0), ConfigError);
  CHECK_THROWS_AS(DiffusionField::constant_matrix((Mat(2, 2) << 1, 2, 2, 1).finished()), ConfigError);
  CHECK_THROWS_AS(DiffusionField::augmented(DiffusionField::constant_scalar(1, 1.0), -0.1), ConfigError);
  CHECK_THROWS_AS(noise_shape_from_string("cubic"), ConfigError);
}
