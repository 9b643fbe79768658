#include <doctest.h>

#include <cmath>

#include "mlipuq/errors.hpp"
#include "mlipuq/kernel.hpp"
#include "mlipuq/rng.hpp"

using namespace mlipuq;

namespace {

Eigen::MatrixXd random_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("kernel value matches the closed form") {
  KernelParams p;
  p.output_scale = 3.0;
  p.lengthscales.resize(2);
  p.lengthscales << 1.0, 2.0;
  Eigen::Vector2d x(0.0, 0.0), y(1.0, 2.0);
  // 3 * exp(-1/2 * (1^2/1^2 + 2^2/2^2)) = 3 * exp(-1)
  CHECK(kernel_eval(x, y, p) == doctest::Approx(1.103638323514327).epsilon(1e-14));
  CHECK(kernel_eval(x, x, p) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(kernel_eval(x, y, p) == kernel_eval(y, x, p));
}

TEST_CASE("kernel params validation") {
  KernelParams p = KernelParams::isotropic(1.0, 2.0, 3);
  CHECK(p.lengthscales.size() == 3);
  CHECK(p.lengthscales[2] == 2.0);
  CHECK_NOTHROW(p.validate(3));
  CHECK_THROWS_AS(p.validate(2), ContractViolation);
  p.lengthscales[1] = -1.0;
  CHECK_THROWS_AS(p.validate(3), ContractViolation);
  p = KernelParams::isotropic(-0.5, 1.0, 2);
  CHECK_THROWS_AS(p.validate(2), ContractViolation);
}

TEST_CASE("global kernel matrix equals the elementwise evaluation") {
  Rng rng(5);
  const Eigen::MatrixXd A = random_matrix(rng, 7, 4);
  const Eigen::MatrixXd B = random_matrix(rng, 5, 4);
  KernelParams p;
  p.output_scale = 1.7;
  p.lengthscales.resize(4);
  p.lengthscales << 0.8, 1.3, 2.1, 0.5;

  const Eigen::MatrixXd K = kernel_matrix(GlobalFeatures{A}, GlobalFeatures{B}, p);
  REQUIRE(K.rows() == 7);
  REQUIRE(K.cols() == 5);
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 5; ++j)
      CHECK(K(i, j) == doctest::Approx(kernel_eval(A.row(i), B.row(j), p))
                           .epsilon(1e-12));
}

TEST_CASE("global self kernel matrix is symmetric with the output scale on the diagonal") {
  Rng rng(6);
  const Eigen::MatrixXd A = random_matrix(rng, 9, 3);
  const KernelParams p = KernelParams::isotropic(2.5, 1.1, 3);
  const Eigen::MatrixXd K = kernel_matrix(GlobalFeatures{A}, GlobalFeatures{A}, p);
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (Eigen::Index i = 0; i < 9; ++i)
    CHECK(K(i, i) == doctest::Approx(2.5).epsilon(1e-12));
  const Eigen::VectorXd diag = kernel_diagonal(GlobalFeatures{A}, p);
  CHECK((diag.array() - 2.5).abs().maxCoeff() < 1e-14);
}

TEST_CASE("self kernel matrix is positive semidefinite") {
  Rng rng(77);
  const Eigen::MatrixXd A = random_matrix(rng, 12, 2);
  const KernelParams p = KernelParams::isotropic(1.0, 0.9, 2);
  const Eigen::MatrixXd K = kernel_matrix(GlobalFeatures{A}, GlobalFeatures{A}, p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("atomistic kernel is the unnormalized double sum over atom pairs") {
  Rng rng(9);
  const Eigen::MatrixXd A = random_matrix(rng, 2, 3);  // 2 atoms
  const Eigen::MatrixXd B = random_matrix(rng, 3, 3);  // 3 atoms
  const KernelParams p = KernelParams::isotropic(1.4, 1.2, 3);
  double manual = 0.0;
  for (Eigen::Index a = 0; a < 2; ++a)
    for (Eigen::Index b = 0; b < 3; ++b)
      manual += kernel_eval(A.row(a), B.row(b), p);
  CHECK(atomistic_kernel_eval(A, B, p) == doctest::Approx(manual).epsilon(1e-13));

  const AtomisticFeatures fa{{A, B}};
  const Eigen::MatrixXd K = kernel_matrix(fa, fa, p);
  REQUIRE(K.rows() == 2);
  CHECK(K(0, 1) == doctest::Approx(manual).epsilon(1e-12));
  CHECK(K(1, 0) == doctest::Approx(manual).epsilon(1e-12));
  CHECK(K(0, 0) ==
        doctest::Approx(atomistic_kernel_eval(A, A, p)).epsilon(1e-12));

  const Eigen::VectorXd diag = kernel_diagonal(fa, p);
  CHECK(diag[0] == doctest::Approx(K(0, 0)).epsilon(1e-12));
  CHECK(diag[1] == doctest::Approx(K(1, 1)).epsilon(1e-12));
}

TEST_CASE("atomistic kernel rejects empty environments") {
  const Eigen::MatrixXd empty(0, 3);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 3);
  const KernelParams p = KernelParams::isotropic(1.0, 1.0, 3);
  CHECK_THROWS_AS(atomistic_kernel_eval(empty, one, p), ContractViolation);
}

TEST_CASE("kernel matrix refuses mixed representation kinds") {
  Rng rng(3);
  const GlobalFeatures g{random_matrix(rng, 2, 3)};
  const AtomisticFeatures a{{random_matrix(rng, 2, 3)}};
  const KernelParams p = KernelParams::isotropic(1.0, 1.0, 3);
  CHECK_THROWS_AS(kernel_matrix(FeatureSet{g}, FeatureSet{a}, p), ContractViolation);
}

}  // TEST_SUITE
