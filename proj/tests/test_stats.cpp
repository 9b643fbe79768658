#include <doctest.h>

#include <cmath>
#include <limits>

#include "mlipuq/errors.hpp"
#include "mlipuq/stats.hpp"

using namespace mlipuq;

TEST_SUITE("stats") {

TEST_CASE("normal quantile matches reference values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.99) == doctest::Approx(2.3263478740408408).epsilon(1e-12));
  CHECK(normal_quantile(0.8413447460685429) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the cdf across the support") {
  for (double x = -6.0; x <= 6.0; x += 0.171875) {
    const double p = normal_cdf(x);
    CHECK(std::abs(normal_quantile(p) - x) < 1e-9);
  }
}

TEST_CASE("normal quantile boundary and domain handling") {
  CHECK(normal_quantile(0.0) == -std::numeric_limits<double>::infinity());
  CHECK(normal_quantile(1.0) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(normal_quantile(-0.1), ContractViolation);
  CHECK_THROWS_AS(normal_quantile(1.1), ContractViolation);
}

TEST_CASE("normal cdf reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
  CHECK(normal_cdf(-1.0) == doctest::Approx(1.0 - 0.8413447460685429).epsilon(1e-14));
}

TEST_CASE("negative log density of the standard normal at zero") {
  CHECK(negative_log_density(0.0, 0.0, 1.0) ==
        doctest::Approx(0.9189385332046727).epsilon(1e-14));
  // Shift and scale: -log N(x; m, v) = 0.5*log(2*pi*v) + (x-m)^2/(2v).
  CHECK(negative_log_density(3.0, 1.0, 4.0) ==
        doctest::Approx(0.5 * std::log(2.0 * M_PI * 4.0) + 4.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("sample mean and Bessel-corrected std") {
  Eigen::VectorXd v(4);
  v << 1.0, 2.0, 3.0, 4.0;
  CHECK(sample_mean(v) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(sample_std(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-14));
  Eigen::VectorXd one(1);
  one << 7.0;
  CHECK(sample_std(one) == 0.0);
}

TEST_CASE("trapezoid handles uniform and non-uniform grids") {
  Eigen::VectorXd x(3), y(3);
  x << 0.0, 1.0, 2.0;
  y << 0.0, 1.0, 0.0;
  CHECK(trapezoid(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  x << 0.0, 0.5, 2.0;
  y << 1.0, 2.0, 0.0;
  CHECK(trapezoid(x, y) == doctest::Approx(0.75 + 1.5).epsilon(1e-15));
}

}  // TEST_SUITE
