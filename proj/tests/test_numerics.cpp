#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "sector/numerics.hpp"

namespace num = sector::numerics;
using num::DomainError;
using num::ToleranceConfig;
using num::erfc_inv;
using num::lambert_w0;

TEST_CASE("lambert_w0 special values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-1.0 / std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-12));
  // Frozen reference value (mpmath, 50 digits).
  CHECK(std::abs(lambert_w0(1.0) - 0.56714329040978387) < 1e-15);
  CHECK(std::abs(lambert_w0(1.0) - oracle::lambert_w0(1.0)) < 1e-14);
}

TEST_CASE("lambert_w0 satisfies its defining equation") {
  for (double x : {-0.3678, -0.3, -0.1, -1e-8, 1e-8, 0.5, 2.0, 10.0, 1e3, 1e6, 1e12}) {
    const double w = lambert_w0(x);
    CHECK(w * std::exp(w) == doctest::Approx(x).epsilon(1e-12));
    CHECK(w >= -1.0);
  }
}

TEST_CASE("lambert_w0 rejects the left of the branch point") {
  CHECK_THROWS_AS(lambert_w0(-0.5), DomainError);
  CHECK_THROWS_AS(lambert_w0(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("erfc against quadrature") {
  CHECK(num::erfc(0.0) == 1.0);
  CHECK(num::erfc(10.0) < 1e-15);
  CHECK(std::abs(num::erfc(1.0) - 0.15729920705028513) < 1e-15);
  for (double x = -5.0; x <= 8.0; x += 0.37) {
    CHECK(std::abs(num::erfc(x) - oracle::erfc_quad(x)) < 1e-13);
  }
}

TEST_CASE("erfc_inv") {
  CHECK(erfc_inv(1.0) == 0.0);
  CHECK(std::abs(erfc_inv(0.5) - 0.47693627620446987) < 1e-14);
  CHECK(std::abs(erfc_inv(num::erfc(0.3)) - 0.3) < 1e-12);
  CHECK(erfc_inv(1.5) == doctest::Approx(-erfc_inv(0.5)).epsilon(1e-14));
  for (double y : {1e-300, 1e-100, 1e-20, 1e-5, 0.01, 0.3, 0.99, 1.2, 1.9, 1.999999}) {
    CHECK(std::erfc(erfc_inv(y)) == doctest::Approx(y).epsilon(1e-12));
  }
}

TEST_CASE("erfc_inv domain") {
  CHECK_THROWS_AS(erfc_inv(0.0), DomainError);
  CHECK_THROWS_AS(erfc_inv(2.0), DomainError);
  CHECK_THROWS_AS(erfc_inv(-1.0), DomainError);
}

TEST_CASE("tolerance config validation") {
  CHECK_THROWS(ToleranceConfig{0.0, 10}.validate());
  CHECK_THROWS(ToleranceConfig{1e-12, 0}.validate());
  CHECK_NOTHROW(ToleranceConfig{}.validate());
  // A loose tolerance still lands close to the root.
  CHECK(lambert_w0(1.0, {1e-4, 100}) == doctest::Approx(0.5671432904).epsilon(1e-4));
}
