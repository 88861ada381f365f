#pragma once

#include <stdexcept>

namespace sector::numerics {

/// Iteration controls shared by the root finders below.
struct ToleranceConfig {
  double rel_tol = 1e-12;
  int max_iter = 100;

  void validate() const;
};

/// Thrown when an argument lies outside a special function's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Principal branch W0 of the product logarithm: w * exp(w) == x, w >= -1.
/// Defined for x >= -1/e.
double lambert_w0(double x, const ToleranceConfig& tol = {});

/// Complementary error function, 2/sqrt(pi) * integral_x^inf exp(-t^2) dt.
double erfc(double x);

/// Inverse of erfc on the open interval (0, 2).
double erfc_inv(double y, const ToleranceConfig& tol = {});

}  // namespace sector::numerics
