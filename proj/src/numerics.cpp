#include "sector/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sector::numerics {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

// Initial guess for W0. Near the branch point use the series in
// p = sqrt(2 (e x + 1)); elsewhere a log-based asymptotic form.
double w0_seed(double x) {
  if (x < -0.25) {
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
  }
  if (x < 3.0) {
    return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

double w0_bisect(double x, const ToleranceConfig& tol) {
  double lo = -1.0;
  double hi = std::max(1.0, std::log(std::max(x, 1.0)) + 1.0);
  for (int i = 0; i < 2000 && hi - lo > tol.rel_tol * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
}

double lambert_w0(double x, const ToleranceConfig& tol) {
  tol.validate();
  if (std::isnan(x) || x < -kInvE) {
    // Allow the rounding slop of computing -1/e in floating point.
    if (x >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
    throw DomainError("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = w0_seed(x);
  for (int i = 0; i < tol.max_iter; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    // Halley step.
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (w < -1.0) w = -1.0;
    if (std::abs(step) <= tol.rel_tol * std::max(1.0, std::abs(w))) {
      return w;
    }
  }
  if (std::isfinite(w) && std::abs(w * std::exp(w) - x) <= tol.rel_tol * std::max(1.0, std::abs(x))) {
    return w;
  }
  return w0_bisect(x, tol);
}

double erfc(double x) { return std::erfc(x); }

double erfc_inv(double y, const ToleranceConfig& tol) {
  tol.validate();
  if (!(y > 0.0 && y < 2.0)) throw DomainError("erfc_inv: argument outside (0, 2)");
  if (y == 1.0) return 0.0;
  if (y > 1.0) return -erfc_inv(2.0 - y, tol);

  // Giles' single-precision erfinv approximation as the seed, with
  // w = -log(1 - x^2) expressed through y = 1 - x to keep precision for tiny y.
  const double w = -std::log(y * (2.0 - y));
  const double xarg = 1.0 - y;
  double p = 0.0;
  double x;
  if (w >= 36.0) {
    // Past the polynomial's range: fixed point of x^2 = -log(y sqrt(pi) x),
    // the leading term of the asymptotic expansion of erfc.
    x = std::sqrt(-std::log(y));
    for (int i = 0; i < 4; ++i) x = std::sqrt(-std::log(y * 1.7724538509055160273 * x));
  } else if (w < 6.25) {
    const double t = w - 3.125;
    p = -3.6444120640178196996e-21;
    p = -1.685059138182016589e-19 + p * t;
    p = 1.2858480715256400167e-18 + p * t;
    p = 1.115787767802518096e-17 + p * t;
    p = -1.333171662854620906e-16 + p * t;
    p = 2.0972767875968561637e-17 + p * t;
    p = 6.6376381343583238325e-15 + p * t;
    p = -4.0545662729752068639e-14 + p * t;
    p = -8.1519341976054721522e-14 + p * t;
    p = 2.6335093153082322977e-12 + p * t;
    p = -1.2975133253453532498e-11 + p * t;
    p = -5.4154120542946279317e-11 + p * t;
    p = 1.051212273321532285e-09 + p * t;
    p = -4.1126339803469836976e-09 + p * t;
    p = -2.9070369957882005086e-08 + p * t;
    p = 4.2347877827932403518e-07 + p * t;
    p = -1.3654692000834678645e-06 + p * t;
    p = -1.3882523362786468719e-05 + p * t;
    p = 0.0001867342080340571352 + p * t;
    p = -0.00074070253416626697512 + p * t;
    p = -0.0060336708714301490533 + p * t;
    p = 0.24015818242558961693 + p * t;
    p = 1.6536545626831027356 + p * t;
  } else if (w < 16.0) {
    const double t = std::sqrt(w) - 3.25;
    p = 2.2137376921775787049e-09;
    p = 9.0756561938885390979e-08 + p * t;
    p = -2.7517406297064545428e-07 + p * t;
    p = 1.8239629214389227755e-08 + p * t;
    p = 1.5027403968909827627e-06 + p * t;
    p = -4.013867526981545969e-06 + p * t;
    p = 2.9234449089955446044e-06 + p * t;
    p = 1.2475304481671778723e-05 + p * t;
    p = -4.7318229009055733981e-05 + p * t;
    p = 6.8284851459573175448e-05 + p * t;
    p = 2.4031110387097893999e-05 + p * t;
    p = -0.0003550375203628474796 + p * t;
    p = 0.00095328937973738049703 + p * t;
    p = -0.0016882755560235047313 + p * t;
    p = 0.0024914420961078508066 + p * t;
    p = -0.0037512085075692412107 + p * t;
    p = 0.005370914553590063617 + p * t;
    p = 1.0052589676941592334 + p * t;
    p = 3.0838856104922207635 + p * t;
  } else {
    const double t = std::sqrt(w) - 5.0;
    p = -2.7109920616438573243e-11;
    p = -2.5556418169965252055e-10 + p * t;
    p = 1.5076572693500548083e-09 + p * t;
    p = -3.7894654401267369937e-09 + p * t;
    p = 7.6157012080783393804e-09 + p * t;
    p = -1.4960026627149240478e-08 + p * t;
    p = 2.9147953450901080826e-08 + p * t;
    p = -6.7711997758452339498e-08 + p * t;
    p = 2.2900482228026654717e-07 + p * t;
    p = -9.9298272942317002539e-07 + p * t;
    p = 4.5260625972231537039e-06 + p * t;
    p = -1.9681778105531670567e-05 + p * t;
    p = 7.5995277030017761139e-05 + p * t;
    p = -0.00021503011930044477347 + p * t;
    p = -0.00013871931833623122026 + p * t;
    p = 1.0103004648645343977 + p * t;
    p = 4.8499064014085844221 + p * t;
  }
  if (w < 36.0) x = p * xarg;

  // Halley refinement on erfc(x) - y; converges cubically from the seed.
  constexpr double kTwoOverSqrtPi = 2.0 / 1.7724538509055160273;
  for (int i = 0; i < tol.max_iter; ++i) {
    const double f = std::erfc(x) - y;
    const double fp = -kTwoOverSqrtPi * std::exp(-x * x);
    if (fp == 0.0) break;
    const double newton = f / fp;
    const double step = newton / (1.0 + x * newton);
    x -= step;
    if (std::abs(step) <= tol.rel_tol * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace sector::numerics
