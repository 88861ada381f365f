#include "sector/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sector {

void WaterChannelParams::validate() const {
  if (!(extinction_c > 0.0)) throw std::invalid_argument("extinction_c must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
  if (std::abs(alpha - 1.0) < 1e-9) throw std::invalid_argument("alpha = 1 is singular");
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
}

double LinkGeometry::perp_distance() const { return distance * std::cos(misalign_phi); }

void LinkGeometry::validate() const {
  if (!(distance > 0.0)) throw std::invalid_argument("link distance must be positive");
  if (!(misalign_phi >= 0.0 && misalign_phi < std::numbers::pi / 2)) {
    throw std::invalid_argument("misalignment must lie in [0, pi/2)");
  }
}

double beer_lambert_loss(const WaterChannelParams& params, const LinkGeometry& geom) {
  return std::exp(-params.extinction_c * geom.perp_distance() / std::cos(geom.misalign_phi));
}

double geometric_loss(double aperture, double theta, const LinkGeometry& geom) {
  const double s = aperture * std::cos(geom.misalign_phi) / (theta * geom.perp_distance());
  return s * s;
}

double channel_gain(const WaterChannelParams& params, double aperture, double theta,
                    const LinkGeometry& geom) {
  const double cos_phi = std::cos(geom.misalign_phi);
  const double d = geom.perp_distance();
  const double s = aperture * cos_phi / (theta * d);
  const double path = params.extinction_c * d / cos_phi;
  return s * s * std::exp(-path * std::pow(s, params.alpha));
}

}  // namespace sector
