#pragma once

namespace sector {

/// Optical properties of the water column.
struct WaterChannelParams {
  double extinction_c = 0.1514;  // c(lambda) = a(lambda) + b(lambda), 1/m
  double alpha = 0.5;            // scattering correction exponent; 1 is singular
  double wavelength = 532e-9;    // m

  void validate() const;
};

/// Planar transmitter -> receiver geometry.
///
/// `distance` is the Euclidean length of the link and `misalign_phi` the
/// angle between the transmitter's optical axis and the line to the receiver.
struct LinkGeometry {
  double distance = 0.0;
  double misalign_phi = 0.0;

  double perp_distance() const;
  void validate() const;
};

/// Absorption and scattering loss along the path, exp(-c d / cos(phi)).
double beer_lambert_loss(const WaterChannelParams& params, const LinkGeometry& geom);

/// Beam spreading loss of a semi-collimated Gaussian transmitter,
/// (A cos(phi) / (theta d))^2 with d the perpendicular distance.
double geometric_loss(double aperture, double theta, const LinkGeometry& geom);

/// Channel gain including the scattered-light correction:
///   G = GL * exp(-(c d / cos(phi)) * (A cos(phi) / (theta d))^alpha)
/// For alpha = 0 this is the ballistic-photon gain beer_lambert * geometric.
double channel_gain(const WaterChannelParams& params, double aperture, double theta,
                    const LinkGeometry& geom);

}  // namespace sector
