#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

#include "sector/channel.hpp"

namespace sector {

/// Optical transceiver parameters. Defaults reproduce the reference
/// parameter table (532 nm, 1 ns pulses, 0.1 W transmitters).
struct TransceiverParams {
  double p_tx = 0.1;                // W
  double eta_tx = 0.9;
  double eta_rx = 0.9;
  double eta_c = 0.16;              // detector counting efficiency
  double aperture = 5e-4;           // m^2
  double pulse_T = 1e-9;            // s
  double theta_min = 0.336;         // rad
  double theta_max = 2.0 / 3.0;     // rad
  double planck_h = 6.62e-34;       // J s
  double light_speed_water = 2.55e8;  // m/s
  double f_dc = 1e6;                // dark-count photon rate, 1/s
  double f_bg = 1e6;                // background photon rate, 1/s
  double p_dc = 0.0;                // W, see derive_noise_powers
  double p_bg = 0.0;                // W

  void validate() const;

  /// Fills p_dc/p_bg from the photon rates so that both noise representations
  /// agree at `rate_R`: P = f * h c R T / (eta_c lambda).
  void derive_noise_powers(double rate_R, double wavelength);

  /// Noise photon rates implied by the stored noise powers at `rate_R`.
  double f_dc_at(double rate_R, double wavelength) const;
  double f_bg_at(double rate_R, double wavelength) const;
};

class InfeasibleLink : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Mean photon arrival rate at the receiver for channel gain `gain` and bit
/// rate `rate_R`.
double photon_rate(const TransceiverParams& tx, const TransceiverParams& rx, double gain,
                   double rate_R, double wavelength);

/// OOK bit error rate under the Gaussian approximation of Poisson counts.
double ber(double f_signal, double f_dc, double f_bg, double pulse_T);

/// 1 - (1 - ber)^L.
double per_from_ber(double ber, double packet_L);

/// Highest bit rate that keeps the packet error rate at `target_per` for the
/// given received power.
double achievable_rate(double p_rx, double target_per, double packet_L,
                       const TransceiverParams& rx, double wavelength);

/// Euclidean range at which a link with divergence `theta`, misalignment `phi`
/// and bit rate `rate_R` reaches exactly `target_per`. Closed form through W0.
double max_range(const TransceiverParams& tx, const TransceiverParams& rx,
                 const WaterChannelParams& water, double theta, double phi, double rate_R,
                 double target_per, double packet_L);

/// Probability that the k-th attempt is the first success.
double success_prob_k(double per, int k);

/// Expected number of transmissions with at most K attempts, counting dropped
/// packets as K transmissions.
double exnt_unicast(double per, int K);

/// ExNT normalised to the delivery probability, 1 / pdr.
double exnt_unicast_norm(double pdr);

/// Packet error rate of a broadcast to a candidate set (all members fail).
double broadcast_per(std::span<const double> pers);

/// Probability that the member at 1-based priority `j` is the effective
/// forwarder: it receives and every higher-priority member fails.
double sfr(std::span<const double> pers_ordered, std::size_t j);

double exnt_broadcast(std::span<const double> pers, int K);
double exnt_broadcast_norm(std::span<const double> pers);

/// All parameters that determine a single optical hop, with the derived
/// quantities that routing queries repeatedly.
struct LinkParams {
  WaterChannelParams water;
  TransceiverParams trx;
  double rate_R = 1e9;        // bit/s
  double target_per = 0.1;
  double packet_L = 992.0;    // bits (124 bytes)
  int max_retx_K = 3;

  void validate() const;
};

class LinkModel {
 public:
  LinkModel() : LinkModel(LinkParams{}) {}
  explicit LinkModel(LinkParams params);

  const LinkParams& params() const { return params_; }
  const TransceiverParams& trx() const { return params_.trx; }
  const WaterChannelParams& water() const { return params_.water; }

  /// Channel gain a link needs to meet the target PER at the nominal rate.
  double required_gain() const { return required_gain_; }

  double gain(double theta, const LinkGeometry& geom) const;
  double received_power(double theta, const LinkGeometry& geom) const;
  double ber_at(double theta, const LinkGeometry& geom) const;
  double per_at(double theta, const LinkGeometry& geom) const;
  double pdr_at(double theta, const LinkGeometry& geom) const;

  double max_range(double theta, double phi) const;

  /// Longest reach over all admissible divergences (theta_min, on axis).
  double d_max() const { return d_max_; }

  /// Widest divergence at which a receiver at (`phi`, `distance`) still meets
  /// the target PER. Returns a negative value when no divergence does.
  double max_divergence(double phi, double distance) const;

 private:
  LinkParams params_;
  double required_gain_;
  double d_max_;
};

}  // namespace sector
