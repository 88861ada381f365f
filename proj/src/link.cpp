#include "sector/link.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sector/numerics.hpp"

namespace sector {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

void require_efficiency(double v, const char* name) {
  if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
}

// Per-bit error probability that yields `per` over a packet of `packet_L` bits.
double bit_error_for_per(double per, double packet_L) {
  return -std::expm1(std::log1p(-per) / packet_L);
}

// Energy per photon divided by the counting efficiency; converts between
// optical power and photon rates.
double photon_energy(const TransceiverParams& rx, double wavelength) {
  return rx.planck_h * rx.light_speed_water / (rx.eta_c * wavelength);
}

}  // namespace

void TransceiverParams::validate() const {
  require_positive(p_tx, "p_tx");
  require_efficiency(eta_tx, "eta_tx");
  require_efficiency(eta_rx, "eta_rx");
  require_efficiency(eta_c, "eta_c");
  require_positive(aperture, "aperture");
  require_positive(pulse_T, "pulse_T");
  require_positive(theta_min, "theta_min");
  require_positive(theta_max, "theta_max");
  if (!(theta_min < theta_max)) throw std::invalid_argument("theta_min must be below theta_max");
  if (!(theta_max < std::numbers::pi)) throw std::invalid_argument("theta_max must be below pi");
  require_positive(planck_h, "planck_h");
  require_positive(light_speed_water, "light_speed_water");
  require_positive(f_dc, "f_dc");
  require_positive(f_bg, "f_bg");
  if (!(p_dc >= 0.0 && p_bg >= 0.0)) throw std::invalid_argument("noise powers must be non-negative");
}

void TransceiverParams::derive_noise_powers(double rate_R, double wavelength) {
  const double scale = photon_energy(*this, wavelength) * rate_R * pulse_T;
  p_dc = f_dc * scale;
  p_bg = f_bg * scale;
}

double TransceiverParams::f_dc_at(double rate_R, double wavelength) const {
  return p_dc / (photon_energy(*this, wavelength) * rate_R * pulse_T);
}

double TransceiverParams::f_bg_at(double rate_R, double wavelength) const {
  return p_bg / (photon_energy(*this, wavelength) * rate_R * pulse_T);
}

double photon_rate(const TransceiverParams& tx, const TransceiverParams& rx, double gain,
                   double rate_R, double wavelength) {
  const double p_rx = tx.p_tx * tx.eta_tx * rx.eta_rx * gain;
  return p_rx * rx.eta_c * wavelength /
         (rate_R * rx.pulse_T * rx.planck_h * rx.light_speed_water);
}

double ber(double f_signal, double f_dc, double f_bg, double pulse_T) {
  const double f1 = f_signal + f_dc + f_bg;
  const double f0 = f_dc + f_bg;
  return 0.5 * numerics::erfc(std::sqrt(pulse_T / 2.0) * (std::sqrt(f1) - std::sqrt(f0)));
}

double per_from_ber(double ber, double packet_L) {
  if (ber >= 1.0) return 1.0;
  return -std::expm1(packet_L * std::log1p(-ber));
}

double achievable_rate(double p_rx, double target_per, double packet_L,
                       const TransceiverParams& rx, double wavelength) {
  const double a = bit_error_for_per(target_per, packet_L);
  if (!(a > 0.0 && a < 1.0)) throw numerics::DomainError("achievable_rate: target PER out of range");
  const double p_noise = rx.p_dc + rx.p_bg;
  const double num = std::sqrt(p_rx + p_noise) - std::sqrt(p_noise);
  const double ratio = num / numerics::erfc_inv(2.0 * a);
  return rx.eta_c * wavelength / (2.0 * rx.planck_h * rx.light_speed_water) * ratio * ratio;
}

double max_range(const TransceiverParams& tx, const TransceiverParams& rx,
                 const WaterChannelParams& water, double theta, double phi, double rate_R,
                 double target_per, double packet_L) {
  const double alpha = water.alpha;
  const double a = bit_error_for_per(target_per, packet_L);
  if (!(a > 0.0 && a < 0.5)) throw InfeasibleLink("max_range: target PER out of range");

  const double p_noise = rx.p_dc + rx.p_bg;
  const double amp = std::sqrt(2.0 * rate_R * rx.planck_h * rx.light_speed_water /
                               (rx.eta_c * water.wavelength)) *
                         numerics::erfc_inv(2.0 * a) +
                     std::sqrt(p_noise);
  const double b1 = (amp * amp - p_noise) / (tx.p_tx * tx.eta_tx * rx.eta_rx);
  const double cos_phi = std::cos(phi);
  const double b2 = std::pow(theta / (rx.aperture * cos_phi), 2.0);
  const double b3 = -water.extinction_c / cos_phi * std::pow(rx.aperture * cos_phi / theta, alpha);

  const double z = (alpha - 1.0) * std::pow(b1 * b2, (alpha - 1.0) / 2.0) * b3 / 2.0;
  if (z < -1.0 / std::numbers::e) throw InfeasibleLink("max_range: required gain unreachable");
  const double w = numerics::lambert_w0(z);
  const double perp = std::pow(2.0 / ((alpha - 1.0) * b3) * w, 1.0 / (1.0 - alpha));
  const double range = perp / cos_phi;
  if (!(range > 0.0) || !std::isfinite(range)) throw InfeasibleLink("max_range: no positive range");
  return range;
}

double success_prob_k(double per, int k) {
  if (k < 1) throw std::invalid_argument("success_prob_k: k must be >= 1");
  return std::pow(per, k - 1) * (1.0 - per);
}

double exnt_unicast(double per, int K) {
  if (K < 1) throw std::invalid_argument("exnt_unicast: K must be >= 1");
  double total = 0.0;
  double per_pow = 1.0;  // per^(k-1)
  for (int k = 1; k <= K; ++k) {
    total += k * per_pow * (1.0 - per);
    per_pow *= per;
  }
  return total + K * per_pow;
}

double exnt_unicast_norm(double pdr) {
  if (!(pdr > 0.0 && pdr <= 1.0)) throw numerics::DomainError("exnt_unicast_norm: pdr must lie in (0, 1]");
  return 1.0 / pdr;
}

double broadcast_per(std::span<const double> pers) {
  if (pers.empty()) throw std::invalid_argument("broadcast_per: empty candidate set");
  double prod = 1.0;
  for (double p : pers) prod *= p;
  return prod;
}

double sfr(std::span<const double> pers_ordered, std::size_t j) {
  if (j < 1 || j > pers_ordered.size()) throw std::out_of_range("sfr: priority index out of range");
  double prod = 1.0 - pers_ordered[j - 1];
  for (std::size_t k = 0; k + 1 < j; ++k) prod *= pers_ordered[k];
  return prod;
}

double exnt_broadcast(std::span<const double> pers, int K) {
  return exnt_unicast(broadcast_per(pers), K);
}

double exnt_broadcast_norm(std::span<const double> pers) {
  const double per_bc = broadcast_per(pers);
  if (per_bc >= 1.0) throw numerics::DomainError("exnt_broadcast_norm: no member can receive");
  return 1.0 / (1.0 - per_bc);
}

void LinkParams::validate() const {
  water.validate();
  trx.validate();
  require_positive(rate_R, "rate_R");
  if (!(target_per > 0.0 && target_per < 1.0)) throw std::invalid_argument("target_per must lie in (0, 1)");
  if (!(packet_L >= 1.0)) throw std::invalid_argument("packet_L must be at least 1 bit");
  if (max_retx_K < 1) throw std::invalid_argument("max_retx_K must be at least 1");
}

LinkModel::LinkModel(LinkParams params) : params_(std::move(params)) {
  params_.validate();
  params_.trx.derive_noise_powers(params_.rate_R, params_.water.wavelength);

  const auto& t = params_.trx;
  const double a = bit_error_for_per(params_.target_per, params_.packet_L);
  const double p_noise = t.p_dc + t.p_bg;
  const double amp = std::sqrt(2.0 * params_.rate_R * t.planck_h * t.light_speed_water /
                               (t.eta_c * params_.water.wavelength)) *
                         numerics::erfc_inv(2.0 * a) +
                     std::sqrt(p_noise);
  required_gain_ = (amp * amp - p_noise) / (t.p_tx * t.eta_tx * t.eta_rx);
  d_max_ = max_range(t.theta_min, 0.0);
}

double LinkModel::gain(double theta, const LinkGeometry& geom) const {
  return channel_gain(params_.water, params_.trx.aperture, theta, geom);
}

double LinkModel::received_power(double theta, const LinkGeometry& geom) const {
  const auto& t = params_.trx;
  return t.p_tx * t.eta_tx * t.eta_rx * gain(theta, geom);
}

double LinkModel::ber_at(double theta, const LinkGeometry& geom) const {
  const auto& t = params_.trx;
  const double lambda = params_.water.wavelength;
  const double f_sig = photon_rate(t, t, gain(theta, geom), params_.rate_R, lambda);
  return ber(f_sig, t.f_dc_at(params_.rate_R, lambda), t.f_bg_at(params_.rate_R, lambda), t.pulse_T);
}

double LinkModel::per_at(double theta, const LinkGeometry& geom) const {
  return per_from_ber(ber_at(theta, geom), params_.packet_L);
}

double LinkModel::pdr_at(double theta, const LinkGeometry& geom) const {
  const double b = ber_at(theta, geom);
  return std::exp(params_.packet_L * std::log1p(-b));
}

double LinkModel::max_range(double theta, double phi) const {
  return sector::max_range(params_.trx, params_.trx, params_.water, theta, phi, params_.rate_R,
                           params_.target_per, params_.packet_L);
}

double LinkModel::max_divergence(double phi, double distance) const {
  // Solve s^2 exp(-k s^alpha) = required gain for s = A cos(phi) / (theta d),
  // taking the root on the branch where gain grows as the beam narrows.
  const double alpha = params_.water.alpha;
  const double cos_phi = std::cos(phi);
  const double perp = distance * cos_phi;
  const double k = params_.water.extinction_c * distance;
  double s;
  if (alpha == 0.0) {
    s = std::sqrt(required_gain_ * std::exp(k));
  } else {
    const double arg = -(alpha * k / 2.0) * std::pow(required_gain_, alpha / 2.0);
    if (arg < -1.0 / std::numbers::e) return -1.0;
    const double t = -2.0 * numerics::lambert_w0(arg) / (alpha * k);
    s = std::pow(t, 1.0 / alpha);
  }
  return params_.trx.aperture * cos_phi / (perp * s);
}

}  // namespace sector
