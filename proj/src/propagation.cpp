#include "darktripod/propagation.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darktripod/errors.hpp"

namespace darktripod {

namespace {

// Components below this fraction of the spectral peak are outside the pulse
// band: an invalid medium response there zeroes them instead of failing.
constexpr double kBandFloor = 1e-12;

// Angular frequency of FFT bin k, matching x(t) = sum_k X_k exp(+i w_k t).
double bin_frequency(Eigen::Index k, Eigen::Index n, double dt) {
  const Eigen::Index signed_k = k < (n + 1) / 2 ? k : k - n;
  return 2 * std::numbers::pi * static_cast<double>(signed_k) / (static_cast<double>(n) * dt);
}

Eigen::VectorXcd forward(const Eigen::VectorXcd& x) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd spectrum(x.size());
  fft.fwd(spectrum, x);
  return spectrum;
}

Eigen::VectorXcd inverse(const Eigen::VectorXcd& spectrum) {
  Eigen::FFT<double> fft;
  Eigen::VectorXcd x(spectrum.size());
  fft.inv(x, spectrum);
  return x;
}

double centroid(const PulseEnvelope& p) {
  const Eigen::VectorXd weight = p.amplitude.cwiseAbs2();
  const double total = weight.sum();
  if (!(total > 0)) throw std::invalid_argument("pulse has zero energy");
  return p.times().dot(weight) / total;
}

} // namespace

Eigen::VectorXd PulseEnvelope::times() const {
  return Eigen::VectorXd::LinSpaced(size(), t0, time(size() - 1));
}

void PulseEnvelope::validate() const {
  if (size() < 2) throw std::invalid_argument("pulse grid needs at least two samples");
  if (!(dt > 0) || !std::isfinite(t0)) throw std::invalid_argument("pulse grid must be uniform and increasing");
  const double peak = amplitude.cwiseAbs().maxCoeff();
  if (!(peak > 0)) throw std::invalid_argument("pulse has zero amplitude");
  const double edge = std::max(std::abs(amplitude(0)), std::abs(amplitude(size() - 1)));
  if (edge >= 1e-6 * peak)
    throw std::invalid_argument("pulse does not decay at the grid ends (wraparound aliasing)");
}

PulseEnvelope gaussian_pulse(double sigma_t, Eigen::Index points, double half_span,
                             double peak, double center, double carrier_delta1) {
  if (!(sigma_t > 0)) throw std::invalid_argument("pulse width must be positive");
  if (points < 2) throw std::invalid_argument("pulse grid needs at least two samples");
  if (!(half_span > 0)) throw std::invalid_argument("pulse window must be positive");
  PulseEnvelope p;
  p.t0 = center - half_span;
  p.dt = 2 * half_span / static_cast<double>(points - 1);
  p.carrier_delta1 = carrier_delta1;
  p.amplitude.resize(points);
  for (Eigen::Index i = 0; i < points; ++i) {
    const double u = (p.time(i) - center) / sigma_t;
    p.amplitude(i) = peak * std::exp(-0.5 * u * u);
  }
  return p;
}

PulseEnvelope propagate_characteristics(const PulseEnvelope& pulse, double vg_over_c,
                                        double length) {
  pulse.validate();
  if (vg_over_c == 0) throw DomainError("stopped light outside the transport equation's validity");
  if (!(length >= 0)) throw std::invalid_argument("slab length must be non-negative");
  const double delay = length / vg_over_c;

  const Eigen::Index n = pulse.size();
  Eigen::VectorXcd spectrum = forward(pulse.amplitude);
  for (Eigen::Index k = 0; k < n; ++k)
    spectrum(k) *= std::polar(1.0, -bin_frequency(k, n, pulse.dt) * delay);

  PulseEnvelope out = pulse;
  out.amplitude = inverse(spectrum);
  const double peak = out.amplitude.cwiseAbs().maxCoeff();
  const double edge = std::max(std::abs(out.amplitude(0)), std::abs(out.amplitude(n - 1)));
  if (edge >= 1e-6 * peak) throw std::invalid_argument("delayed pulse leaves the time window");
  return out;
}

std::complex<double> complex_index(const MediumSlab& slab, double delta1) {
  std::complex<double> chi = susceptibility(slab.config, delta1, slab.response);
  if (slab.local_field) chi = local_field_correction(chi);
  const std::complex<double> eps = 1.0 + chi;
  if (!(eps.real() > 0)) throw DomainError("index on or past the branch cut (Re eps <= 0)");
  return std::sqrt(eps);
}

std::complex<double> transfer_function(const MediumSlab& slab, double nu, double delta1) {
  const std::complex<double> i(0, 1);
  return std::exp(i * nu * (complex_index(slab, delta1) - 1.0) * slab.length);
}

PulseEnvelope propagate_transfer(const PulseEnvelope& pulse, const MediumSlab& slab) {
  pulse.validate();
  slab.config.validate();
  if (!(slab.length >= 0)) throw std::invalid_argument("slab length must be non-negative");

  const Eigen::Index n = pulse.size();
  Eigen::VectorXcd spectrum = forward(pulse.amplitude);
  const double floor = kBandFloor * spectrum.cwiseAbs().maxCoeff();
  const double carrier = slab.config.probe_transition - pulse.carrier_delta1;

  for (Eigen::Index k = 0; k < n; ++k) {
    const double w = bin_frequency(k, n, pulse.dt);
    // Bin k oscillates as exp(+i w t) on top of exp(-i nu0 t).
    const double nu = carrier - w;
    const double delta1 = pulse.carrier_delta1 + w;
    const bool in_band = std::abs(spectrum(k)) > floor;
    try {
      spectrum(k) *= transfer_function(slab, nu, delta1);
    } catch (const DomainError& e) {
      if (in_band)
        throw DomainError(std::string("pulse bandwidth spans dressed resonance: ") + e.what());
      spectrum(k) = 0;
    }
  }

  PulseEnvelope out = pulse;
  out.amplitude = inverse(spectrum);
  return out;
}

double transfer_phase_slope(const MediumSlab& slab, double carrier_delta1, double step) {
  const double carrier = slab.config.probe_transition - carrier_delta1;
  auto phase = [&](double w) {
    return (carrier - w) * (complex_index(slab, carrier_delta1 + w).real() - 1) * slab.length;
  };
  // d/dnu with nu = carrier - w.
  return -(phase(step) - phase(-step)) / (2 * step);
}

double group_delay_centroid(const PulseEnvelope& reference, const PulseEnvelope& output) {
  return centroid(output) - centroid(reference);
}

double gain_factor(const PulseEnvelope& input, const PulseEnvelope& output) {
  const double e_in = input.energy();
  if (!(e_in > 0)) throw std::invalid_argument("input pulse has zero energy");
  return output.energy() / e_in;
}

} // namespace darktripod
