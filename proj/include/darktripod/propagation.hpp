#pragma once

#include <Eigen/Dense>

#include "darktripod/model.hpp"
#include "darktripod/susceptibility.hpp"

namespace darktripod {

/// Complex probe envelope on a uniform time grid. Time in 1/gamma, amplitude
/// in units of gamma (a Rabi frequency).
struct PulseEnvelope {
  double t0 = 0;
  double dt = 1;
  Eigen::VectorXcd amplitude;
  double carrier_delta1 = 0; ///< carrier detuning from the |1>-|4> line

  Eigen::Index size() const { return amplitude.size(); }
  double time(Eigen::Index i) const { return t0 + static_cast<double>(i) * dt; }
  Eigen::VectorXd times() const;
  double energy() const { return amplitude.squaredNorm() * dt; }

  /// Throws std::invalid_argument unless the grid has at least two samples
  /// and the envelope is below 1e-6 of its peak at both ends.
  void validate() const;
};

/// Gaussian exp(-(t - center)^2 / (2 sigma^2)) sampled on `points` samples
/// spanning [center - half_span, center + half_span].
PulseEnvelope gaussian_pulse(double sigma_t, Eigen::Index points, double half_span,
                             double peak = 1, double center = 0, double carrier_delta1 = 0);

/// Medium of given length (units c/gamma).
struct MediumSlab {
  double length = 1;
  SystemConfig config;
  bool local_field = false;
  /// The reduced transport equation neglects rho42; keep that by default.
  ProbeResponse response = ProbeResponse::channel1_only;
};

/// Shape-preserving transport at constant group velocity: the envelope
/// delayed by length / vg_over_c (c = 1). Applied spectrally on the same grid.
PulseEnvelope propagate_characteristics(const PulseEnvelope& pulse, double vg_over_c,
                                        double length);

/// Complex index of the slab at probe detuning delta1, principal branch of
/// sqrt(1 + chi) or sqrt(eps) with the local-field correction.
std::complex<double> complex_index(const MediumSlab& slab, double delta1);

/// exp(i nu (n - 1) L) at absolute frequency nu and probe detuning delta1.
std::complex<double> transfer_function(const MediumSlab& slab, double nu, double delta1);

/// Multiplies every spectral component by exp(i nu (n(nu) - 1) L), the slab
/// transfer with the vacuum phase removed, so output times are retarded times.
PulseEnvelope propagate_transfer(const PulseEnvelope& pulse, const MediumSlab& slab);

/// d/dnu of the transfer phase nu (Re n - 1) L at the carrier; the group
/// delay relative to vacuum that a narrowband pulse must show.
double transfer_phase_slope(const MediumSlab& slab, double carrier_delta1,
                            double step = 1e-4);

/// Difference of intensity-weighted centroids, output minus reference.
double group_delay_centroid(const PulseEnvelope& reference, const PulseEnvelope& output);

/// Output energy over input energy.
double gain_factor(const PulseEnvelope& input, const PulseEnvelope& output);

} // namespace darktripod
