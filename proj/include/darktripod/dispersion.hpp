#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "darktripod/errors.hpp"
#include "darktripod/model.hpp"
#include "darktripod/susceptibility.hpp"

namespace darktripod {

/// The two angles steering the pulse: the dark-state angle and the medium
/// coupling strength tan^2(phi) = g^2 N / Omega_C^2.
template <typename Scalar>
struct ControlAnglesT {
  Scalar theta = 0;
  Scalar tan2phi = 0;
};
using ControlAngles = ControlAnglesT<double>;

/// tan^2(phi) implied by the medium: g^2 N = 2 omega41 K in frequency units.
template <typename Scalar>
Scalar coupling_strength(const SystemConfigT<Scalar>& cfg) {
  if (cfg.control_rabi == 0) throw DomainError("tan^2(phi) diverges without a control field");
  return 2 * cfg.probe_transition * cfg.density_coupling / (cfg.control_rabi * cfg.control_rabi);
}

/// Group velocity in units of c from the adiabatic reduction,
/// v_g / c = 1 / (1 + f(theta) tan^2(phi)). Negative past the threshold.
template <typename Scalar>
Scalar group_velocity_control(const ControlAnglesT<Scalar>& angles) {
  if (!(angles.tan2phi >= 0)) throw std::invalid_argument("tan^2(phi) must be non-negative");
  const Scalar den = 1 + channel1_weight(angles.theta) * angles.tan2phi;
  if (std::abs(den) < static_cast<Scalar>(kPoleTolerance))
    throw DomainError("infinite group velocity (threshold)");
  return 1 / den;
}

/// tan^2(phi) above which v_g turns negative at the deepest gain angle,
/// 1 / |min f| = 2 (sqrt(2) + 1).
template <typename Scalar = double>
constexpr Scalar negative_velocity_threshold() {
  return 2 * (std::numbers::sqrt2_v<Scalar> + 1);
}

template <typename Scalar>
struct DispersionSampleT {
  Scalar delta1 = 0;
  Scalar index = 1;       ///< sqrt(1 + Re chi)
  Scalar index_slope = 0; ///< dn/dnu, 1/gamma
  Scalar group_index = 1; ///< n + omega41 dn/dnu
  Scalar group_velocity = 1; ///< v_g / c
};
using DispersionSample = DispersionSampleT<double>;

inline constexpr double kDefaultSlopeStep = 1e-3;

/// Index, group index and group velocity at delta1 from a central difference
/// of sqrt(1 + Re chi). Probe frequency and detuning run in opposite
/// directions (delta1 = omega41 - nu), so dn/dnu = -dn/d(delta1).
template <typename Scalar>
DispersionSampleT<Scalar> dispersion_sample(const SystemConfigT<Scalar>& cfg, Scalar delta1,
                                            Scalar step = Scalar(kDefaultSlopeStep),
                                            ProbeResponse response = ProbeResponse::full) {
  if (!(step > 0 && step <= Scalar(0.01)))
    throw std::invalid_argument("finite-difference step must lie in (0, 0.01]");
  auto index_at = [&](Scalar d) {
    const Scalar re = susceptibility(cfg, d, response).real();
    if (!(re > -1)) throw DomainError("index undefined (dense-medium regime)");
    return std::sqrt(1 + re);
  };
  DispersionSampleT<Scalar> out;
  out.delta1 = delta1;
  out.index = index_at(delta1);
  out.index_slope = -(index_at(delta1 + step) - index_at(delta1 - step)) / (2 * step);
  out.group_index = out.index + cfg.probe_transition * out.index_slope;
  if (std::abs(out.group_index) < static_cast<Scalar>(kPoleTolerance))
    throw DomainError("infinite group velocity (group index vanishes)");
  out.group_velocity = 1 / out.group_index;
  return out;
}

template <typename Scalar>
struct ConsistencyReportT {
  Scalar tan2phi = 0;
  Scalar control_velocity = 1;    ///< from the (theta, phi) control law
  Scalar dispersion_velocity = 1; ///< from n + omega dn/domega
  Scalar relative_error = 0;
};
using ConsistencyReport = ConsistencyReportT<double>;

/// Compares the control-law group velocity against the one built from the
/// index slope at delta1 = 0. Both routes use the |1>-|4> channel only, the
/// same reduction under which the control law holds.
template <typename Scalar>
ConsistencyReportT<Scalar> consistency_check(const SystemConfigT<Scalar>& cfg,
                                             Scalar step = Scalar(kDefaultSlopeStep)) {
  ConsistencyReportT<Scalar> report;
  report.tan2phi = coupling_strength(cfg);
  report.control_velocity = group_velocity_control(ControlAnglesT<Scalar>{cfg.mixing_angle, report.tan2phi});
  report.dispersion_velocity =
      dispersion_sample(cfg, Scalar(0), step, ProbeResponse::channel1_only).group_velocity;
  report.relative_error = std::abs(report.control_velocity - report.dispersion_velocity) /
                          std::abs(report.control_velocity);
  return report;
}

} // namespace darktripod
