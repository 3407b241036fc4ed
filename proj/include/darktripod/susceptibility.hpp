#pragma once

#include <algorithm>
#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "darktripod/errors.hpp"
#include "darktripod/model.hpp"

namespace darktripod {

/// Which steady-state coherences contribute to the probe response.
enum class ProbeResponse {
  full,          ///< both rho41 and rho42
  channel1_only, ///< rho42 dropped, valid for carriers near the |1>-|4> line
};

/// Denominator modulus below which the closed forms report a pole.
inline constexpr double kPoleTolerance = 1e-12;

template <typename Scalar>
struct SteadyCoherences {
  std::complex<Scalar> rho41;
  std::complex<Scalar> rho42;
};

namespace detail {

// (i D + gamma)(D - D_C) - i Omega_C^2 / 4 for one probe channel.
template <typename Scalar>
std::complex<Scalar> dressed_denominator(Scalar detuning, Scalar decay,
                                         const SystemConfigT<Scalar>& cfg) {
  const std::complex<Scalar> i(0, 1);
  const Scalar raman = detuning - cfg.control_detuning;
  const Scalar omega_c = cfg.control_rabi;
  std::complex<Scalar> den = (i * detuning + decay) * raman - i * (omega_c * omega_c / 4);
  if (std::abs(den) < static_cast<Scalar>(kPoleTolerance))
    throw DomainError("pole: dressed-state resonance");
  return den;
}

// weight * (D - D_C) / denominator, the bracketed term of the susceptibility.
template <typename Scalar>
std::complex<Scalar> channel_response(Scalar weight, Scalar detuning, Scalar decay,
                                      const SystemConfigT<Scalar>& cfg) {
  const auto den = dressed_denominator(detuning, decay, cfg);
  return weight * (detuning - cfg.control_detuning) / den;
}

} // namespace detail

/// Steady-state probe coherences rho41, rho42 with populations and the Raman
/// coherence frozen at their prepared values. Linear in probe_rabi.
template <typename Scalar>
SteadyCoherences<Scalar> steady_coherences(const SystemConfigT<Scalar>& cfg,
                                           Scalar probe_rabi, Scalar delta1) {
  const std::complex<Scalar> i(0, 1);
  const Scalar theta = cfg.mixing_angle;
  const Scalar delta2 = delta1 - cfg.ground_splitting;
  const auto drive = i * (probe_rabi / 2);
  return {drive * detail::channel_response(channel1_weight(theta), delta1, cfg.decay41, cfg),
          drive * detail::channel_response(channel2_weight(theta), delta2, cfg.decay42, cfg)};
}

/// Complex probe susceptibility at probe detuning delta1 = omega41 - nu_P.
/// Equals 2 K (rho41 + rho42) / Omega_P, independent of the probe strength.
template <typename Scalar>
std::complex<Scalar> susceptibility(const SystemConfigT<Scalar>& cfg, Scalar delta1,
                                    ProbeResponse response = ProbeResponse::full) {
  const std::complex<Scalar> i(0, 1);
  const Scalar theta = cfg.mixing_angle;
  auto bracket = detail::channel_response(channel1_weight(theta), delta1, cfg.decay41, cfg);
  if (response == ProbeResponse::full) {
    const Scalar delta2 = delta1 - cfg.ground_splitting;
    bracket += detail::channel_response(channel2_weight(theta), delta2, cfg.decay42, cfg);
  }
  return i * cfg.density_coupling * bracket;
}

namespace detail {

template <typename Scalar>
void require_closed_form(const SystemConfigT<Scalar>& cfg) {
  if (cfg.control_detuning != 0 || cfg.decay41 != cfg.decay42)
    throw std::invalid_argument("closed form requires symmetric decay, resonant control");
}

// Lorentzian-like shared denominator gamma^2 D^2 + (D^2 - Omega_C^2/4)^2.
template <typename Scalar>
Scalar real_denominator(Scalar detuning, Scalar decay, Scalar omega_c) {
  const Scalar split = detuning * detuning - omega_c * omega_c / 4;
  const Scalar den = decay * decay * detuning * detuning + split * split;
  if (den < static_cast<Scalar>(kPoleTolerance * kPoleTolerance))
    throw DomainError("pole: dressed-state resonance");
  return den;
}

} // namespace detail

/// Dispersive part of the susceptibility for resonant control and equal
/// decay rates. Evaluated from its own real-arithmetic form.
template <typename Scalar>
Scalar susceptibility_real(const SystemConfigT<Scalar>& cfg, Scalar delta1) {
  detail::require_closed_form(cfg);
  const Scalar decay = cfg.decay41;
  const Scalar omega_c = cfg.control_rabi;
  auto term = [&](Scalar weight, Scalar d) {
    const Scalar split = d * d - omega_c * omega_c / 4;
    return weight * d * split / detail::real_denominator(d, decay, omega_c);
  };
  const Scalar theta = cfg.mixing_angle;
  return cfg.density_coupling * (term(channel1_weight(theta), delta1) +
                                 term(channel2_weight(theta), delta1 - cfg.ground_splitting));
}

/// Absorptive part; positive means absorption, negative means gain.
template <typename Scalar>
Scalar susceptibility_imag(const SystemConfigT<Scalar>& cfg, Scalar delta1) {
  detail::require_closed_form(cfg);
  const Scalar decay = cfg.decay41;
  const Scalar omega_c = cfg.control_rabi;
  auto term = [&](Scalar weight, Scalar d) {
    return weight * decay * d * d / detail::real_denominator(d, decay, omega_c);
  };
  const Scalar theta = cfg.mixing_angle;
  return cfg.density_coupling * (term(channel1_weight(theta), delta1) +
                                 term(channel2_weight(theta), delta1 - cfg.ground_splitting));
}

/// Lorentz-Lorenz dense-medium map chi -> eps - 1 = chi / (1 - chi/3), taking
/// N alpha as the bare linear susceptibility.
template <typename Scalar>
std::complex<Scalar> local_field_correction(std::complex<Scalar> chi_bare) {
  const std::complex<Scalar> den = Scalar(1) - chi_bare / Scalar(3);
  if (std::abs(den) <= static_cast<Scalar>(kPoleTolerance))
    throw DomainError("Lorentz-Lorenz pole");
  return chi_bare / den;
}

enum class ChiSource { analytic, oracle_linear, oracle_ode };

struct ChiSample {
  double delta1 = 0;
  std::optional<std::complex<double>> chi; ///< empty at a pole
  ChiSource source = ChiSource::analytic;
};

/// Susceptibility over a strictly increasing detuning grid. Pole points are
/// kept as empty samples so the output stays aligned with the grid.
std::vector<ChiSample> chi_scan(const SystemConfig& cfg, std::span<const double> delta1_grid,
                                ProbeResponse response = ProbeResponse::full);

/// A detuning where the probe sees no absorption.
struct TransparencyPoint {
  double delta1 = 0;
  double chi_real = 0;
  /// Positive index enhancement ("HG"); negative is the "LG" counterpart.
  bool high_index() const { return chi_real > 0; }
};

/// Roots of Im chi inside (lo, hi), located by a sign scan over `cells`
/// subintervals and refined by bisection to |Im chi| < 1e-10. Touching zeros
/// without a sign change (the EIT point itself) are not reported.
std::vector<TransparencyPoint> find_transparency_points(const SystemConfig& cfg, double lo,
                                                        double hi, int cells = 4096);

/// n evenly spaced points from lo to hi inclusive; the last point is hi exactly.
std::vector<double> uniform_grid(double lo, double hi, int n);

} // namespace darktripod
