#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace darktripod {

/// Physical parameters of the tripod medium. Every frequency is measured in
/// units of the optical coherence decay rate, which is itself stored as 1.
template <typename Scalar>
struct SystemConfigT {
  Scalar decay = 1;            ///< coherence decay rate (the frequency unit)
  Scalar decay41 = 1;          ///< |4><1| coherence relaxation
  Scalar decay42 = 1;          ///< |4><2| coherence relaxation
  Scalar density_coupling = 1; ///< N p^2 / (eps0 hbar)
  Scalar ground_splitting = 5; ///< |1>-|2> splitting, fixes the second resonance
  Scalar control_rabi = 2;     ///< control field Rabi frequency (real)
  Scalar control_detuning = 0;
  Scalar mixing_angle = 0;      ///< dark-state angle in [0, pi/2]
  Scalar probe_transition = 100; ///< |1>-|4> transition frequency

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

using SystemConfig = SystemConfigT<double>;

namespace detail {

template <typename Scalar>
constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;

// Absorbs the rounding of grid endpoints computed as lo + i * step.
template <typename Scalar>
constexpr Scalar angle_slack = 8 * std::numeric_limits<Scalar>::epsilon();

template <typename Scalar>
void require_angle(Scalar theta) {
  if (!(theta >= -angle_slack<Scalar> && theta <= half_pi<Scalar> + angle_slack<Scalar>))
    throw std::invalid_argument("mixing angle must lie in [0, pi/2], got " +
                                std::to_string(static_cast<double>(theta)));
}

// cos and sin of a first-quadrant angle, mirrored through pi/4 so that
// cos(pi/2 - x) == sin(x) bit for bit; pi/2 - x is exact for x >= pi/4.
template <typename Scalar>
std::pair<Scalar, Scalar> quadrant_cos_sin(Scalar theta) {
  using std::cos, std::sin;
  if (theta >= std::numbers::pi_v<Scalar> / 4) return {sin(half_pi<Scalar> - theta), sin(theta)};
  return {cos(theta), sin(theta)};
}

} // namespace detail

template <typename Scalar>
void SystemConfigT<Scalar>::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(std::isfinite(decay) && decay > 0, "gamma must be positive");
  require(std::isfinite(decay41) && decay41 > 0, "gamma41 must be positive");
  require(std::isfinite(decay42) && decay42 > 0, "gamma42 must be positive");
  require(std::isfinite(density_coupling) && density_coupling >= 0, "K must be non-negative");
  require(std::isfinite(ground_splitting) && ground_splitting > 0, "omega21 must be positive");
  require(std::isfinite(control_rabi) && control_rabi >= 0, "Omega_C must be non-negative");
  require(std::isfinite(control_detuning), "Delta_C must be finite");
  require(std::isfinite(probe_transition) && probe_transition > 0, "omega41 must be positive");
  detail::require_angle(mixing_angle);
}

/// Dark-state angle from the two preparation Rabi frequencies:
/// cos(theta) = omega1 / |omega|, sin(theta) = omega2 / |omega|.
template <typename Scalar>
Scalar mixing_angle_from_rabi(Scalar omega1, Scalar omega2) {
  if (!(omega1 >= 0 && omega2 >= 0))
    throw std::invalid_argument("preparation Rabi frequencies must be non-negative");
  if (omega1 == 0 && omega2 == 0)
    throw std::invalid_argument("dark state undefined: both preparation fields vanish");
  return std::atan2(omega2, omega1);
}

/// Weight of the |1> -> |4> channel, cos^2 - cos sin. Written as
/// sqrt(2) cos(theta) sin(pi/4 - theta) so it is exactly zero at pi/4.
template <typename Scalar>
Scalar channel1_weight(Scalar theta) {
  detail::require_angle(theta);
  using std::sin;
  const auto [c, s] = detail::quadrant_cos_sin(theta); // c == 0 exactly at pi/2
  return std::numbers::sqrt2_v<Scalar> * c * sin(std::numbers::pi_v<Scalar> / 4 - theta);
}

/// Weight of the |2> -> |4> channel, sin^2 - cos sin.
template <typename Scalar>
Scalar channel2_weight(Scalar theta) {
  detail::require_angle(theta);
  using std::sin;
  return std::numbers::sqrt2_v<Scalar> * sin(theta) *
         sin(theta - std::numbers::pi_v<Scalar> / 4);
}

/// Ground-manifold density matrix of the prepared dark state
/// cos(theta)|1> - sin(theta)|2>.
template <typename Scalar>
struct DarkStatePrep {
  Scalar theta = 0;
  Scalar population1 = 1;
  Scalar population2 = 0;
  Scalar raman_coherence = 0; ///< rho12 = rho21, real

  Scalar trace() const { return population1 + population2; }
  Scalar determinant() const {
    return population1 * population2 - raman_coherence * raman_coherence;
  }
  /// Source term rho11 + rho21 driving rho41.
  Scalar channel1_source() const { return population1 + raman_coherence; }
  /// Source term rho22 + rho12 driving rho42.
  Scalar channel2_source() const { return population2 + raman_coherence; }
};

template <typename Scalar>
DarkStatePrep<Scalar> prepare_dark_state(Scalar theta) {
  detail::require_angle(theta);
  const auto [c, s] = detail::quadrant_cos_sin(theta);
  return {theta, c * c, s * s, -c * s};
}

} // namespace darktripod
