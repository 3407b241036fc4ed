#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "darktripod/errors.hpp"
#include "darktripod/model.hpp"
#include "darktripod/susceptibility.hpp"

// Brute-force steady state of the weak-probe coherence equations
//
//   d/dt rho4j = -(i D_j + gamma_4j) rho4j + (i/2) Omega_P s_j + (i/2) Omega_C rho3j
//   d/dt rho3j = -i (D_j - D_C) rho3j + (i/2) Omega_C^* rho4j
//
// for j = 1, 2 with the source s_j built from the frozen dark-state
// populations. The two channels never couple, so each is a 2x2 complex
// block A y + b.

namespace darktripod {

template <typename Scalar>
struct BlochState {
  using Complex = std::complex<Scalar>;
  Complex rho41{};
  Complex rho31{};
  Complex rho42{};
  Complex rho32{};
  DarkStatePrep<Scalar> prep;

  Eigen::Matrix<Complex, 4, 1> coherences() const {
    return (Eigen::Matrix<Complex, 4, 1>() << rho41, rho31, rho42, rho32).finished();
  }
  bool finite() const { return coherences().allFinite(); }
};

/// One decoupled probe channel: y = (rho4j, rho3j), dy/dt = A y + b.
template <typename Scalar>
struct ChannelSystem {
  using Complex = std::complex<Scalar>;
  Eigen::Matrix<Complex, 2, 2> drift;
  Eigen::Matrix<Complex, 2, 1> source;
};

template <typename Scalar>
ChannelSystem<Scalar> channel_system(const SystemConfigT<Scalar>& cfg, int channel,
                                     Scalar probe_rabi, Scalar delta1) {
  using Complex = std::complex<Scalar>;
  const Complex i(0, 1);
  const auto prep = prepare_dark_state(cfg.mixing_angle);
  const bool first = channel == 1;
  const Scalar detuning = first ? delta1 : delta1 - cfg.ground_splitting;
  const Scalar decay = first ? cfg.decay41 : cfg.decay42;
  const Scalar src = first ? prep.channel1_source() : prep.channel2_source();
  const Complex omega_c(cfg.control_rabi, 0);

  ChannelSystem<Scalar> sys;
  sys.drift << -(i * detuning + decay), i * omega_c / Scalar(2),
      i * std::conj(omega_c) / Scalar(2), -i * (detuning - cfg.control_detuning);
  sys.source << i * probe_rabi * src / Scalar(2), Complex(0);
  return sys;
}

/// Steady state by direct solve of A y = -b on both channels.
template <typename Scalar>
BlochState<Scalar> steady_state_linear(const SystemConfigT<Scalar>& cfg, Scalar probe_rabi,
                                       Scalar delta1) {
  BlochState<Scalar> state;
  state.prep = prepare_dark_state(cfg.mixing_angle);
  for (int channel : {1, 2}) {
    const auto sys = channel_system(cfg, channel, probe_rabi, delta1);
    // |det A| = |closed-form denominator|, so the pole threshold matches.
    if (std::abs(sys.drift.determinant()) < static_cast<Scalar>(kPoleTolerance))
      throw DomainError("pole: singular coherence block");
    const Eigen::Matrix<std::complex<Scalar>, 2, 1> y =
        sys.drift.partialPivLu().solve(-sys.source);
    (channel == 1 ? state.rho41 : state.rho42) = y(0);
    (channel == 1 ? state.rho31 : state.rho32) = y(1);
  }
  return state;
}

template <typename Scalar>
struct EvolutionResult {
  BlochState<Scalar> state;
  bool converged = false;
  Scalar elapsed = 0; ///< integration time actually used, 1/gamma
};

/// Largest step accepted by evolve_to_steady.
template <typename Scalar>
Scalar max_stable_step(const SystemConfigT<Scalar>& cfg, Scalar delta1) {
  using std::abs;
  const Scalar delta2 = delta1 - cfg.ground_splitting;
  const Scalar rate = std::max({cfg.decay41, cfg.decay42, cfg.control_rabi, abs(delta1),
                                abs(delta2)});
  return Scalar(0.01) / rate;
}

namespace detail {

// One classical RK4 step for dy/dt = A y + b. With constant A the four stages
// collapse to y + h P(hA) (A y + b), P(x) = 1 + x/2 + x^2/6 + x^3/24.
template <typename Scalar>
struct Rk4Update {
  Eigen::Matrix<std::complex<Scalar>, 2, 2> step;   // I + h P(hA) A
  Eigen::Matrix<std::complex<Scalar>, 2, 1> offset; // h P(hA) b

  Rk4Update(const ChannelSystem<Scalar>& sys, Scalar dt) {
    using Mat = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
    const Mat x = dt * sys.drift;
    const Mat x2 = x * x;
    const Mat poly = Mat::Identity() + x / Scalar(2) + x2 / Scalar(6) + x2 * x / Scalar(24);
    step = Mat::Identity() + dt * poly * sys.drift;
    offset = dt * poly * sys.source;
  }
};

} // namespace detail

/// Integrates both channels from zero coherence with fixed-step RK4 until the
/// largest coherence changes by less than `rate_tolerance` per unit time.
/// Non-convergence by t_max is reported through the flag, not thrown.
template <typename Scalar>
EvolutionResult<Scalar> evolve_to_steady(const SystemConfigT<Scalar>& cfg, Scalar probe_rabi,
                                         Scalar delta1, Scalar dt, Scalar t_max,
                                         Scalar rate_tolerance = Scalar(1e-10)) {
  if (!(dt > 0) || dt > max_stable_step(cfg, delta1) * (1 + 1e-12))
    throw std::invalid_argument("time step exceeds 0.01 / (largest rate)");
  if (!(t_max > 0)) throw std::invalid_argument("t_max must be positive");

  using Vec = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
  const detail::Rk4Update<Scalar> up1(channel_system(cfg, 1, probe_rabi, delta1), dt);
  const detail::Rk4Update<Scalar> up2(channel_system(cfg, 2, probe_rabi, delta1), dt);

  Vec y1 = Vec::Zero();
  Vec y2 = Vec::Zero();
  // Compared squared, which keeps hypot out of the inner loop.
  const Scalar threshold = rate_tolerance * dt * rate_tolerance * dt;
  const auto max_steps = static_cast<long long>(std::ceil(t_max / dt));

  EvolutionResult<Scalar> result;
  long long n = 0;
  for (; n < max_steps; ++n) {
    const Vec next1 = up1.step * y1 + up1.offset;
    const Vec next2 = up2.step * y2 + up2.offset;
    const Scalar change = std::max((next1 - y1).cwiseAbs2().maxCoeff(),
                                   (next2 - y2).cwiseAbs2().maxCoeff());
    y1 = next1;
    y2 = next2;
    if (!std::isfinite(change)) throw IntegrationError("integration diverged");
    if (change < threshold) {
      result.converged = true;
      ++n;
      break;
    }
  }
  result.elapsed = static_cast<Scalar>(n) * dt;
  result.state.prep = prepare_dark_state(cfg.mixing_angle);
  result.state.rho41 = y1(0);
  result.state.rho31 = y1(1);
  result.state.rho42 = y2(0);
  result.state.rho32 = y2(1);
  return result;
}

/// chi = 2 K (rho41 + rho42) / Omega_P.
template <typename Scalar>
std::complex<Scalar> chi_from_state(const BlochState<Scalar>& state, Scalar probe_rabi,
                                    Scalar density_coupling) {
  if (probe_rabi == 0) throw std::invalid_argument("probe Rabi frequency must be nonzero");
  return Scalar(2) * density_coupling * (state.rho41 + state.rho42) / probe_rabi;
}

} // namespace darktripod
