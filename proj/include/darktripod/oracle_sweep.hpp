#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "darktripod/model.hpp"

namespace darktripod {

/// Randomised comparison of the closed-form steady state against the direct
/// linear solve and the converged time integration.
struct OracleSweepSpec {
  int samples = 1000;
  std::uint64_t seed = 20080415;
  SystemConfig base;                  ///< everything not drawn at random
  std::optional<double> fixed_theta;  ///< pin theta instead of drawing it
  double control_min = 0.1;           ///< Omega_C drawn log-uniformly
  double control_max = 10;
  double detuning_span = 10;          ///< delta1 uniform in [-span, span]
  double t_max = 2e5;
  /// Multiplies K on the closed-form side only; anything but 1 is a
  /// deliberate mutation that the check must catch.
  double k_scale = 1;
};

struct OracleSample {
  double theta = 0;
  double control_rabi = 0;
  double delta1 = 0;
  double closed_vs_linear = 0; ///< relative, rho41 and rho42
  double linear_vs_ode = 0;    ///< relative, all four coherences
  double chi_residual = 0;     ///< relative, closed-form chi vs 2K(rho41+rho42)/Omega_P
  bool converged = false;
};

struct OracleSweepResult {
  std::vector<OracleSample> samples;
  double max_closed_vs_linear = 0;
  double max_linear_vs_ode = 0;
  double max_chi_residual = 0;
  bool all_converged = true;
};

OracleSweepResult run_oracle_sweep(const OracleSweepSpec& spec);

} // namespace darktripod
