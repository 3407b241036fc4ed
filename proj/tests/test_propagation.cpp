#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "darktripod/dispersion.hpp"
#include "darktripod/errors.hpp"
#include "darktripod/propagation.hpp"

using namespace darktripod;
using std::numbers::pi;

namespace {

SystemConfig desk_config(double theta) {
  SystemConfig cfg; // K = 1, Omega_C = 2, omega41 = 100
  cfg.mixing_angle = theta;
  return cfg;
}

PulseEnvelope narrowband() { return gaussian_pulse(200, 1 << 14, 1600); }

double max_abs_diff(const PulseEnvelope& a, const PulseEnvelope& b) {
  return (a.amplitude - b.amplitude).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("gaussian pulse and its invariants") {
  const auto p = narrowband();
  CHECK(p.size() == 16384);
  CHECK(p.time(0) == -1600);
  CHECK(p.time(p.size() - 1) == doctest::Approx(1600));
  CHECK_NOTHROW(p.validate());
  CHECK(p.energy() == doctest::Approx(std::sqrt(pi) * 200).epsilon(1e-10));

  auto clipped = gaussian_pulse(200, 256, 400);
  CHECK_THROWS_WITH_AS(clipped.validate(), doctest::Contains("aliasing"), std::invalid_argument);
  PulseEnvelope tiny;
  tiny.amplitude = Eigen::VectorXcd::Ones(1);
  CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_pulse(0, 16, 1), std::invalid_argument);
}

TEST_CASE("characteristics shift matches the analytic gaussian") {
  const auto p = narrowband();
  for (double vg : {1.0, 1.0 / 51, -0.93364770084753395}) {
    const auto out = propagate_characteristics(p, vg, 1.0);
    const double delay = 1.0 / vg;
    double worst = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double u = (p.time(i) - delay) / 200;
      worst = std::max(worst, std::abs(out.amplitude(i) - std::exp(-0.5 * u * u)));
    }
    CAPTURE(vg);
    CHECK(worst < 1e-12);
    CHECK(group_delay_centroid(p, out) == doctest::Approx(delay).epsilon(1e-9));
  }
  CHECK_THROWS_AS(propagate_characteristics(p, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(propagate_characteristics(p, 1e-3, 1.0), std::invalid_argument); // leaves window
}

TEST_CASE("centroid delay and gain factor") {
  const auto p = narrowband();
  CHECK(group_delay_centroid(p, p) == 0.0);
  CHECK(gain_factor(p, p) == 1.0);
  auto shifted = p;
  shifted.t0 += 3;
  CHECK(group_delay_centroid(p, shifted) == doctest::Approx(3.0).epsilon(1e-12));
  auto doubled = p;
  doubled.amplitude *= 2;
  CHECK(gain_factor(p, doubled) == doctest::Approx(4.0));
  auto empty = p;
  empty.amplitude.setZero();
  CHECK_THROWS_AS(group_delay_centroid(p, empty), std::invalid_argument);
  CHECK_THROWS_AS(gain_factor(empty, p), std::invalid_argument);
}

TEST_CASE("vacuum-equivalent slabs return the input") {
  const auto p = narrowband();
  MediumSlab slab{1.0, desk_config(pi / 4)};
  const auto out = propagate_transfer(p, slab);
  CHECK(max_abs_diff(out, p) < 1e-12);
  CHECK(gain_factor(p, out) == doctest::Approx(1.0).epsilon(1e-12));

  slab = MediumSlab{0.0, desk_config(0)};
  CHECK(max_abs_diff(propagate_transfer(p, slab), p) < 1e-12);
}

TEST_CASE("slow light through the EIT window") {
  const auto p = narrowband();
  const MediumSlab slab{1.0, desk_config(0)};
  const auto out = propagate_transfer(p, slab);
  const double delay = group_delay_centroid(p, out);
  CHECK(delay == doctest::Approx(50.0).epsilon(0.02));
  const double peak_in = p.amplitude.cwiseAbs().maxCoeff();
  const double peak_out = out.amplitude.cwiseAbs().maxCoeff();
  CHECK(peak_out == doctest::Approx(peak_in).epsilon(0.01));
  CHECK(gain_factor(p, out) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(gain_factor(p, out) <= 1.0);
}

TEST_CASE("pulse advance with Raman gain") {
  const auto p = narrowband();
  const MediumSlab slab{1.0, desk_config(3 * pi / 8)};
  const auto out = propagate_transfer(p, slab);
  const double delay = group_delay_centroid(p, out);
  const double vg = group_velocity_control(ControlAngles{3 * pi / 8, coupling_strength(slab.config)});
  CHECK(delay < 0);
  CHECK(delay == doctest::Approx(1 / vg - 1).epsilon(0.02));
  CHECK(gain_factor(p, out) > 1.0);

  // The advance never exceeds what the transfer phase slope dictates.
  const double slope = transfer_phase_slope(slab, 0.0);
  CHECK(delay == doctest::Approx(slope).epsilon(0.02));
  CHECK(std::abs(delay) <= std::abs(slope) * 1.02);
}

TEST_CASE("full response absorbs on the second line's wing") {
  const auto p = narrowband();
  MediumSlab slab{1.0, desk_config(3 * pi / 8)};
  slab.response = ProbeResponse::full;
  CHECK(gain_factor(p, propagate_transfer(p, slab)) < 1.0);
}

TEST_CASE("transfer functions compose") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ang(0, pi / 2), len(0.1, 1.5), det(-5, 10);
  for (int i = 0; i < 2000; ++i) {
    const auto cfg = desk_config(ang(rng));
    const double a = len(rng), b = len(rng), d = det(rng);
    const double nu = cfg.probe_transition - d;
    std::complex<double> one, two;
    try {
      one = transfer_function({a + b, cfg}, nu, d);
      two = transfer_function({a, cfg}, nu, d) * transfer_function({b, cfg}, nu, d);
    } catch (const DomainError&) {
      continue;
    }
    CHECK(std::abs(two - one) <= 1e-12 * std::abs(one));
  }
}

TEST_CASE("pulses compose through passive slabs") {
  // Where the slab amplifies, far-wing rounding noise grows by the wing gain,
  // so the pulse-level check stays on the absorbing side.
  const auto p = narrowband();
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> ang(0, pi / 4), len(0.1, 1.5);
  for (int i = 0; i < 6; ++i) {
    const auto cfg = desk_config(ang(rng));
    const double a = len(rng), b = len(rng);
    const auto two_step = propagate_transfer(propagate_transfer(p, {a, cfg}), {b, cfg});
    const auto one_step = propagate_transfer(p, {a + b, cfg});
    const double peak = one_step.amplitude.cwiseAbs().maxCoeff();
    CAPTURE(cfg.mixing_angle);
    CHECK(max_abs_diff(two_step, one_step) <= 1e-12 * peak);
  }
}

TEST_CASE("transfer is linear in the input amplitude") {
  const auto p = narrowband();
  auto scaled = p;
  scaled.amplitude *= std::complex<double>(3.0, -1.5);
  const MediumSlab slab{1.0, desk_config(0.3)};
  const auto a = propagate_transfer(p, slab);
  const auto b = propagate_transfer(scaled, slab);
  CHECK((b.amplitude - std::complex<double>(3.0, -1.5) * a.amplitude).cwiseAbs().maxCoeff() <=
        1e-12 * b.amplitude.cwiseAbs().maxCoeff());
}

TEST_CASE("local-field slab") {
  const auto p = narrowband();
  MediumSlab bare{1.0, desk_config(pi / 8)};
  bare.config.density_coupling = 10;
  MediumSlab corrected = bare;
  corrected.local_field = true;
  CHECK_NOTHROW(propagate_transfer(p, corrected));
  const auto n = complex_index(corrected, 0.02);
  const auto chi = susceptibility(bare.config, 0.02, bare.response);
  CHECK(std::abs(n * n - (1.0 + local_field_correction(chi))) < 1e-13);
}

TEST_CASE("in-band branch cut is an error") {
  auto cfg = desk_config(0);
  cfg.density_coupling = 50;
  const auto p = gaussian_pulse(5, 1 << 12, 60, 1.0, 0.0, 0.9);
  CHECK_THROWS_WITH_AS(propagate_transfer(p, MediumSlab{1.0, cfg}),
                       doctest::Contains("bandwidth"), DomainError);
}
