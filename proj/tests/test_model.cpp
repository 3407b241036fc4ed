#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "darktripod/model.hpp"
#include "oracles/oracles.hpp"

using namespace darktripod;
using std::numbers::pi;

TEST_CASE("mixing angle from preparation Rabi frequencies") {
  CHECK(mixing_angle_from_rabi(1.0, 0.0) == 0.0);
  CHECK(mixing_angle_from_rabi(1.0, 1.0) == doctest::Approx(pi / 4).epsilon(1e-15));
  const double theta = mixing_angle_from_rabi(1.0, std::sqrt(3.0));
  CHECK(theta == doctest::Approx(pi / 3).epsilon(1e-15));
  CHECK(std::cos(theta) * std::cos(theta) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(mixing_angle_from_rabi(0.0, 2.0) == doctest::Approx(pi / 2));

  CHECK_THROWS_WITH_AS(mixing_angle_from_rabi(0.0, 0.0), doctest::Contains("dark state undefined"),
                       std::invalid_argument);
  CHECK_THROWS_AS(mixing_angle_from_rabi(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("channel weights at anchor angles") {
  CHECK(channel1_weight(0.0) == doctest::Approx(1.0));
  CHECK(channel1_weight(pi / 4) == 0.0);
  CHECK(channel2_weight(pi / 4) == 0.0);
  CHECK(channel2_weight(pi / 2) == doctest::Approx(1.0));
  CHECK(channel2_weight(0.0) == 0.0);
  CHECK(channel1_weight(pi / 2) == 0.0);

  const double fmin = (1 - std::sqrt(2.0)) / 2;
  CHECK(channel1_weight(3 * pi / 8) == doctest::Approx(fmin).epsilon(1e-14));
  CHECK(channel2_weight(pi / 8) == doctest::Approx(fmin).epsilon(1e-14));
}

TEST_CASE("weights match their defining products") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0, pi / 2);
  for (int i = 0; i < 2000; ++i) {
    const double t = angle(rng);
    const double c = std::cos(t), s = std::sin(t);
    CHECK(channel1_weight(t) == doctest::Approx(c * c - c * s).epsilon(1e-12).scale(1));
    CHECK(channel2_weight(t) == doctest::Approx(s * s - c * s).epsilon(1e-12).scale(1));
    // g(theta) = f(pi/2 - theta)
    CHECK(channel2_weight(t) == doctest::Approx(channel1_weight(pi / 2 - t)).epsilon(1e-12).scale(1));
    // f + g = 1 - sin(2 theta) >= 0
    const double sum = channel1_weight(t) + channel2_weight(t);
    CHECK(sum == doctest::Approx(1 - std::sin(2 * t)).epsilon(1e-12).scale(1));
    CHECK(sum >= -1e-15);
  }
}

TEST_CASE("grid scan locates both weight minima") {
  const auto f = oracle::scan_min([](double t) { return channel1_weight(t); }, 0, pi / 2, 1e-4);
  const auto g = oracle::scan_min([](double t) { return channel2_weight(t); }, 0, pi / 2, 1e-4);
  const double fmin = (1 - std::sqrt(2.0)) / 2;
  CHECK(f.x == doctest::Approx(3 * pi / 8).epsilon(1e-4).scale(1));
  CHECK(g.x == doctest::Approx(pi / 8).epsilon(1e-4).scale(1));
  CHECK(f.value == doctest::Approx(fmin).epsilon(1e-8).scale(1));
  CHECK(g.value == doctest::Approx(fmin).epsilon(1e-8).scale(1));
}

TEST_CASE("zeros of the weights") {
  // f vanishes only at pi/4 and pi/2, g only at 0 and pi/4.
  for (double t = 0.01; t < pi / 2 - 0.01; t += 0.001) {
    if (std::abs(t - pi / 4) < 0.005) continue;
    CHECK(std::abs(channel1_weight(t)) > 1e-6);
    CHECK(std::abs(channel2_weight(t)) > 1e-6);
  }
}

TEST_CASE("prepared dark state") {
  auto p = prepare_dark_state(0.0);
  CHECK(p.population1 == 1.0);
  CHECK(p.population2 == 0.0);
  CHECK(p.raman_coherence == 0.0);

  p = prepare_dark_state(pi / 4);
  CHECK(p.population1 == doctest::Approx(0.5));
  CHECK(p.population2 == doctest::Approx(0.5));
  CHECK(p.raman_coherence == doctest::Approx(-0.5));
  // Sources vanish exactly: the probe is decoupled from the symmetric dark state.
  CHECK(p.channel1_source() == 0.0);
  CHECK(p.channel2_source() == 0.0);

  p = prepare_dark_state(pi / 3);
  CHECK(p.population1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p.population2 == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(p.raman_coherence == doctest::Approx(-std::sqrt(3.0) / 4).epsilon(1e-14));
}

TEST_CASE("prepared state is a rank-one projector for every angle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0, pi / 2);
  for (int i = 0; i < 1000; ++i) {
    const auto p = prepare_dark_state(angle(rng));
    CHECK(p.trace() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(p.determinant()) < 1e-15);
    CHECK(p.raman_coherence <= 0.0);
    CHECK(p.population1 >= 0.0);
    CHECK(p.population2 >= 0.0);
  }
}

TEST_CASE("angles outside the first quadrant are rejected") {
  CHECK_THROWS_AS(channel1_weight(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(channel2_weight(pi / 2 + 0.01), std::invalid_argument);
  CHECK_THROWS_AS(prepare_dark_state(2.0), std::invalid_argument);
  CHECK_NOTHROW(prepare_dark_state(pi / 2));
}

TEST_CASE("configuration invariants") {
  SystemConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = [](auto mutate) {
    SystemConfig c;
    mutate(c);
    return c;
  };
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.decay = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.decay41 = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.decay42 = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.control_rabi = -2; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.density_coupling = -1; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.ground_splitting = 0; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.mixing_angle = 1.7; }).validate(), std::invalid_argument);
  CHECK_THROWS_AS(bad([](SystemConfig& c) { c.decay = NAN; }).validate(), std::invalid_argument);
}

TEST_CASE("long double instantiation") {
  const long double t = 3 * std::numbers::pi_v<long double> / 8;
  CHECK(static_cast<double>(channel1_weight(t)) == doctest::Approx((1 - std::sqrt(2.0)) / 2));
}
