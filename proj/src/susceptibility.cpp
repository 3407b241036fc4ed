#include "darktripod/susceptibility.hpp"

#include <cmath>
#include <stdexcept>

namespace darktripod {

std::vector<double> uniform_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  if (!(std::isfinite(lo) && std::isfinite(hi))) throw std::invalid_argument("grid bounds must be finite");
  if (n == 1) return {lo};
  if (!(hi > lo)) throw std::invalid_argument("grid must be strictly increasing");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = lo + i * step;
  grid.back() = hi;
  return grid;
}

std::vector<ChiSample> chi_scan(const SystemConfig& cfg, std::span<const double> delta1_grid,
                                ProbeResponse response) {
  if (delta1_grid.empty()) throw std::invalid_argument("detuning grid is empty");
  if (std::adjacent_find(delta1_grid.begin(), delta1_grid.end(),
                         [](double a, double b) { return !(b > a); }) != delta1_grid.end())
    throw std::invalid_argument("detuning grid must be strictly increasing");
  cfg.validate();

  std::vector<ChiSample> out;
  out.reserve(delta1_grid.size());
  for (double d : delta1_grid) {
    ChiSample sample{d, std::nullopt, ChiSource::analytic};
    try {
      sample.chi = susceptibility(cfg, d, response);
    } catch (const DomainError&) {
      // gap
    }
    out.push_back(sample);
  }
  return out;
}

std::vector<TransparencyPoint> find_transparency_points(const SystemConfig& cfg, double lo,
                                                        double hi, int cells) {
  cfg.validate();
  if (cfg.mixing_angle == std::numbers::pi / 4)
    throw std::invalid_argument("every detuning is transparent at theta = pi/4");
  if (!(hi > lo)) throw std::invalid_argument("bracket must satisfy lo < hi");
  if (cells < 1) throw std::invalid_argument("need at least one scan cell");

  auto im = [&](double d) { return susceptibility(cfg, d).imag(); };
  const double width = (hi - lo) / cells;

  std::vector<TransparencyPoint> roots;
  double a = lo;
  double fa = im(a);
  for (int c = 1; c <= cells; ++c) {
    const double b = c == cells ? hi : lo + c * width;
    const double fb = im(b);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      double left = a, right = b, f_left = fa;
      double mid = 0.5 * (left + right);
      for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (left + right);
        const double fm = im(mid);
        if (std::abs(fm) < 1e-10 && right - left < 1e-12) break;
        if (fm == 0) break;
        if ((fm < 0) == (f_left < 0)) {
          left = mid;
          f_left = fm;
        } else {
          right = mid;
        }
        if (right - left <= 4 * std::numeric_limits<double>::epsilon() * std::abs(mid)) break;
      }
      const double re = susceptibility(cfg, mid).real();
      if (std::abs(re) > kPoleTolerance) roots.push_back({mid, re});
    }
    a = b;
    fa = fb;
  }
  return roots;
}

} // namespace darktripod
