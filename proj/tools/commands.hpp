#pragma once

#include <json.hpp>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "darktripod/model.hpp"
#include "darktripod/oracle_sweep.hpp"
#include "darktripod/propagation.hpp"

namespace darktripod::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kBadArguments = 2,
  kDomainError = 3,
  kNotConverged = 4,
};

/// `lo:hi:n`; bounds may be written as multiples of pi.
struct GridSpec {
  double lo = 0;
  double hi = 0;
  int n = 1;
  std::vector<double> points() const;
};
GridSpec parse_grid(std::string_view text);
std::vector<double> parse_angle_list(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

std::string fig2_csv(std::span<const double> thetas);
std::string fig3_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     std::span<const double> thetas);
std::string fig4_csv(std::span<const double> thetas, std::span<const double> tan2phis);
std::string fig5_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     std::span<const double> thetas);
std::string scan_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     bool local_field);

struct PulseSpec {
  double sigma_t = 200;
  Eigen::Index points = 1 << 14;
  double span_sigmas = 8;
  double carrier_delta1 = 0;
};

struct PropagateOutput {
  std::string csv;
  nlohmann::json summary;
};
PropagateOutput propagate_run(const PulseSpec& pulse, const MediumSlab& slab);

struct OracleCheckOutput {
  std::string csv;
  bool passed = false;
  bool converged = true;
  nlohmann::json summary;
};
/// Passes when the closed-form and chi residuals stay below `tolerance` and
/// the time integration agrees to `ode_tolerance`.
OracleCheckOutput oracle_check_run(const OracleSweepSpec& spec, double tolerance = 1e-8,
                                   double ode_tolerance = 1e-6);

nlohmann::json config_json(const SystemConfig& cfg);

/// Full command-line entry point; returns the process exit code.
int run(int argc, char** argv);

} // namespace darktripod::cli
