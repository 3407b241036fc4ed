#include "commands.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "darktripod/config_io.hpp"
#include "darktripod/csv.hpp"
#include "darktripod/dispersion.hpp"
#include "darktripod/errors.hpp"
#include "darktripod/susceptibility.hpp"

#ifndef DARKTRIPOD_VERSION
#define DARKTRIPOD_VERSION "unknown"
#endif

namespace darktripod::cli {

namespace {

using json = nlohmann::json;

constexpr double kHalfPi = std::numbers::pi / 2;
// fig4 rows this close to 1 + f tan^2(phi) = 0 are left blank.
constexpr double kThresholdBand = 1e-4;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto at = text.find(sep);
    parts.push_back(text.substr(0, at));
    if (at == std::string_view::npos) break;
    text.remove_prefix(at + 1);
  }
  return parts;
}

void require_angles(std::span<const double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("theta grid is empty");
  for (double t : thetas) detail::require_angle(t);
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) row += ',';
    row += c;
    first = false;
  }
  row += '\n';
  return row;
}

std::string fmt(double v) { return format_number(v); }

} // namespace

std::vector<double> GridSpec::points() const { return uniform_grid(lo, hi, n); }

GridSpec parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw std::invalid_argument("grid must be lo:hi:n, got '" + std::string(text) + "'");
  GridSpec g;
  g.lo = parse_angle(parts[0]);
  g.hi = parse_angle(parts[1]);
  const double n = parse_number(parts[2]);
  if (!(n >= 1) || n != std::floor(n) || n > 1e8)
    throw std::invalid_argument("grid point count must be a positive integer");
  g.n = static_cast<int>(n);
  if (g.n > 1 && !(g.hi > g.lo)) throw std::invalid_argument("grid must satisfy lo < hi");
  return g;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_angle(part));
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_number(part));
  return out;
}

json config_json(const SystemConfig& cfg) {
  return {{"gamma", cfg.decay},
          {"gamma41", cfg.decay41},
          {"gamma42", cfg.decay42},
          {"K", cfg.density_coupling},
          {"omega21", cfg.ground_splitting},
          {"Omega_C", cfg.control_rabi},
          {"Delta_C", cfg.control_detuning},
          {"theta", cfg.mixing_angle},
          {"omega41", cfg.probe_transition}};
}

std::string fig2_csv(std::span<const double> thetas) {
  require_angles(thetas);
  std::string body = "theta_rad,f,g\n";
  double min_f = INFINITY, min_g = INFINITY, at_f = 0, at_g = 0;
  for (double t : thetas) {
    const double f = channel1_weight(t);
    const double g = channel2_weight(t);
    if (f < min_f) min_f = f, at_f = t;
    if (g < min_g) min_g = g, at_g = t;
    body += csv_row({fmt(t), fmt(f), fmt(g)});
  }
  std::string head;
  head += "# min f: theta=" + fmt(at_f) + " value=" + fmt(min_f) + "\n";
  head += "# min g: theta=" + fmt(at_g) + " value=" + fmt(min_g) + "\n";
  return head + body;
}

std::string fig3_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     std::span<const double> thetas) {
  require_angles(thetas);
  std::string head = "# parameters: K=" + fmt(cfg.density_coupling) + " Omega_C=" +
                     fmt(cfg.control_rabi) + " omega21=" + fmt(cfg.ground_splitting) + "\n";
  std::string body = "theta_rad,delta1_over_gamma,re_chi,im_chi\n";
  for (double theta : thetas) {
    SystemConfig c = cfg;
    c.mixing_angle = theta;
    for (const auto& s : chi_scan(c, delta1_grid)) {
      if (s.chi)
        body += csv_row({fmt(theta), fmt(s.delta1), fmt(s.chi->real()), fmt(s.chi->imag())});
      else
        body += csv_row({fmt(theta), fmt(s.delta1), "", ""});
    }
    if (theta == std::numbers::pi / 4) {
      head += "# theta=" + fmt(theta) + ": transparent at every detuning\n";
      continue;
    }
    for (const auto& p : find_transparency_points(c, 0.0, c.ground_splitting))
      head += "# theta=" + fmt(theta) + ": transparency point delta1=" + fmt(p.delta1) +
              " re_chi=" + fmt(p.chi_real) + (p.high_index() ? " (HG)\n" : " (LG)\n");
  }
  return head + body;
}

std::string fig4_csv(std::span<const double> thetas, std::span<const double> tan2phis) {
  require_angles(thetas);
  if (tan2phis.empty()) throw std::invalid_argument("tan2phi list is empty");
  std::string head = "# tan2phi values are illustrative choices\n";
  head += "# negative-velocity threshold tan2phi=" + fmt(negative_velocity_threshold()) + "\n";
  std::string body = "theta_rad,tan2phi,vg_over_c\n";
  for (double t2 : tan2phis) {
    if (!(t2 >= 0)) throw std::invalid_argument("tan2phi must be non-negative");
    for (double theta : thetas) {
      const double den = 1 + channel1_weight(theta) * t2;
      if (std::abs(den) < kThresholdBand) {
        head += "# threshold: theta=" + fmt(theta) + " tan2phi=" + fmt(t2) +
                " (group velocity diverges)\n";
        body += csv_row({fmt(theta), fmt(t2), ""});
        continue;
      }
      body += csv_row({fmt(theta), fmt(t2), fmt(group_velocity_control(ControlAngles{theta, t2}))});
    }
  }
  return head + body;
}

std::string fig5_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     std::span<const double> thetas) {
  require_angles(thetas);
  std::string head = "# local-field corrected: eps - 1 = chi / (1 - chi/3), K=" +
                     fmt(cfg.density_coupling) + "\n";
  std::string body = "theta_rad,delta1_over_gamma,re_chi,im_chi,re_eps_minus_1,im_eps_minus_1\n";
  for (double theta : thetas) {
    SystemConfig c = cfg;
    c.mixing_angle = theta;
    for (const auto& s : chi_scan(c, delta1_grid)) {
      std::optional<std::complex<double>> eps;
      if (s.chi) {
        try {
          eps = local_field_correction(*s.chi);
        } catch (const DomainError&) {
        }
      }
      body += csv_row({fmt(theta), fmt(s.delta1),
                       s.chi ? fmt(s.chi->real()) : "", s.chi ? fmt(s.chi->imag()) : "",
                       eps ? fmt(eps->real()) : "", eps ? fmt(eps->imag()) : ""});
    }
  }
  return head + body;
}

std::string scan_csv(const SystemConfig& cfg, std::span<const double> delta1_grid,
                     bool local_field) {
  std::string out;
  if (local_field) out += "# values are local-field corrected eps - 1\n";
  out += "delta1_over_gamma,re_chi,im_chi\n";
  for (const auto& s : chi_scan(cfg, delta1_grid)) {
    std::optional<std::complex<double>> v = s.chi;
    if (v && local_field) {
      try {
        v = local_field_correction(*v);
      } catch (const DomainError&) {
        v.reset();
      }
    }
    out += csv_row({fmt(s.delta1), v ? fmt(v->real()) : "", v ? fmt(v->imag()) : ""});
  }
  return out;
}

PropagateOutput propagate_run(const PulseSpec& spec, const MediumSlab& slab) {
  const PulseEnvelope input = gaussian_pulse(spec.sigma_t, spec.points,
                                             spec.span_sigmas * spec.sigma_t, 1.0, 0.0,
                                             spec.carrier_delta1);
  // Retarded-frame output, then both it and the input carried across the
  // slab at c so every column shares the laboratory clock.
  const PulseEnvelope retarded = propagate_transfer(input, slab);
  const PulseEnvelope vacuum = propagate_characteristics(input, 1.0, slab.length);
  const PulseEnvelope output = propagate_characteristics(retarded, 1.0, slab.length);

  const double delay = group_delay_centroid(vacuum, output);
  const double gain = gain_factor(input, output);

  json summary;
  summary["delay"] = delay;
  summary["gain"] = gain;
  summary["local_field"] = slab.local_field;
  summary["response"] = slab.response == ProbeResponse::full ? "full" : "channel1_only";
  std::optional<double> predicted;
  try {
    const double tan2phi = coupling_strength(slab.config);
    const double vg = group_velocity_control(ControlAngles{slab.config.mixing_angle, tan2phi});
    predicted = slab.length * (1 / vg - 1);
    summary["tan2phi"] = tan2phi;
    summary["vg_over_c"] = vg;
  } catch (const DomainError&) {
  }
  summary["predicted_delay"] = predicted ? json(*predicted) : json(nullptr);
  summary["absolute_error"] = predicted ? json(std::abs(delay - *predicted)) : json(nullptr);
  summary["relative_error"] = predicted && *predicted != 0
                                  ? json(std::abs(delay - *predicted) / std::abs(*predicted))
                                  : json(nullptr);

  std::string csv = "# delay=" + fmt(delay) + "\n# gain=" + fmt(gain) + "\n";
  if (predicted) csv += "# predicted_delay=" + fmt(*predicted) + "\n";
  csv += "t_over_invgamma,re_in,im_in,re_out,im_out,re_vacuum,im_vacuum\n";
  for (Eigen::Index i = 0; i < input.size(); ++i) {
    const auto a = input.amplitude(i), b = output.amplitude(i), v = vacuum.amplitude(i);
    csv += csv_row({fmt(input.time(i)), fmt(a.real()), fmt(a.imag()), fmt(b.real()),
                    fmt(b.imag()), fmt(v.real()), fmt(v.imag())});
  }
  return {std::move(csv), std::move(summary)};
}

OracleCheckOutput oracle_check_run(const OracleSweepSpec& spec, double tolerance,
                                   double ode_tolerance) {
  const auto sweep = run_oracle_sweep(spec);
  OracleCheckOutput out;
  out.converged = sweep.all_converged;
  out.passed = sweep.max_closed_vs_linear < tolerance && sweep.max_chi_residual < tolerance &&
               sweep.max_linear_vs_ode < ode_tolerance && sweep.all_converged;

  std::string body =
      "sample,theta_rad,omega_c,delta1_over_gamma,closed_vs_linear,linear_vs_ode,chi_residual,converged\n";
  for (std::size_t i = 0; i < sweep.samples.size(); ++i) {
    const auto& s = sweep.samples[i];
    body += csv_row({std::to_string(i), fmt(s.theta), fmt(s.control_rabi), fmt(s.delta1),
                     fmt(s.closed_vs_linear), fmt(s.linear_vs_ode), fmt(s.chi_residual),
                     s.converged ? "1" : "0"});
  }
  std::string head = "# seed=" + std::to_string(spec.seed) + " samples=" +
                     std::to_string(spec.samples) + "\n";
  head += "# max_closed_vs_linear=" + fmt(sweep.max_closed_vs_linear) + "\n";
  head += "# max_linear_vs_ode=" + fmt(sweep.max_linear_vs_ode) + "\n";
  head += "# max_chi_residual=" + fmt(sweep.max_chi_residual) + "\n";
  head += std::string("# result=") + (out.passed ? "PASS" : "FAIL") + "\n";
  out.csv = head + body;
  out.summary = {{"seed", spec.seed},
                 {"samples", spec.samples},
                 {"max_closed_vs_linear", sweep.max_closed_vs_linear},
                 {"max_linear_vs_ode", sweep.max_linear_vs_ode},
                 {"max_chi_residual", sweep.max_chi_residual},
                 {"all_converged", sweep.all_converged},
                 {"tolerance", tolerance},
                 {"ode_tolerance", ode_tolerance},
                 {"k_scale", spec.k_scale},
                 {"passed", out.passed}};
  return out;
}

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out;
  std::string grid;
  std::string theta;
  std::string tan2phi;
  bool local_field = false;
};

void add_common(CLI::App* sub, CommonOptions& o, bool grid, bool theta, bool tan2phi,
                bool local_field) {
  sub->add_option("--config", o.config_path, "System configuration file (key = value)");
  sub->add_option("--out", o.out, "Output CSV path")->required();
  if (grid) sub->add_option("--grid", o.grid, "Grid lo:hi:n (pi multiples allowed)");
  if (theta) sub->add_option("--theta", o.theta, "Mixing angle(s), comma separated, e.g. 3pi/8");
  if (tan2phi) sub->add_option("--tan2phi", o.tan2phi, "Comma separated tan^2(phi) values");
  if (local_field) sub->add_flag("--local-field", o.local_field, "Apply the Lorentz-Lorenz correction");
}

SystemConfig resolve_config(const CommonOptions& o) {
  return o.config_path.empty() ? SystemConfig{} : load_config(o.config_path);
}

GridSpec resolve_grid(const CommonOptions& o, const std::string& fallback) {
  return parse_grid(o.grid.empty() ? fallback : o.grid);
}

std::filesystem::path sibling(const std::string& out, const std::string& suffix) {
  return std::filesystem::path(out + suffix);
}

} // namespace

int run(int argc, char** argv) {
  CLI::App app{"Dark-state tripod medium: susceptibility, group velocity, pulse propagation"};
  app.set_version_flag("--version", DARKTRIPOD_VERSION);
  app.require_subcommand(1);

  CommonOptions o;
  auto* fig2 = app.add_subcommand("fig2", "Channel weights f(theta), g(theta)");
  add_common(fig2, o, true, false, false, false);
  auto* fig3 = app.add_subcommand("fig3", "Re/Im chi versus probe detuning for several theta");
  add_common(fig3, o, true, true, false, false);
  auto* fig4 = app.add_subcommand("fig4", "Group velocity versus theta for several tan^2(phi)");
  add_common(fig4, o, true, false, true, false);
  auto* fig5 = app.add_subcommand("fig5", "Local-field corrected susceptibility");
  add_common(fig5, o, true, true, false, false);
  double fig5_k = 10;
  fig5->add_option("--coupling", fig5_k, "K in units of gamma (default 10)");
  auto* scan = app.add_subcommand("scan", "Susceptibility scan at one theta");
  add_common(scan, o, true, true, false, true);

  auto* prop = app.add_subcommand("propagate", "Gaussian probe pulse through a slab");
  add_common(prop, o, false, true, false, true);
  PulseSpec pulse;
  double length = 1;
  bool full_response = false;
  std::string summary_path;
  prop->add_option("--sigma-t", pulse.sigma_t, "Pulse rms width, 1/gamma");
  prop->add_option("--points", pulse.points, "Time samples");
  prop->add_option("--span-sigmas", pulse.span_sigmas, "Half window in units of sigma-t");
  prop->add_option("--carrier-delta1", pulse.carrier_delta1, "Carrier detuning, gamma");
  prop->add_option("--length", length, "Slab length, c/gamma");
  prop->add_flag("--full-response", full_response, "Keep the rho42 contribution");
  prop->add_option("--summary", summary_path, "Summary JSON path (default <out>.summary.json)");

  auto* oracle = app.add_subcommand("oracle-check", "Closed form vs linear solve vs time integration");
  add_common(oracle, o, false, true, false, false);
  OracleSweepSpec sweep;
  double tolerance = 1e-8;
  oracle->add_option("--samples", sweep.samples, "Randomised parameter points");
  oracle->add_option("--seed", sweep.seed, "Sweep seed");
  oracle->add_option("--tolerance", tolerance, "Closed-form residual tolerance");
  oracle->add_option("--k-scale", sweep.k_scale, "Mutation: scale K on the closed-form side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArguments;
  }

  const auto started = std::chrono::steady_clock::now();
  json manifest;
  manifest["tool_version"] = DARKTRIPOD_VERSION;
  manifest["outputs"] = json::array({o.out});

  try {
    SystemConfig cfg = resolve_config(o);
    const std::string delta_default = "-5:10:1501";
    const std::string theta_default = "0:pi/2:257";
    std::string csv;
    CLI::App* used = nullptr;
    int code = kOk;

    if (*fig2) {
      used = fig2;
      const auto grid = resolve_grid(o, theta_default);
      manifest["grid"] = o.grid.empty() ? theta_default : o.grid;
      csv = fig2_csv(grid.points());
    } else if (*fig3) {
      used = fig3;
      const auto grid = resolve_grid(o, delta_default);
      const auto thetas = parse_angle_list(o.theta.empty() ? "0,pi/8,pi/4,3pi/8,pi/2" : o.theta);
      manifest["grid"] = o.grid.empty() ? delta_default : o.grid;
      manifest["thetas"] = thetas;
      csv = fig3_csv(cfg, grid.points(), thetas);
    } else if (*fig4) {
      used = fig4;
      const auto grid = resolve_grid(o, theta_default);
      const auto t2 = parse_number_list(o.tan2phi.empty() ? "1,4.83,10,50" : o.tan2phi);
      manifest["grid"] = o.grid.empty() ? theta_default : o.grid;
      manifest["tan2phi"] = t2;
      csv = fig4_csv(grid.points(), t2);
    } else if (*fig5) {
      used = fig5;
      cfg.density_coupling = fig5_k;
      cfg.validate();
      const auto grid = resolve_grid(o, delta_default);
      const auto thetas = parse_angle_list(o.theta.empty() ? "pi/8,3pi/8" : o.theta);
      manifest["grid"] = o.grid.empty() ? delta_default : o.grid;
      manifest["thetas"] = thetas;
      csv = fig5_csv(cfg, grid.points(), thetas);
    } else if (*scan) {
      used = scan;
      if (!o.theta.empty()) cfg.mixing_angle = parse_angle(o.theta);
      cfg.validate();
      const auto grid = resolve_grid(o, delta_default);
      manifest["grid"] = o.grid.empty() ? delta_default : o.grid;
      manifest["local_field"] = o.local_field;
      csv = scan_csv(cfg, grid.points(), o.local_field);
    } else if (*prop) {
      used = prop;
      if (!o.theta.empty()) cfg.mixing_angle = parse_angle(o.theta);
      cfg.validate();
      MediumSlab slab{length, cfg, o.local_field,
                      full_response ? ProbeResponse::full : ProbeResponse::channel1_only};
      auto result = propagate_run(pulse, slab);
      csv = std::move(result.csv);
      const auto summary_file = summary_path.empty() ? sibling(o.out, ".summary.json")
                                                     : std::filesystem::path(summary_path);
      write_file_atomic(summary_file, result.summary.dump(2) + "\n");
      manifest["outputs"].push_back(summary_file.string());
      manifest["pulse"] = {{"sigma_t", pulse.sigma_t},
                           {"points", pulse.points},
                           {"span_sigmas", pulse.span_sigmas},
                           {"carrier_delta1", pulse.carrier_delta1}};
      manifest["slab"] = {{"length", length},
                          {"local_field", o.local_field},
                          {"full_response", full_response}};
    } else if (*oracle) {
      used = oracle;
      sweep.base = cfg;
      if (!o.theta.empty()) sweep.fixed_theta = parse_angle(o.theta);
      auto result = oracle_check_run(sweep, tolerance);
      csv = std::move(result.csv);
      manifest["seed"] = sweep.seed;
      manifest["samples"] = sweep.samples;
      manifest["summary"] = result.summary;
      if (!result.converged) code = kNotConverged;
      else if (!result.passed) code = kCheckFailed;
      if (code != kOk) std::cerr << "oracle-check failed: see " << o.out << "\n";
    }

    manifest["subcommand"] = used->get_name();
    manifest["config"] = config_json(cfg);
    write_file_atomic(o.out, csv);
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - started;
    manifest["duration_seconds"] = took.count();
    write_file_atomic(sibling(o.out, ".manifest.json"), manifest.dump(2) + "\n");
    return code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const ConvergenceError& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return kNotConverged;
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << "\n";
    return kNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
}

} // namespace darktripod::cli
