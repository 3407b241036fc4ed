#include "darktripod/config_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "darktripod/csv.hpp"

namespace darktripod {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double* field(SystemConfig& cfg, std::string_view key) {
  if (key == "gamma") return &cfg.decay;
  if (key == "gamma41") return &cfg.decay41;
  if (key == "gamma42") return &cfg.decay42;
  if (key == "K") return &cfg.density_coupling;
  if (key == "omega21") return &cfg.ground_splitting;
  if (key == "Omega_C") return &cfg.control_rabi;
  if (key == "Delta_C") return &cfg.control_detuning;
  if (key == "theta") return &cfg.mixing_angle;
  if (key == "omega41") return &cfg.probe_transition;
  return nullptr;
}

} // namespace

double parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size())
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  return value;
}

double parse_angle(std::string_view text) {
  text = trim(text);
  const auto pi_at = text.find("pi");
  if (pi_at == std::string_view::npos) return parse_number(text);

  std::string_view coeff = trim(text.substr(0, pi_at));
  if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
  double scale = 1;
  if (coeff == "-") scale = -1;
  else if (!coeff.empty() && coeff != "+") scale = parse_number(coeff);

  std::string_view rest = trim(text.substr(pi_at + 2));
  double divisor = 1;
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("bad angle: '" + std::string(text) + "'");
    divisor = parse_number(rest.substr(1));
    if (divisor == 0) throw std::invalid_argument("bad angle: division by zero");
  }
  return scale * std::numbers::pi / divisor;
}

SystemConfig parse_config(std::string_view text) {
  SystemConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw std::invalid_argument(where + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    double* slot = field(cfg, key);
    if (!slot) throw std::invalid_argument(where + ": unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second)
      throw std::invalid_argument(where + ": duplicate key '" + std::string(key) + "'");
    *slot = key == "theta" ? parse_angle(value) : parse_number(value);
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string format_config(const SystemConfig& cfg) {
  std::ostringstream out;
  out << "gamma = " << format_number(cfg.decay) << '\n'
      << "gamma41 = " << format_number(cfg.decay41) << '\n'
      << "gamma42 = " << format_number(cfg.decay42) << '\n'
      << "K = " << format_number(cfg.density_coupling) << '\n'
      << "omega21 = " << format_number(cfg.ground_splitting) << '\n'
      << "Omega_C = " << format_number(cfg.control_rabi) << '\n'
      << "Delta_C = " << format_number(cfg.control_detuning) << '\n'
      << "theta = " << format_number(cfg.mixing_angle) << '\n'
      << "omega41 = " << format_number(cfg.probe_transition) << '\n';
  return out.str();
}

} // namespace darktripod
