#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "darktripod/model.hpp"

namespace darktripod {

/// Parses `key = value` lines; `#` starts a comment. Recognised keys are
/// gamma, gamma41, gamma42, K, omega21, Omega_C, Delta_C, theta, omega41.
/// Keys left out keep their defaults. Unknown or repeated keys, and values
/// that are not numbers, throw std::invalid_argument.
SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

/// All nine keys in a fixed order with round-trip precision.
std::string format_config(const SystemConfig& cfg);

/// A real number, optionally written as a multiple of pi: "0.3", "pi",
/// "pi/8", "3pi/8", "3*pi/8", "-pi/4".
double parse_angle(std::string_view text);

/// Plain floating-point parse of the whole token.
double parse_number(std::string_view text);

} // namespace darktripod
