#pragma once

// Deterministic report helpers shared by the CLI subcommands.

#include "plastic/spectral.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace plastic {

using Json = nlohmann::ordered_json;

inline constexpr const char *tool_version = "0.1.0";

/// 12 significant digits, "%.12g".
std::string format_real(double x);

/// x rounded to 12 significant digits, so JSON output never carries more.
Json real_json(double x);
Json real_json(const Eigen::VectorXd &v);

/// "fnv1a64:" followed by 16 hex digits.
std::string digest(std::string_view bytes);

/// {tool, version, command, input_digest, parameters, result}
Json envelope(const std::string &command, const std::string &input_digest, Json parameters,
              Json result);

/// One CSV row; fields containing a comma or quote are quoted.
std::string csv_row(const std::vector<std::string> &fields);

} // namespace plastic
