#include "plastic/report.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

namespace plastic {

std::string format_real(double x)
{
  if (x == 0.0) {
    return "0"; // no "-0"
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json real_json(double x)
{
  if (!std::isfinite(x)) {
    return nullptr;
  }
  return std::strtod(format_real(x).c_str(), nullptr);
}

Json real_json(const Eigen::VectorXd &v)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(real_json(v(i)));
  }
  return out;
}

std::string digest(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json envelope(const std::string &command, const std::string &input_digest, Json parameters,
              Json result)
{
  Json out;
  out["tool"] = "plastic";
  out["version"] = tool_version;
  out["command"] = command;
  out["input_digest"] = input_digest;
  out["parameters"] = std::move(parameters);
  out["result"] = std::move(result);
  return out;
}

std::string csv_row(const std::vector<std::string> &fields)
{
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    auto const &f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') {
        out += '"';
      }
      out += c;
    }
    out += '"';
  }
  out += '\n';
  return out;
}

} // namespace plastic
