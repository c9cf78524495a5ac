#pragma once

#include <duet/types.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace duet {

inline constexpr const char* tool_version = "0.1.0";

// Shortest representation that round-trips a double exactly.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Rectangular numeric table with two comment tiers: "# key = value" echoes
// the resolved configuration (machine-reparseable), "## key = value" carries
// informational extras that are not configuration keys.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> config_echo;
  std::vector<std::pair<std::string, std::string>> info;
};

inline std::string render_csv(const ResultTable& t) {
  if (t.columns.empty())
    throw std::invalid_argument("render_csv: table has no columns");
  std::string out;
  for (const auto& [k, v] : t.config_echo)
    out += "# " + k + " = " + v + "\n";
  for (const auto& [k, v] : t.info) out += "## " + k + " = " + v + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size())
      throw std::invalid_argument("render_csv: table is not rectangular");
    for (std::size_t c = 0; c < row.size(); ++c)
      out += (c ? "," : "") + format_real(row[c]);
    out += "\n";
  }
  return out;
}

inline void write_csv(const ResultTable& t, const std::string& path) {
  std::string body = render_csv(t);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << body;
  f.flush();
  if (!f) throw std::runtime_error("short write to '" + path + "'");
}

}  // namespace duet
