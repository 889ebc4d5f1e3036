#pragma once

// Text conventions shared by every output: complex-number entry, number
// rendering, and CSV / JSON tables built from the same rendered strings.

#include <cstdio>
#include <optional>
#include <ostream>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace chirp::io {

/// Parses "a", "bi", "a+bi" or "a-bi" with explicit decimal coefficients
/// ("5i", "0+5i", "-1.5i", "2", "1e-3-2.5e1i"). A bare "i", a missing
/// coefficient ("1+i") or more than two parts is rejected.
inline complex parse_complex(std::string_view text) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?:([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i|(i))?\s*$)");
  std::cmatch m;
  const std::string s(text);
  if (!std::regex_match(s.c_str(), m, re))
    throw config_error("cannot parse complex number '" + s +
                       "' (expected a, bi or a+bi with explicit coefficients)");
  auto num = [&](const std::string& part) {
    try {
      return std::stod(part);
    } catch (const std::out_of_range&) {
      throw config_error("complex number '" + s + "' is out of range");
    }
  };
  const double first = num(m[1].str());
  complex z;
  if (m[3].matched)
    z = {0.0, first};
  else if (m[2].matched)
    z = {first, num(m[2].str())};
  else
    z = {first, 0.0};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw config_error("complex number '" + s + "' is not finite");
  return z;
}

/// Parses "lo,hi" into two finite reals.
inline std::pair<double, double> parse_window(std::string_view text) {
  const std::string s(text);
  const auto comma = s.find(',');
  if (comma == std::string::npos || s.find(',', comma + 1) != std::string::npos)
    throw config_error("window must be 'lo,hi', got '" + s + "'");
  auto num = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw config_error("window bound '" + part + "' is not a number");
    }
    if (used != part.size() || !std::isfinite(v))
      throw config_error("window bound '" + part + "' is not a finite number");
    return v;
  };
  const double lo = num(s.substr(0, comma));
  const double hi = num(s.substr(comma + 1));
  if (!(lo < hi)) throw config_error("window needs lo < hi");
  return {lo, hi};
}

/// 17 significant digits in scientific notation; round-trips every double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

/// Compact rendering for one-line summaries: up to 15 significant digits,
/// complex values as a+bi.
inline std::string format_compact(complex z) {
  char buf[80];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.15g", z.real());
  } else {
    std::snprintf(buf, sizeof buf, "%.15g%+.15gi", z.real(), z.imag());
  }
  return buf;
}

/// Rows of already-rendered cells under a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::size_t dropped = 0;  // rows removed for non-finite values
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
    os << "\n";
  }
  if (t.dropped > 0) os << "# dropped " << t.dropped << " rows\n";
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

/// JSON output is an array of row objects. `numeric` marks the columns
/// written bare (numbers, the exact strings of the CSV rendering; an empty
/// cell becomes null) rather than quoted.
inline void write_json(std::ostream& os, const Table& t, const std::vector<bool>& numeric) {
  os << "[";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << (r ? ",\n " : "\n ") << "{";
    const auto& row = t.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? ", " : "") << json_string(t.columns[i]) << ": ";
      const bool num = i < numeric.size() ? numeric[i] : true;
      if (num)
        os << (row[i].empty() ? "null" : row[i]);
      else
        os << json_string(row[i]);
    }
    os << "}";
  }
  os << (t.rows.empty() ? "]\n" : "\n]\n");
}

inline void write_json(std::ostream& os, const Table& t) {
  write_json(os, t, std::vector<bool>(t.columns.size(), true));
}

}  // namespace chirp::io
