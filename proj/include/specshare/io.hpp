#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace specshare {

/// 12-significant-digit decimal rendering used by every emitted CSV cell.
inline std::string format_sig(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

/// RFC-4180 quoting: only fields containing separators, quotes or newlines
/// get wrapped.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

/// One rectangular output table: a header row plus all-numeric rows, with an
/// optional trailing status column for rows whose evaluation failed.
struct NamedTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> status;  // empty, or one entry per row

  void write_csv(std::ostream& os) const {
    const bool with_status = !status.empty();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) os << ',';
      os << csv_escape(columns[c]);
    }
    if (with_status) os << ",status";
    os << "\r\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        if (c) os << ',';
        os << format_sig(rows[r][c]);
      }
      if (with_status) os << ',' << csv_escape(status[r]);
      os << "\r\n";
    }
  }

  std::string to_csv() const {
    std::ostringstream ss;
    write_csv(ss);
    return ss.str();
  }
};

}  // namespace specshare
