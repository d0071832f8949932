#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vacred_cli {

// Doubles cross into output files as round-trip-exact scientific notation
// (17 significant digits), identical in CSV and JSON.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

inline std::string fmt_long(long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld", v);
  return buf;
}

inline std::string fmt_u64(unsigned long long v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu", v);
  return buf;
}

// One run's output: an ordered metadata block followed by a payload table.
// Empty cells (std::nullopt) serialize as empty CSV fields / JSON nulls.
struct OutputRecord {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void meta(std::string key, double value) { meta(std::move(key), fmt_double(value)); }
};

inline std::string to_csv(const OutputRecord& rec) {
  std::string out;
  for (const auto& [key, value] : rec.metadata) {
    out += "# " + key + " = " + value + "\n";
  }
  for (std::size_t c = 0; c < rec.columns.size(); ++c) {
    if (c > 0) {
      out += ',';
    }
    out += rec.columns[c];
  }
  out += '\n';
  for (const auto& row : rec.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) {
        out += ',';
      }
      if (row[c].has_value()) {
        out += fmt_double(*row[c]);
      }
    }
    out += '\n';
  }
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

inline std::string to_json(const OutputRecord& rec) {
  std::string out = "{\n  \"metadata\": {\n";
  for (std::size_t i = 0; i < rec.metadata.size(); ++i) {
    out += "    \"" + json_escape(rec.metadata[i].first) + "\": \"" +
           json_escape(rec.metadata[i].second) + "\"";
    out += (i + 1 < rec.metadata.size()) ? ",\n" : "\n";
  }
  out += "  },\n  \"columns\": [";
  for (std::size_t c = 0; c < rec.columns.size(); ++c) {
    if (c > 0) {
      out += ", ";
    }
    out += "\"" + json_escape(rec.columns[c]) + "\"";
  }
  out += "],\n  \"rows\": [\n";
  for (std::size_t r = 0; r < rec.rows.size(); ++r) {
    out += "    [";
    for (std::size_t c = 0; c < rec.rows[r].size(); ++c) {
      if (c > 0) {
        out += ", ";
      }
      out += rec.rows[r][c].has_value() ? fmt_double(*rec.rows[r][c]) : "null";
    }
    out += (r + 1 < rec.rows.size()) ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace vacred_cli
