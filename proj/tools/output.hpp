#pragma once

// Result tables. CSV: '.' decimals, 17 significant digits, '#' header lines
// with tool version, config hash and seed. JSON: the same content as one object.

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "hyperfinite/errors.hpp"

namespace hfcli {

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct RunMeta {
  std::string version;
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
};

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_real(*d);
  return csv_escape(std::get<std::string>(c));
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw hyperfinite::ConfigError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw hyperfinite::ConfigError("write failed for '" + path.string() + "'");
}

inline std::filesystem::path write_table(const std::filesystem::path& dir, const Table& t, const RunMeta& meta,
                                         const std::string& format) {
  if (format == "csv") {
    std::string s;
    s += "# tool: hyperfinite " + meta.version + "\n";
    s += "# command: " + meta.command + "\n";
    s += "# config_hash: " + meta.config_hash + "\n";
    s += "# seed: " + std::to_string(meta.seed) + "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
    s += "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + format_cell(row[i]);
      s += "\n";
    }
    const auto path = dir / (t.name + ".csv");
    write_file(path, s);
    return path;
  }
  nlohmann::ordered_json j;
  j["tool"] = "hyperfinite " + meta.version;
  j["command"] = meta.command;
  j["config_hash"] = meta.config_hash;
  j["seed"] = meta.seed;
  j["columns"] = t.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* i = std::get_if<long long>(&c))
        r.push_back(*i);
      else if (const auto* d = std::get_if<double>(&c))
        std::isfinite(*d) ? r.push_back(*d) : r.push_back(format_real(*d));
      else
        r.push_back(std::get<std::string>(c));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  const auto path = dir / (t.name + ".json");
  write_file(path, j.dump(2) + "\n");
  return path;
}

}  // namespace hfcli
