#pragma once

// RunConfig: one JSON document. Per-command defaults, then the --config file
// (merge-patch), then command-line flags. Accessors name the offending field.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hyperfinite/hyperfinite.hpp"

namespace hfcli {

using json = nlohmann::json;
using hyperfinite::ConfigError;

inline json default_config(const std::string& command) {
  json c = {
      {"family", "hermite"},
      {"dim", 64},
      {"dims", {16, 32, 64, 128}},
      {"scale", 1.0},
      {"extent", 20.0},
      {"constants", {{"hbar", 1.0}, {"mass", 1.0}, {"kinetic", "standard"}}},
      {"preset", {{"kind", "ho-ground"}, {"n", 0}, {"index", 0}, {"z", {1.0, 0.0}}, {"center", 0.0}, {"width", 1.0},
                  {"coefficients", json::array()}, {"alpha", {0.6, 0.0}}, {"beta", {0.8, 0.0}}, {"period", 8}}},
      {"observable", {{"kind", "X"}, {"potential", json::array()}}},
      {"times", {{"start", 0.0}, {"step", 0.5}, {"stop", 10.0}}},
      {"intervals", "standard"},
      {"delta", 0.0},
      {"window", {-10.0, 10.0}},
      {"K", 10000},
      {"p", 0.36},
      {"eps", 0.02},
      {"brute_force", false},
      {"samples", 20},
      {"length", 10000},
      {"significance", 0.01},
      {"seed", 1},
      {"threads", 1},
      {"nsa_depth", 16},
      {"format", "csv"},
  };
  if (command == "spectrum") c["preset"]["kind"] = "ho";
  if (command == "evolve") {
    c["preset"]["kind"] = "coherent";
    c["observable"]["kind"] = "H";
  }
  if (command == "faithfulness") c["preset"]["kind"] = "coherent";
  if (command == "randomness") {
    c["preset"]["kind"] = "bernoulli";
    c["p"] = 0.5;
    c["samples"] = 1;
  }
  if (command == "continuous-law") {
    c["dim"] = 256;
    c["K"] = 100000;
  }
  return c;
}

inline json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config file '" + path + "' must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

/// "a.b" -> pointer into the document
inline json::json_pointer pointer(const std::string& path) {
  std::string p = "/";
  for (char ch : path) p += ch == '.' ? '/' : ch;
  return json::json_pointer(p);
}

class RunConfig {
 public:
  RunConfig(std::string command, json doc) : command_(std::move(command)), doc_(std::move(doc)) {}

  const std::string& command() const { return command_; }
  const json& doc() const { return doc_; }

  const json& at(const std::string& path) const {
    const auto ptr = pointer(path);
    if (!doc_.contains(ptr)) throw ConfigError("missing config field '" + path + "'");
    return doc_.at(ptr);
  }
  bool has(const std::string& path) const { return doc_.contains(pointer(path)); }

  long long integer(const std::string& path) const {
    const json& v = at(path);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
    }
    throw ConfigError("config field '" + path + "' must be an integer");
  }
  std::uint64_t unsigned_integer(const std::string& path) const {
    const json& v = at(path);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const long long i = integer(path);
    if (i < 0) throw ConfigError("config field '" + path + "' must be nonnegative");
    return static_cast<std::uint64_t>(i);
  }
  double real(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_number()) throw ConfigError("config field '" + path + "' must be a number");
    return v.get<double>();
  }
  std::string string(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_string()) throw ConfigError("config field '" + path + "' must be a string");
    return v.get<std::string>();
  }
  bool boolean(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_boolean()) throw ConfigError("config field '" + path + "' must be true or false");
    return v.get<bool>();
  }
  hyperfinite::Complex complex(const std::string& path) const { return to_complex(at(path), path); }

  std::vector<double> reals(const std::string& path) const {
    const json& v = at(path);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) throw ConfigError("config field '" + path + "' must be a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("config field '" + path + "' must be a list of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<long long> integers(const std::string& path) const {
    const json& v = at(path);
    std::vector<long long> out;
    auto one = [&](const json& e) {
      if (e.is_number_integer()) return e.get<long long>();
      if (e.is_number_float() && std::floor(e.get<double>()) == e.get<double>()) return static_cast<long long>(e.get<double>());
      throw ConfigError("config field '" + path + "' must hold integers");
    };
    if (v.is_array()) {
      for (const auto& e : v) out.push_back(one(e));
    } else {
      out.push_back(one(v));
    }
    if (out.empty()) throw ConfigError("config field '" + path + "' is empty");
    return out;
  }
  std::vector<hyperfinite::Complex> complexes(const std::string& path) const {
    const json& v = at(path);
    if (!v.is_array()) throw ConfigError("config field '" + path + "' must be a list");
    std::vector<hyperfinite::Complex> out;
    for (const auto& e : v) out.push_back(to_complex(e, path));
    return out;
  }

  std::vector<double> times() const {
    const json& v = at("times");
    if (v.is_object()) {
      RunConfig sub(command_, json{{"start", v.value("start", 0.0)}, {"step", v.value("step", 0.5)}, {"stop", v.value("stop", 10.0)}});
      const double start = sub.real("start"), step = sub.real("step"), stop = sub.real("stop");
      if (!(step > 0.0)) throw ConfigError("config field 'times.step' must be positive");
      if (stop < start) throw ConfigError("config field 'times.stop' is before 'times.start'");
      std::vector<double> t;
      const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
      if (count > 10000000) throw ConfigError("config field 'times' describes more than 10^7 points");
      for (long long k = 0; k <= count; ++k) t.push_back(start + static_cast<double>(k) * step);
      return t;
    }
    return reals("times");
  }

  std::vector<hyperfinite::Interval> intervals() const {
    const json& v = at("intervals");
    if (v.is_string()) {
      if (v.get<std::string>() == "standard") return hyperfinite::standard_interval_family();
      throw ConfigError("config field 'intervals': unknown family '" + v.get<std::string>() + "'");
    }
    if (!v.is_array() || v.empty()) throw ConfigError("config field 'intervals' must be \"standard\" or a list of [lo, hi]");
    std::vector<hyperfinite::Interval> out;
    for (const auto& e : v) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("config field 'intervals' must hold [lo, hi] pairs");
      const double lo = e[0].get<double>(), hi = e[1].get<double>();
      if (!(lo <= hi)) throw ConfigError("config field 'intervals': lo > hi in [" + e[0].dump() + ", " + e[1].dump() + "]");
      out.push_back({lo, hi});
    }
    return out;
  }

 private:
  static hyperfinite::Complex to_complex(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError("config field '" + path + "' must be a number or a [re, im] pair");
  }

  std::string command_;
  json doc_;
};

/// Kinds of command-line values, converted to JSON before they override the document.
enum class FlagKind { integer, real, text, reals, integers, complex, times, intervals, boolean };

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_real(const std::string& flag, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--" + flag + ": expected a number, got '" + s + "'");
}

inline long long parse_integer(const std::string& flag, const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("--" + flag + ": expected an integer, got '" + s + "'");
}

inline json parse_flag(const std::string& flag, FlagKind kind, const std::string& s) {
  switch (kind) {
    case FlagKind::integer: return parse_integer(flag, s);
    case FlagKind::real: return parse_real(flag, s);
    case FlagKind::text: return s;
    case FlagKind::boolean: return s == "true" || s == "1" || s == "yes";
    case FlagKind::reals: {
      json a = json::array();
      if (s.empty()) return a;
      for (const auto& part : split(s, ',')) a.push_back(parse_real(flag, part));
      return a;
    }
    case FlagKind::integers: {
      json a = json::array();
      for (const auto& part : split(s, ',')) a.push_back(parse_integer(flag, part));
      return a.size() == 1 ? a[0] : a;
    }
    case FlagKind::complex: {
      const auto parts = split(s, ',');
      if (parts.size() == 1) return json::array({parse_real(flag, parts[0]), 0.0});
      if (parts.size() == 2) return json::array({parse_real(flag, parts[0]), parse_real(flag, parts[1])});
      throw ConfigError("--" + flag + ": expected 're' or 're,im', got '" + s + "'");
    }
    case FlagKind::times: {
      const auto parts = split(s, ':');
      if (parts.size() == 3)
        return json{{"start", parse_real(flag, parts[0])}, {"step", parse_real(flag, parts[1])}, {"stop", parse_real(flag, parts[2])}};
      return parse_flag(flag, FlagKind::reals, s);
    }
    case FlagKind::intervals: {
      if (s == "standard") return s;
      json a = json::array();
      for (const auto& part : split(s, ',')) {
        const auto ends = split(part, ':');
        if (ends.size() != 2) throw ConfigError("--" + flag + ": expected 'lo:hi,lo:hi,...' or 'standard', got '" + s + "'");
        a.push_back(json::array({parse_real(flag, ends[0]), parse_real(flag, ends[1])}));
      }
      return a;
    }
  }
  throw ConfigError("--" + flag + ": unsupported value");
}

/// 64-bit FNV-1a of a string.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace hfcli
