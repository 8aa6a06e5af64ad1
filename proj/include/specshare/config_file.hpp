#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "specshare/errors.hpp"
#include "specshare/market.hpp"

namespace specshare {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline double parse_number(const std::string& s, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + field + "': cannot parse number '" + s + "'");
  }
}

}  // namespace detail

/// Key/value lines grouped into sections: the global section holds market
/// parameters, each [sp.K] section one endowment. '#' starts a comment.
struct ParsedSections {
  std::map<std::string, std::map<std::string, std::string>> sections;
};

inline ParsedSections parse_sections(const std::string& text) {
  ParsedSections out;
  std::string section;  // "" = global
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    out.sections[section][key] = value;
  }
  return out;
}

inline MarketConfig parse_market_config(const std::string& text) {
  const ParsedSections ps = parse_sections(text);
  MarketConfig c;
  auto global = ps.sections.find("");
  if (global == ps.sections.end())
    throw ConfigError("config has no global parameters");
  const auto& g = global->second;

  auto get = [&](const char* key) -> const std::string* {
    auto it = g.find(key);
    return it == g.end() ? nullptr : &it->second;
  };
  const std::string* n = get("n_sps");
  if (!n) throw ConfigError("field 'n_sps' is required");
  const double n_val = detail::parse_number(*n, "n_sps");
  if (n_val < 1 || n_val != static_cast<double>(static_cast<long>(n_val)))
    throw ConfigError("field 'n_sps': must be a positive integer");
  c.n_sps = static_cast<std::size_t>(n_val);

  if (const auto* v = get("availability"))
    c.availability = detail::parse_number(*v, "availability");
  if (const auto* v = get("degradation"))
    c.degradation = detail::parse_number(*v, "degradation");
  if (const auto* v = get("demand_intercept"))
    c.demand_intercept = detail::parse_number(*v, "demand_intercept");
  if (const auto* v = get("demand_slope"))
    c.demand_slope = detail::parse_number(*v, "demand_slope");
  if (const auto* v = get("open_access_bw"))
    c.open_access_bw = detail::parse_number(*v, "open_access_bw");
  if (const auto* v = get("shared_total_bw"))
    c.declared_shared_bw = detail::parse_number(*v, "shared_total_bw");
  for (const auto& [key, value] : g) {
    (void)value;
    if (key != "n_sps" && key != "availability" && key != "degradation" &&
        key != "demand_intercept" && key != "demand_slope" &&
        key != "open_access_bw" && key != "shared_total_bw")
      throw ConfigError("unknown field '" + key + "'");
  }

  c.endowments.resize(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const std::string name = "sp." + std::to_string(i + 1);
    auto sec = ps.sections.find(name);
    if (sec == ps.sections.end())
      throw ConfigError("missing section [" + name + "]");
    for (const auto& [key, value] : sec->second) {
      if (key == "proprietary_bw") {
        c.endowments[i].proprietary_bw =
            detail::parse_number(value, name + ".proprietary_bw");
      } else if (key == "licensed_shared_bws") {
        c.endowments[i].licensed_shared_bws.clear();
        if (!value.empty())
          for (const auto& tok : detail::split(value, ','))
            c.endowments[i].licensed_shared_bws.push_back(
                detail::parse_number(tok, name + ".licensed_shared_bws"));
      } else {
        throw ConfigError("unknown field '" + name + "." + key + "'");
      }
    }
  }
  for (const auto& [name, _] : ps.sections) {
    (void)_;
    if (name.empty()) continue;
    if (name.rfind("sp.", 0) != 0)
      continue;  // other sections (e.g. [sweep]) belong to other parsers
    const std::string idx = name.substr(3);
    const double v = detail::parse_number(idx, name);
    if (v < 1 || v > static_cast<double>(c.n_sps))
      throw ConfigError("section [" + name + "] out of range for n_sps");
  }
  c.validate();
  return c;
}

/// Canonical dump: fixed field order, full-precision numbers. Parsing the
/// output reproduces the config exactly; the digest hashes this text.
inline std::string canonical_config(const MarketConfig& c) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string out;
  out += "n_sps = " + std::to_string(c.n_sps) + "\n";
  out += "availability = " + num(c.availability) + "\n";
  out += "degradation = " + num(c.degradation) + "\n";
  out += "demand_intercept = " + num(c.demand_intercept) + "\n";
  out += "demand_slope = " + num(c.demand_slope) + "\n";
  out += "open_access_bw = " + num(c.open_access_bw) + "\n";
  if (c.declared_shared_bw)
    out += "shared_total_bw = " + num(*c.declared_shared_bw) + "\n";
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    out += "[sp." + std::to_string(i + 1) + "]\n";
    out += "proprietary_bw = " + num(c.endowments[i].proprietary_bw) + "\n";
    const auto& ws = c.endowments[i].licensed_shared_bws;
    if (!ws.empty()) {
      out += "licensed_shared_bws = ";
      for (std::size_t k = 0; k < ws.size(); ++k) {
        if (k) out += ", ";
        out += num(ws[k]);
      }
      out += "\n";
    }
  }
  return out;
}

/// FNV-1a 64-bit over the canonical text, as 16 hex digits.
inline std::string config_digest(const MarketConfig& c) {
  const std::string text = canonical_config(c);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace specshare
