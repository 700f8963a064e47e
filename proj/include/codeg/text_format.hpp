#pragma once
// Line-oriented "key = value" data files. '#' starts a comment line; keys may
// repeat and may contain spaces (e.g. "cod_set validated").

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "codeg/error.hpp"

namespace codeg {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Data, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct KeyValues {
  std::string origin;
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::size_t> lines;

  std::optional<std::string> optional(std::string_view key) const {
    std::optional<std::string> r;
    for (const auto& [k, v] : entries) {
      if (k != key) continue;
      if (r) fail(ErrorKind::Data, origin + ": duplicate key '" + std::string(key) + "'");
      r = v;
    }
    return r;
  }
  std::string required(std::string_view key) const {
    auto v = optional(key);
    if (!v) fail(ErrorKind::Data, origin + ": missing key '" + std::string(key) + "'");
    return *v;
  }
  std::vector<std::string> all(std::string_view key) const {
    std::vector<std::string> r;
    for (const auto& [k, v] : entries)
      if (k == key) r.push_back(v);
    return r;
  }
};

inline KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues kv;
  kv.origin = origin;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto pos = t.find(" = ");
    std::size_t width = 3;
    if (pos == std::string::npos) {
      pos = t.find('=');
      width = 1;
    }
    if (pos == std::string::npos)
      fail(ErrorKind::Parse, origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    kv.entries.emplace_back(trim(t.substr(0, pos)), trim(t.substr(pos + width)));
    kv.lines.push_back(lineno);
  }
  return kv;
}

}  // namespace codeg
