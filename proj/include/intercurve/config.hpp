#pragma once

// Line-oriented configuration format:
//
//   # comment
//   key = value
//   [section]
//   key = value
//   [section.subsection]
//   key = value
//
// Values stay raw strings; list and number access parses on demand. Section
// paths use '.' both in headers and in lookups ("metric.g.c_1_1").

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace intercurve {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text) {
    Config root;
    Config* current = &root;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const std::string t = strip_comment(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
        current = &root.descend(t.substr(1, t.size() - 2));
        continue;
      }
      const size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      current->values_[key] = value;
    }
    return root;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  bool has(const std::string& path) const { return find(path) != nullptr; }

  std::string get(const std::string& path) const {
    const std::string* v = find(path);
    if (!v) throw ConfigError("missing config key '" + path + "'");
    return *v;
  }

  std::string get_or(const std::string& path, const std::string& fallback) const {
    const std::string* v = find(path);
    return v ? *v : fallback;
  }

  double get_double(const std::string& path) const { return to_double(get(path), path); }
  double get_double_or(const std::string& path, double fallback) const {
    const std::string* v = find(path);
    return v ? to_double(*v, path) : fallback;
  }
  long get_int(const std::string& path) const { return to_int(get(path), path); }
  long get_int_or(const std::string& path, long fallback) const {
    const std::string* v = find(path);
    return v ? to_int(*v, path) : fallback;
  }
  bool get_bool_or(const std::string& path, bool fallback) const {
    const std::string* v = find(path);
    if (!v) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw ConfigError("config key '" + path + "': expected boolean, got '" + *v + "'");
  }

  std::vector<double> get_doubles(const std::string& path) const {
    std::vector<double> out;
    for (const std::string& tok : tokens(get(path))) out.push_back(to_double(tok, path));
    if (out.empty()) throw ConfigError("config key '" + path + "': empty list");
    return out;
  }
  std::vector<long> get_ints(const std::string& path) const {
    std::vector<long> out;
    for (const std::string& tok : tokens(get(path))) out.push_back(to_int(tok, path));
    if (out.empty()) throw ConfigError("config key '" + path + "': empty list");
    return out;
  }

  const Config* section(const std::string& path) const {
    const Config* c = this;
    for (const std::string& part : split(path, '.')) {
      auto it = c->children_.find(part);
      if (it == c->children_.end()) return nullptr;
      c = &it->second;
    }
    return c;
  }

  const std::map<std::string, std::string>& values() const { return values_; }
  const std::map<std::string, Config>& children() const { return children_; }

  // user-config keys win over preset defaults
  void merge_defaults(const Config& defaults) {
    for (const auto& [k, v] : defaults.values_)
      if (!values_.count(k)) values_[k] = v;
    for (const auto& [k, sub] : defaults.children_) children_[k].merge_defaults(sub);
  }

  void set(const std::string& path, const std::string& value) {
    const std::vector<std::string> parts = split(path, '.');
    Config* c = this;
    for (size_t i = 0; i + 1 < parts.size(); ++i) c = &c->children_[parts[i]];
    c->values_[parts.back()] = value;
  }

 private:
  Config& descend(const std::string& path) {
    Config* c = this;
    for (const std::string& part : split(path, '.')) c = &c->children_[trim(part)];
    return *c;
  }

  const std::string* find(const std::string& path) const {
    const std::vector<std::string> parts = split(path, '.');
    const Config* c = this;
    for (size_t i = 0; i + 1 < parts.size(); ++i) {
      auto it = c->children_.find(parts[i]);
      if (it == c->children_.end()) return nullptr;
      c = &it->second;
    }
    auto it = c->values_.find(parts.back());
    return it == c->values_.end() ? nullptr : &it->second;
  }

  static std::string strip_comment(const std::string& line) {
    const size_t hash = line.find('#');
    return trim(hash == std::string::npos ? line : line.substr(0, hash));
  }

  static std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  static std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == sep) {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  }

  // list tokens: whitespace and/or commas
  static std::vector<std::string> tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  static double to_double(const std::string& s, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      throw ConfigError("config key '" + path + "': expected number, got '" + s + "'");
    return v;
  }

  static long to_int(const std::string& s, const std::string& path) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size() || s.empty())
      throw ConfigError("config key '" + path + "': expected integer, got '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, Config> children_;
};

}  // namespace intercurve
