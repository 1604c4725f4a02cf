#pragma once

// Line-oriented report emission. Reports are designed for diff-based
// regression testing: fixed key order, fixed float formatting, one timestamp
// header line that consumers strip before comparing.

#include <Eigen/Dense>

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

namespace intercurve {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

inline std::string format_point_list(const Eigen::VectorXd& p) {
  if (p.size() == 0) return "()";
  std::string s = "(";
  for (int i = 0; i < p.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", p[i]);
    s += std::string(i ? "," : "") + buf;
  }
  return s + ")";
}

// FNV-1a over the raw config text; recorded so reports can be traced back to
// the exact inputs that produced them.
inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

class ReportWriter {
 public:
  ReportWriter(const std::string& command, std::uint64_t seed, std::uint64_t config_hash,
               const std::string& version) {
    line("report-version: 1");
    line("tool: intercurve " + version);
    line("command: " + command);
    char buf[64];
    std::snprintf(buf, sizeof buf, "seed: %llu", static_cast<unsigned long long>(seed));
    line(buf);
    std::snprintf(buf, sizeof buf, "config-hash: %016llx",
                  static_cast<unsigned long long>(config_hash));
    line(buf);
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    line(std::string("timestamp: ") + stamp);
  }

  void section(const std::string& name) { line("[" + name + "]"); }

  void line(const std::string& text) { lines_.push_back(text); }

  void kv(const std::string& key, const std::string& value) { line(key + " = " + value); }
  void kv(const std::string& key, double value) { kv(key, format_double(value)); }
  void kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, int value) { kv(key, std::to_string(value)); }
  void kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }

  std::string str() const {
    std::string out;
    for (const auto& l : lines_) out += l + "\n";
    return out;
  }

 private:
  std::vector<std::string> lines_;
};

}  // namespace intercurve
