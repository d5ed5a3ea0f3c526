#ifndef MRJD_TOOLS_CONFIG_HPP
#define MRJD_TOOLS_CONFIG_HPP

#include <cstdlib>
#include <fstream>
#include <map>
#include <string>

#include "mrjd/types.hpp"

namespace mrjd_cli {

// key = value text format with [section] headers; keys are stored as
// "section.key" ("" section for the preamble).
class Config {
 public:
  static Config load(const std::string& path) {
    Config cfg;
    std::ifstream in(path);
    if (!in) throw mrjd::invalid_input("cannot open config file: " + path);
    std::string line, section;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[' && line.back() == ']') {
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw mrjd::invalid_input("config line without '=': " + line);
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
  }

  /// Config named by the environment variable, when set; empty otherwise.
  static Config from_env() {
    if (const char* path = std::getenv("MEANREV_JD_CONFIG")) return load(path);
    return Config{};
  }

  double get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stod(it->second);
  }
  std::string get_string(const std::string& key, std::string fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }

 private:
  std::map<std::string, std::string> values_;
};

/// Numeric tolerances, overridable from the [numerics] config section.
struct Numerics {
  double quad_tol = 1e-10;
  double esscher_tol_residual = 1e-10;
  double esscher_tol_theta = 1e-12;
  double fft_m = 400.0;
  double fft_n = 4096.0;
  double damping = 0.0;  // 0 = automatic
  double density_nodes = 4096.0;

  static Numerics from(const Config& cfg) {
    Numerics n;
    n.quad_tol = cfg.get_double("numerics.quad_tol", n.quad_tol);
    n.esscher_tol_residual =
        cfg.get_double("numerics.esscher_tol_residual", n.esscher_tol_residual);
    n.esscher_tol_theta =
        cfg.get_double("numerics.esscher_tol_theta", n.esscher_tol_theta);
    n.fft_m = cfg.get_double("numerics.fft_m", n.fft_m);
    n.fft_n = cfg.get_double("numerics.fft_n", n.fft_n);
    n.damping = cfg.get_double("numerics.damping", n.damping);
    n.density_nodes = cfg.get_double("numerics.density_nodes", n.density_nodes);
    return n;
  }
};

}  // namespace mrjd_cli

#endif  // MRJD_TOOLS_CONFIG_HPP
