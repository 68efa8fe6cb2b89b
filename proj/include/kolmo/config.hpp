#pragma once

// Run configuration: flat `key = value` text grouped under [section]
// headers.  Lines starting with '#' or ';' are comments.

#include <cstdint>
#include <filesystem>
#include <string>

#include "kolmo/diagnostics.hpp"
#include "kolmo/integrator.hpp"

namespace kolmo {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class InitialPreset { constant, zero, random, snapshot };

struct InitialSpec {
  InitialPreset preset = InitialPreset::constant;
  // constant: omega = omega_min, b = b_min, v = 0
  // random: affine map onto [omega_min, omega_max] and [b_min, b_min + b_spread]
  double omega_min = 1.0;
  double omega_max = 1.0;
  double b_min = 1.0;
  double b_spread = 0.1;
  double velocity_l2 = 0.1;
  std::uint64_t seed = 1;
  double decay = 0.0;
  int bandwidth = 4;
  std::filesystem::path snapshot;
};

struct RunConfig {
  int dim = 2;
  int cutoff = 8;
  double s = 2.0;
  double alpha = 1.0;
  int oversample = 4;

  InitialSpec initial;
  IntegratorConfig integrator;
  bool extrema_check = true;
  double extrema_tolerance = 1e-6;

  ConstantModel cmodel;
  double beta_override = 0.0;  // > 1 replaces beta(s)

  std::filesystem::path output_dir = "kolmo-out";
  bool write_snapshots = true;

  /// Structural checks that need no initial data: d >= 2, s > d/2, ...
  void validate() const;
  double beta() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// Every key in a fixed order, numbers in shortest round-trip form.
std::string print_config(const RunConfig& config);

InitialPreset preset_from_name(const std::string& name);
std::string preset_name(InitialPreset preset);
Method method_from_name(const std::string& name);
std::string method_name(Method method);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);
/// Strict parse of a whole string; throws ConfigError naming `what`.
double parse_double(const std::string& text, const std::string& what);

}  // namespace kolmo
