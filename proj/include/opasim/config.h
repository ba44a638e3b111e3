#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opasim {

// Mirror, loss, geometry and pump settings for one cavity. Transmissions and
// the loss are per-round-trip intensity fractions.
struct CavityConfig {
  double t_in = 0.005;
  double t_out = 0.03;
  double round_trip_loss = 0.001;
  double geometric_length = 0.060;  // m
  double crystal_length = 0.012;    // m
  double crystal_index = 1.830;
  double pump_fraction = 0.5;       // P / P_th
  double pump_phase_deg = 0.0;      // signal-to-pump relative phase
  double threshold_mw = 80.0;       // informational
};

struct DetectionConfig {
  double lo_angle_deg = 0.0;
  // Total efficiency with which the injected squeezing is detected; nullopt
  // means "calibrate" against target_db.
  std::optional<double> efficiency;
  // Part of `efficiency` that acts after the OPA reflection. The rest is a
  // loss on the injected state.
  double homodyne_efficiency = 1.0;
  double target_db = -2.0;
};

struct ScanConfig {
  double span_gammas = 16.0;  // half-span, units of the OPA gamma_total
  int points = 801;
  double sideband_mhz = 3.5;
  std::string input = "squeezed";     // squeezed | vacuum
  std::string observable = "noise";   // noise | reflection (custom only)
};

struct OutputConfig {
  std::string path;
  int precision = 9;
};

struct Config {
  CavityConfig opa;
  CavityConfig opo = [] {
    CavityConfig c;
    c.t_out = 0.07;
    return c;
  }();
  DetectionConfig detection;
  ScanConfig scan;
  OutputConfig output;

  // Keys not present in the parsed text, in canonical order.
  std::vector<std::string> defaulted;
};

/// Parses the flat `section.key = value` format ('#' starts a comment).
/// Unknown keys, duplicates and range violations throw ValidationError with
/// the line number; a pump fraction >= 1 throws PhysicsDomainError.
Config ParseConfig(std::string_view text);

Config LoadConfigFile(const std::string& path);

/// Every config key with its resolved value, in canonical order. Values are
/// printed with enough digits to parse back bit-identically.
std::vector<std::pair<std::string, std::string>> ConfigKeyValues(
    const Config& config);

std::string SerializeConfig(const Config& config);

}  // namespace opasim
