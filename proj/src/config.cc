#include "opasim/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "opasim/errors.h"

namespace opasim {

namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Key {
  std::string name;
  std::function<void(Config&, std::string_view, int)> set;
  std::function<std::string(const Config&)> get;
};

[[noreturn]] void Fail(int line, const std::string& msg) {
  throw ValidationError("config line " + std::to_string(line) + ": " + msg);
}

double ParseDouble(std::string_view text, int line, const std::string& key) {
  double v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    Fail(line, "'" + key + "' expects a number, got '" + std::string(text) +
                   "'");
  }
  return v;
}

void RequireFraction(double v, int line, const std::string& key) {
  if (!(v >= 0 && v <= 1)) {
    Fail(line, "'" + key + "' = " + FormatDouble(v) + " must lie in [0, 1]");
  }
}

void AddCavityKeys(std::vector<Key>& keys, const std::string& section,
                   CavityConfig Config::*member) {
  auto number = [&](const std::string& name, double CavityConfig::*field,
                    std::function<void(double, int, const std::string&)>
                        check) {
    const std::string full = section + "." + name;
    keys.push_back(
        {full,
         [=](Config& c, std::string_view v, int line) {
           const double d = ParseDouble(v, line, full);
           check(d, line, full);
           (c.*member).*field = d;
         },
         [=](const Config& c) { return FormatDouble((c.*member).*field); }});
  };
  auto fraction = [](double v, int line, const std::string& key) {
    RequireFraction(v, line, key);
  };
  auto positive = [](double v, int line, const std::string& key) {
    if (!(v > 0)) Fail(line, "'" + key + "' must be > 0");
  };
  number("t_in", &CavityConfig::t_in, fraction);
  number("t_out", &CavityConfig::t_out, fraction);
  number("round_trip_loss", &CavityConfig::round_trip_loss, fraction);
  number("geometric_length", &CavityConfig::geometric_length, positive);
  number("crystal_length", &CavityConfig::crystal_length,
         [](double v, int line, const std::string& key) {
           if (!(v >= 0)) Fail(line, "'" + key + "' must be >= 0");
         });
  number("crystal_index", &CavityConfig::crystal_index,
         [](double v, int line, const std::string& key) {
           if (!(v >= 1)) Fail(line, "'" + key + "' must be >= 1");
         });
  number("pump_fraction", &CavityConfig::pump_fraction,
         [](double v, int line, const std::string& key) {
           if (!(v >= 0)) Fail(line, "'" + key + "' must be >= 0");
           if (v >= 1) {
             throw PhysicsDomainError(
                 "config line " + std::to_string(line) + ": '" + key +
                 "' = " + FormatDouble(v) + " is at/above threshold");
           }
         });
  number("pump_phase_deg", &CavityConfig::pump_phase_deg,
         [](double v, int line, const std::string& key) {
           if (!std::isfinite(v)) Fail(line, "'" + key + "' must be finite");
         });
  number("threshold_mw", &CavityConfig::threshold_mw, positive);
}

const std::vector<Key>& AllKeys() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    AddCavityKeys(k, "opa", &Config::opa);
    AddCavityKeys(k, "opo", &Config::opo);

    k.push_back({"detection.lo_angle_deg",
                 [](Config& c, std::string_view v, int line) {
                   c.detection.lo_angle_deg =
                       ParseDouble(v, line, "detection.lo_angle_deg");
                 },
                 [](const Config& c) {
                   return FormatDouble(c.detection.lo_angle_deg);
                 }});
    k.push_back({"detection.efficiency",
                 [](Config& c, std::string_view v, int line) {
                   if (v == "calibrate") {
                     c.detection.efficiency.reset();
                     return;
                   }
                   const double d =
                       ParseDouble(v, line, "detection.efficiency");
                   if (!(d > 0 && d <= 1)) {
                     Fail(line,
                          "'detection.efficiency' must lie in (0, 1] or be "
                          "'calibrate'");
                   }
                   c.detection.efficiency = d;
                 },
                 [](const Config& c) {
                   return c.detection.efficiency
                              ? FormatDouble(*c.detection.efficiency)
                              : std::string("calibrate");
                 }});
    k.push_back({"detection.homodyne_efficiency",
                 [](Config& c, std::string_view v, int line) {
                   const double d =
                       ParseDouble(v, line, "detection.homodyne_efficiency");
                   if (!(d > 0 && d <= 1)) {
                     Fail(line,
                          "'detection.homodyne_efficiency' must lie in (0, 1]");
                   }
                   c.detection.homodyne_efficiency = d;
                 },
                 [](const Config& c) {
                   return FormatDouble(c.detection.homodyne_efficiency);
                 }});
    k.push_back({"detection.target_db",
                 [](Config& c, std::string_view v, int line) {
                   const double d = ParseDouble(v, line, "detection.target_db");
                   if (!(d < 0)) Fail(line, "'detection.target_db' must be < 0");
                   c.detection.target_db = d;
                 },
                 [](const Config& c) {
                   return FormatDouble(c.detection.target_db);
                 }});

    k.push_back({"scan.span_gammas",
                 [](Config& c, std::string_view v, int line) {
                   const double d = ParseDouble(v, line, "scan.span_gammas");
                   if (!(d > 0)) Fail(line, "'scan.span_gammas' must be > 0");
                   c.scan.span_gammas = d;
                 },
                 [](const Config& c) { return FormatDouble(c.scan.span_gammas); }});
    k.push_back({"scan.points",
                 [](Config& c, std::string_view v, int line) {
                   int n = 0;
                   const auto* end = v.data() + v.size();
                   const auto [ptr, ec] = std::from_chars(v.data(), end, n);
                   if (ec != std::errc() || ptr != end) {
                     Fail(line, "'scan.points' expects an integer");
                   }
                   if (n < 3) Fail(line, "'scan.points' must be >= 3");
                   c.scan.points = n;
                 },
                 [](const Config& c) { return std::to_string(c.scan.points); }});
    k.push_back({"scan.sideband_mhz",
                 [](Config& c, std::string_view v, int line) {
                   const double d = ParseDouble(v, line, "scan.sideband_mhz");
                   if (!(d > 0)) Fail(line, "'scan.sideband_mhz' must be > 0");
                   c.scan.sideband_mhz = d;
                 },
                 [](const Config& c) { return FormatDouble(c.scan.sideband_mhz); }});
    k.push_back({"scan.input",
                 [](Config& c, std::string_view v, int line) {
                   if (v != "squeezed" && v != "vacuum") {
                     Fail(line, "'scan.input' must be 'squeezed' or 'vacuum'");
                   }
                   c.scan.input = std::string(v);
                 },
                 [](const Config& c) { return c.scan.input; }});
    k.push_back({"scan.observable",
                 [](Config& c, std::string_view v, int line) {
                   if (v != "noise" && v != "reflection") {
                     Fail(line,
                          "'scan.observable' must be 'noise' or 'reflection'");
                   }
                   c.scan.observable = std::string(v);
                 },
                 [](const Config& c) { return c.scan.observable; }});

    k.push_back({"output.path",
                 [](Config& c, std::string_view v, int) {
                   c.output.path = std::string(v);
                 },
                 [](const Config& c) { return c.output.path; }});
    k.push_back({"output.precision",
                 [](Config& c, std::string_view v, int line) {
                   int n = 0;
                   const auto* end = v.data() + v.size();
                   const auto [ptr, ec] = std::from_chars(v.data(), end, n);
                   if (ec != std::errc() || ptr != end || n < 1 || n > 17) {
                     Fail(line, "'output.precision' must be an integer in "
                                "[1, 17]");
                   }
                   c.output.precision = n;
                 },
                 [](const Config& c) {
                   return std::to_string(c.output.precision);
                 }});
    return k;
  }();
  return keys;
}

}  // namespace

Config ParseConfig(std::string_view text) {
  Config config;
  std::set<std::string> seen;
  const auto& keys = AllKeys();

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = Trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      Fail(line_no, "expected 'section.key = value'");
    }
    const std::string name(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    const auto it = std::find_if(keys.begin(), keys.end(),
                                 [&](const Key& k) { return k.name == name; });
    if (it == keys.end()) Fail(line_no, "unknown key '" + name + "'");
    if (!seen.insert(name).second) {
      Fail(line_no, "duplicate key '" + name + "'");
    }
    it->set(config, value, line_no);
  }

  // The OPO's internal loss tracks the OPA's unless set explicitly.
  if (!seen.contains("opo.round_trip_loss")) {
    config.opo.round_trip_loss = config.opa.round_trip_loss;
  }
  for (const Key& k : keys) {
    if (!seen.contains(k.name)) config.defaulted.push_back(k.name);
  }
  return config;
}

Config LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::vector<std::pair<std::string, std::string>> ConfigKeyValues(
    const Config& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : AllKeys()) out.emplace_back(k.name, k.get(config));
  return out;
}

std::string SerializeConfig(const Config& config) {
  std::string out;
  for (const auto& [key, value] : ConfigKeyValues(config)) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace opasim
