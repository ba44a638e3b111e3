#include "opasim/csv.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string_view>

#include "opasim/errors.h"
#include "opasim/squeezed_source.h"

namespace opasim {

namespace {

std::string Sig(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return buf;
}

double ParseField(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("csv line " + std::to_string(line) +
                          ": bad number '" + s + "'");
  }
}

}  // namespace

void WriteScanCsv(std::ostream& out, const ScanResult& result,
                  const Config& config, int precision) {
  out << "# tool=opasim\n";
  out << "# tool_version=" << OPASIM_VERSION << "\n";
  for (const auto& [key, value] : result.metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  for (const auto& [key, value] : ConfigKeyValues(config)) {
    out << "# config." << key << "=" << value << "\n";
  }
  std::string defaulted;
  for (const std::string& key : config.defaulted) {
    if (!defaulted.empty()) defaulted += ",";
    defaulted += key;
  }
  out << "# defaulted=" << defaulted << "\n";
  out << kCsvHeader << "\n";

  const bool noise =
      result.scenario.observable == Observable::kHomodyneNoise;
  for (std::size_t i = 0; i < result.detunings.size(); ++i) {
    const double delta = result.detunings[i];
    const double value = result.values[i];
    out << Sig(delta / result.gamma_total, precision) << ','
        << Sig(delta / (2 * std::numbers::pi) / 1e6, precision) << ','
        << Sig(value, precision) << ',';
    if (noise) out << Sig(ToDecibels(value), precision);
    out << '\n';
  }
}

std::optional<std::string> CsvScan::Find(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return v;
  }
  return std::nullopt;
}

CsvScan ReadScanCsv(std::istream& in) {
  CsvScan scan;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string_view body(line);
      body.remove_prefix(1);
      if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw ValidationError("csv line " + std::to_string(line_no) +
                              ": metadata without '='");
      }
      scan.metadata.emplace_back(std::string(body.substr(0, eq)),
                                 std::string(body.substr(eq + 1)));
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw ValidationError("csv line " + std::to_string(line_no) +
                              ": unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 4) {
      throw ValidationError("csv line " + std::to_string(line_no) +
                            ": expected 4 fields");
    }
    CsvRow row;
    row.detuning_over_gamma = ParseField(fields[0], line_no);
    row.detuning_mhz = ParseField(fields[1], line_no);
    row.value = ParseField(fields[2], line_no);
    if (!fields[3].empty()) row.value_db = ParseField(fields[3], line_no);
    scan.rows.push_back(row);
    scan.raw_rows.push_back(line);
  }
  if (!header_seen) throw ValidationError("csv: header row missing");
  return scan;
}

Config ConfigFromCsv(const CsvScan& csv) {
  std::string text;
  constexpr std::string_view kPrefix = "config.";
  for (const auto& [key, value] : csv.metadata) {
    if (key.starts_with(kPrefix)) {
      text += key.substr(kPrefix.size()) + " = " + value + "\n";
    }
  }
  return ParseConfig(text);
}

}  // namespace opasim
