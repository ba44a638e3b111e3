#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "opasim/config.h"
#include "opasim/experiment_scans.h"

namespace opasim {

inline constexpr const char* kCsvHeader =
    "detuning_over_gamma,detuning_MHz,value,value_dB";

/// Writes '#'-prefixed key=value metadata (tool version, scan metadata, the
/// resolved config as config.<key> lines), the header row, then one row per
/// detuning with `precision` significant digits.
void WriteScanCsv(std::ostream& out, const ScanResult& result,
                  const Config& config, int precision);

struct CsvRow {
  double detuning_over_gamma = 0.0;
  double detuning_mhz = 0.0;
  double value = 0.0;
  std::optional<double> value_db;
};

struct CsvScan {
  Metadata metadata;
  std::vector<CsvRow> rows;
  std::vector<std::string> raw_rows;  // data lines as written

  std::optional<std::string> Find(const std::string& key) const;
};

CsvScan ReadScanCsv(std::istream& in);

/// Rebuilds the config embedded in a CSV's config.<key> metadata lines.
Config ConfigFromCsv(const CsvScan& csv);

}  // namespace opasim
