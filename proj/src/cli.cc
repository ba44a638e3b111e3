#include "opasim/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opasim/config.h"
#include "opasim/csv.h"
#include "opasim/errors.h"
#include "opasim/experiment_scans.h"
#include "opasim/selfcheck.h"
#include "opasim/squeezed_source.h"

namespace opasim {

namespace {

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

Config LoadOrDefault(const std::string& path) {
  return path.empty() ? ParseConfig("") : LoadConfigFile(path);
}

std::string Summary(const ScanResult& result) {
  const bool noise =
      result.scenario.observable == Observable::kHomodyneNoise;
  auto show = [&](double v) {
    return noise ? Fixed(ToDecibels(v), 3) + " dB" : Fixed(v, 4);
  };
  std::string line = ScenarioName(result.scenario.kind) + ": ";
  try {
    const CurveFeatures f = ExtractCurveFeatures(result);
    line += "center=" + show(f.center_value) +
            " baseline=" + show(f.baseline_value) + " fwhm=" +
            (f.fwhm ? Fixed(*f.fwhm / result.gamma_total, 4) + " gamma"
                    : std::string("n/a")) +
            " shoulders=" + std::to_string(f.shoulder_positions.size());
  } catch (const ValidationError& e) {
    line += "center=" + show(CenterValue(result.detunings, result.values)) +
            " baseline=" + show(BaselineValue(result.values)) + " (" +
            e.what() + ")";
  }
  return line;
}

void WriteFile(const std::string& path, const ScanResult& result,
               const Config& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  WriteScanCsv(out, result, config, config.output.precision);
  if (!out) throw IoError("write failed for '" + path + "'");
}

ScanResult ScanFor(std::string_view name, const Config& config) {
  const Scenario scenario = ScenarioFromConfig(name, config);
  SystemParameters params = ResolveParameters(config);
  if (scenario.observable == Observable::kHomodyneNoise &&
      scenario.input == InputState::kSqueezed) {
    Calibrate(params);
  }
  return RunScan(scenario,
                 GridSpec{config.scan.span_gammas, config.scan.points},
                 params);
}

struct ScanArgs {
  std::string scenario;
  std::string positional_out;
  std::string config_path;
  std::string out;
  std::optional<int> points;
  std::optional<double> span;
};

int DoScan(const ScanArgs& args, std::ostream& out, std::ostream& err) {
  Config config = LoadOrDefault(args.config_path);
  if (args.points) config.scan.points = *args.points;
  if (args.span) config.scan.span_gammas = *args.span;
  std::string path = !args.out.empty()            ? args.out
                     : !args.positional_out.empty() ? args.positional_out
                                                    : config.output.path;
  config.output.path = path;
  const ScanResult result = ScanFor(args.scenario, config);
  if (path.empty()) {
    WriteScanCsv(out, result, config, config.output.precision);
    err << Summary(result) << "\n";
  } else {
    WriteFile(path, result, config);
    out << Summary(result) << "\n";
  }
  return kExitOk;
}

int DoBatch(const std::vector<ScenarioKind>& panels, const std::string& dir,
            const std::string& config_path, std::ostream& out) {
  Config config = LoadOrDefault(config_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "'");
  for (ScenarioKind kind : panels) {
    const std::string name = ScenarioName(kind);
    const std::string path = (std::filesystem::path(dir) / (name + ".csv"));
    Config panel_config = config;
    panel_config.output.path = path;
    const ScanResult result = ScanFor(name, panel_config);
    WriteFile(path, result, panel_config);
    out << Summary(result) << "\n";
  }
  return kExitOk;
}

int DoSelfCheck(const SelfCheckOptions& options, std::ostream& out) {
  const std::vector<CheckResult> results = RunSelfCheck(options);
  bool all = true;
  for (const CheckResult& r : results) {
    out << (r.passed ? "PASS  " : "FAIL  ") << r.name << "  [" << r.detail
        << "]\n";
    all = all && r.passed;
  }
  out << (all ? "selfcheck: all invariants pass\n"
              : "selfcheck: FAILED invariants listed above\n");
  return all ? kExitOk : kExitValidation;
}

int DoCalibrate(const std::string& config_path, std::string derived_path,
                std::ostream& out) {
  Config config = LoadOrDefault(config_path);
  if (config.detection.efficiency) {
    throw ValidationError(
        "calibrate needs detection.efficiency = calibrate in the config");
  }
  SystemParameters params = ResolveParameters(config);
  Calibrate(params);
  const double eta = *params.total_efficiency;
  const SpectralMatrix<double> source =
      OpoOutputSpectrum(params.calibration_sideband, params.opo);
  out << "eta_total=" << Fixed(eta, 9) << "\n";
  out << "eta_source=" << Fixed(params.source_efficiency(), 9) << "\n";
  out << "source_squeezing_at_unit_efficiency_db="
      << Fixed(SqueezingDb(source, 0.0), 4) << "\n";
  out << "source_antisqueezing_at_unit_efficiency_db="
      << Fixed(SqueezingDb(source, std::numbers::pi / 2), 4) << "\n";
  out << "detected_squeezing_db="
      << Fixed(SqueezingDb(ApplyLoss(source, eta), 0.0), 4) << "\n";

  config.detection.efficiency = eta;
  if (derived_path.empty()) {
    derived_path = config_path.empty() ? "opasim_calibrated.cfg"
                                       : config_path + ".calibrated";
  }
  std::ofstream file(derived_path);
  if (!file) throw IoError("cannot write '" + derived_path + "'");
  file << "# derived by opasim calibrate\n" << SerializeConfig(config);
  out << "wrote " << derived_path << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"opasim: optical parametric amplifier with squeezed-vacuum "
               "injection"};
  app.require_subcommand(1);

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan", "Run one scenario and write CSV");
  scan->add_option("scenario", scan_args.scenario,
                   "fig2a..fig2e, fig3a..fig3f or custom")
      ->required();
  scan->add_option("output", scan_args.positional_out, "CSV output path");
  scan->add_option("--config", scan_args.config_path, "Config file");
  scan->add_option("--out", scan_args.out, "CSV output path");
  scan->add_option("--points", scan_args.points, "Detuning grid points");
  scan->add_option("--span-gammas", scan_args.span,
                   "Half-span of the detuning grid in units of gamma");

  SelfCheckOptions check_options;
  std::string fault;
  bool strict = false;
  auto* selfcheck =
      app.add_subcommand("selfcheck", "Run the invariant suite");
  selfcheck->add_flag("--strict", strict,
                      "Tighten the oracle tolerance to 1e-12");
  selfcheck->add_option("--inject-fault", fault, "Test hook: negative-loss")
      ->group("");

  std::string calib_config, calib_out;
  auto* calibrate = app.add_subcommand(
      "calibrate", "Calibrate the efficiency to the target squeezing");
  calibrate->add_option("--config", calib_config, "Config file");
  calibrate->add_option("--out", calib_out, "Derived config path");

  std::string fig_config, fig_dir;
  bool fig_all = false;
  auto* fig2 = app.add_subcommand("fig2", "Write every reflection panel (fig2a..fig2e)");
  auto* fig3 = app.add_subcommand("fig3", "Write every noise panel (fig3a..fig3f)");
  for (auto* fig : {fig2, fig3}) {
    fig->add_flag("--all", fig_all, "Run every panel")->required();
    fig->add_option("--outdir", fig_dir, "Output directory")->required();
    fig->add_option("--config", fig_config, "Config file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*scan) return DoScan(scan_args, out, err);
    if (*selfcheck) {
      if (strict) check_options.oracle_tolerance = 1e-12;
      if (!fault.empty()) {
        if (fault != "negative-loss") {
          throw ValidationError("unknown fault '" + fault + "'");
        }
        check_options.inject_negative_loss = true;
      }
      return DoSelfCheck(check_options, out);
    }
    if (*calibrate) return DoCalibrate(calib_config, calib_out, out);
    if (*fig2) return DoBatch(Fig2Panels(), fig_dir, fig_config, out);
    if (*fig3) return DoBatch(Fig3Panels(), fig_dir, fig_config, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const PhysicsDomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace opasim
