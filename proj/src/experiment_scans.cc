#include "opasim/experiment_scans.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "opasim/errors.h"
#include "opasim/mean_field.h"

namespace opasim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr double kFig3SidebandHz = 3.5e6;

constexpr std::pair<ScenarioKind, const char*> kNames[] = {
    {ScenarioKind::kFig2a, "fig2a"}, {ScenarioKind::kFig2b, "fig2b"},
    {ScenarioKind::kFig2c, "fig2c"}, {ScenarioKind::kFig2d, "fig2d"},
    {ScenarioKind::kFig2e, "fig2e"}, {ScenarioKind::kFig3a, "fig3a"},
    {ScenarioKind::kFig3b, "fig3b"}, {ScenarioKind::kFig3c, "fig3c"},
    {ScenarioKind::kFig3d, "fig3d"}, {ScenarioKind::kFig3e, "fig3e"},
    {ScenarioKind::kFig3f, "fig3f"}, {ScenarioKind::kCustom, "custom"},
};

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CavityDecays<double> DecaysFrom(const CavityConfig& c) {
  const CavityGeometry<double> geom{c.geometric_length, c.crystal_length,
                                    c.crystal_index};
  const double round_trip = RoundTripLength(geom);
  return CavityDecays<double>(
      DecayRateFromTransmission(c.t_in, round_trip),
      DecayRateFromTransmission(c.t_out, round_trip),
      DecayRateFromTransmission(c.round_trip_loss, round_trip));
}

}  // namespace

std::string ScenarioName(ScenarioKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "?";
}

ScenarioKind ParseScenarioKind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw ValidationError("unknown scenario '" + std::string(name) + "'");
}

std::vector<ScenarioKind> Fig2Panels() {
  return {ScenarioKind::kFig2a, ScenarioKind::kFig2b, ScenarioKind::kFig2c,
          ScenarioKind::kFig2d, ScenarioKind::kFig2e};
}

std::vector<ScenarioKind> Fig3Panels() {
  return {ScenarioKind::kFig3a, ScenarioKind::kFig3b, ScenarioKind::kFig3c,
          ScenarioKind::kFig3d, ScenarioKind::kFig3e, ScenarioKind::kFig3f};
}

Scenario PresetScenario(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::kFig2a:
    case ScenarioKind::kFig2b:
    case ScenarioKind::kFig2c:
    case ScenarioKind::kFig2d:
    case ScenarioKind::kFig2e: {
      s.observable = Observable::kReflectedPower;
      s.pump_fraction = kind == ScenarioKind::kFig2a   ? 0.0
                        : kind == ScenarioKind::kFig2b ||
                                  kind == ScenarioKind::kFig2c
                            ? 0.2
                            : 0.5;
      // Out-phase (deamplifying) panels put the signal on the Y axis.
      const bool out_phase =
          kind == ScenarioKind::kFig2c || kind == ScenarioKind::kFig2e;
      s.relative_phase = out_phase ? kPi / 2 : 0.0;
      return s;
    }
    case ScenarioKind::kFig3a:
    case ScenarioKind::kFig3b:
    case ScenarioKind::kFig3c:
    case ScenarioKind::kFig3d:
    case ScenarioKind::kFig3e:
    case ScenarioKind::kFig3f: {
      s.observable = Observable::kHomodyneNoise;
      s.sideband = kTwoPi * kFig3SidebandHz;
      const bool pump_off =
          kind == ScenarioKind::kFig3a || kind == ScenarioKind::kFig3b;
      s.pump_fraction = pump_off ? 0.0 : 0.5;
      s.relative_phase =
          kind == ScenarioKind::kFig3c || kind == ScenarioKind::kFig3d
              ? kPi / 2
              : 0.0;
      const bool squeezed_quadrature = kind == ScenarioKind::kFig3a ||
                                       kind == ScenarioKind::kFig3c ||
                                       kind == ScenarioKind::kFig3e;
      s.lo_angle = squeezed_quadrature ? 0.0 : kPi / 2;
      return s;
    }
    case ScenarioKind::kCustom:
      return s;
  }
  return s;
}

Scenario ScenarioFromConfig(std::string_view name, const Config& config) {
  const ScenarioKind kind = ParseScenarioKind(name);
  Scenario s = PresetScenario(kind);
  if (kind == ScenarioKind::kCustom) {
    s.pump_fraction = config.opa.pump_fraction;
    s.relative_phase = config.opa.pump_phase_deg * kPi / 180;
    s.lo_angle = config.detection.lo_angle_deg * kPi / 180;
    s.observable = config.scan.observable == "reflection"
                       ? Observable::kReflectedPower
                       : Observable::kHomodyneNoise;
  }
  if (s.observable == Observable::kHomodyneNoise) {
    s.sideband = kTwoPi * config.scan.sideband_mhz * 1e6;
  }
  s.input = config.scan.input == "vacuum" ? InputState::kVacuum
                                          : InputState::kSqueezed;
  return s;
}

double SystemParameters::source_efficiency() const {
  if (!total_efficiency) throw ValidationError("uncalibrated: efficiency unset");
  const double eta = *total_efficiency / homodyne_efficiency;
  if (!(eta > 0 && eta <= 1)) {
    throw ValidationError(
        "homodyne_efficiency must be >= the total detected efficiency");
  }
  return eta;
}

SystemParameters ResolveParameters(const Config& config) {
  if (config.opa.pump_fraction >= 1 || config.opo.pump_fraction >= 1) {
    throw PhysicsDomainError("pump fraction at/above threshold");
  }
  SystemParameters p{
      DecaysFrom(config.opa),
      OpoSource<double>{DecaysFrom(config.opo),
                        std::sqrt(config.opo.pump_fraction)},
      config.detection.efficiency,
      config.detection.homodyne_efficiency,
      config.detection.target_db,
      kTwoPi * config.scan.sideband_mhz * 1e6,
  };
  p.opo.Validate();
  return p;
}

void Calibrate(SystemParameters& params) {
  if (params.total_efficiency) return;
  params.total_efficiency = CalibrateEfficiency(
      params.target_db, params.calibration_sideband, params.opo);
}

std::vector<double> DetuningGrid(const GridSpec& grid, double gamma_total) {
  if (!(grid.span_gammas >= 8)) {
    throw ValidationError("scan span must be at least 8 gamma");
  }
  if (grid.points < 401) {
    throw ValidationError("scan needs at least 401 points");
  }
  const double half_span = grid.span_gammas * gamma_total;
  const int n = grid.points - 1;
  std::vector<double> out(grid.points);
  for (int i = 0; i <= n; ++i) {
    // Integer numerator keeps the grid exactly antisymmetric.
    out[i] = half_span * static_cast<double>(2 * i - n) / n;
  }
  return out;
}

SpectralMatrix<double> InjectedState(const Scenario& scenario,
                                     const SystemParameters& params) {
  if (scenario.input == InputState::kVacuum) {
    return SpectralMatrix<double>::Vacuum(scenario.sideband);
  }
  // Evaluated once at the analysis sideband; the OPA scan varies only Delta.
  const SpectralMatrix<double> source =
      OpoOutputSpectrum(scenario.sideband, params.opo);
  const SpectralMatrix<double> lossy =
      ApplyLoss(source, params.source_efficiency());
  return Rotate(lossy, CanonicalAngle(scenario.relative_phase, kPi));
}

ScanResult RunScan(const Scenario& scenario, const GridSpec& grid,
                   const SystemParameters& params) {
  const CavityDecays<double>& decays = params.opa;
  const PumpDrive<double> pump =
      PumpDrive<double>::FromPowerFraction(scenario.pump_fraction);
  ScanResult result;
  result.scenario = scenario;
  result.gamma_total = decays.gamma_total();
  result.detunings = DetuningGrid(grid, decays.gamma_total());
  result.values.reserve(result.detunings.size());

  Metadata& md = result.metadata;
  md.emplace_back("scenario", ScenarioName(scenario.kind));
  md.emplace_back("observable", scenario.observable ==
                                        Observable::kReflectedPower
                                    ? "reflected_power_ratio"
                                    : "homodyne_noise_snl");
  md.emplace_back("pump_fraction", Fmt(scenario.pump_fraction));
  md.emplace_back("relative_phase_rad", Fmt(scenario.relative_phase));
  md.emplace_back("gamma_in_rad_s", Fmt(decays.gamma_in()));
  md.emplace_back("gamma_out_rad_s", Fmt(decays.gamma_out()));
  md.emplace_back("gamma_loss_rad_s", Fmt(decays.gamma_loss()));
  md.emplace_back("gamma_total_rad_s", Fmt(decays.gamma_total()));
  md.emplace_back("over_coupled", decays.is_over_coupled() ? "true" : "false");
  md.emplace_back("grid_span_gammas", Fmt(grid.span_gammas));
  md.emplace_back("grid_points", std::to_string(grid.points));

  if (scenario.observable == Observable::kReflectedPower) {
    const CoherentInput<double> input{1.0, scenario.relative_phase};
    for (double delta : result.detunings) {
      result.values.push_back(
          ReflectedPowerRatio(decays, pump, Detuning<double>{delta}, input));
    }
    return result;
  }

  const bool squeezed = scenario.input == InputState::kSqueezed;
  if (squeezed && !params.total_efficiency) {
    throw ValidationError("uncalibrated: run calibration before noise scans");
  }
  PortInputs<double> inputs;
  inputs.output_mirror = InjectedState(scenario, params);
  const double squeezed_axis =
      squeezed ? CanonicalAngle(scenario.relative_phase, kPi) : 0.0;
  const DetectionChain<double> chain{squeezed_axis + scenario.lo_angle,
                                     params.homodyne_efficiency};

  md.emplace_back("lo_angle_rad", Fmt(scenario.lo_angle));
  md.emplace_back("sideband_rad_s", Fmt(scenario.sideband));
  md.emplace_back("input_state", squeezed ? "squeezed" : "vacuum");
  if (params.total_efficiency) {
    md.emplace_back("eta_total", Fmt(*params.total_efficiency));
    md.emplace_back("eta_source", Fmt(params.source_efficiency()));
  }
  md.emplace_back("eta_homodyne", Fmt(params.homodyne_efficiency));
  md.emplace_back("opo_gamma_total_rad_s", Fmt(params.opo.decays.gamma_total()));
  md.emplace_back("opo_x", Fmt(params.opo.x));
  md.emplace_back("injected_s_xx", Fmt(inputs.output_mirror.s_xx()));
  md.emplace_back("injected_s_yy", Fmt(inputs.output_mirror.s_yy()));
  md.emplace_back("injected_s_xy", Fmt(inputs.output_mirror.s_xy().real()));

  for (double delta : result.detunings) {
    const SpectralMatrix<double> s = OutputSpectralMatrix(
        scenario.sideband, decays, pump, Detuning<double>{delta}, inputs);
    result.values.push_back(HomodyneSpectrum(s, chain));
  }
  return result;
}

double CenterValue(std::span<const double> detunings,
                   std::span<const double> values) {
  if (detunings.empty() || detunings.size() != values.size()) {
    throw ValidationError("curve needs equal-length nonempty samples");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < detunings.size(); ++i) {
    if (std::abs(detunings[i]) < std::abs(detunings[best])) best = i;
  }
  return values[best];
}

double BaselineValue(std::span<const double> values) {
  if (values.size() < 2) throw ValidationError("curve too short");
  const std::size_t per_side = std::max<std::size_t>(1, values.size() / 40);
  double sum = 0;
  for (std::size_t i = 0; i < per_side; ++i) {
    sum += values[i] + values[values.size() - 1 - i];
  }
  return sum / static_cast<double>(2 * per_side);
}

CurveFeatures ExtractCurveFeatures(std::span<const double> detunings,
                                   std::span<const double> values,
                                   double gamma_total,
                                   double feature_tolerance) {
  if (detunings.size() != values.size() || detunings.size() < 3) {
    throw ValidationError("curve needs at least 3 equal-length samples");
  }
  for (std::size_t i = 1; i < detunings.size(); ++i) {
    if (!(detunings[i] - detunings[i - 1] < gamma_total / 20)) {
      throw ValidationError("grid too coarse: spacing must be < gamma/20");
    }
  }
  CurveFeatures f;
  f.center_value = CenterValue(detunings, values);
  f.baseline_value = BaselineValue(values);
  const double scale = std::max(std::abs(f.baseline_value), 1e-300);
  const double depth = f.center_value - f.baseline_value;
  if (std::abs(depth) < feature_tolerance * scale) {
    throw ValidationError("no central feature");
  }

  std::size_t center = 0;
  for (std::size_t i = 1; i < detunings.size(); ++i) {
    if (std::abs(detunings[i]) < std::abs(detunings[center])) center = i;
  }

  // Half-amplitude crossings walking outward from the center.
  const double half = f.baseline_value + depth / 2;
  const bool peak = depth > 0;
  auto above = [&](std::size_t i) { return peak ? values[i] > half
                                                : values[i] < half; };
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const double t = (half - values[inside]) /
                     (values[outside] - values[inside]);
    return detunings[inside] + t * (detunings[outside] - detunings[inside]);
  };
  std::optional<double> left, right;
  for (std::size_t i = center; i > 0; --i) {
    if (above(i) && !above(i - 1)) {
      left = crossing(i, i - 1);
      break;
    }
  }
  for (std::size_t i = center; i + 1 < values.size(); ++i) {
    if (above(i) && !above(i + 1)) {
      right = crossing(i, i + 1);
      break;
    }
  }
  if (left && right) f.fwhm = *right - *left;

  // Shoulders: strict interior extrema of the opposite sense to the center
  // feature that stand out from the baseline.
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (i == center) continue;
    const bool is_max = values[i] > values[i - 1] && values[i] > values[i + 1];
    const bool is_min = values[i] < values[i - 1] && values[i] < values[i + 1];
    const double excess = values[i] - f.baseline_value;
    const bool qualifies =
        peak ? (is_min && -excess > feature_tolerance * scale)
             : (is_max && excess > feature_tolerance * scale);
    if (qualifies) {
      f.shoulder_positions.push_back(detunings[i]);
      f.shoulder_values.push_back(values[i]);
    }
  }
  return f;
}

CurveFeatures ExtractCurveFeatures(const ScanResult& result,
                                   double feature_tolerance) {
  return ExtractCurveFeatures(result.detunings, result.values,
                              result.gamma_total, feature_tolerance);
}

std::vector<OrderingCheck> PanelOrderingReport(
    const std::map<ScenarioKind, ScanResult>& results, double tolerance) {
  std::vector<OrderingCheck> report;
  const double tol = tolerance;
  auto lt = [tol](double a, double b) { return a < b - tol; };

  for (ScenarioKind kind : Fig3Panels()) {
    const auto it = results.find(kind);
    if (it == results.end()) {
      throw ValidationError("ordering report: missing panel " +
                            ScenarioName(kind));
    }
    const ScanResult& r = it->second;
    OrderingCheck check;
    check.panel = kind;
    check.center = CenterValue(r.detunings, r.values);
    check.baseline = BaselineValue(r.values);
    const double c = check.center;
    const double b = check.baseline;
    switch (kind) {
      case ScenarioKind::kFig3a:
        check.claim = "S_c < 1 and S_c > S_b";
        check.passed = lt(c, 1) && lt(b, c);
        break;
      case ScenarioKind::kFig3b:
        check.claim = "1 < S_c < S_b";
        check.passed = lt(1, c) && lt(c, b);
        break;
      case ScenarioKind::kFig3c:
        check.claim = "S_c < S_b < 1";
        check.passed = lt(c, b) && lt(b, 1);
        break;
      case ScenarioKind::kFig3d:
        check.claim = "S_c > S_b > 1";
        check.passed = lt(b, c) && lt(1, b);
        break;
      case ScenarioKind::kFig3e:
        check.claim = "S_c > 1";
        check.passed = lt(1, c);
        break;
      case ScenarioKind::kFig3f:
        check.claim = "S_c < 1 < S_b";
        check.passed = lt(c, 1) && lt(1, b);
        break;
      default:
        break;
    }
    report.push_back(check);
  }
  return report;
}

}  // namespace opasim
