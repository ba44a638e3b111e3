#include "opasim/selfcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>

#include "opasim/config.h"
#include "opasim/errors.h"
#include "opasim/experiment_scans.h"
#include "opasim/lyapunov_oracle.h"
#include "opasim/mean_field.h"
#include "opasim/quantum_spectra.h"
#include "opasim/squeezed_source.h"

namespace opasim {

namespace {

constexpr double kPi = std::numbers::pi;

std::string Fmt(const char* fmt, double v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

CheckResult DecayInvariant(const SelfCheckOptions& options) {
  CheckResult r{"cavity decay invariants", true, "ok"};
  try {
    const double loss = options.inject_negative_loss ? -1e5 : 1e5;
    const CavityDecays<double> d(5e6, 3e7, loss);
    if (d.gamma_total() != 5e6 + 3e7 + loss) {
      r = {r.name, false, "gamma_total is not the exact sum"};
    }
  } catch (const ValidationError& e) {
    r = {r.name, false, e.what()};
  }
  return r;
}

CheckResult VacuumFixedPoint() {
  const CavityDecays<double> decays(0.1, 1.0, 0.2);
  const double g = decays.gamma_total();
  double worst = 0;
  for (int i = 0; i <= 200; ++i) {
    const double delta = g * (-8 + 16.0 * i / 200);
    for (double w : {0.0, 0.3, 1.0, 2.5, -1.7}) {
      const SpectralMatrix<double> s = OutputSpectralMatrix(
          w * g, decays, PumpDrive<double>::Off(), Detuning<double>{delta},
          PortInputs<double>{});
      for (double theta : {0.0, 0.4, kPi / 2, 2.2}) {
        worst = std::max(worst, std::abs(HomodyneSpectrum(
                                    s, DetectionChain<double>{theta, 1}) -
                                1));
      }
    }
  }
  return {"vacuum fixed point", worst <= 1e-12,
          Fmt("max |S-1| = %.3g", worst)};
}

SpectralMatrix<double> RandomPhysical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double r = 1.5 * u(rng);
  const double angle = kPi * u(rng);
  const double thermal = 1 + 2 * u(rng);
  const SpectralMatrix<double> s = SpectralMatrix<double>::Diagonal(
      thermal * std::exp(-2 * r), thermal * std::exp(2 * r));
  return Rotate(s, angle);
}

CheckResult Physicality() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 1e300;
  for (int i = 0; i < 1000; ++i) {
    const CavityDecays<double> decays(u(rng), 0.05 + u(rng), u(rng));
    const PumpDrive<double> pump(0.98 * u(rng), 2 * kPi * u(rng));
    const double g = decays.gamma_total();
    const Detuning<double> det{g * (10 * u(rng) - 5)};
    const double omega = g * (10 * u(rng) - 5);
    const PortInputs<double> in{RandomPhysical(rng), RandomPhysical(rng),
                                RandomPhysical(rng)};
    worst = std::min(
        worst, OutputSpectralMatrix(omega, decays, pump, det, in).determinant());
  }
  return {"physicality (det >= 1)", worst >= 1 - 1e-9,
          Fmt("min det = %.12f", worst)};
}

CheckResult ClosedForm() {
  double worst = 0;
  for (double escape : {1.0, 0.8}) {
    const CavityDecays<double> decays(0.0, escape, 1 - escape);
    for (double x : {0.1, 0.5, 0.707, 0.9}) {
      for (double w : {0.0, 0.5, 1.0, 3.0}) {
        const SpectralMatrix<double> s = OutputSpectralMatrix(
            w, decays, PumpDrive<double>(x), Detuning<double>{0.0},
            PortInputs<double>{});
        const double plus = 1 + escape * 4 * x / ((1 - x) * (1 - x) + w * w);
        const double minus = 1 - escape * 4 * x / ((1 + x) * (1 + x) + w * w);
        worst = std::max({worst, std::abs(s.s_xx() / plus - 1),
                          std::abs(s.s_yy() / minus - 1)});
      }
    }
  }
  return {"closed-form OPO reduction", worst <= 1e-9,
          Fmt("max rel err = %.3g", worst)};
}

CheckResult ClassicalGain() {
  const auto decays = CavityDecays<double>::SingleEnded(1.0);
  double worst = 0;
  for (double x : {std::sqrt(0.2), std::sqrt(0.5)}) {
    const PumpDrive<double> pump(x);
    const double amp = std::sqrt(ReflectedPowerRatio(
        decays, pump, Detuning<double>{0}, CoherentInput<double>{1, 0}));
    const double deamp = std::sqrt(ReflectedPowerRatio(
        decays, pump, Detuning<double>{0}, CoherentInput<double>{1, kPi / 2}));
    worst = std::max({worst, std::abs(amp - (1 + x) / (1 - x)),
                      std::abs(deamp - (1 - x) / (1 + x))});
  }
  double worst_ode = 0;
  const CavityDecays<double> lossy(0.1, 0.7, 0.2);
  for (double x : {0.0, 0.9}) {
    for (double delta : {0.0, 2.0}) {
      const PumpDrive<double> pump(x, 0.7);
      const CoherentInput<double> in{1.0, 0.3};
      const auto closed =
          SteadyStateIntracavity(lossy, pump, Detuning<double>{delta}, in);
      const auto ode = TimeDomainOracle(lossy, pump, Detuning<double>{delta},
                                        in, 20.0 / (1 - x), 0.01);
      worst_ode = std::max(worst_ode, (closed - ode).norm() / closed.norm());
    }
  }
  return {"classical gain and ODE oracle",
          worst <= 1e-9 && worst_ode <= 1e-6,
          Fmt("gain err = %.3g", worst) + Fmt(", ode rel err = %.3g",
                                              worst_ode)};
}

CheckResult OracleEquivalence(double tolerance) {
  const CavityDecays<double> decays(0.1, 0.8, 0.1);
  const double g = decays.gamma_total();
  const Matrix2<double> squeezed =
      Rotation(0.3) *
      Eigen::Vector2d(std::pow(10.0, -0.2), std::pow(10.0, 0.2)).asDiagonal() *
      Rotation(-0.3);
  double worst = 0;
  for (double x : {0.3, 0.8}) {
    for (double delta : {0.0, 1.3}) {
      const std::vector<double> omegas = {0.2 * g, 1.5 * g};
      for (const Matrix2<double>& n_out :
           {Matrix2<double>(Matrix2<double>::Identity()), squeezed}) {
        PortCovariances<double> cov;
        cov.output_mirror = n_out;
        const auto oracle = LyapunovRegressionOracle<double>(
            omegas, decays, PumpDrive<double>(x, 0.4),
            Detuning<double>{delta * g}, cov);
        for (std::size_t k = 0; k < omegas.size(); ++k) {
          PortInputs<double> in;
          in.output_mirror = SpectralMatrix<double>::FromReal(n_out);
          const auto direct = OutputSpectralMatrix(
              omegas[k], decays, PumpDrive<double>(x, 0.4),
              Detuning<double>{delta * g}, in);
          worst = std::max(worst, (oracle[k].matrix() - direct.matrix()).norm() /
                                      direct.matrix().norm());
        }
      }
    }
  }
  return {"Lyapunov/regression oracle equivalence", worst <= tolerance,
          Fmt("max rel err = %.3g", worst) + Fmt(" (tol %.1g)", tolerance)};
}

CheckResult SidebandReality() {
  const CavityDecays<double> decays(0.1, 0.8, 0.1);
  PortInputs<double> in;
  in.output_mirror = Rotate(SpectralMatrix<double>::Diagonal(0.63, 1 / 0.63), 0.5);
  bool ok = true;
  for (int i = 0; i <= 40 && ok; ++i) {
    const Detuning<double> det{-4 + 0.2 * i};
    const PumpDrive<double> pump(0.6, 0.2);
    const auto plus = OutputSpectralMatrix(0.9, decays, pump, det, in);
    const auto minus = OutputSpectralMatrix(-0.9, decays, pump, det, in);
    try {
      SymmetrizeOverSidebands(plus, minus);
    } catch (const std::logic_error&) {
      ok = false;
    }
  }
  return {"sideband reality", ok, ok ? "ok" : "mismatch beyond 1e-9"};
}

CheckResult PanelOrderings() {
  SystemParameters params = ResolveParameters(ParseConfig(""));
  Calibrate(params);
  std::map<ScenarioKind, ScanResult> results;
  for (ScenarioKind kind : Fig3Panels()) {
    results.emplace(kind, RunScan(PresetScenario(kind), GridSpec{}, params));
  }
  std::string failed;
  for (const OrderingCheck& c : PanelOrderingReport(results)) {
    if (!c.passed) failed += ScenarioName(c.panel) + " ";
  }
  return {"six-panel orderings", failed.empty(),
          failed.empty() ? "all pass" : "failed: " + failed};
}

}  // namespace

std::vector<CheckResult> RunSelfCheck(const SelfCheckOptions& options) {
  std::vector<CheckResult> results;
  results.push_back(DecayInvariant(options));
  results.push_back(VacuumFixedPoint());
  results.push_back(Physicality());
  results.push_back(ClosedForm());
  results.push_back(ClassicalGain());
  results.push_back(OracleEquivalence(options.oracle_tolerance));
  results.push_back(SidebandReality());
  results.push_back(PanelOrderings());
  return results;
}

}  // namespace opasim
