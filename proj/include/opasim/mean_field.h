#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "opasim/errors.h"
#include "opasim/model_core.h"

namespace opasim {

/// Coherent signal injected through the output mirror. The phase is measured
/// from the amplification axis (X) of a pump with phi = 0.
template <typename Scalar = double>
struct CoherentInput {
  Scalar amplitude;
  Scalar signal_phase;

  Vector2<Scalar> Quadratures() const {
    using std::cos;
    using std::sin;
    if (!(amplitude >= 0)) {
      throw ValidationError("CoherentInput: amplitude must be >= 0");
    }
    return Vector2<Scalar>(Scalar(2) * amplitude * cos(signal_phase),
                           Scalar(2) * amplitude * sin(signal_phase));
  }
};

template <typename Scalar>
Vector2<Scalar> MeanFieldDrive(const CavityDecays<Scalar>& decays,
                               const CoherentInput<Scalar>& input) {
  using std::sqrt;
  return sqrt(Scalar(2) * decays.gamma_out()) * input.Quadratures();
}

/// Stationary intracavity quadratures (X, Y) solving M v + drive = 0.
template <typename Scalar>
Vector2<Scalar> SteadyStateIntracavity(const CavityDecays<Scalar>& decays,
                                       const PumpDrive<Scalar>& pump,
                                       const Detuning<Scalar>& det,
                                       const CoherentInput<Scalar>& input) {
  const Matrix2<Scalar> m = DriftMatrix(decays, pump, det);
  return m.partialPivLu().solve(-MeanFieldDrive(decays, input));
}

/// Reflected quadratures at the injection mirror,
/// sqrt(2 gamma_out) v - q_in.
template <typename Scalar>
Vector2<Scalar> ReflectedField(const CavityDecays<Scalar>& decays,
                               const PumpDrive<Scalar>& pump,
                               const Detuning<Scalar>& det,
                               const CoherentInput<Scalar>& input) {
  using std::sqrt;
  const Vector2<Scalar> v = SteadyStateIntracavity(decays, pump, det, input);
  return sqrt(Scalar(2) * decays.gamma_out()) * v - input.Quadratures();
}

/// Reflected power normalized to the injected power amplitude^2.
template <typename Scalar>
Scalar ReflectedPowerRatio(const CavityDecays<Scalar>& decays,
                           const PumpDrive<Scalar>& pump,
                           const Detuning<Scalar>& det,
                           const CoherentInput<Scalar>& input) {
  if (!(input.amplitude > 0)) {
    throw ValidationError("reflected power ratio needs a nonzero input");
  }
  const Vector2<Scalar> out = ReflectedField(decays, pump, det, input);
  return out.squaredNorm() / Scalar(4) / (input.amplitude * input.amplitude);
}

template <typename Scalar = double>
struct ReflectionScan {
  std::vector<Scalar> detunings;
  std::vector<Scalar> reflected_power;
};

template <typename Scalar>
ReflectionScan<Scalar> ReflectionGainScan(const CavityDecays<Scalar>& decays,
                                          const PumpDrive<Scalar>& pump,
                                          std::span<const Scalar> det_grid,
                                          const CoherentInput<Scalar>& input) {
  if (det_grid.empty()) throw ValidationError("detuning grid is empty");
  for (std::size_t i = 1; i < det_grid.size(); ++i) {
    if (!(det_grid[i] > det_grid[i - 1])) {
      throw ValidationError("detuning grid must be strictly increasing");
    }
  }
  ReflectionScan<Scalar> scan;
  scan.detunings.assign(det_grid.begin(), det_grid.end());
  scan.reflected_power.reserve(det_grid.size());
  for (Scalar delta : det_grid) {
    scan.reflected_power.push_back(
        ReflectedPowerRatio(decays, pump, Detuning<Scalar>{delta}, input));
  }
  return scan;
}

/// Explicit RK4 integration of dv/dt = M v + drive from v = 0. Used to check
/// the linear solve in SteadyStateIntracavity.
template <typename Scalar>
Vector2<Scalar> TimeDomainOracle(const CavityDecays<Scalar>& decays,
                                 const PumpDrive<Scalar>& pump,
                                 const Detuning<Scalar>& det,
                                 const CoherentInput<Scalar>& input,
                                 Scalar t_end, Scalar dt) {
  using std::abs;
  const Scalar g = decays.gamma_total();
  if (!(dt > 0) || dt * g > Scalar(0.01) * (1 + Scalar(1e-12))) {
    throw ValidationError("time-domain oracle: need 0 < dt*gamma <= 0.01");
  }
  if (t_end * g * (1 - pump.x()) < Scalar(20) * (1 - Scalar(1e-12))) {
    throw ValidationError(
        "time-domain oracle: need t_end*gamma*(1-x) >= 20");
  }
  const Matrix2<Scalar> m = DriftMatrix(decays, pump, det);
  const Vector2<Scalar> drive = MeanFieldDrive(decays, input);
  auto rhs = [&](const Vector2<Scalar>& v) -> Vector2<Scalar> {
    return m * v + drive;
  };

  const auto steps = static_cast<long>(std::ceil(t_end / dt));
  constexpr long kTail = 10;
  Vector2<Scalar> v = Vector2<Scalar>::Zero();
  Vector2<Scalar> tail_start = v;
  for (long n = 0; n < steps; ++n) {
    if (n == steps - kTail) tail_start = v;
    const Vector2<Scalar> k1 = rhs(v);
    const Vector2<Scalar> k2 = rhs(v + dt / 2 * k1);
    const Vector2<Scalar> k3 = rhs(v + dt / 2 * k2);
    const Vector2<Scalar> k4 = rhs(v + dt * k3);
    v += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  const Scalar scale = v.norm();
  if (scale > 0 && (v - tail_start).norm() > Scalar(1e-8) * scale) {
    throw std::runtime_error(
        "time-domain oracle did not converge; widen t_end or shrink dt");
  }
  return v;
}

}  // namespace opasim
