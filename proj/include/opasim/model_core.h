#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "opasim/errors.h"

namespace opasim {

template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using ComplexMatrix2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

/// Optical layout of a two-mirror standing-wave cavity holding a crystal.
template <typename Scalar = double>
struct CavityGeometry {
  Scalar geometric_length;  // m
  Scalar crystal_length;    // m
  Scalar crystal_index;     // refractive index at the subharmonic
};

template <typename Scalar>
void Validate(const CavityGeometry<Scalar>& geom) {
  if (!(geom.crystal_length >= 0) ||
      !(geom.geometric_length > geom.crystal_length)) {
    throw ValidationError(
        "CavityGeometry: require geometric_length > crystal_length >= 0");
  }
  if (!(geom.crystal_index >= 1)) {
    throw ValidationError("CavityGeometry: crystal_index must be >= 1");
  }
}

/// Optical round-trip length 2(L - l_c + n l_c) in meters.
template <typename Scalar>
Scalar RoundTripLength(const CavityGeometry<Scalar>& geom) {
  Validate(geom);
  return Scalar(2) * (geom.geometric_length - geom.crystal_length +
                      geom.crystal_index * geom.crystal_length);
}

/// Amplitude decay rate (rad/s) through a mirror of intensity transmission
/// `transmission`, high-finesse limit c T / (2 L_rt).
template <typename Scalar>
Scalar DecayRateFromTransmission(Scalar transmission, Scalar round_trip) {
  if (!(transmission >= 0 && transmission <= 1)) {
    throw ValidationError("transmission must lie in [0, 1]");
  }
  if (!(round_trip > 0)) {
    throw ValidationError("round-trip length must be positive");
  }
  return Scalar(kSpeedOfLight) * transmission / (Scalar(2) * round_trip);
}

/// Field decay rates of the subharmonic mode, split by channel. The total is
/// stored, not recomputed, so gamma_total() is bit-identical everywhere.
template <typename Scalar = double>
class CavityDecays {
 public:
  CavityDecays(Scalar gamma_in, Scalar gamma_out, Scalar gamma_loss)
      : gamma_in_(gamma_in),
        gamma_out_(gamma_out),
        gamma_loss_(gamma_loss),
        gamma_total_(gamma_in + gamma_out + gamma_loss) {
    if (!(gamma_in >= 0) || !(gamma_out >= 0) || !(gamma_loss >= 0)) {
      throw ValidationError("CavityDecays: all decay rates must be >= 0");
    }
    if (!(gamma_total_ > 0)) {
      throw ValidationError("CavityDecays: total decay rate must be positive");
    }
  }

  /// Single-ended lossless cavity: all decay through the output mirror.
  static CavityDecays SingleEnded(Scalar gamma) {
    return CavityDecays(Scalar(0), gamma, Scalar(0));
  }

  Scalar gamma_in() const { return gamma_in_; }
  Scalar gamma_out() const { return gamma_out_; }
  Scalar gamma_loss() const { return gamma_loss_; }
  Scalar gamma_total() const { return gamma_total_; }

  bool is_over_coupled() const { return gamma_out_ > gamma_in_ + gamma_loss_; }
  Scalar escape_efficiency() const { return gamma_out_ / gamma_total_; }

 private:
  Scalar gamma_in_;
  Scalar gamma_out_;
  Scalar gamma_loss_;
  Scalar gamma_total_;
};

template <typename Scalar>
Scalar CanonicalAngle(Scalar angle, Scalar period) {
  Scalar a = std::fmod(angle, period);
  if (a < 0) a += period;
  if (a >= period) a = 0;
  return a;
}

/// Classical undepleted pump, x = sqrt(P / P_th) and phase phi.
template <typename Scalar = double>
class PumpDrive {
 public:
  explicit PumpDrive(Scalar x, Scalar phi = Scalar(0),
                     Scalar threshold_power = Scalar(0))
      : x_(x),
        phi_(CanonicalAngle(phi, Scalar(2 * std::numbers::pi))),
        threshold_power_(threshold_power) {
    if (!(x >= 0)) throw ValidationError("PumpDrive: x must be >= 0");
    if (!(x < 1)) {
      throw PhysicsDomainError(
          "PumpDrive: pump at/above threshold (x = " + std::to_string(x) +
          "), linearized model invalid");
    }
  }

  static PumpDrive FromPowerFraction(Scalar fraction, Scalar phi = Scalar(0)) {
    if (!(fraction >= 0)) {
      throw ValidationError("pump power fraction must be >= 0");
    }
    return PumpDrive(std::sqrt(fraction), phi);
  }

  static PumpDrive Off() { return PumpDrive(Scalar(0)); }

  Scalar x() const { return x_; }
  Scalar phi() const { return phi_; }
  Scalar threshold_power() const { return threshold_power_; }

 private:
  Scalar x_;
  Scalar phi_;
  Scalar threshold_power_;
};

template <typename Scalar = double>
struct Detuning {
  Scalar delta;  // rad/s
};

/// Linearized drift of the intracavity quadratures (X, Y), with
/// X = a + a^dagger and Y = -i (a - a^dagger). Phase phi = 0 amplifies X.
template <typename Scalar>
Matrix2<Scalar> DriftMatrix(const CavityDecays<Scalar>& decays,
                            const PumpDrive<Scalar>& pump,
                            const Detuning<Scalar>& det) {
  using std::cos;
  using std::sin;
  const Scalar g = decays.gamma_total();
  const Scalar gx = g * pump.x();
  const Scalar c = gx * cos(pump.phi());
  const Scalar s = gx * sin(pump.phi());
  Matrix2<Scalar> m;
  m << -g + c, det.delta + s,
       -det.delta + s, -g - c;
  return m;
}

template <typename Scalar>
Matrix2<Scalar> Rotation(Scalar angle) {
  using std::cos;
  using std::sin;
  Matrix2<Scalar> r;
  r << cos(angle), -sin(angle),
       sin(angle), cos(angle);
  return r;
}

}  // namespace opasim
