#pragma once

#include <cmath>
#include <numbers>

#include "opasim/errors.h"
#include "opasim/model_core.h"
#include "opasim/quantum_spectra.h"

namespace opasim {

/// Subthreshold OPO emitting squeezed vacuum; squeezed axis is X.
template <typename Scalar = double>
struct OpoSource {
  CavityDecays<Scalar> decays;
  Scalar x;

  Scalar escape() const { return decays.escape_efficiency(); }

  void Validate() const {
    if (!(x >= 0)) throw ValidationError("OpoSource: x must be >= 0");
    if (!(x < 1)) throw PhysicsDomainError("OpoSource: at/above threshold");
    if (!(decays.gamma_out() > 0)) {
      throw ValidationError("OpoSource: escape efficiency must be > 0");
    }
  }
};

/// Free-space output spectrum diag(S-, S+) of the OPO at sideband `omega`.
template <typename Scalar>
SpectralMatrix<Scalar> OpoOutputSpectrum(Scalar omega,
                                         const OpoSource<Scalar>& src) {
  src.Validate();
  const Scalar w = omega / src.decays.gamma_total();
  const Scalar x = src.x;
  const Scalar k = src.escape() * 4 * x;
  const Scalar s_minus = 1 - k / ((1 + x) * (1 + x) + w * w);
  const Scalar s_plus = 1 + k / ((1 - x) * (1 - x) + w * w);
  return SpectralMatrix<Scalar>::Diagonal(s_minus, s_plus, omega);
}

/// Beam-splitter loss: S -> I + eta (S - I).
template <typename Scalar>
SpectralMatrix<Scalar> ApplyLoss(const SpectralMatrix<Scalar>& s, Scalar eta) {
  if (!(eta > 0 && eta <= 1)) {
    throw ValidationError("loss transmission eta must lie in (0, 1]");
  }
  const ComplexMatrix2<Scalar> id = ComplexMatrix2<Scalar>::Identity();
  return SpectralMatrix<Scalar>(id + eta * (s.matrix() - id), s.evaluated_at());
}

/// R S R^T with R the rotation by `angle`.
template <typename Scalar>
SpectralMatrix<Scalar> Rotate(const SpectralMatrix<Scalar>& s, Scalar angle) {
  const ComplexMatrix2<Scalar> r =
      Rotation(angle).template cast<std::complex<Scalar>>();
  return SpectralMatrix<Scalar>(r * s.matrix() * r.transpose(),
                                s.evaluated_at());
}

template <typename Scalar>
Scalar ToDecibels(Scalar ratio) {
  using std::log10;
  return Scalar(10) * log10(ratio);
}

/// Noise of quadrature (cos theta, sin theta) in dB relative to the SNL.
template <typename Scalar>
Scalar SqueezingDb(const SpectralMatrix<Scalar>& s, Scalar theta) {
  return ToDecibels(HomodyneSpectrum(s, DetectionChain<Scalar>{theta, 1}));
}

/// Efficiency eta* in (0, 1] at which the OPO's squeezed quadrature reads
/// `target_db`, found by bisection (the detected level is monotone in eta).
template <typename Scalar>
Scalar CalibrateEfficiency(Scalar target_db, Scalar omega,
                           const OpoSource<Scalar>& src) {
  if (!(target_db < 0)) {
    throw ValidationError("calibration target must be < 0 dB");
  }
  const SpectralMatrix<Scalar> s = OpoOutputSpectrum(omega, src);
  auto detected_db = [&](Scalar eta) {
    return SqueezingDb(ApplyLoss(s, eta), Scalar(0));
  };
  const Scalar best = detected_db(Scalar(1));
  if (best > target_db) {
    throw PhysicsDomainError(
        "unreachable target: source gives only " + std::to_string(best) +
        " dB at unit efficiency");
  }
  if (best == target_db) return Scalar(1);

  Scalar lo = 0;  // detected_db(lo) > target
  Scalar hi = 1;  // detected_db(hi) <= target
  for (int i = 0; i < 200 && hi - lo > Scalar(1e-15); ++i) {
    const Scalar mid = (lo + hi) / 2;
    if (detected_db(mid) > target_db) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace opasim
