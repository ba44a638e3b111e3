#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "opasim/errors.h"
#include "opasim/model_core.h"

namespace opasim {

/// 2x2 Hermitian quadrature noise spectral matrix at one sideband frequency,
/// normalized so the vacuum is the identity (shot-noise limit = 1).
template <typename Scalar = double>
class SpectralMatrix {
 public:
  using Complex = std::complex<Scalar>;

  SpectralMatrix() : SpectralMatrix(ComplexMatrix2<Scalar>::Identity()) {}

  /// Stores the Hermitian part of `m`.
  explicit SpectralMatrix(const ComplexMatrix2<Scalar>& m,
                          Scalar evaluated_at = Scalar(0))
      : m_((m + m.adjoint()) / Scalar(2)), omega_(evaluated_at) {
    m_(0, 0) = Complex(m_(0, 0).real(), 0);
    m_(1, 1) = Complex(m_(1, 1).real(), 0);
  }

  static SpectralMatrix Vacuum(Scalar omega = Scalar(0)) {
    return SpectralMatrix(ComplexMatrix2<Scalar>::Identity(), omega);
  }

  static SpectralMatrix Diagonal(Scalar s_xx, Scalar s_yy,
                                 Scalar omega = Scalar(0)) {
    ComplexMatrix2<Scalar> m = ComplexMatrix2<Scalar>::Zero();
    m(0, 0) = s_xx;
    m(1, 1) = s_yy;
    return SpectralMatrix(m, omega);
  }

  static SpectralMatrix FromReal(const Matrix2<Scalar>& m,
                                 Scalar omega = Scalar(0)) {
    return SpectralMatrix(m.template cast<Complex>(), omega);
  }

  Scalar s_xx() const { return m_(0, 0).real(); }
  Scalar s_yy() const { return m_(1, 1).real(); }
  Complex s_xy() const { return m_(0, 1); }
  Scalar evaluated_at() const { return omega_; }
  const ComplexMatrix2<Scalar>& matrix() const { return m_; }

  Scalar determinant() const { return s_xx() * s_yy() - std::norm(s_xy()); }

  /// Real eigenvalues in ascending order.
  Eigen::Matrix<Scalar, 2, 1> eigenvalues() const {
    using std::sqrt;
    const Scalar mean = (s_xx() + s_yy()) / 2;
    const Scalar half_diff = (s_xx() - s_yy()) / 2;
    const Scalar radius = sqrt(half_diff * half_diff + std::norm(s_xy()));
    return {mean - radius, mean + radius};
  }

  /// Positive semidefinite with det >= 1 - tol.
  bool IsPhysical(Scalar tol = Scalar(1e-9)) const {
    return s_xx() >= 0 && s_yy() >= 0 && determinant() >= 1 - tol;
  }

  SpectralMatrix RealPart() const {
    return SpectralMatrix(m_.real().template cast<Complex>(), omega_);
  }

 private:
  ComplexMatrix2<Scalar> m_;
  Scalar omega_;
};

enum class Port { kOutputMirror, kInputMirror, kInternalLoss };

inline const char* PortName(Port port) {
  switch (port) {
    case Port::kOutputMirror: return "output_mirror";
    case Port::kInputMirror: return "input_mirror";
    case Port::kInternalLoss: return "internal_loss";
  }
  return "?";
}

template <typename Scalar = double>
struct PortTransfer {
  Port port;
  ComplexMatrix2<Scalar> matrix;
};

/// Homodyne local-oscillator angle and lumped efficiency after reflection.
template <typename Scalar = double>
struct DetectionChain {
  Scalar lo_angle = Scalar(0);
  Scalar efficiency = Scalar(1);

  void Validate() const {
    if (!(efficiency > 0 && efficiency <= 1)) {
      throw ValidationError("DetectionChain: efficiency must lie in (0, 1]");
    }
  }
};

/// Cavity susceptibility (-i omega I - M)^-1.
template <typename Scalar>
ComplexMatrix2<Scalar> Susceptibility(Scalar omega,
                                      const CavityDecays<Scalar>& decays,
                                      const PumpDrive<Scalar>& pump,
                                      const Detuning<Scalar>& det) {
  using Complex = std::complex<Scalar>;
  const ComplexMatrix2<Scalar> a =
      Complex(0, -omega) * ComplexMatrix2<Scalar>::Identity() -
      DriftMatrix(decays, pump, det).template cast<Complex>();
  // Below threshold det(a) has modulus >= gamma^2 (1 - x^2) > 0 for real
  // omega, so the explicit 2x2 inverse is safe.
  const Complex d = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  eigen_assert(std::abs(d) > 0);
  ComplexMatrix2<Scalar> inv;
  inv << a(1, 1), -a(0, 1),
         -a(1, 0), a(0, 0);
  return inv / d;
}

/// Transfer from one input port's quadratures to the reflected quadratures
/// at the output (injection) mirror.
template <typename Scalar>
PortTransfer<Scalar> PortTransferMatrix(Scalar omega,
                                        const CavityDecays<Scalar>& decays,
                                        const PumpDrive<Scalar>& pump,
                                        const Detuning<Scalar>& det,
                                        Port port) {
  using std::sqrt;
  const ComplexMatrix2<Scalar> g = Susceptibility(omega, decays, pump, det);
  switch (port) {
    case Port::kOutputMirror:
      return {port, Scalar(2) * decays.gamma_out() * g -
                        ComplexMatrix2<Scalar>::Identity()};
    case Port::kInputMirror:
      return {port,
              Scalar(2) * sqrt(decays.gamma_out() * decays.gamma_in()) * g};
    case Port::kInternalLoss:
      return {port,
              Scalar(2) * sqrt(decays.gamma_out() * decays.gamma_loss()) * g};
  }
  throw ValidationError("unknown port");
}

/// Input spectra entering each port. Unused ports default to vacuum.
template <typename Scalar = double>
struct PortInputs {
  SpectralMatrix<Scalar> output_mirror;
  SpectralMatrix<Scalar> input_mirror;
  SpectralMatrix<Scalar> internal_loss;

  const SpectralMatrix<Scalar>& at(Port port) const {
    switch (port) {
      case Port::kOutputMirror: return output_mirror;
      case Port::kInputMirror: return input_mirror;
      case Port::kInternalLoss: return internal_loss;
    }
    return output_mirror;
  }
};

inline constexpr std::array<Port, 3> kAllPorts = {
    Port::kOutputMirror, Port::kInputMirror, Port::kInternalLoss};

/// Spectral matrix of the field reflected from the cavity,
/// S_out = sum_k T_k S_k T_k^dagger.
template <typename Scalar>
SpectralMatrix<Scalar> OutputSpectralMatrix(Scalar omega,
                                            const CavityDecays<Scalar>& decays,
                                            const PumpDrive<Scalar>& pump,
                                            const Detuning<Scalar>& det,
                                            const PortInputs<Scalar>& inputs) {
  ComplexMatrix2<Scalar> sum = ComplexMatrix2<Scalar>::Zero();
  for (Port port : kAllPorts) {
    const SpectralMatrix<Scalar>& s_in = inputs.at(port);
    if (!s_in.IsPhysical()) {
      throw ValidationError(std::string("unphysical input spectrum on port ") +
                            PortName(port));
    }
    const ComplexMatrix2<Scalar> t =
        PortTransferMatrix(omega, decays, pump, det, port).matrix;
    sum.noalias() += t * s_in.matrix() * t.adjoint();
  }
  eigen_assert((sum - sum.adjoint()).norm() <=
               Scalar(1e-9) * (Scalar(1) + sum.norm()));
  return SpectralMatrix<Scalar>(sum, omega);
}

/// Projects onto the LO quadrature (cos theta, sin theta) and mixes in vacuum
/// for the detection efficiency. Result is SNL-normalized.
template <typename Scalar>
Scalar HomodyneSpectrum(const SpectralMatrix<Scalar>& s,
                        const DetectionChain<Scalar>& chain) {
  using std::cos;
  using std::sin;
  chain.Validate();
  const Scalar c = cos(chain.lo_angle);
  const Scalar sn = sin(chain.lo_angle);
  const Scalar raw =
      c * c * s.s_xx() + sn * sn * s.s_yy() + 2 * c * sn * s.s_xy().real();
  return 1 + chain.efficiency * (raw - 1);
}

/// Two-sided average of the spectra at +Omega and -Omega. The reality
/// condition T(-w) = conj(T(w)) makes this Re(s_plus); a mismatch is a bug.
template <typename Scalar>
SpectralMatrix<Scalar> SymmetrizeOverSidebands(
    const SpectralMatrix<Scalar>& s_plus,
    const SpectralMatrix<Scalar>& s_minus) {
  using std::abs;
  const SpectralMatrix<Scalar> avg(
      (s_plus.matrix() + s_minus.matrix()) / Scalar(2),
      abs(s_plus.evaluated_at()));
  const Scalar mismatch = (avg.matrix() - s_plus.matrix().real().template
                                              cast<std::complex<Scalar>>())
                              .norm();
  if (mismatch > Scalar(1e-9) * (1 + s_plus.matrix().norm())) {
    throw std::logic_error("sideband reality condition violated");
  }
  return avg;
}

}  // namespace opasim
