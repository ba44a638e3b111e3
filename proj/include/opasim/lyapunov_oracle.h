#pragma once

// Independent route to the reflected noise spectra for frequency-flat
// inputs: stationary intracavity covariance from a Lyapunov equation, output
// correlation functions by the quantum regression theorem, and a numerical
// Fourier transform. Shares only DriftMatrix with quantum_spectra.h.

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "opasim/model_core.h"
#include "opasim/quantum_spectra.h"

namespace opasim {

/// Solves A X + X A^T + Q = 0 for 2x2 real A (Hurwitz) and symmetric Q via
/// the Kronecker form (I (x) A + A (x) I) vec(X) = -vec(Q).
template <typename Scalar>
Matrix2<Scalar> SolveContinuousLyapunov(const Matrix2<Scalar>& a,
                                        const Matrix2<Scalar>& q) {
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
  const Matrix2<Scalar> id = Matrix2<Scalar>::Identity();
  Matrix4 k;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      // Column-major vec: block (i, j) of I (x) A is id(i,j) A, of A (x) I
      // is a(i,j) I.
      k.template block<2, 2>(2 * i, 2 * j) = id(i, j) * a + a(i, j) * id;
    }
  }
  const Vector4 rhs = -Eigen::Map<const Vector4>(q.data());
  Eigen::FullPivLU<Matrix4> lu(k);
  eigen_assert(lu.isInvertible());
  const Vector4 x = lu.solve(rhs);
  Matrix2<Scalar> out = Eigen::Map<const Matrix2<Scalar>>(x.data());
  return (out + out.transpose()) / Scalar(2);
}

/// Frequency-flat input covariances per port (real symmetric, vacuum = I).
template <typename Scalar = double>
struct PortCovariances {
  Matrix2<Scalar> output_mirror = Matrix2<Scalar>::Identity();
  Matrix2<Scalar> input_mirror = Matrix2<Scalar>::Identity();
  Matrix2<Scalar> internal_loss = Matrix2<Scalar>::Identity();
};

/// One-sided transform F(w) = int_0^inf e^{M t} e^{i w t} dt evaluated by
/// composite Simpson quadrature on a uniform grid out to where the slowest
/// mode has decayed below ~1e-13.
template <typename Scalar>
ComplexMatrix2<Scalar> OneSidedPropagatorTransform(const Matrix2<Scalar>& m,
                                                   Scalar omega,
                                                   Scalar slowest_rate,
                                                   Scalar fastest_rate) {
  using Complex = std::complex<Scalar>;
  using std::ceil;
  using std::abs;
  const Scalar horizon = Scalar(30) / slowest_rate;
  const Scalar rate = std::max({fastest_rate, abs(omega), slowest_rate});
  Scalar h = Scalar(0.005) / rate;
  long n = static_cast<long>(ceil(horizon / h));
  if (n % 2) ++n;
  h = horizon / Scalar(n);

  const Matrix2<Scalar> step = (m * h).exp();
  const Complex phase_step = std::polar(Scalar(1), omega * h);
  Matrix2<Scalar> prop = Matrix2<Scalar>::Identity();
  Complex phase(1, 0);
  ComplexMatrix2<Scalar> acc = ComplexMatrix2<Scalar>::Zero();
  for (long k = 0; k <= n; ++k) {
    const Scalar w = (k == 0 || k == n) ? Scalar(1) : (k % 2 ? Scalar(4)
                                                             : Scalar(2));
    acc += (w * phase) * prop.template cast<Complex>();
    prop = step * prop;
    phase *= phase_step;
  }
  return acc * (h / Scalar(3));
}

/// Stationary intracavity covariance for white inputs on every port.
template <typename Scalar>
Matrix2<Scalar> IntracavityCovariance(const CavityDecays<Scalar>& decays,
                                      const PumpDrive<Scalar>& pump,
                                      const Detuning<Scalar>& det,
                                      const PortCovariances<Scalar>& inputs) {
  const Matrix2<Scalar> diffusion =
      Scalar(2) * decays.gamma_out() * inputs.output_mirror +
      Scalar(2) * decays.gamma_in() * inputs.input_mirror +
      Scalar(2) * decays.gamma_loss() * inputs.internal_loss;
  return SolveContinuousLyapunov(DriftMatrix(decays, pump, det), diffusion);
}

/// Reflected spectral matrices on `omega_grid` from the covariance and
/// regression route. For t > 0 the output correlation is
/// 2 g_out e^{M t} (V - N_out), mirrored for t < 0, plus N_out delta(t).
template <typename Scalar>
std::vector<SpectralMatrix<Scalar>> LyapunovRegressionOracle(
    std::span<const Scalar> omega_grid, const CavityDecays<Scalar>& decays,
    const PumpDrive<Scalar>& pump, const Detuning<Scalar>& det,
    const PortCovariances<Scalar>& inputs) {
  using Complex = std::complex<Scalar>;
  using std::abs;
  const Matrix2<Scalar> m = DriftMatrix(decays, pump, det);
  const Matrix2<Scalar> v = IntracavityCovariance(decays, pump, det, inputs);
  const Matrix2<Scalar> excess = v - inputs.output_mirror;
  const Scalar g = decays.gamma_total();
  const Scalar slowest = g * (1 - pump.x());
  const Scalar fastest = g * (1 + pump.x()) + abs(det.delta);

  std::vector<SpectralMatrix<Scalar>> out;
  out.reserve(omega_grid.size());
  for (Scalar omega : omega_grid) {
    const ComplexMatrix2<Scalar> f =
        OneSidedPropagatorTransform(m, omega, slowest, fastest);
    const ComplexMatrix2<Scalar> e = excess.template cast<Complex>();
    const ComplexMatrix2<Scalar> s =
        Scalar(2) * decays.gamma_out() * (f * e + e * f.adjoint()) +
        inputs.output_mirror.template cast<Complex>();
    out.emplace_back(s, omega);
  }
  return out;
}

}  // namespace opasim
