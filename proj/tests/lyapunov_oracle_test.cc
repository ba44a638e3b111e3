#include "opasim/lyapunov_oracle.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "opasim/quantum_spectra.h"

namespace opasim {
namespace {

double RelErr(const SpectralMatrix<double>& a, const SpectralMatrix<double>& b) {
  return (a.matrix() - b.matrix()).norm() / b.matrix().norm();
}

TEST(SolveContinuousLyapunovTest, Residual) {
  Matrix2<double> a;
  a << -1.0, 2.0, -0.5, -3.0;
  Matrix2<double> q;
  q << 2.0, 0.3, 0.3, 1.0;
  const Matrix2<double> x = SolveContinuousLyapunov(a, q);
  EXPECT_LE((a * x + x * a.transpose() + q).norm(), 1e-13);
  EXPECT_NEAR(x(0, 1), x(1, 0), 1e-15);
}

TEST(SolveContinuousLyapunovTest, DiagonalCase) {
  const Matrix2<double> a = Eigen::Vector2d(-0.5, -1.5).asDiagonal();
  const Matrix2<double> q = 2 * Matrix2<double>::Identity();
  const Matrix2<double> x = SolveContinuousLyapunov(a, q);
  EXPECT_NEAR(x(0, 0), 2.0, 1e-14);
  EXPECT_NEAR(x(1, 1), 2.0 / 3.0, 1e-14);
}

TEST(LyapunovRegressionOracleTest, VacuumEmptyCavity) {
  const CavityDecays<double> d(0.2, 1.0, 0.3);
  const std::vector<double> omegas = {0.0, 0.5, 2.0};
  const auto out = LyapunovRegressionOracle<double>(
      omegas, d, PumpDrive<double>::Off(), Detuning<double>{0.4},
      PortCovariances<double>{});
  for (const auto& s : out) {
    EXPECT_TRUE(s.matrix().isApprox(ComplexMatrix2<double>::Identity(), 1e-12));
  }
}

TEST(LyapunovRegressionOracleTest, LosslessOpoClosedForm) {
  const auto d = CavityDecays<double>::SingleEnded(1.0);
  const double x = 0.5;
  const std::vector<double> omegas = {0.0, 0.5, 1.0, 3.0};
  const auto out = LyapunovRegressionOracle<double>(
      omegas, d, PumpDrive<double>(x), Detuning<double>{0},
      PortCovariances<double>{});
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    const double w = omegas[k];
    EXPECT_NEAR(out[k].s_xx() / (1 + 4 * x / ((1 - x) * (1 - x) + w * w)), 1.0,
                1e-6);
    EXPECT_NEAR(out[k].s_yy() / (1 - 4 * x / ((1 + x) * (1 + x) + w * w)), 1.0,
                1e-6);
  }
}

TEST(LyapunovRegressionOracleTest, DetunedSqueezedInputMatchesTransferRoute) {
  const CavityDecays<double> d(0.1, 0.8, 0.1);
  const double g = d.gamma_total();
  const PumpDrive<double> pump(std::sqrt(0.5), 0.3);
  const Detuning<double> det{1.3 * g};
  PortCovariances<double> cov;
  cov.output_mirror =
      Eigen::Vector2d(std::pow(10.0, -0.2), std::pow(10.0, 0.2)).asDiagonal();
  const std::vector<double> omegas = {0.0, 0.35 * g, 1.0 * g, 2.7 * g};
  const auto oracle =
      LyapunovRegressionOracle<double>(omegas, d, pump, det, cov);
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    PortInputs<double> in;
    in.output_mirror = SpectralMatrix<double>::FromReal(cov.output_mirror);
    const auto direct = OutputSpectralMatrix(omegas[k], d, pump, det, in);
    EXPECT_LE(RelErr(oracle[k], direct), 1e-4) << "omega=" << omegas[k];
  }
}

}  // namespace
}  // namespace opasim
