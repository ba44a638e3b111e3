#include "opasim/quantum_spectra.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "opasim/squeezed_source.h"

namespace opasim {
namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;
using CMat = ComplexMatrix2<double>;

SpectralMatrix<double> RandomPhysical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  const double r = 1.5 * u(rng);
  const double n = 1 + 2 * u(rng);
  return Rotate(SpectralMatrix<double>::Diagonal(n * std::exp(-2 * r),
                                                 n * std::exp(2 * r)),
                kPi * u(rng));
}

TEST(PortTransferTest, LosslessResonantReflectionIsIdentity) {
  const auto d = CavityDecays<double>::SingleEnded(2.0);
  const CMat t = PortTransferMatrix(0.0, d, PumpDrive<double>::Off(),
                                    Detuning<double>{0}, Port::kOutputMirror)
                     .matrix;
  EXPECT_TRUE(t.isApprox(CMat::Identity(), 1e-15));
}

TEST(PortTransferTest, LosslessOffResonanceSidebandIsUnitModulus) {
  const double g = 2.0;
  const auto d = CavityDecays<double>::SingleEnded(g);
  const CMat t = PortTransferMatrix(g, d, PumpDrive<double>::Off(),
                                    Detuning<double>{0}, Port::kOutputMirror)
                     .matrix;
  const Complex expected = 2 * g / Complex(g, -g) - 1.0;
  EXPECT_NEAR(std::abs(expected), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(t(0, 0) - expected), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t.determinant()), 1.0, 1e-14);
}

TEST(PortTransferTest, ResonantGainMatchesClassical) {
  const auto d = CavityDecays<double>::SingleEnded(1.0);
  const CMat t = PortTransferMatrix(0.0, d, PumpDrive<double>(0.5),
                                    Detuning<double>{0}, Port::kOutputMirror)
                     .matrix;
  EXPECT_NEAR(t(0, 0).real(), 3.0, 1e-14);
  EXPECT_NEAR(t(1, 1).real(), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(std::abs(t(0, 1)), 0.0, 1e-15);
}

TEST(PortTransferTest, RealityConditionAndPumpOffScalar) {
  const CavityDecays<double> d(0.2, 1.0, 0.3);
  for (Port port : kAllPorts) {
    const PumpDrive<double> pump(0.6, 1.1);
    const Detuning<double> det{0.7};
    const CMat plus = PortTransferMatrix(1.3, d, pump, det, port).matrix;
    const CMat minus = PortTransferMatrix(-1.3, d, pump, det, port).matrix;
    EXPECT_TRUE(minus.isApprox(plus.conjugate(), 1e-14));

    const CMat off = PortTransferMatrix(0.9, d, PumpDrive<double>::Off(),
                                        Detuning<double>{0}, port)
                         .matrix;
    EXPECT_NEAR(std::abs(off(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(off(0, 0) - off(1, 1)), 0.0, 1e-15);
  }
}

TEST(OutputSpectralMatrixTest, VacuumFixedPointWithPumpOff) {
  const CavityDecays<double> d(0.3, 1.0, 0.4);
  for (double delta : {-3.0, 0.0, 1.5}) {
    for (double w : {0.0, 0.5, -2.0}) {
      const auto s = OutputSpectralMatrix(w, d, PumpDrive<double>::Off(),
                                          Detuning<double>{delta},
                                          PortInputs<double>{});
      EXPECT_TRUE(s.matrix().isApprox(CMat::Identity(), 1e-12));
    }
  }
}

TEST(OutputSpectralMatrixTest, LosslessOpoClosedForm) {
  const double g = 1.7;
  const auto d = CavityDecays<double>::SingleEnded(g);
  for (double x : {0.1, 0.5, 0.9}) {
    for (double w : {0.0, 0.4, 2.0}) {
      const auto s = OutputSpectralMatrix(w * g, d, PumpDrive<double>(x),
                                          Detuning<double>{0},
                                          PortInputs<double>{});
      const double plus = 1 + 4 * x / ((1 - x) * (1 - x) + w * w);
      const double minus = 1 - 4 * x / ((1 + x) * (1 + x) + w * w);
      EXPECT_NEAR(s.s_xx() / plus, 1.0, 1e-9);
      EXPECT_NEAR(s.s_yy() / minus, 1.0, 1e-9);
      EXPECT_NEAR(s.determinant(), 1.0, 1e-9);
    }
  }
}

TEST(OutputSpectralMatrixTest, EmptyCavityDispersionRotatesSqueezing) {
  const double g = 1.0;
  const auto d = CavityDecays<double>::SingleEnded(g);
  PortInputs<double> in;
  in.output_mirror = SpectralMatrix<double>::Diagonal(0.63, 1 / 0.63);
  const double w = 0.7 * g;
  const auto s = OutputSpectralMatrix(w, d, PumpDrive<double>::Off(),
                                      Detuning<double>{g}, in);
  // Direct arithmetic: T = 2 g (-i w I - M)^-1 - I with M = [[-g, D], [-D, -g]].
  CMat a;
  a << Complex(g, -w), Complex(-g, 0), Complex(g, 0), Complex(g, -w);
  const CMat t = 2 * g * a.inverse() - CMat::Identity();
  const CMat expected = t * in.output_mirror.matrix() * t.adjoint();
  EXPECT_TRUE(s.matrix().isApprox(expected, 1e-12));
  EXPECT_GT(std::abs(s.s_xy()), 1e-3);
  EXPECT_NEAR(s.determinant(), 1.0, 1e-9);
}

TEST(OutputSpectralMatrixTest, RejectsUnphysicalInput) {
  PortInputs<double> in;
  in.input_mirror = SpectralMatrix<double>::Diagonal(0.5, 1.5);
  EXPECT_THROW(OutputSpectralMatrix(0.0, CavityDecays<double>(0.1, 1, 0),
                                    PumpDrive<double>::Off(),
                                    Detuning<double>{0}, in),
               ValidationError);
}

TEST(OutputSpectralMatrixTest, PhysicalityPurityAndUncertainty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const CavityDecays<double> d(u(rng), 0.05 + u(rng), u(rng));
    const PumpDrive<double> pump(0.98 * u(rng), 2 * kPi * u(rng));
    const double g = d.gamma_total();
    const Detuning<double> det{g * (10 * u(rng) - 5)};
    const double w = g * (10 * u(rng) - 5);
    const PortInputs<double> in{RandomPhysical(rng), RandomPhysical(rng),
                                RandomPhysical(rng)};
    const auto s = OutputSpectralMatrix(w, d, pump, det, in);
    EXPECT_GE(s.determinant(), 1 - 1e-9);
    const auto ev = s.eigenvalues();
    EXPECT_GE(ev(0) * ev(1), 1 - 1e-9);
    EXPECT_GE(ev(0), 0.0);

    // Vacuum inputs obey the deamplified floor 1 - 4x/(1+x)^2.
    const auto vac =
        OutputSpectralMatrix(w, d, pump, det, PortInputs<double>{});
    const double x = pump.x();
    for (double theta : {0.0, 0.8, 2.0}) {
      EXPECT_GE(HomodyneSpectrum(vac, DetectionChain<double>{theta, 1}),
                1 - 4 * x / ((1 + x) * (1 + x)) - 1e-12);
    }

    // Pure input on a lossless one-port stays pure.
    const auto one_port = CavityDecays<double>::SingleEnded(g);
    PortInputs<double> pure;
    const double r = u(rng);
    pure.output_mirror = Rotate(
        SpectralMatrix<double>::Diagonal(std::exp(-r), std::exp(r)), u(rng));
    EXPECT_NEAR(OutputSpectralMatrix(w, one_port, pump, det, pure).determinant(),
                1.0, 1e-9);
  }
}

TEST(HomodyneSpectrumTest, Examples) {
  const auto vac = SpectralMatrix<double>::Vacuum();
  EXPECT_DOUBLE_EQ(HomodyneSpectrum(vac, DetectionChain<double>{1.3, 0.4}), 1.0);
  const auto s = SpectralMatrix<double>::Diagonal(0.5, 2.0);
  EXPECT_NEAR(HomodyneSpectrum(s, DetectionChain<double>{0, 1}), 0.5, 1e-15);
  EXPECT_NEAR(HomodyneSpectrum(s, DetectionChain<double>{kPi / 2, 1}), 2.0,
              1e-15);
  const double lossy = HomodyneSpectrum(s, DetectionChain<double>{0, 0.8});
  EXPECT_NEAR(lossy, 0.6, 1e-15);
  EXPECT_NEAR(ToDecibels(lossy), -2.2185, 1e-4);
  EXPECT_THROW(HomodyneSpectrum(s, DetectionChain<double>{0, 0}),
               ValidationError);
}

TEST(HomodyneSpectrumTest, LossContracts) {
  for (double raw_xx : {0.3, 0.9, 1.4, 5.0}) {
    const auto s = SpectralMatrix<double>::Diagonal(raw_xx, 1 / raw_xx + 1);
    for (double eta : {0.1, 0.5, 0.99}) {
      const double det = HomodyneSpectrum(s, DetectionChain<double>{0, eta});
      EXPECT_LT(std::abs(det - 1), std::abs(raw_xx - 1));
    }
  }
}

TEST(SymmetrizeTest, RealityCondition) {
  const CavityDecays<double> d(0.1, 1.0, 0.2);
  PortInputs<double> in;
  in.output_mirror =
      Rotate(SpectralMatrix<double>::Diagonal(0.63, 1 / 0.63), 0.4);
  const PumpDrive<double> pump(0.7, 0.3);
  const Detuning<double> det{1.2};
  const auto plus = OutputSpectralMatrix(0.8, d, pump, det, in);
  const auto minus = OutputSpectralMatrix(-0.8, d, pump, det, in);
  EXPECT_GT(std::abs(plus.s_xy().imag()), 1e-6);
  EXPECT_TRUE(minus.matrix().isApprox(plus.matrix().transpose(), 1e-12));
  const auto sym = SymmetrizeOverSidebands(plus, minus);
  EXPECT_TRUE(sym.matrix().isApprox(plus.RealPart().matrix(), 1e-12));
  EXPECT_TRUE(SymmetrizeOverSidebands(SpectralMatrix<double>::Vacuum(),
                                      SpectralMatrix<double>::Vacuum())
                  .matrix()
                  .isApprox(CMat::Identity()));
}

TEST(SymmetrizeTest, DetectsBrokenReality) {
  const auto a = SpectralMatrix<double>::Diagonal(1.0, 1.0);
  const auto b = SpectralMatrix<double>::Diagonal(2.0, 1.0);
  EXPECT_THROW(SymmetrizeOverSidebands(a, b), std::logic_error);
}

}  // namespace
}  // namespace opasim
