#include <gtest/gtest.h>

#include <random>

#include "ptzeno/model.hpp"

namespace ptzeno {
namespace {

const DriveProtocol kDrive{2.0, 0.1, 1.0};

TEST(GammaOfT, SquareWaveBranches) {
  EXPECT_EQ(gamma_of_t(kDrive, 0.05), 2.0);
  EXPECT_EQ(gamma_of_t(kDrive, 0.5), 0.0);
  EXPECT_EQ(gamma_of_t(kDrive, 1.05), 2.0);
}

TEST(GammaOfT, HalfOpenPulse) {
  EXPECT_EQ(gamma_of_t(kDrive, 0.0), 2.0);
  EXPECT_EQ(gamma_of_t(kDrive, 0.1), 0.0);
}

TEST(GammaOfT, RejectsNegativeTime) {
  EXPECT_THROW(gamma_of_t(kDrive, -0.01), std::invalid_argument);
}

TEST(GammaOfT, Periodic) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  // Dyadic period so t + T is exact and fmod agrees on both sides.
  const DriveProtocol d{3.0, 0.375, 1.5};
  for (int k = 0; k < 1000; ++k) {
    const double t = u(rng);
    EXPECT_EQ(gamma_of_t(d, t), gamma_of_t(d, t + d.period)) << t;
  }
}

TEST(DriveProtocol, Validation) {
  EXPECT_THROW(validate(DriveProtocol{1.0, 0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate(DriveProtocol{1.0, 1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate(DriveProtocol{-1.0, 0.1, 1.0}), std::invalid_argument);
  EXPECT_NO_THROW(validate(DriveProtocol{0.0, 0.1, 1.0}));
  EXPECT_NEAR(DriveProtocol::from_omega(1.0, 0.1, 2.0).period, std::numbers::pi, 1e-15);
}

TEST(BuildHpt, LosslessLimitIsHermitian) {
  const Mat2C h = build_h_pt({1.3}, 0.0);
  EXPECT_EQ(h, (Mat2C{0.0, -1.3, -1.3, 0.0}));
  EXPECT_EQ(h, h.adjoint());
}

TEST(BuildHpt, Traceless) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(build_h_pt({u(rng)}, u(rng)).trace(), Cplx(0.0, 0.0));
}

TEST(BuildHl, ReproducesRabiFormWithLossyDownLevel) {
  // -J sigma_x - 2 i gamma |down><down| written out entrywise.
  const SystemParams sys{1.0};
  const Mat2C expected{0.0, -1.0, -1.0, Cplx(0.0, -1.0)};
  EXPECT_EQ(build_h_l(sys, 0.5), expected);
  EXPECT_EQ(Cplx(0.0, -0.5) * Mat2C::identity() + build_h_pt(sys, 0.5), expected);

  const Mat2C h = build_h_l(sys, 1.0);
  EXPECT_EQ(h.a22, Cplx(0.0, -2.0));
  EXPECT_EQ(h.a11, Cplx(0.0, 0.0));
  EXPECT_EQ(h.a12, Cplx(-1.0, 0.0));
  EXPECT_EQ(h.a21, Cplx(-1.0, 0.0));
}

TEST(BuildHl, TraceIsMinusTwoIGamma) {
  EXPECT_EQ(build_h_l({2.0}, 0.75).trace(), Cplx(0.0, -1.5));
  EXPECT_EQ(build_h_l({2.0}, 0.0), build_h_l({2.0}, 0.0).adjoint());
}

TEST(ModelProperty, PTInvarianceAndGlobalLoss) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 300.0);
  const Mat2C px = Mat2C::pauli_x();
  for (int k = 0; k < 1000; ++k) {
    const SystemParams sys{u(rng)};
    const double g = u(rng);
    const Mat2C h = build_h_pt(sys, g);
    EXPECT_LT(max_abs_diff(px * h.conj() * px, h), 1e-15);
    EXPECT_EQ(build_h_l(sys, g) - h, Cplx(0.0, -g) * Mat2C::identity());
  }
}

TEST(BuildHpt, RejectsNegativeGamma) {
  EXPECT_THROW(build_h_pt({1.0}, -0.1), std::invalid_argument);
}

}  // namespace
}  // namespace ptzeno
