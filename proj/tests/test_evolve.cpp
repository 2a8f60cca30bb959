#include <gtest/gtest.h>

#include <cmath>

#include "ptzeno/evolve.hpp"
#include "ptzeno/floquet.hpp"

namespace ptzeno {
namespace {

TEST(Propagate, LosslessPreservesNorm) {
  const auto traj = propagate({1.7}, {0.0, 0.3, 2.2}, StateVec::spin_up(), 100, 8);
  ASSERT_EQ(traj.size(), 100u * 8u + 1u);
  for (double p : traj.norms) EXPECT_NEAR(p, 1.0, 1e-12);
}

TEST(Propagate, IsolatedLossyLevel) {
  const DriveProtocol d{1.5, 0.3, 1.0};
  const auto traj = propagate({0.0}, d, StateVec::spin_down(), 5, 10);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    const double full = std::floor(t / d.period + 1e-12);
    const double on_time = full * d.tau1 + std::min(t - full * d.period, d.tau1);
    EXPECT_NEAR(traj.norms[i], std::exp(-4.0 * d.gamma0 * on_time), 1e-12) << t;
  }
}

TEST(Propagate, StroboscopicStatesAreMonodromyPowers) {
  const SystemParams sys{1.0};
  const DriveProtocol d{3.0, 0.2, 1.4};
  const auto traj = propagate(sys, d, StateVec::spin_up(), 30, 7);
  const Mat2C g = monodromy_numeric(sys, d, false);
  Vec2C psi = StateVec::spin_up().as_vec();
  for (int n = 0; n <= 30; ++n) {
    const auto& s = traj.states[static_cast<std::size_t>(n) * traj.stroboscopic_stride];
    EXPECT_NEAR(traj.times[static_cast<std::size_t>(n) * 7], n * d.period, 1e-12);
    EXPECT_LT(std::abs(s.up - psi.v0) + std::abs(s.down - psi.v1), 1e-11) << n;
    psi = g * psi;
  }
}

TEST(Propagate, InvalidArguments) {
  const DriveProtocol d{1.0, 0.1, 1.0};
  EXPECT_THROW(propagate({1.0}, d, StateVec::spin_up(), 0, 4), std::invalid_argument);
  EXPECT_THROW(propagate({1.0}, d, StateVec::spin_up(), 3, 1), std::invalid_argument);
  EXPECT_THROW(propagate({1.0}, d, StateVec{1.0, 1.0}, 3, 4), std::invalid_argument);
}

TEST(PropagateProperty, NormNonIncreasingAndTimesIncreasing) {
  for (double gamma0 : {0.0, 0.3, 1.0, 4.0, 50.0, 200.0}) {
    for (double omega : {0.5, 1.0, 2.0, 7.0}) {
      const auto d = DriveProtocol::from_omega(gamma0, 0.05, omega);
      const StateVec mixed{Cplx(0.6, 0.0), Cplx(0.0, 0.8)};
      const auto traj = propagate({1.0}, d, mixed, 40, 16);
      for (std::size_t i = 1; i < traj.size(); ++i) {
        EXPECT_GT(traj.times[i], traj.times[i - 1]);
        EXPECT_LE(traj.norms[i], traj.norms[i - 1] * (1.0 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST(Rk4Reference, AgreesWithPropagate) {
  const SystemParams sys{1.0};
  const DriveProtocol d{2.0, 0.1, 1.0};
  const double dt = d.tau1 / 100.0;
  const auto rk = rk4_reference(sys, d, StateVec::spin_up(), 20.0 * d.period, dt);
  const auto exact = propagate(sys, d, StateVec::spin_up(), 20, 2);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    const double a = rk.norms[static_cast<std::size_t>(n) * rk.stroboscopic_stride];
    const double b = exact.norms[static_cast<std::size_t>(n) * exact.stroboscopic_stride];
    worst = std::max(worst, std::abs(a - b));
  }
  EXPECT_LT(worst, 1e-8);
}

double rk4_final_error(const SystemParams& sys, const DriveProtocol& d, double dt, int periods) {
  const auto rk = rk4_reference(sys, d, StateVec::spin_up(), periods * d.period, dt);
  const auto exact = propagate(sys, d, StateVec::spin_up(), periods, 2);
  const auto& a = rk.states.back();
  const auto& b = exact.states.back();
  return std::abs(a.up - b.up) + std::abs(a.down - b.down);
}

TEST(Rk4Reference, FourthOrderConvergence) {
  const SystemParams sys{1.0};
  const DriveProtocol d{1.0, 0.5, 2.0};
  const double e1 = rk4_final_error(sys, d, 0.05, 5);
  const double e2 = rk4_final_error(sys, d, 0.025, 5);
  const double order = std::log2(e1 / e2);
  EXPECT_GE(order, 3.7);
  EXPECT_LE(order, 4.3);
}

TEST(Rk4Reference, LosslessNormDrift) {
  const DriveProtocol d{0.0, 0.2, 1.5};
  const auto rk = rk4_reference({1.0}, d, StateVec::spin_up(), 20.0 * d.period, d.tau1 / 20.0);
  for (double p : rk.norms) EXPECT_NEAR(p, 1.0, 1e-9);
}

TEST(Rk4Reference, RejectsCoarseStep) {
  const DriveProtocol d{1.0, 0.1, 1.0};
  EXPECT_THROW(rk4_reference({1.0}, d, StateVec::spin_up(), 1.0, 0.02), std::invalid_argument);
  EXPECT_THROW(rk4_reference({1.0}, d, StateVec::spin_up(), 1.0, 0.0), std::invalid_argument);
  EXPECT_NO_THROW(rk4_reference({1.0}, d, StateVec::spin_up(), 1.0, 0.01));
}

TEST(Rk4Reference, StopsAtFinalTime) {
  const DriveProtocol d{1.0, 0.1, 1.0};
  const auto rk = rk4_reference({1.0}, d, StateVec::spin_up(), 2.345, 0.005);
  EXPECT_DOUBLE_EQ(rk.times.back(), 2.345);
  for (std::size_t i = 1; i < rk.size(); ++i) EXPECT_GT(rk.times[i], rk.times[i - 1]);
}

TEST(FitLifetime, ExactExponential) {
  Trajectory t;
  for (int i = 0; i <= 100; ++i) {
    const double time = 0.1 * i;
    t.push(time, {std::exp(-1.5 * time), 0.0});
  }
  const auto fit = fit_lifetime(t, 0.5);
  EXPECT_NEAR(fit.gamma_fit, 3.0, 1e-10);
  EXPECT_NEAR(fit.residual, 0.0, 1e-10);
}

TEST(FitLifetime, Errors) {
  Trajectory t;
  for (int i = 0; i < 15; ++i) t.push(i, {std::exp(-0.1 * i), 0.0});
  EXPECT_THROW(fit_lifetime(t, 0.5), FitError);
  EXPECT_THROW(fit_lifetime(t, 0.95), std::invalid_argument);

  Trajectory under;
  for (int i = 0; i < 40; ++i) under.push(i, {i < 30 ? std::exp(-0.1 * i) : 0.0, 0.0});
  EXPECT_THROW(fit_lifetime(under, 0.0), FitError);
}

TEST(FitLifetime, BrokenPhaseMatchesSlowMode) {
  const SystemParams sys{1.0};
  const auto d = DriveProtocol::from_omega(200.0, 0.01, 2.5);
  const auto spec = floquet_spectrum(sys, d);
  ASSERT_EQ(spec.phase, Phase::PTB);
  const auto fit = fit_lifetime(propagate(sys, d, StateVec::spin_up(), 200, 4), 0.5);
  EXPECT_NEAR(fit.gamma_fit / spec.gamma_slow, 1.0, 0.02);
}

TEST(FitLifetime, SymmetricPhaseMatchesBareLoss) {
  const SystemParams sys{1.0};
  const auto d = DriveProtocol::from_omega(200.0, 0.01, 4.0);
  const auto spec = floquet_spectrum(sys, d);
  ASSERT_EQ(spec.phase, Phase::PTS);
  const auto fit = fit_lifetime(propagate(sys, d, StateVec::spin_up(), 150, 4), 0.5);
  EXPECT_NEAR(fit.gamma_fit / (2.0 * d.gamma0 * d.tau1 / d.period), 1.0, 0.02);
}

// Any initial state with a non-negligible slow-mode component decays at the slow rate.
TEST(FitLifetimeProperty, SlowModeDominatesLateTimes) {
  const SystemParams sys{1.0};
  for (double omega : {0.9, 1.1, 2.0, 2.8}) {
    const auto d = DriveProtocol::from_omega(200.0, 0.01, omega);
    const auto spec = floquet_spectrum(sys, d);
    ASSERT_EQ(spec.phase, Phase::PTB) << omega;
    const auto eig = eig2(monodromy_numeric(sys, d, false));
    // Slow mode = larger-modulus eigenvalue of G'(T).
    const auto& slow = std::abs(eig.pairs[0].value) >= std::abs(eig.pairs[1].value) ? eig.pairs[0] : eig.pairs[1];
    for (const StateVec psi0 : {StateVec::spin_up(), StateVec::spin_down(), StateVec{Cplx(0.6), Cplx(0.0, 0.8)}}) {
      // Overlap via the left eigenvector: coefficient of the slow mode.
      const auto& fast = &slow == &eig.pairs[0] ? eig.pairs[1] : eig.pairs[0];
      const Cplx det = slow.vector.v0 * fast.vector.v1 - slow.vector.v1 * fast.vector.v0;
      const Cplx coeff = (psi0.up * fast.vector.v1 - psi0.down * fast.vector.v0) / det;
      if (std::abs(coeff) < 1e-6) continue;
      const auto fit = fit_lifetime(propagate(sys, d, psi0, 200, 2), 0.5);
      EXPECT_NEAR(fit.gamma_fit / spec.gamma_slow, 1.0, 0.02) << omega;
    }
  }
}

}  // namespace
}  // namespace ptzeno
