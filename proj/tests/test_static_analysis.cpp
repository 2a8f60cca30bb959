#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ptzeno/floquet.hpp"
#include "ptzeno/static_analysis.hpp"

namespace ptzeno {
namespace {

TEST(StaticSpectrum, SymmetricPhase) {
  const auto s = static_spectrum({0.5, 1.0});
  EXPECT_EQ(s.gamma0_slow, 1.0);
  EXPECT_EQ(s.gamma0_fast, 1.0);
  EXPECT_EQ(s.phase, Phase::PTS);
}

TEST(StaticSpectrum, ExceptionalPoint) {
  const auto s = static_spectrum({1.0, 1.0});
  EXPECT_EQ(s.gamma0_slow, 2.0);
  EXPECT_EQ(s.gamma0_fast, 2.0);
  EXPECT_EQ(s.phase, Phase::EP);
}

TEST(StaticSpectrum, BrokenPhase) {
  const auto s = static_spectrum({5.0, 1.0});
  EXPECT_NEAR(s.gamma0_slow, 2.0 * (5.0 - std::sqrt(24.0)), 1e-14);
  EXPECT_NEAR(s.gamma0_fast, 2.0 * (5.0 + std::sqrt(24.0)), 1e-13);
  EXPECT_NEAR(s.gamma0_slow, 0.2020, 1e-4);
  EXPECT_NEAR(s.gamma0_fast, 19.7980, 1e-4);
  EXPECT_EQ(s.phase, Phase::PTB);
}

TEST(StaticSpectrumProperty, SumProductAndEigenvalues) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 2000; ++k) {
    const StaticParams p{testing::log_uniform(rng, 1e-3, 1e4), testing::log_uniform(rng, 0.1, 10.0)};
    const auto s = static_spectrum(p);
    EXPECT_NEAR(s.gamma0_slow + s.gamma0_fast, 4.0 * p.gamma0, 1e-10 * std::max(1.0, p.gamma0));
    if (s.phase == Phase::PTB) {
      EXPECT_NEAR(s.gamma0_slow * s.gamma0_fast / (4.0 * p.j0 * p.j0), 1.0, 1e-10);
    }
    // Against the numerically diagonalized H_L.
    const auto r = eig2(build_h_l({p.j0}, p.gamma0));
    const double a = -2.0 * r.pairs[0].value.imag();
    const double b = -2.0 * r.pairs[1].value.imag();
    const double scale = std::max(1.0, p.gamma0);
    EXPECT_NEAR(std::min(a, b), s.gamma0_slow, 1e-12 * scale * scale);
    EXPECT_NEAR(std::max(a, b), s.gamma0_fast, 1e-12 * scale);
  }
}

// The rates have a square-root branch point at gamma0 = J0; they approach 2 J0
// like 2 sqrt(2 delta) from the broken side.
TEST(StaticSpectrumProperty, ContinuousAtExceptionalPoint) {
  const double j0 = 1.0;
  for (double delta : {1e-6, 1e-8, 1e-10, 1e-12, 1e-14}) {
    for (double g : {j0 * (1.0 - delta), j0 * (1.0 + delta)}) {
      const auto s = static_spectrum({g, j0});
      const double bound = 2.0 * std::sqrt(2.0 * delta) * 1.01 + 2.0 * delta;
      EXPECT_LE(std::abs(s.gamma0_slow - 2.0 * j0), bound) << g;
      EXPECT_LE(std::abs(s.gamma0_fast - 2.0 * j0), bound) << g;
    }
  }
  const auto close = static_spectrum({j0 * (1.0 + 1e-17), j0});
  EXPECT_NEAR(close.gamma0_slow, 2.0 * j0, 1e-8);
  EXPECT_NEAR(close.gamma0_fast, 2.0 * j0, 1e-8);
}

TEST(StaticAsymptotics, Values) {
  const auto [slow, fast] = static_asymptotics({5.0, 1.0});
  EXPECT_DOUBLE_EQ(slow, 0.2);
  EXPECT_DOUBLE_EQ(fast, 20.0);
  const auto [s100, f100] = static_asymptotics({100.0, 1.0});
  EXPECT_DOUBLE_EQ(s100, 0.01);
  EXPECT_DOUBLE_EQ(f100, 400.0);
  const auto exact = static_spectrum({100.0, 1.0});
  // Series: Gamma0- = (J0^2/gamma0)(1 + J0^2/(4 gamma0^2) + ...)
  EXPECT_NEAR(exact.gamma0_slow / s100 - 1.0, 2.5e-5, 1e-8);
}

TEST(StaticAsymptotics, DomainError) {
  EXPECT_THROW(static_asymptotics({1.0, 1.0}), std::domain_error);
  EXPECT_THROW(static_asymptotics({0.5, 1.0}), std::domain_error);
}

TEST(StaticAsymptotics, SlowLimitErrorDecreasesMonotonically) {
  double previous = INFINITY;
  for (double g : {2.0, 5.0, 10.0, 50.0, 100.0}) {
    const double err = std::abs(static_spectrum({g, 1.0}).gamma0_slow / static_asymptotics({g, 1.0}).first - 1.0);
    EXPECT_LT(err, previous) << g;
    previous = err;
  }
}

TEST(ProjectiveLimitRate, DirectEvaluation) {
  EXPECT_NEAR(projective_limit_rate({1.0}, {10.0, 0.2, 0.5}), 0.22, 1e-15);
}

TEST(ProjectiveLimitRate, ContinuousTermOnlyWhenOffTimeVanishes) {
  const DriveProtocol d{10.0, 0.2, 0.2 + 1e-12};
  EXPECT_NEAR(projective_limit_rate({1.0}, d), 0.1 * 0.2 / d.period, 1e-12);
}

TEST(MeasurementDecayRate, DirectEvaluation) {
  EXPECT_NEAR(measurement_decay_rate({2.0, 40.0, 0.2, 0.3}), 0.22, 1e-15);
}

TEST(MeasurementDecayRate, ContinuousObservationLimit) {
  const double j0 = 1.0, gamma0 = 25.0;
  const MeasurementParams m{2.0 * j0, 4.0 * gamma0, 0.3, 1e-12};
  EXPECT_NEAR(measurement_decay_rate(m), m.omega_r * m.omega_r / m.gamma_c, 1e-12);
  // Same as the strong-dissipation slow mode J0^2/gamma0.
  EXPECT_NEAR(measurement_decay_rate(m), static_asymptotics({gamma0, j0}).first, 1e-12);
}

TEST(MeasurementDecayRate, IdealProjectiveLimit) {
  // gamma_c -> infinity: omega_R^2 delta_t^2 / (4 (t_p + delta_t)) -> omega_R^2 delta_t / 4 as t_p -> 0.
  const MeasurementParams m{2.0, 1e300, 1e-15, 0.05};
  EXPECT_NEAR(measurement_decay_rate(m), 4.0 * 0.05 / 4.0, 1e-14);
}

TEST(MeasurementDecayRate, HomogeneousOfDegreeOne) {
  const MeasurementParams m{1.7, 12.0, 0.11, 0.37};
  const double s = 3.5;
  const MeasurementParams scaled{s * m.omega_r, s * m.gamma_c, m.t_p / s, m.delta_t / s};
  EXPECT_NEAR(measurement_decay_rate(scaled), s * measurement_decay_rate(m), 1e-13);
}

TEST(MeasurementDecayRate, RejectsNonPositive) {
  EXPECT_THROW(measurement_decay_rate({0.0, 1.0, 1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(measurement_decay_rate({1.0, 1.0, 1.0, -1.0}), std::invalid_argument);
}

TEST(EquivalenceProperty, ProjectiveEqualsMeasurement) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 1000; ++k) {
    const SystemParams sys{testing::log_uniform(rng, 0.1, 10.0)};
    const double tau1 = testing::log_uniform(rng, 1e-3, 1.0);
    const DriveProtocol d{testing::log_uniform(rng, 0.1, 1e3), tau1, tau1 + testing::log_uniform(rng, 1e-3, 10.0)};
    const double a = projective_limit_rate(sys, d);
    const double b = measurement_decay_rate(equivalent_measurement(sys, d));
    EXPECT_LT(std::abs(a - b), 1e-12 * std::max(1.0, a));
  }
}

// The closed form is the gamma0 tau1 >> 1, J0 tau2 << 1, gamma0 tau2 >> 1 limit of the
// Floquet slow rate. Corrections scale like 1/(gamma0 tau2) and (J0 tau2)^2.
TEST(ProjectiveLimitRate, FloquetSlowRateConvergesInFrequentMeasurementRegime) {
  const SystemParams sys{1.0};
  double previous = INFINITY;
  for (double gamma0 : {200.0, 2e3, 2e4, 2e5}) {
    double worst = 0.0;
    for (double tau2 : {0.05, 0.08, 0.1, 0.15}) {
      const double tau1 = 10.0 / gamma0;
      const DriveProtocol d{gamma0, tau1, tau1 + tau2};
      const double slow = floquet_spectrum(sys, d).gamma_slow;
      const double proj = projective_limit_rate(sys, d);
      worst = std::max(worst, std::abs(slow - proj) / proj);
    }
    EXPECT_LT(worst, previous) << gamma0;
    previous = worst;
    if (gamma0 >= 2e4) {
      EXPECT_LT(worst, 0.05) << gamma0;
    }
  }
}

}  // namespace
}  // namespace ptzeno
