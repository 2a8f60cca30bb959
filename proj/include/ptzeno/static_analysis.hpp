#pragma once

// Static dissipation (continuous observation) and the frequent-measurement limit.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "ptzeno/floquet.hpp"
#include "ptzeno/model.hpp"

namespace ptzeno {

struct StaticSpectrum {
  Cplx lambda_plus;   // -i gamma0 + sqrt(J0^2 - gamma0^2)
  Cplx lambda_minus;  // -i gamma0 - sqrt(J0^2 - gamma0^2)
  double gamma0_slow = 0.0;
  double gamma0_fast = 0.0;
  Phase phase = Phase::PTS;
};

struct MeasurementParams {
  double omega_r = 0.0;  // Rabi frequency
  double gamma_c = 0.0;  // decay rate of the measured level
  double t_p = 0.0;      // measurement pulse duration
  double delta_t = 0.0;  // interval between pulses
};

inline void validate(const MeasurementParams& m) {
  const auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(m.omega_r) || !ok(m.gamma_c) || !ok(m.t_p) || !ok(m.delta_t))
    throw std::invalid_argument("measurement parameters must be finite and > 0");
}

/// Eigenvalues of H_L with constant gamma0 and their decay rates -2 Im(lambda).
inline StaticSpectrum static_spectrum(const StaticParams& p) {
  validate(p);
  const double g = p.gamma0;
  const double j = p.j0;
  StaticSpectrum out;
  if (std::abs(g - j) <= 1e-12 * j) {
    out.lambda_plus = out.lambda_minus = Cplx(0.0, -g);
    out.gamma0_slow = out.gamma0_fast = 2.0 * g;
    out.phase = Phase::EP;
  } else if (g < j) {
    const double r = std::sqrt((j - g) * (j + g));
    out.lambda_plus = Cplx(r, -g);
    out.lambda_minus = Cplx(-r, -g);
    out.gamma0_slow = out.gamma0_fast = 2.0 * g;
    out.phase = Phase::PTS;
  } else {
    const double r = std::sqrt((g - j) * (g + j));
    const double slow_half = j * j / (g + r);  // g - r without cancellation
    out.lambda_plus = Cplx(0.0, -slow_half);
    out.lambda_minus = Cplx(0.0, -(g + r));
    out.gamma0_slow = 2.0 * slow_half;
    out.gamma0_fast = 2.0 * (g + r);
    out.phase = Phase::PTB;
  }
  return out;
}

/// Strong-dissipation limits (J0^2/gamma0, 4 gamma0) of the slow and fast rates.
inline std::pair<double, double> static_asymptotics(const StaticParams& p) {
  validate(p);
  if (!(p.gamma0 > p.j0))
    throw std::domain_error("static_asymptotics: requires gamma0 > j0 (PT-broken phase)");
  return {p.j0 * p.j0 / p.gamma0, 4.0 * p.gamma0};
}

/// Decay rate in the large-gamma0, frequent-pulse limit:
/// (J0^2/gamma0)(tau1/T) + J0^2 tau2^2 / T, with tau2 = T - tau1.
/// The regime gamma0 >> J0, J0 tau2 << 1 is the caller's responsibility.
inline double projective_limit_rate(const SystemParams& sys, const DriveProtocol& drive) {
  validate(sys);
  validate(drive);
  if (!(drive.gamma0 > 0.0)) throw std::domain_error("projective_limit_rate: requires gamma0 > 0");
  const double j2 = sys.j0 * sys.j0;
  const double t = drive.period;
  const double tau2 = drive.tau2();
  return j2 / drive.gamma0 * (drive.tau1 / t) + j2 * tau2 * tau2 / t;
}

/// Survival decay rate 1/tau under pulsed measurement of finite duration.
inline double measurement_decay_rate(const MeasurementParams& m) {
  validate(m);
  const double w2 = m.omega_r * m.omega_r;
  const double cycle = m.t_p + m.delta_t;
  return w2 / m.gamma_c * m.t_p / cycle + w2 / 4.0 * m.delta_t * m.delta_t / cycle;
}

/// Measurement parameters equivalent to a square-wave drive:
/// omega_R = 2 J0, gamma_c = 4 gamma0, t_p = tau1, delta_t = T - tau1.
inline MeasurementParams equivalent_measurement(const SystemParams& sys, const DriveProtocol& drive) {
  return {2.0 * sys.j0, 4.0 * drive.gamma0, drive.tau1, drive.tau2()};
}

}  // namespace ptzeno
