#pragma once

// Two-level dissipative Rabi system and its square-wave dissipation drive.
//
// Basis convention: |up> = (1, 0), |down> = (0, 1). Only |down> is lossy.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ptzeno/numerics.hpp"

namespace ptzeno {

struct SystemParams {
  double j0 = 1.0;  // coupling rate J0
};

/// Square-wave dissipation: gamma0 on [0, tau1), zero on [tau1, period).
struct DriveProtocol {
  double gamma0 = 0.0;
  double tau1 = 0.01;
  double period = 1.0;

  double omega() const noexcept { return 2.0 * std::numbers::pi / period; }
  /// Off-pulse interval T - tau1.
  double tau2() const noexcept { return period - tau1; }

  static DriveProtocol from_omega(double gamma0, double tau1, double omega) {
    return {gamma0, tau1, 2.0 * std::numbers::pi / omega};
  }
};

struct StaticParams {
  double gamma0 = 0.0;
  double j0 = 1.0;
};

inline void validate(const SystemParams& sys) {
  if (!std::isfinite(sys.j0) || sys.j0 < 0.0)
    throw std::invalid_argument("j0 must be finite and non-negative, got " + std::to_string(sys.j0));
}

inline void validate(const DriveProtocol& drive) {
  if (!std::isfinite(drive.gamma0) || drive.gamma0 < 0.0)
    throw std::invalid_argument("gamma0 must be finite and >= 0, got " + std::to_string(drive.gamma0));
  if (!std::isfinite(drive.tau1) || drive.tau1 <= 0.0)
    throw std::invalid_argument("tau1 must be finite and > 0, got " + std::to_string(drive.tau1));
  if (!std::isfinite(drive.period) || drive.period <= drive.tau1)
    throw std::invalid_argument("period must exceed tau1 (tau1=" + std::to_string(drive.tau1) +
                                ", period=" + std::to_string(drive.period) + ")");
}

inline void validate(const StaticParams& p) {
  if (!std::isfinite(p.gamma0) || p.gamma0 < 0.0)
    throw std::invalid_argument("gamma0 must be finite and >= 0, got " + std::to_string(p.gamma0));
  if (!std::isfinite(p.j0) || p.j0 <= 0.0)
    throw std::invalid_argument("j0 must be finite and > 0, got " + std::to_string(p.j0));
}

/// Instantaneous dissipation rate of the square-wave drive.
inline double gamma_of_t(const DriveProtocol& drive, double t) {
  validate(drive);
  if (!(t >= 0.0)) throw std::invalid_argument("gamma_of_t: time must be >= 0");
  const double phase = std::fmod(t, drive.period);
  return phase < drive.tau1 ? drive.gamma0 : 0.0;
}

/// Balanced gain-loss part: i*gamma*sigma_z - J0*sigma_x.
inline Mat2C build_h_pt(const SystemParams& sys, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("build_h_pt: gamma must be finite and >= 0");
  const Cplx g{0.0, gamma};
  return {g, -sys.j0, -sys.j0, -g};
}

/// Passive Hamiltonian -J0*sigma_x - 2i*gamma*|down><down| = -i*gamma*I + H_PT.
inline Mat2C build_h_l(const SystemParams& sys, double gamma) {
  return build_h_pt(sys, gamma) + Cplx{0.0, -gamma} * Mat2C::identity();
}

}  // namespace ptzeno
