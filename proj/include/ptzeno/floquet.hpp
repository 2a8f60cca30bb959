#pragma once

// Analytic Floquet spectrum of the square-wave driven passive two-level system.
//
// One period of H_L factorizes as G'(T) = e^{-gamma0 tau1} G(T), where G(T) is the
// monodromy of the traceless balanced gain-loss part. det G(T) = 1, so its
// eigenvalues satisfy Lambda+ Lambda- = 1 and are fixed by the half trace
//   h = c1 c2 - (J0/eps0) s1 s2
// together with the discriminant
//   D = (gamma0 s1/eps0)^2 - (c1 s2 + (J0/eps0) s1 c2)^2 = h^2 - 1.
// D < 0: complex-conjugate unimodular pair (PT-symmetric).
// D > 0: real reciprocal pair (PT-broken), giving a slow and a fast mode.

#include <cmath>
#include <numbers>
#include <string_view>
#include <utility>

#include "ptzeno/model.hpp"
#include "ptzeno/numerics.hpp"

namespace ptzeno {

enum class Phase { PTS, PTB, EP };

inline constexpr std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::PTS: return "PTS";
    case Phase::PTB: return "PTB";
    case Phase::EP: return "EP";
  }
  return "?";
}

struct FloquetAux {
  Cplx c1;    // cosh(eps0 tau1)
  Cplx c2;    // cos(J0 (T - tau1))
  Cplx s1;    // sinh(eps0 tau1)
  Cplx s2;    // sin(J0 (T - tau1))
  Cplx eps0;  // sqrt(gamma0^2 - J0^2), imaginary below the static EP
  /// s1 / eps0, finite at eps0 = 0.
  Cplx s1_over_eps0;
};

struct FloquetSpectrum {
  Cplx lambda_plus;
  Cplx lambda_minus;
  Cplx eps_plus;
  Cplx eps_minus;
  double gamma_slow = 0.0;
  double gamma_fast = 0.0;
  double mu = 0.0;
  Phase phase = Phase::PTS;
  /// Real discriminant D; its sign decides the phase.
  double discriminant = 0.0;
};

/// sinh(z)/z with the series branch near zero.
inline Cplx sinhc(Cplx z) {
  if (std::abs(z) < 1e-6) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}

/// Auxiliary trig/hyperbolic quantities. `eps0_sign` = -1 selects the other
/// square-root branch; every physical output is even in eps0.
inline FloquetAux floquet_aux(const SystemParams& sys, const DriveProtocol& drive, int eps0_sign = 1) {
  validate(sys);
  validate(drive);
  const double j0 = sys.j0;
  const double g0 = drive.gamma0;
  FloquetAux aux;
  aux.eps0 = static_cast<double>(eps0_sign >= 0 ? 1 : -1) * std::sqrt(Cplx(g0 * g0 - j0 * j0, 0.0));
  const Cplx z = aux.eps0 * drive.tau1;
  aux.c1 = std::cosh(z);
  aux.s1 = std::sinh(z);
  aux.s1_over_eps0 = drive.tau1 * sinhc(z);
  const double phi = j0 * drive.tau2();
  aux.c2 = std::cos(phi);
  aux.s2 = std::sin(phi);
  return aux;
}

namespace detail {

struct HalfTraceDisc {
  double half_trace;
  double disc;
  double scale;  // |c1 c2|
};

inline HalfTraceDisc half_trace_and_disc(const SystemParams& sys, const DriveProtocol& drive,
                                         int eps0_sign = 1) {
  const FloquetAux a = floquet_aux(sys, drive, eps0_sign);
  const Cplx j_s1 = sys.j0 * a.s1_over_eps0;
  const Cplx g_s1 = drive.gamma0 * a.s1_over_eps0;
  const Cplx h = a.c1 * a.c2 - j_s1 * a.s2;
  const Cplx off = a.c1 * a.s2 + j_s1 * a.c2;
  const Cplx d = g_s1 * g_s1 - off * off;
  // Both are real for every admissible parameter set.
  return {h.real(), d.real(), std::abs(a.c1 * a.c2)};
}

}  // namespace detail

/// Discriminant D of the monodromy eigenvalue problem.
inline double floquet_discriminant(const SystemParams& sys, const DriveProtocol& drive) {
  return detail::half_trace_and_disc(sys, drive).disc;
}

/// Eigenvalues (Lambda+, Lambda-) = h +/- sqrt(D) of the balanced monodromy G(T).
inline std::pair<Cplx, Cplx> lambda_eigenvalues(const SystemParams& sys, const DriveProtocol& drive,
                                                int eps0_sign = 1) {
  const auto [h, d, scale] = detail::half_trace_and_disc(sys, drive, eps0_sign);
  const Cplx root = d >= 0.0 ? Cplx(std::sqrt(d), 0.0) : Cplx(0.0, std::sqrt(-d));
  const Cplx plus = h + root;
  const Cplx minus = h - root;
  // The smaller root follows from Lambda+ Lambda- = 1 without cancellation.
  if (std::abs(plus) >= std::abs(minus)) return {plus, 1.0 / plus};
  return {1.0 / minus, minus};
}

/// One-period propagator: G(T) from H_PT (balanced) or G'(T) from H_L.
inline Mat2C monodromy_numeric(const SystemParams& sys, const DriveProtocol& drive, bool balanced) {
  validate(sys);
  validate(drive);
  const auto h = balanced ? build_h_pt : build_h_l;
  return mat2_exp(h(sys, 0.0), drive.tau2()) * mat2_exp(h(sys, drive.gamma0), drive.tau1);
}

/// Inverse one-period propagator, built from backward-in-time exponentials.
inline Mat2C monodromy_inverse_numeric(const SystemParams& sys, const DriveProtocol& drive, bool balanced) {
  validate(sys);
  validate(drive);
  const auto h = balanced ? build_h_pt : build_h_l;
  return mat2_exp(h(sys, drive.gamma0), -drive.tau1) * mat2_exp(h(sys, 0.0), -drive.tau2());
}

/// Phase-label tolerance band around D = 0.
inline double ep_tolerance(double c1c2_abs) { return 1e-9 * (1.0 + c1c2_abs * c1c2_abs); }

inline FloquetSpectrum floquet_spectrum(const SystemParams& sys, const DriveProtocol& drive) {
  const auto [h, d, scale] = detail::half_trace_and_disc(sys, drive);
  const auto [lp, lm] = lambda_eigenvalues(sys, drive);
  const double period = drive.period;
  const double loss = drive.gamma0 * drive.tau1;

  FloquetSpectrum out;
  out.lambda_plus = lp;
  out.lambda_minus = lm;
  out.discriminant = d;

  // For D <= 0 both roots lie on the unit circle exactly.
  const auto log_abs = [&](Cplx lambda) { return d <= 0.0 ? 0.0 : std::log(std::abs(lambda)); };
  const auto quasienergy = [&](Cplx lambda) {
    // -i gamma0 tau1/T + i ln(Lambda)/T, with Re folded into (-pi/T, pi/T].
    double re = -std::arg(lambda) / period;
    if (re <= -std::numbers::pi / period) re += 2.0 * std::numbers::pi / period;
    const double im = (-loss + log_abs(lambda)) / period;
    return Cplx(re, im);
  };
  out.eps_plus = quasienergy(lp);
  out.eps_minus = quasienergy(lm);

  const double rate_plus = -2.0 * out.eps_plus.imag();
  const double rate_minus = -2.0 * out.eps_minus.imag();
  out.gamma_slow = std::min(rate_plus, rate_minus);
  out.gamma_fast = std::max(rate_plus, rate_minus);

  // |e^{-i eps T}| = e^{-gamma0 tau1} |Lambda|, evaluated in log space.
  out.mu = std::abs(std::exp(log_abs(lp) - loss) - std::exp(log_abs(lm) - loss));

  const double tol = ep_tolerance(scale);
  if (drive.gamma0 == 0.0 || d < -tol)
    out.phase = Phase::PTS;
  else if (d > tol)
    out.phase = Phase::PTB;
  else
    out.phase = Phase::EP;
  return out;
}

}  // namespace ptzeno
