#pragma once

// Time-domain propagation under the square-wave drive and lifetime fitting.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptzeno/floquet.hpp"
#include "ptzeno/model.hpp"
#include "ptzeno/numerics.hpp"

namespace ptzeno {

struct StateVec {
  Cplx up{};
  Cplx down{};

  double norm2() const noexcept { return std::norm(up) + std::norm(down); }

  static StateVec spin_up() { return {1.0, 0.0}; }
  static StateVec spin_down() { return {0.0, 1.0}; }

  Vec2C as_vec() const { return {up, down}; }
  static StateVec from_vec(const Vec2C& v) { return {v.v0, v.v1}; }
};

/// Sampled evolution. `norms` holds survival probabilities |up|^2 + |down|^2.
/// Every `stroboscopic_stride`-th sample (starting at index 0) lies on a period boundary.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVec> states;
  std::vector<double> norms;
  std::size_t stroboscopic_stride = 1;

  std::size_t size() const noexcept { return times.size(); }

  void push(double t, const StateVec& s) {
    times.push_back(t);
    states.push_back(s);
    norms.push_back(s.norm2());
  }
};

namespace detail {

inline void require_normalized(const StateVec& psi0) {
  if (!is_finite(psi0.up) || !is_finite(psi0.down) || std::abs(psi0.norm2() - 1.0) > 1e-10)
    throw std::invalid_argument("initial state must be finite and normalized");
}

}  // namespace detail

/// Piecewise-exact propagation: each constant-gamma segment is applied as an exact
/// exponential of H_L. Samples at t = n T + k T / samples_per_period.
inline Trajectory propagate(const SystemParams& sys, const DriveProtocol& drive, const StateVec& psi0,
                            int n_periods, int samples_per_period) {
  validate(sys);
  validate(drive);
  detail::require_normalized(psi0);
  if (n_periods < 1) throw std::invalid_argument("propagate: n_periods must be >= 1");
  if (samples_per_period < 2) throw std::invalid_argument("propagate: samples_per_period must be >= 2");

  const Mat2C h_on = build_h_l(sys, drive.gamma0);
  const Mat2C h_off = build_h_l(sys, 0.0);
  const Mat2C u_on = mat2_exp(h_on, drive.tau1);
  const Mat2C monodromy = mat2_exp(h_off, drive.tau2()) * u_on;

  // Propagators from the start of a period to each in-period sample; the last is G'(T).
  const auto s = static_cast<std::size_t>(samples_per_period);
  std::vector<Mat2C> from_start(s);
  for (std::size_t k = 1; k < s; ++k) {
    const double t_loc = drive.period * static_cast<double>(k) / static_cast<double>(s);
    from_start[k - 1] = t_loc <= drive.tau1 ? mat2_exp(h_on, t_loc) : mat2_exp(h_off, t_loc - drive.tau1) * u_on;
  }
  from_start[s - 1] = monodromy;

  Trajectory traj;
  traj.stroboscopic_stride = s;
  const std::size_t total = static_cast<std::size_t>(n_periods) * s + 1;
  traj.times.reserve(total);
  traj.states.reserve(total);
  traj.norms.reserve(total);

  Vec2C start = psi0.as_vec();
  traj.push(0.0, psi0);
  for (int n = 0; n < n_periods; ++n) {
    const double t0 = drive.period * n;
    for (std::size_t k = 1; k <= s; ++k) {
      const double t = k == s ? drive.period * (n + 1)
                              : t0 + drive.period * static_cast<double>(k) / static_cast<double>(s);
      traj.push(t, StateVec::from_vec(from_start[k - 1] * start));
    }
    start = monodromy * start;
  }
  return traj;
}

/// Classical RK4 integration of i dpsi/dt = H_L(t) psi, with steps aligned to pulse edges.
inline Trajectory rk4_reference(const SystemParams& sys, const DriveProtocol& drive, const StateVec& psi0,
                                double t_final, double dt) {
  validate(sys);
  validate(drive);
  detail::require_normalized(psi0);
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("rk4_reference: t_final must be > 0");
  if (!(dt > 0.0) || dt > drive.tau1 / 10.0 || dt > drive.tau2() / 10.0)
    throw std::invalid_argument("rk4_reference: dt must be positive and <= tau1/10 and <= (T - tau1)/10");

  const Mat2C h_on = build_h_l(sys, drive.gamma0);
  const Mat2C h_off = build_h_l(sys, 0.0);
  const auto n_on = static_cast<std::size_t>(std::ceil(drive.tau1 / dt - 1e-9));
  const auto n_off = static_cast<std::size_t>(std::ceil(drive.tau2() / dt - 1e-9));
  const double h1 = drive.tau1 / static_cast<double>(n_on);
  const double h2 = drive.tau2() / static_cast<double>(n_off);

  const auto step = [](const Mat2C& h, const Vec2C& y, double dt_step) {
    const Cplx m = -kI;
    const Vec2C k1 = m * (h * y);
    const Vec2C k2 = m * (h * (y + Cplx(0.5 * dt_step) * k1));
    const Vec2C k3 = m * (h * (y + Cplx(0.5 * dt_step) * k2));
    const Vec2C k4 = m * (h * (y + Cplx(dt_step) * k3));
    return y + Cplx(dt_step / 6.0) * (k1 + Cplx(2.0) * k2 + Cplx(2.0) * k3 + k4);
  };

  Trajectory traj;
  traj.stroboscopic_stride = n_on + n_off;
  Vec2C y = psi0.as_vec();
  traj.push(0.0, psi0);

  const double end_tol = 1e-12 * t_final;
  for (std::size_t period = 0;; ++period) {
    const double t0 = drive.period * static_cast<double>(period);
    for (std::size_t k = 1; k <= n_on + n_off; ++k) {
      const bool on = k <= n_on;
      const double t = on ? t0 + h1 * static_cast<double>(k)
                          : t0 + drive.tau1 + h2 * static_cast<double>(k - n_on);
      const double t_prev = traj.times.back();
      if (t > t_final + end_tol) {
        if (t_final - t_prev > end_tol) {
          y = step(on ? h_on : h_off, y, t_final - t_prev);
          traj.push(t_final, StateVec::from_vec(y));
        }
        return traj;
      }
      y = step(on ? h_on : h_off, y, t - t_prev);
      traj.push(t, StateVec::from_vec(y));
      if (t >= t_final - end_tol) return traj;
    }
  }
}

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LifetimeFit {
  double gamma_fit = 0.0;  // survival probability ~ exp(-gamma_fit t)
  double residual = 0.0;   // RMS residual of ln(norm)
  std::size_t samples = 0;
};

/// Least-squares slope of ln(survival probability) over the late stroboscopic samples.
inline LifetimeFit fit_lifetime(const Trajectory& traj, double discard_fraction = 0.5) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 0.9))
    throw std::invalid_argument("fit_lifetime: discard_fraction must lie in [0, 0.9)");
  const std::size_t stride = traj.stroboscopic_stride == 0 ? 1 : traj.stroboscopic_stride;

  std::vector<std::size_t> strobe;
  for (std::size_t i = 0; i < traj.size(); i += stride) strobe.push_back(i);
  const auto skip = static_cast<std::size_t>(std::floor(discard_fraction * static_cast<double>(strobe.size())));
  const std::size_t kept = strobe.size() - skip;
  if (kept < 10)
    throw FitError("fit_lifetime: only " + std::to_string(kept) +
                   " stroboscopic samples in the fit window (need >= 10)");

  double st = 0.0, sy = 0.0;
  std::vector<double> ts, ys;
  ts.reserve(kept);
  ys.reserve(kept);
  for (std::size_t j = skip; j < strobe.size(); ++j) {
    const std::size_t i = strobe[j];
    const double p = traj.norms[i];
    if (!(p > 1e-300))
      throw FitError("fit_lifetime: survival probability underflow (" + std::to_string(p) + ") at t=" +
                     std::to_string(traj.times[i]));
    ts.push_back(traj.times[i]);
    ys.push_back(std::log(p));
    st += ts.back();
    sy += ys.back();
  }
  const double n = static_cast<double>(kept);
  const double t_mean = st / n;
  const double y_mean = sy / n;
  double stt = 0.0, sty = 0.0;
  for (std::size_t j = 0; j < kept; ++j) {
    stt += (ts[j] - t_mean) * (ts[j] - t_mean);
    sty += (ts[j] - t_mean) * (ys[j] - y_mean);
  }
  if (!(stt > 0.0)) throw FitError("fit_lifetime: degenerate time window");
  const double slope = sty / stt;
  const double intercept = y_mean - slope * t_mean;
  double ss = 0.0;
  for (std::size_t j = 0; j < kept; ++j) {
    const double r = ys[j] - (intercept + slope * ts[j]);
    ss += r * r;
  }
  return {-slope, std::sqrt(ss / n), kept};
}

}  // namespace ptzeno
