#pragma once

// Frequency sweeps, (gamma0, omega) phase diagrams, exceptional/resonance point
// location and QZE/QAZE segmentation.
//
// Sweeps hold tau1 fixed and vary the period T = 2 pi / omega, so the admissible
// frequencies are bounded above by 2 pi / tau1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ptzeno/floquet.hpp"
#include "ptzeno/model.hpp"
#include "ptzeno/search.hpp"

namespace ptzeno {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

struct OmegaSweep {
  SystemParams sys;
  double gamma0 = 0.0;
  double tau1 = 0.0;
  std::vector<double> omegas;
  std::vector<FloquetSpectrum> spectra;

  DriveProtocol drive_at(double omega) const { return DriveProtocol::from_omega(gamma0, tau1, omega); }
};

struct PhaseDiagram {
  std::vector<double> gamma0_axis;  // gamma0 / J0
  std::vector<double> omega_axis;   // omega / J0
  std::vector<std::vector<double>> mu_grid;     // [gamma0 index][omega index]
  std::vector<std::vector<Phase>> phase_grid;
};

struct GridResolution {
  std::size_t n_gamma = 256;
  std::size_t n_omega = 256;
};

enum class FeatureKind { LEP, RP, HEP };
enum class ZenoLabel { QZE, QAZE };

inline constexpr std::string_view to_string(FeatureKind k) noexcept {
  switch (k) {
    case FeatureKind::LEP: return "LEP";
    case FeatureKind::RP: return "RP";
    case FeatureKind::HEP: return "HEP";
  }
  return "?";
}

inline constexpr std::string_view to_string(ZenoLabel z) noexcept {
  return z == ZenoLabel::QZE ? "QZE" : "QAZE";
}

struct Feature {
  FeatureKind kind = FeatureKind::LEP;
  double omega = 0.0;
  /// Final bracket width (EPs) or golden-section tolerance (RP).
  double bracket_width = 0.0;
  int iterations = 0;
  /// RP only: nearest n in omega_n = 2 J0 / n and omega - omega_n.
  int resonance_order = 0;
  double resonance_offset = std::numeric_limits<double>::quiet_NaN();
};

/// A maximal run of PT-broken grid points with its refined features.
struct PtbBlock {
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  std::optional<double> lep;
  std::optional<double> rp;
  std::optional<double> hep;
  /// Truncated by the sweep boundary or otherwise missing a feature.
  bool partial = false;
};

struct Segment {
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  ZenoLabel label = ZenoLabel::QAZE;
  Phase phase = Phase::PTS;
  std::vector<std::string> warnings;
};

struct RegimeSegmentation {
  std::vector<Feature> features;  // ordered in omega
  std::vector<PtbBlock> blocks;
  std::vector<Segment> segments;  // tile [omega_min, omega_max]

  const Segment* segment_at(double omega) const {
    for (const auto& s : segments)
      if (omega >= s.omega_lo && omega < s.omega_hi) return &s;
    if (!segments.empty() && omega == segments.back().omega_hi) return &segments.back();
    return nullptr;
  }
};

namespace detail {

inline void validate_omega_range(double tau1, Range omega) {
  if (!std::isfinite(omega.lo) || !std::isfinite(omega.hi) || omega.lo <= 0.0)
    throw std::invalid_argument("omega range must be positive (omega_min=" + std::to_string(omega.lo) + ")");
  if (!(omega.hi > omega.lo))
    throw std::invalid_argument("omega_max must exceed omega_min");
  if (!(tau1 > 0.0) || !std::isfinite(tau1)) throw std::invalid_argument("tau1 must be > 0");
  const double ceiling = 2.0 * std::numbers::pi / tau1;
  if (!(omega.hi < ceiling)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "tau1 >= 2*pi/omega_max: pulse exceeds the period at high omega (omega_max=" << omega.hi
        << ", admissible ceiling 2*pi/tau1=" << ceiling << ")";
    throw std::invalid_argument(msg.str());
  }
}

inline void validate_sweep_system(const SystemParams& sys) {
  validate(sys);
  if (!(sys.j0 > 0.0)) throw std::invalid_argument("sweeps require j0 > 0 (outputs are normalized to J0)");
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace detail

/// Highest admissible sweep frequency for a given pulse width (exclusive).
inline double omega_ceiling(double tau1) { return 2.0 * std::numbers::pi / tau1; }

/// Default sweep resolution: 512 points per decade of omega.
inline std::size_t default_sweep_points(Range omega) {
  const double decades = std::log10(omega.hi / omega.lo);
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(512.0 * decades)) + 1);
}

inline OmegaSweep omega_sweep(const SystemParams& sys, double gamma0, double tau1, Range omega,
                              std::size_t n_points) {
  detail::validate_sweep_system(sys);
  detail::validate_omega_range(tau1, omega);
  if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) throw std::invalid_argument("gamma0 must be >= 0");
  if (n_points < 2) throw std::invalid_argument("n_points must be >= 2");

  OmegaSweep out{sys, gamma0, tau1, detail::linspace(omega.lo, omega.hi, n_points), {}};
  out.spectra.reserve(n_points);
  for (double w : out.omegas) out.spectra.push_back(floquet_spectrum(sys, out.drive_at(w)));
  return out;
}

inline PhaseDiagram phase_diagram(const SystemParams& sys, double tau1, Range gamma0, Range omega,
                                  GridResolution res = {}) {
  detail::validate_sweep_system(sys);
  detail::validate_omega_range(tau1, omega);
  if (!(gamma0.lo >= 0.0) || !(gamma0.hi > gamma0.lo) || !std::isfinite(gamma0.hi))
    throw std::invalid_argument("gamma0 range must satisfy 0 <= gamma_min < gamma_max");
  if (res.n_gamma < 16 || res.n_omega < 16) throw std::invalid_argument("resolution must be >= 16 per axis");

  const auto gammas = detail::linspace(gamma0.lo, gamma0.hi, res.n_gamma);
  const auto omegas = detail::linspace(omega.lo, omega.hi, res.n_omega);
  PhaseDiagram pd;
  pd.mu_grid.assign(res.n_gamma, std::vector<double>(res.n_omega));
  pd.phase_grid.assign(res.n_gamma, std::vector<Phase>(res.n_omega));
  for (std::size_t i = 0; i < res.n_gamma; ++i) {
    for (std::size_t j = 0; j < res.n_omega; ++j) {
      const auto s = floquet_spectrum(sys, DriveProtocol::from_omega(gammas[i], tau1, omegas[j]));
      pd.mu_grid[i][j] = s.mu;
      pd.phase_grid[i][j] = s.phase;
    }
  }
  for (double g : gammas) pd.gamma0_axis.push_back(g / sys.j0);
  for (double w : omegas) pd.omega_axis.push_back(w / sys.j0);
  return pd;
}

/// Locates LEP/HEP by bisection on the discriminant sign and the RP of each PT-broken
/// block as the golden-section minimum of the slow decay rate.
inline RegimeSegmentation locate_features(const OmegaSweep& sweep) {
  RegimeSegmentation out;
  const auto& w = sweep.omegas;
  const std::size_t n = w.size();
  if (n < 2 || sweep.gamma0 == 0.0) return out;

  const double j0 = sweep.sys.j0;
  const double ep_tol = 1e-8 * j0;
  const auto disc = [&](double omega) { return floquet_discriminant(sweep.sys, sweep.drive_at(omega)); };
  const auto slow = [&](double omega) { return floquet_spectrum(sweep.sys, sweep.drive_at(omega)).gamma_slow; };
  const auto broken = [&](std::size_t i) { return sweep.spectra[i].discriminant > 0.0; };

  std::size_t i = 0;
  while (i < n) {
    if (!broken(i)) {
      ++i;
      continue;
    }
    const std::size_t first = i;
    while (i + 1 < n && broken(i + 1)) ++i;
    const std::size_t last = i;
    ++i;

    PtbBlock block{w[first], w[last], {}, {}, {}, false};
    if (first > 0) {
      const auto b = bisect_sign_change(disc, w[first - 1], w[first], ep_tol);
      block.lep = b.mid();
      out.features.push_back({FeatureKind::LEP, b.mid(), b.width(), b.iterations});
    }
    if (last + 1 < n) {
      const auto b = bisect_sign_change(disc, w[last], w[last + 1], ep_tol);
      block.hep = b.mid();
      out.features.push_back({FeatureKind::HEP, b.mid(), b.width(), b.iterations});
    }

    std::size_t k = first;
    for (std::size_t m = first; m <= last; ++m)
      if (sweep.spectra[m].gamma_slow < sweep.spectra[k].gamma_slow) k = m;
    const std::optional<double> lo = k > first ? std::optional<double>(w[k - 1]) : block.lep;
    const std::optional<double> hi = k < last ? std::optional<double>(w[k + 1]) : block.hep;
    if (lo && hi) {
      const double rp_tol = 1e-10 * j0;
      const auto [arg, val] = golden_section_min(slow, *lo, *hi, rp_tol);
      (void)val;
      block.rp = arg;
      Feature f{FeatureKind::RP, arg, rp_tol, 0};
      const int order = static_cast<int>(std::lround(2.0 * j0 / arg));
      if (order >= 1) {
        f.resonance_order = order;
        f.resonance_offset = arg - 2.0 * j0 / order;
      }
      out.features.push_back(f);
    }
    block.partial = !(block.lep && block.rp && block.hep);
    out.blocks.push_back(block);
  }

  std::stable_sort(out.features.begin(), out.features.end(),
                   [](const Feature& a, const Feature& b) { return a.omega < b.omega; });
  return out;
}

namespace detail {

inline bool is_rp(const RegimeSegmentation& f, double omega) {
  for (const auto& x : f.features)
    if (x.kind == FeatureKind::RP && x.omega == omega) return true;
  return false;
}

}  // namespace detail

/// Labels each inter-feature interval by the sign of d(gamma_slow)/d(omega):
/// negative is QZE, positive QAZE. Deviations from the expected ordering
/// (QAZE in PTS, QZE on (LEP, RP), QAZE on (RP, HEP)) are attached as warnings.
inline RegimeSegmentation classify_zeno(const OmegaSweep& sweep, const RegimeSegmentation& features) {
  RegimeSegmentation out = features;
  out.segments.clear();
  const auto& w = sweep.omegas;
  const std::size_t n = w.size();
  if (n < 2) return out;

  std::vector<double> bounds{w.front()};
  for (const auto& f : features.features)
    if (f.omega > w.front() && f.omega < w.back()) bounds.push_back(f.omega);
  bounds.push_back(w.back());

  // Centered differences on the grid.
  std::vector<double> slope(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    slope[i] = (sweep.spectra[i + 1].gamma_slow - sweep.spectra[i - 1].gamma_slow) / (w[i + 1] - w[i - 1]);

  const auto slow = [&](double omega) { return floquet_spectrum(sweep.sys, sweep.drive_at(omega)).gamma_slow; };

  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double a = bounds[s];
    const double b = bounds[s + 1];
    if (!(b > a)) continue;
    Segment seg{a, b, ZenoLabel::QAZE, Phase::PTS, {}};
    const double mid_disc = floquet_discriminant(sweep.sys, sweep.drive_at(0.5 * (a + b)));
    seg.phase = mid_disc > 0.0 ? Phase::PTB : Phase::PTS;

    // Slopes whose stencil stays inside (a, b); the rate is cusped at the EPs.
    std::vector<double> local;
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (w[i - 1] >= a && w[i + 1] <= b) local.push_back(slope[i]);
    if (local.size() < 3) {
      local.clear();
      const double h = 1e-3 * (b - a);
      for (int k = 0; k < 5; ++k) {
        const double x = a + (b - a) * (k + 0.5) / 5.0;
        local.push_back((slow(x + h) - slow(x - h)) / (2.0 * h));
      }
    }

    std::size_t neg = 0, pos = 0;
    for (double d : local) {
      if (d < 0.0) ++neg;
      if (d > 0.0) ++pos;
    }
    seg.label = neg > pos ? ZenoLabel::QZE : ZenoLabel::QAZE;

    // Sign reversals persisting over >= 3 consecutive points are reported.
    const bool want_negative = seg.label == ZenoLabel::QZE;
    std::size_t run = 0;
    for (double d : local) {
      const bool against = want_negative ? d > 0.0 : d < 0.0;
      run = against ? run + 1 : 0;
      if (run == 3) {
        seg.warnings.push_back("non-monotone: slope sign reverses over >= 3 consecutive points");
        break;
      }
    }

    std::optional<ZenoLabel> expected;
    if (seg.phase == Phase::PTS)
      expected = ZenoLabel::QAZE;
    else if (detail::is_rp(features, b))
      expected = ZenoLabel::QZE;
    else if (detail::is_rp(features, a))
      expected = ZenoLabel::QAZE;
    if (expected && *expected != seg.label)
      seg.warnings.push_back("ordering: expected " + std::string(to_string(*expected)) + ", slope gives " +
                             std::string(to_string(seg.label)));
    out.segments.push_back(std::move(seg));
  }
  return out;
}

}  // namespace ptzeno
