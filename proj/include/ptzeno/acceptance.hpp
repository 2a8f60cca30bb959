#pragma once

// Built-in acceptance checks shared by the `verify` subcommand and the acceptance
// test binary. Every tolerance below is fixed; nothing is tuned at run time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ptzeno/evolve.hpp"
#include "ptzeno/floquet.hpp"
#include "ptzeno/static_analysis.hpp"
#include "ptzeno/sweep.hpp"

namespace ptzeno::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

inline std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

/// Random points with gamma0/J0 log-uniform in [0.01, 300], J0 tau1 in [0.001, 0.5], omega tau1 < 2 pi.
inline std::vector<DriveProtocol> random_drives(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u_tau(0.001, 0.5);
  std::uniform_real_distribution<double> u_wt(1e-3, 2.0 * std::numbers::pi * (1.0 - 1e-3));
  std::vector<DriveProtocol> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double gamma0 = log_uniform(rng, 0.01, 300.0);
    const double tau1 = u_tau(rng);
    out.push_back(DriveProtocol::from_omega(gamma0, tau1, u_wt(rng) / tau1));
  }
  return out;
}

inline Cplx dominant(const Eig2Result& r) {
  return std::abs(r.pairs[0].value) >= std::abs(r.pairs[1].value) ? r.pairs[0].value : r.pairs[1].value;
}

/// RP location per resonance order n from a gamma0 = 200 J0 sweep.
inline std::map<int, double> resonance_points(double tau1) {
  const SystemParams sys{1.0};
  const auto sweep = omega_sweep(sys, 200.0, tau1, {0.2, 4.0}, 4000);
  std::map<int, double> out;
  for (const auto& f : locate_features(sweep).features)
    if (f.kind == FeatureKind::RP && f.resonance_order >= 1) out.emplace(f.resonance_order, f.omega);
  return out;
}

}  // namespace detail

/// Eigenvalues of the numerically built monodromy agree with the closed form.
/// Both eigenvalues come from G(T) unless their moduli differ by more than 1e3; then the
/// subdominant one is taken as the inverse of the dominant eigenvalue of G(T)^{-1}, which
/// resolves it to relative precision even when e^{eps0 tau1} is large.
inline CriterionResult floquet_equivalence() {
  CriterionResult r{1, "Analytic-vs-numeric Floquet equivalence", false, {}, 0.0};
  detail::Timer timer;
  const SystemParams sys{1.0};
  double worst = 0.0;
  for (const auto& d : detail::random_drives(0x5eed01, 1000)) {
    const auto [lp, lm] = lambda_eigenvalues(sys, d);
    const auto fwd = eig2(monodromy_numeric(sys, d, true));
    const Cplx big = detail::dominant(fwd);
    Cplx small = fwd.pairs[0].value == big ? fwd.pairs[1].value : fwd.pairs[0].value;
    if (std::abs(big) > 1e3 * std::abs(small))
      small = 1.0 / detail::dominant(eig2(monodromy_inverse_numeric(sys, d, true)));
    const auto rel = [](Cplx a, Cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
    const double e = std::min(std::max(rel(lp, big), rel(lm, small)), std::max(rel(lp, small), rel(lm, big)));
    worst = std::max(worst, e);
  }
  r.seconds = timer.seconds();
  r.passed = worst < 1e-8 && r.seconds < 5.0;
  r.detail = "max relative eigenvalue error " + detail::fmt("%.3e", worst) + " (tol 1e-8), 1000 samples";
  return r;
}

/// RP locations at gamma0 = 200 J0, J0 tau1 = 0.01 against omega_n = 2 J0 / n, n = 1..4.
inline CriterionResult resonance_condition() {
  CriterionResult r{2, "Resonance condition omega_n/J0 = 2/n", false, {}, 0.0};
  detail::Timer timer;
  const auto rps = detail::resonance_points(0.01);
  r.seconds = timer.seconds();
  bool ok = true;
  std::ostringstream os;
  for (int n = 1; n <= 4; ++n) {
    const auto it = rps.find(n);
    if (it == rps.end()) {
      ok = false;
      os << "n=" << n << ": missing; ";
      continue;
    }
    const double dev = it->second - 2.0 / n;
    ok = ok && std::abs(dev) <= 1e-3;
    os << "n=" << n << ": " << detail::fmt("%.6f", it->second) << " (dev " << detail::fmt("%+.2e", dev) << "); ";
  }
  os << "tol 1e-3";
  r.passed = ok && r.seconds < 10.0;
  r.detail = os.str();
  return r;
}

/// RP locations for J0 tau1 in {0.005, 0.01, 0.02} agree pairwise.
inline CriterionResult tau1_independence() {
  CriterionResult r{3, "tau1-independence of resonance locations", false, {}, 0.0};
  detail::Timer timer;
  std::vector<std::map<int, double>> sets;
  for (double tau1 : {0.005, 0.01, 0.02}) sets.push_back(detail::resonance_points(tau1));
  bool ok = true;
  std::ostringstream os;
  for (int n = 1; n <= 4; ++n) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : sets) {
      const auto it = s.find(n);
      if (it == s.end()) {
        ok = false;
        continue;
      }
      lo = std::min(lo, it->second);
      hi = std::max(hi, it->second);
    }
    ok = ok && (hi - lo) <= 1e-3;
    os << "n=" << n << " spread " << detail::fmt("%.2e", hi - lo) << "; ";
  }
  os << "tol 1e-3";
  r.seconds = timer.seconds();
  r.passed = ok;
  r.detail = os.str();
  return r;
}

inline CriterionResult static_formulas() {
  CriterionResult r{4, "Static formulas and asymptotics", false, {}, 0.0};
  detail::Timer timer;
  bool exact = true;
  for (int k = 0; k <= 1000; ++k) {
    const double g = k / 1000.0;
    const auto s = static_spectrum({g, 1.0});
    exact = exact && s.gamma0_slow == 2.0 * g && s.gamma0_fast == 2.0 * g;
  }
  const auto s100 = static_spectrum({100.0, 1.0});
  const double rel_slow = std::abs(s100.gamma0_slow / (1.0 / 100.0) - 1.0);
  const double rel_fast = std::abs(s100.gamma0_fast / 400.0 - 1.0);
  r.seconds = timer.seconds();
  r.passed = exact && rel_slow < 1e-4 && rel_fast < 1e-4;
  r.detail = std::string("PTS rates == 2 gamma0: ") + (exact ? "yes" : "no") + "; gamma0=100: slow rel " +
             detail::fmt("%.3e", rel_slow) + ", fast rel " + detail::fmt("%.3e", rel_fast) + " (tol 1e-4)";
  return r;
}

inline CriterionResult projective_equivalence() {
  CriterionResult r{5, "Projective-measurement equivalence", false, {}, 0.0};
  detail::Timer timer;
  std::mt19937_64 rng(0x5eed05);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const SystemParams sys{detail::log_uniform(rng, 0.01, 100.0)};
    const double tau1 = detail::log_uniform(rng, 1e-4, 10.0);
    const DriveProtocol d{detail::log_uniform(rng, 0.01, 1e4), tau1, tau1 + detail::log_uniform(rng, 1e-4, 10.0)};
    const double a = projective_limit_rate(sys, d);
    const double b = measurement_decay_rate(equivalent_measurement(sys, d));
    worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(a)));
  }
  r.seconds = timer.seconds();
  r.passed = worst <= 1e-12;
  r.detail = "max deviation " + detail::fmt("%.3e", worst) + " (tol 1e-12), 1000 samples";
  return r;
}

/// Frequencies on the gamma0 = 200 J0, J0 tau1 = 0.01 line: eight PT-broken, four symmetric.
inline const std::vector<double>& lifetime_omegas() {
  static const std::vector<double> w{0.5, 0.7, 0.9, 1.1, 1.3, 1.35, 1.6, 2.0, 2.5, 3.0, 3.7, 4.0};
  return w;
}

inline CriterionResult lifetime_coincidence(std::vector<Trajectory>* keep = nullptr) {
  CriterionResult r{6, "Lifetime coincidence", false, {}, 0.0};
  detail::Timer timer;
  const SystemParams sys{1.0};
  double worst = 0.0;
  int pts = 0, ptb = 0;
  bool ok = true;
  std::string failure;
  for (double omega : lifetime_omegas()) {
    const auto d = DriveProtocol::from_omega(200.0, 0.01, omega);
    const auto spec = floquet_spectrum(sys, d);
    (spec.phase == Phase::PTB ? ptb : pts) += 1;
    auto traj = propagate(sys, d, StateVec::spin_up(), 150, 4);
    try {
      const auto fit = fit_lifetime(traj, 0.5);
      worst = std::max(worst, std::abs(fit.gamma_fit / spec.gamma_slow - 1.0));
    } catch (const FitError& e) {
      ok = false;
      failure = e.what();
    }
    if (keep) keep->push_back(std::move(traj));
  }
  r.seconds = timer.seconds();
  r.passed = ok && worst < 0.02 && pts > 0 && ptb > 0 && r.seconds < 30.0;
  r.detail = "max relative deviation " + detail::fmt("%.3e", worst) + " (tol 2e-2) over " + std::to_string(ptb) +
             " PTB + " + std::to_string(pts) + " PTS points" + (failure.empty() ? "" : "; " + failure);
  return r;
}

inline CriterionResult regime_ordering() {
  CriterionResult r{7, "Zeno regime ordering", false, {}, 0.0};
  detail::Timer timer;
  const SystemParams sys{1.0};
  const auto sweep = omega_sweep(sys, 200.0, 0.01, {0.2, 4.0}, 4000);
  const auto seg = classify_zeno(sweep, locate_features(sweep));
  const auto slope = [&](double w, double h) {
    const auto g = [&](double x) { return floquet_spectrum(sys, sweep.drive_at(x)).gamma_slow; };
    return (g(w + h) - g(w - h)) / (2.0 * h);
  };
  // sign: -1 requires decreasing, +1 increasing, on 25 interior points.
  const auto check = [&](double a, double b, int sign) {
    constexpr int n = 25;
    const double h = 1e-3 * (b - a) / (n + 1);
    for (int k = 1; k <= n; ++k) {
      const double d = slope(a + (b - a) * k / (n + 1), h);
      if (sign < 0 ? !(d < 0.0) : !(d > 0.0)) return false;
    }
    return true;
  };

  // Full blocks ordered from high to low frequency: n = 1, 2, 3.
  std::vector<PtbBlock> blocks;
  for (const auto& b : seg.blocks)
    if (!b.partial) blocks.push_back(b);
  std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.grid_lo > y.grid_lo; });

  bool ok = blocks.size() >= 3;
  int segments_checked = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, blocks.size()); ++i) {
    const auto& b = blocks[i];
    ok = ok && check(*b.lep, *b.rp, -1) && check(*b.rp, *b.hep, +1);
    segments_checked += 2;
    // Adjoining symmetric stretches.
    for (const auto& s : seg.segments) {
      if (s.phase != Phase::PTS) continue;
      if (s.omega_hi == *b.lep || s.omega_lo == *b.hep) {
        ok = ok && check(s.omega_lo, s.omega_hi, +1);
        ++segments_checked;
      }
    }
  }
  r.seconds = timer.seconds();
  r.passed = ok;
  r.detail = std::to_string(segments_checked) + " segments checked on 25 interior points each; QZE on (LEP,RP), "
             "QAZE on (RP,HEP) and adjoining PTS";
  return r;
}

inline CriterionResult invariant_suite() {
  CriterionResult r{8, "Invariant suite", false, {}, 0.0};
  detail::Timer timer;
  const SystemParams sys{1.0};
  double worst_product = 0.0, worst_sum = 0.0, worst_det = 0.0;
  for (const auto& d : detail::random_drives(0x5eed08, 1000)) {
    const auto s = floquet_spectrum(sys, d);
    worst_product = std::max(worst_product, std::abs(s.lambda_plus * s.lambda_minus - 1.0));
    const double total = 4.0 * d.gamma0 * d.tau1 / d.period;
    worst_sum = std::max(worst_sum, std::abs(s.gamma_slow + s.gamma_fast - total) / std::max(1.0, total));
  }
  // Entrywise determinants carry ~eps ||G||^2 error, so the determinant identity is
  // checked over the phase-diagram domain J0 tau1 = 0.01, gamma0/J0 <= 300.
  std::mt19937_64 rng(0x5eed88);
  std::uniform_real_distribution<double> u_w(0.05, 20.0);
  for (int k = 0; k < 1000; ++k) {
    const auto d = DriveProtocol::from_omega(detail::log_uniform(rng, 0.01, 300.0), 0.01, u_w(rng));
    const double expected = std::exp(-2.0 * d.gamma0 * d.tau1);
    worst_det = std::max(worst_det, std::abs(monodromy_numeric(sys, d, false).det() - expected) / expected);
  }

  std::vector<Trajectory> trajectories;
  lifetime_coincidence(&trajectories);
  for (double gamma0 : {0.0, 0.5, 1.0, 5.0, 50.0}) {
    for (double omega : {0.4, 1.0, 2.0, 6.0}) {
      trajectories.push_back(propagate(sys, DriveProtocol::from_omega(gamma0, 0.05, omega),
                                       StateVec{Cplx(0.6, 0.0), Cplx(0.0, 0.8)}, 60, 16));
    }
  }
  bool monotone = true;
  for (const auto& t : trajectories)
    for (std::size_t i = 1; i < t.size(); ++i) monotone = monotone && t.norms[i] <= t.norms[i - 1] * (1.0 + 1e-12);

  const DriveProtocol rk_drive{1.0, 0.5, 2.0};
  const auto rk_error = [&](double dt) {
    const auto rk = rk4_reference(sys, rk_drive, StateVec::spin_up(), 5.0 * rk_drive.period, dt);
    const auto ex = propagate(sys, rk_drive, StateVec::spin_up(), 5, 2);
    return std::abs(rk.states.back().up - ex.states.back().up) +
           std::abs(rk.states.back().down - ex.states.back().down);
  };
  const double order = std::log2(rk_error(0.05) / rk_error(0.025));

  r.seconds = timer.seconds();
  r.passed = worst_product <= 1e-10 && worst_sum <= 1e-9 && worst_det <= 1e-10 && monotone && order >= 3.7 &&
             order <= 4.3;
  std::ostringstream os;
  os << "|L+L- - 1| " << detail::fmt("%.2e", worst_product) << "; rate sum " << detail::fmt("%.2e", worst_sum)
     << "; det G' rel " << detail::fmt("%.2e", worst_det) << "; norms monotone: " << (monotone ? "yes" : "no") << " ("
     << trajectories.size() << " trajectories); RK4 order " << detail::fmt("%.3f", order);
  r.detail = os.str();
  return r;
}

inline std::vector<CriterionResult> run_all() {
  return {floquet_equivalence(), resonance_condition(), tau1_independence(), static_formulas(),
          projective_equivalence(), lifetime_coincidence(), regime_ordering(), invariant_suite()};
}

}  // namespace ptzeno::acceptance
