#pragma once

// Bracketing 1-D searches.

#include <cmath>
#include <utility>

namespace ptzeno {

template <class T>
struct Bracket {
  T lo;
  T hi;
  int iterations = 0;

  T mid() const { return lo + (hi - lo) / 2; }
  T width() const { return hi - lo; }
};

/// Bisection on the sign of f between lo and hi, which must bracket a sign change.
/// Stops when the bracket is narrower than `tol` or after `max_iter` halvings.
template <class T, class F>
Bracket<T> bisect_sign_change(F&& f, T lo, T hi, T tol, int max_iter = 60) {
  auto f_lo = f(lo);
  Bracket<T> b{lo, hi, 0};
  while (b.width() > tol && b.iterations < max_iter) {
    const T m = b.mid();
    const auto f_m = f(m);
    ++b.iterations;
    if (f_m == 0) return {m, m, b.iterations};
    if ((f_m > 0) == (f_lo > 0)) {
      b.lo = m;
      f_lo = f_m;
    } else {
      b.hi = m;
    }
  }
  return b;
}

/// Golden-section search for a minimum of a unimodal f on [lo, hi].
/// Returns (argmin, f(argmin)).
template <class T, class F>
std::pair<T, T> golden_section_min(F&& f, T lo, T hi, T tol, int max_iter = 200) {
  const T inv_phi = (std::sqrt(T(5)) - 1) / 2;
  T a = lo, b = hi;
  T c = b - inv_phi * (b - a);
  T d = a + inv_phi * (b - a);
  T fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair<T, T>{c, fc} : std::pair<T, T>{d, fd};
}

}  // namespace ptzeno
