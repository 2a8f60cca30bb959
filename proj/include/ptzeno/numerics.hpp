#pragma once

// Closed-form linear algebra for 2x2 complex matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace ptzeno {

using Cplx = std::complex<double>;

inline constexpr Cplx kI{0.0, 1.0};

inline bool is_finite(Cplx z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Two-component complex column vector.
struct Vec2C {
  Cplx v0{};
  Cplx v1{};

  double norm2() const noexcept { return std::norm(v0) + std::norm(v1); }
  double norm() const noexcept { return std::sqrt(norm2()); }

  friend Vec2C operator*(Cplx s, const Vec2C& v) { return {s * v.v0, s * v.v1}; }
  friend Vec2C operator+(const Vec2C& a, const Vec2C& b) { return {a.v0 + b.v0, a.v1 + b.v1}; }
  friend Vec2C operator-(const Vec2C& a, const Vec2C& b) { return {a.v0 - b.v0, a.v1 - b.v1}; }
};

/// Row-major 2x2 complex matrix [[a11, a12], [a21, a22]].
struct Mat2C {
  Cplx a11{};
  Cplx a12{};
  Cplx a21{};
  Cplx a22{};

  static constexpr Mat2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2C zero() { return {}; }
  static constexpr Mat2C diag(Cplx d1, Cplx d2) { return {d1, 0.0, 0.0, d2}; }
  static constexpr Mat2C pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static constexpr Mat2C pauli_y() { return {0.0, -kI, kI, 0.0}; }
  static constexpr Mat2C pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  Cplx trace() const noexcept { return a11 + a22; }
  Cplx det() const noexcept { return a11 * a22 - a12 * a21; }

  Mat2C adjoint() const { return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)}; }
  Mat2C conj() const { return {std::conj(a11), std::conj(a12), std::conj(a21), std::conj(a22)}; }

  bool finite() const noexcept {
    return is_finite(a11) && is_finite(a12) && is_finite(a21) && is_finite(a22);
  }

  /// Largest entry modulus.
  double max_abs() const noexcept {
    return std::max(std::max(std::abs(a11), std::abs(a12)), std::max(std::abs(a21), std::abs(a22)));
  }

  friend Mat2C operator+(const Mat2C& x, const Mat2C& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2C operator-(const Mat2C& x, const Mat2C& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend Mat2C operator*(Cplx s, const Mat2C& x) { return {s * x.a11, s * x.a12, s * x.a21, s * x.a22}; }
  friend Mat2C operator*(const Mat2C& x, const Mat2C& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Vec2C operator*(const Mat2C& x, const Vec2C& v) {
    return {x.a11 * v.v0 + x.a12 * v.v1, x.a21 * v.v0 + x.a22 * v.v1};
  }
  friend bool operator==(const Mat2C&, const Mat2C&) = default;
};

/// Largest entrywise modulus of x - y.
inline double max_abs_diff(const Mat2C& x, const Mat2C& y) { return (x - y).max_abs(); }

namespace detail {

inline void require_finite(const Mat2C& m, const char* what) {
  if (!m.finite()) throw std::invalid_argument(std::string(what) + ": non-finite matrix entry");
}

}  // namespace detail

/// exp(-i m t) in closed form.
///
/// With a = tr(m)/2 and B = m - a I, B^2 = -det(B) I, so
/// exp(-i m t) = e^{-i a t} [cos(lt) I - i sin(lt)/l B] where l^2 = -det(B).
/// The expression is even in l, so the principal square root is sufficient.
inline Mat2C mat2_exp(const Mat2C& m, double t) {
  detail::require_finite(m, "mat2_exp");
  if (!std::isfinite(t)) throw std::invalid_argument("mat2_exp: non-finite duration");

  const Cplx a = 0.5 * m.trace();
  const Mat2C b = m - a * Mat2C::identity();
  const Cplx lambda = std::sqrt(-b.det());
  const Cplx z = lambda * t;

  Cplx c;
  Cplx sinc_t;  // sin(lt)/l
  if (std::abs(z) < 1e-6) {
    const Cplx z2 = z * z;
    c = 1.0 - z2 / 2.0 + z2 * z2 / 24.0;
    sinc_t = t * (1.0 - z2 / 6.0);
  } else {
    c = std::cos(z);
    sinc_t = std::sin(z) / lambda;
  }
  const Cplx phase = std::exp(-kI * a * t);
  return phase * (c * Mat2C::identity() - (kI * sinc_t) * b);
}

struct EigenPair {
  Cplx value;
  Vec2C vector;  // unit norm
};

struct Eig2Result {
  std::array<EigenPair, 2> pairs;
  /// Eigenvalue gap below 1e-9 (1 + spectral scale); both values are then reported equal.
  bool degenerate = false;
};

namespace detail {

inline Vec2C eigenvector_for(const Mat2C& m, Cplx value, bool first) {
  // Columns of adj(m - value I) span the eigenspace.
  const Vec2C from_row1{m.a12, value - m.a11};
  const Vec2C from_row2{value - m.a22, m.a21};
  const Vec2C& best = from_row1.norm2() >= from_row2.norm2() ? from_row1 : from_row2;
  const double n = best.norm();
  const double scale = std::max(1.0, m.max_abs());
  if (n <= 1e-300 || n < 1e-14 * scale) {
    // scalar matrix: every vector is an eigenvector
    return first ? Vec2C{1.0, 0.0} : Vec2C{0.0, 1.0};
  }
  return Cplx(1.0 / n) * best;
}

}  // namespace detail

/// Eigenvalues and unit eigenvectors of a 2x2 complex matrix.
inline Eig2Result eig2(const Mat2C& m) {
  detail::require_finite(m, "eig2");

  const Cplx half_trace = 0.5 * m.trace();
  const Cplx half_diff = 0.5 * (m.a11 - m.a22);
  const Cplx root = std::sqrt(half_diff * half_diff + m.a12 * m.a21);

  // Pick the sign without cancellation; recover the other root from the determinant.
  const Cplx big = (std::real(std::conj(half_trace) * root) >= 0.0) ? half_trace + root : half_trace - root;
  Cplx small = big == Cplx{} ? Cplx{} : m.det() / big;
  Cplx first = big;

  Eig2Result out;
  const double scale = std::max(std::abs(big), std::abs(small));
  if (std::abs(big - small) < 1e-9 * (1.0 + scale)) {
    out.degenerate = true;
    first = small = half_trace;
  }
  out.pairs[0] = {first, detail::eigenvector_for(m, first, true)};
  out.pairs[1] = {small, detail::eigenvector_for(m, small, false)};
  return out;
}

}  // namespace ptzeno
