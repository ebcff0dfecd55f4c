#pragma once
// Minimal complex arithmetic over the MPFR-backed real. std::complex is not
// specified for user-defined value types, so the handful of operations the
// moment pipeline needs are written out here. Division uses Smith's
// algorithm; sqrt is the principal branch.

#include "qde/scalars.hpp"

namespace qde::mpn {

struct Cplx {
  Real re;
  Real im;

  Cplx() : re(0), im(0) {}
  Cplx(const Real& r, const Real& i) : re(r), im(i) {}
  explicit Cplx(int r) : re(r), im(0) {}
  explicit Cplx(const Real& r) : re(r), im(0) {}
  explicit Cplx(const qde::cplx& z) : re(z.real()), im(z.imag()) {}
};

inline Cplx operator+(const Cplx& a, const Cplx& b) {
  return {a.re + b.re, a.im + b.im};
}
inline Cplx operator-(const Cplx& a, const Cplx& b) {
  return {a.re - b.re, a.im - b.im};
}
inline Cplx operator-(const Cplx& a) { return {-a.re, -a.im}; }
inline Cplx operator*(const Cplx& a, const Cplx& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Cplx operator*(const Real& s, const Cplx& a) {
  return {s * a.re, s * a.im};
}
inline Cplx operator*(const Cplx& a, const Real& s) { return s * a; }

inline Cplx operator/(const Cplx& a, const Real& s) {
  return {a.re / s, a.im / s};
}

// Smith's division: scale by the larger component of the divisor so the
// intermediate products stay in range.
inline Cplx operator/(const Cplx& a, const Cplx& b) {
  if (abs(b.re) >= abs(b.im)) {
    Real r = b.im / b.re;
    Real den = b.re + b.im * r;
    return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
  }
  Real r = b.re / b.im;
  Real den = b.re * r + b.im;
  return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}

inline Cplx& operator+=(Cplx& a, const Cplx& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}
inline Cplx& operator-=(Cplx& a, const Cplx& b) {
  a.re -= b.re;
  a.im -= b.im;
  return a;
}
inline Cplx& operator*=(Cplx& a, const Cplx& b) {
  a = a * b;
  return a;
}

inline Cplx conj(const Cplx& a) { return {a.re, -a.im}; }
inline Real abs(const Cplx& a) { return hypot(a.re, a.im); }
inline Real norm(const Cplx& a) { return a.re * a.re + a.im * a.im; }
inline Real arg(const Cplx& a) { return atan2(a.im, a.re); }

inline Cplx exp(const Cplx& a) {
  Real m = exp(a.re);
  return {m * cos(a.im), m * sin(a.im)};
}

inline Cplx log(const Cplx& a) { return {log(abs(a)), arg(a)}; }

// Principal square root via the stable half-angle form.
inline Cplx sqrt(const Cplx& a) {
  Real m = abs(a);
  if (m == 0) return {Real(0), Real(0)};
  Real w = sqrt((m + abs(a.re)) / 2);
  if (a.re >= 0) {
    return {w, a.im / (2 * w)};
  }
  Real v = a.im >= 0 ? w : -w;
  return {a.im / (2 * v), v};
}

inline cplx to_cplx(const Cplx& a) {
  return {static_cast<real>(a.re), static_cast<real>(a.im)};
}

}  // namespace qde::mpn
