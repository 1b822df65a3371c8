#pragma once

#include <cmath>
#include <cstdlib>

#include "glab/fuchsian.hpp"

namespace glab::quad {

using real = __float128;

inline real qabs(real x) { return x < 0 ? -x : x; }

inline real qsqrt(real x) {
  if (x <= 0) return 0;
  real s = std::sqrt(static_cast<double>(x));
  s = (s + x / s) / 2;
  s = (s + x / s) / 2;
  return s;
}

struct Qc {
  real re = 0, im = 0;
  Qc operator+(const Qc& o) const { return {re + o.re, im + o.im}; }
  Qc operator-(const Qc& o) const { return {re - o.re, im - o.im}; }
  Qc operator-() const { return {-re, -im}; }
  Qc operator*(const Qc& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Qc operator*(real s) const { return {re * s, im * s}; }
  Qc operator/(const Qc& o) const {
    real n = o.norm();
    return {(re * o.re + im * o.im) / n, (im * o.re - re * o.im) / n};
  }
  Qc conj() const { return {re, -im}; }
  real norm() const { return re * re + im * im; }
  cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  static Qc from(cplx z) { return {static_cast<real>(z.real()), static_cast<real>(z.imag())}; }
};

inline Qc csqrt(const Qc& z) {
  real m = qsqrt(z.norm());
  real t = qsqrt((m + qabs(z.re)) / 2);
  if (t == 0) return {};
  if (z.re >= 0) return {t, z.im / (2 * t)};
  return {qabs(z.im) / (2 * t), z.im < 0 ? -t : t};
}

struct Qm {
  Qc a, b, c, d;
  static Qm identity() { return {{1, 0}, {}, {}, {1, 0}}; }
  Qm operator*(const Qm& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Qm inverse() const { return {d, Qc{} - b, Qc{} - c, a}; }
  Qc trace() const { return a + d; }
  Qc det() const { return a * d - b * c; }
  real frob() const { return a.norm() + b.norm() + c.norm() + d.norm(); }
  Qc apply(const Qc& z) const { return (a * z + b) / (c * z + d); }
};

// Rescales to det 1 in quad precision; det is within rounding of 1.
inline Qm to_quad(const MobiusMap& m) {
  Qm r{Qc::from(m.a()), Qc::from(m.b()), Qc::from(m.c()), Qc::from(m.d())};
  Qc e = r.a * r.d - r.b * r.c - Qc{1, 0};
  // 1/sqrt(1 + e) to third order
  Qc half{0.5, 0}, c2{0.375, 0}, c3{-0.3125, 0};
  Qc s = Qc{1, 0} - half * e + c2 * e * e + c3 * e * e * e;
  return {r.a * s, r.b * s, r.c * s, r.d * s};
}

inline Qm evaluate_quad(const HolonomyRep& rho, const Word& w) {
  Qm m = Qm::identity();
  for (int l : w) {
    Qm g = to_quad(rho.generator(std::abs(l) - 1));
    m = m * (l > 0 ? g : g.inverse());
  }
  return m;
}

}  // namespace glab::quad
