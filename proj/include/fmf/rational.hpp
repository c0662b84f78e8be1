#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace fmf {

using Rat = mpq_class;
using Cplx = std::complex<double>;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p" or "p/q" with optional leading sign.
inline Rat rat_parse(const std::string& s) {
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
}

inline std::string to_string(const Rat& r) { return r.get_str(); }
inline Cplx to_complex(const Rat& r) { return Cplx(r.get_d(), 0.0); }
inline bool is_negative(const Rat& r) { return sgn(r) < 0; }

// Gaussian rationals a + b*i: the coefficient field used when exact complex
// characters are needed (rational structure constants can have complex
// eigenvalue functionals).
struct GaussRat {
  Rat re, im;

  GaussRat() : re(0), im(0) {}
  GaussRat(long v) : re(v, 1), im(0) {}  // NOLINT: implicit for literals
  GaussRat(Rat r) : re(std::move(r)), im(0) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    Rat n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("division by zero GaussRat");
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
  }
  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

inline std::string to_string(const GaussRat& g) {
  if (g.im == 0) return g.re.get_str();
  std::string s = "(" + g.re.get_str();
  s += (sgn(g.im) < 0) ? "-" : "+";
  Rat a = abs(g.im);
  s += a.get_str() + "i)";
  return s;
}
inline Cplx to_complex(const GaussRat& g) { return Cplx(g.re.get_d(), g.im.get_d()); }
inline bool is_negative(const GaussRat& g) { return g.im == 0 && sgn(g.re) < 0; }

}  // namespace fmf
