#pragma once

// Univariate elimination over exact polynomial coefficients: fraction-free
// determinants, Sylvester resultants, discriminants, multivariate gcd via a
// subresultant remainder sequence, and squarefree parts.

#include <optional>
#include <stdexcept>
#include <vector>

#include "fmf/poly.hpp"

namespace fmf {

namespace detail {
template <class K>
Poly<K> exact_quot(const Poly<K>& a, const Poly<K>& b, const char* who) {
  auto q = divide_exact(a, b);
  if (!q) throw std::logic_error(std::string(who) + ": division expected to be exact");
  return *q;
}
}  // namespace detail

// Fraction-free (Bareiss) determinant over an exact coefficient ring.
template <class K>
Poly<K> bareiss_det(std::vector<std::vector<Poly<K>>> m,
                    const std::vector<std::string>& vars) {
  const size_t n = m.size();
  if (n == 0) return poly_const<K>(vars, K(1));
  for (auto& row : m) {
    if (row.size() != n) throw std::invalid_argument("determinant of non-square matrix");
    for (auto& e : row) e = poly_extend(e, vars);
  }
  int sign = 1;
  Poly<K> prev = poly_const<K>(vars, K(1));
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t pivot = k + 1;
      while (pivot < n && m[pivot][k].is_zero()) ++pivot;
      if (pivot == n) return poly_zero<K>(vars);
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Poly<K> num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        m[i][j] = detail::exact_quot(num, prev, "bareiss_det");
      }
      m[i][k] = poly_zero<K>(vars);
    }
    prev = m[k][k];
  }
  Poly<K> det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

// Sylvester matrix of a and b with respect to var; entries are free of var.
template <class K>
std::vector<std::vector<Poly<K>>> sylvester_matrix(const Poly<K>& a, const Poly<K>& b,
                                                   const std::string& var) {
  unsigned da = degree_in(a, var), db = degree_in(b, var);
  if (da == 0 || db == 0)
    throw std::invalid_argument("resultant requires positive degree in '" + var + "'");
  auto [x, y] = poly_align(a, b);
  auto ca = coeffs_descending(x, var);
  auto cb = coeffs_descending(y, var);
  size_t n = da + db;
  std::vector<std::vector<Poly<K>>> m(n, std::vector<Poly<K>>(n, poly_zero<K>(x.vars)));
  for (size_t r = 0; r < db; ++r)
    for (size_t j = 0; j < ca.size(); ++j) m[r][r + j] = ca[j];
  for (size_t r = 0; r < da; ++r)
    for (size_t j = 0; j < cb.size(); ++j) m[db + r][r + j] = cb[j];
  return m;
}

template <class K>
Poly<K> resultant(const Poly<K>& a, const Poly<K>& b, const std::string& var) {
  auto [x, y] = poly_align(a, b);
  auto m = sylvester_matrix(x, y, var);
  return bareiss_det(std::move(m), x.vars);
}

// Discriminant of a univariate-in-var polynomial:
// disc = (-1)^{d(d-1)/2} Res(a, a') / lc(a).
template <class K>
Poly<K> discriminant_uni(const Poly<K>& a, const std::string& var) {
  unsigned d = degree_in(a, var);
  if (d < 2) throw std::invalid_argument("discriminant requires degree >= 2 in '" + var + "'");
  Poly<K> da = partial_derivative(a, var);
  Poly<K> res = da.is_zero() ? poly_zero<K>(a.vars) : resultant(a, da, var);
  Poly<K> lc = leading_coeff_in(a, var);
  Poly<K> q = detail::exact_quot(res, lc, "discriminant_uni");
  bool negate = ((static_cast<unsigned long>(d) * (d - 1)) / 2) % 2 == 1;
  return negate ? -q : q;
}

// --- multivariate gcd ------------------------------------------------------

namespace detail {

// Pseudo-remainder of a by b with respect to var: lc(b)^(delta+1) * a = q*b + R.
template <class K>
Poly<K> pseudo_rem(const Poly<K>& a, const Poly<K>& b, const std::string& var) {
  unsigned db = degree_in(b, var);
  Poly<K> lcb = leading_coeff_in(b, var);
  Poly<K> r = a;
  long e = static_cast<long>(degree_in(a, var)) - static_cast<long>(db) + 1;
  while (!r.is_zero() && degree_in(r, var) >= db && e > 0) {
    unsigned dr = degree_in(r, var);
    Poly<K> lcr = leading_coeff_in(r, var);
    Poly<K> shift = poly_var<K>(r.vars, var, dr - db);
    r = lcb * r - lcr * shift * poly_extend(b, r.vars);
    --e;
    if (!r.is_zero() && degree_in(r, var) >= dr && dr >= db) break;  // no progress guard
  }
  for (; e > 0; --e) r = lcb * r;
  return r;
}

template <class K>
Poly<K> gcd_mv_impl(Poly<K> a, Poly<K> b);

// gcd of the coefficients of p viewed as univariate in var.
template <class K>
Poly<K> content_in(const Poly<K>& p, const std::string& var) {
  auto cs = coeffs_descending(p, var);
  Poly<K> g = poly_zero<K>(p.vars);
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c : gcd_mv_impl(g, c);
    if (g.is_constant()) break;
  }
  return g.is_zero() ? poly_zero<K>(p.vars) : g;
}

template <class K>
Poly<K> monic_normalize(const Poly<K>& p) {
  if (p.is_zero()) return p;
  K inv = K(1) / p.terms.rbegin()->second;
  return inv * p;
}

template <class K>
Poly<K> gcd_mv_impl(Poly<K> a, Poly<K> b) {
  if (a.is_zero()) return monic_normalize(b);
  if (b.is_zero()) return monic_normalize(a);
  auto [x, y] = poly_align(a, b);
  if (x.is_constant() || y.is_constant()) return poly_const<K>(x.vars, K(1));

  // Main variable: prefer one where both have positive degree.
  std::string var;
  for (const auto& v : x.vars) {
    unsigned dx = degree_in(x, v), dy = degree_in(y, v);
    if (dx > 0 && dy > 0) {
      var = v;
      break;
    }
  }
  if (var.empty()) {
    // Disjoint variable supports: gcd divides every coefficient of each.
    for (const auto& v : x.vars)
      if (degree_in(x, v) > 0) return gcd_mv_impl(content_in(x, v), y);
    return poly_const<K>(x.vars, K(1));
  }

  Poly<K> cx = content_in(x, var), cy = content_in(y, var);
  Poly<K> c = gcd_mv_impl(cx, cy);
  Poly<K> A = exact_quot(x, cx, "gcd content");
  Poly<K> B = exact_quot(y, cy, "gcd content");
  if (degree_in(A, var) < degree_in(B, var)) std::swap(A, B);

  Poly<K> one = poly_const<K>(x.vars, K(1));
  Poly<K> g = one, h = one;
  Poly<K> result_pp;
  while (true) {
    unsigned da = degree_in(A, var), db = degree_in(B, var);
    unsigned delta = da - db;
    Poly<K> R = pseudo_rem(A, B, var);
    if (R.is_zero()) {
      result_pp = exact_quot(B, content_in(B, var), "gcd pp");
      break;
    }
    if (degree_in(R, var) == 0) {
      result_pp = one;
      break;
    }
    A = B;
    Poly<K> divisor = g * poly_pow(h, delta);
    B = exact_quot(R, divisor, "subresultant step");
    g = leading_coeff_in(A, var);
    if (delta > 0) h = exact_quot(poly_pow(g, delta), poly_pow(h, delta - 1), "subresultant h");
  }
  return monic_normalize(c * result_pp);
}

}  // namespace detail

// gcd over the polynomial ring, normalized monic in the leading graded-lex
// coefficient (units are field scalars).
template <class K>
Poly<K> gcd_poly(const Poly<K>& a, const Poly<K>& b) {
  return detail::gcd_mv_impl(a, b);
}

// Product of the distinct irreducible factors, normalized monic.
template <class K>
Poly<K> squarefree_part(const Poly<K>& p) {
  if (p.is_zero()) return p;
  if (p.is_constant()) return poly_const<K>(p.vars, K(1));
  Poly<K> g = p;
  for (const auto& v : p.vars) {
    if (degree_in(p, v) == 0) continue;
    g = gcd_poly(g, partial_derivative(p, v));
    if (g.is_constant()) break;
  }
  if (g.is_constant()) return detail::monic_normalize(p);
  return detail::monic_normalize(detail::exact_quot(p, g, "squarefree_part"));
}

}  // namespace fmf
