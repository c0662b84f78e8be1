#pragma once

// F-manifold charts: a polynomial structure tensor a[i][j][k](t) for the
// multiplication of coordinate vector fields, with exact verification of the
// axioms (symmetry, unit, associativity), the integrability identity, Euler
// field conditions, pointwise algebras, direct products, and idempotent
// frames at semisimple points.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fmf/algebra.hpp"
#include "fmf/poly.hpp"

namespace fmf {

struct PolyVectorField {
  std::vector<Poly<Rat>> components;
};

struct Chart {
  size_t dim = 0;
  std::vector<std::string> coords;                       // t1..tn
  std::vector<std::vector<std::vector<Poly<Rat>>>> a;    // a[i][j][k], 0-based
  size_t unit_index = 0;
};

struct EulerCandidate {
  PolyVectorField field;
  Rat weight;
};

struct ChartViolation {
  std::string identity;
  Poly<Rat> residual;
};

struct ChartReport {
  bool pass = true;
  std::vector<ChartViolation> violations;
};

inline std::vector<std::string> default_coords(size_t n) {
  std::vector<std::string> c;
  for (size_t i = 1; i <= n; ++i) c.push_back("t" + std::to_string(i));
  return c;
}

// Chart with only the unit structure filled in; other products start at zero.
inline Chart make_chart(size_t n, size_t unit_index = 0) {
  Chart c;
  c.dim = n;
  c.coords = default_coords(n);
  c.unit_index = unit_index;
  auto zero = poly_zero<Rat>(c.coords);
  c.a.assign(n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, zero)));
  for (size_t j = 0; j < n; ++j)
    for (size_t k = 0; k < n; ++k) {
      Poly<Rat> v = (j == k) ? poly_const<Rat>(c.coords, rat(1)) : zero;
      c.a[unit_index][j][k] = v;
      c.a[j][unit_index][k] = v;
    }
  return c;
}

// Sets a[i][j][k] and its mirror a[j][i][k].
inline void set_structure(Chart& c, size_t i, size_t j, size_t k, const Poly<Rat>& p) {
  auto q = poly_extend(p, c.coords);
  c.a[i][j][k] = q;
  c.a[j][i][k] = q;
}

inline PolyVectorField zero_field(const Chart& c) {
  return {std::vector<Poly<Rat>>(c.dim, poly_zero<Rat>(c.coords))};
}

inline PolyVectorField coordinate_field(const Chart& c, size_t i) {
  auto f = zero_field(c);
  f.components[i] = poly_const<Rat>(c.coords, rat(1));
  return f;
}

inline PolyVectorField unit_field(const Chart& c) { return coordinate_field(c, c.unit_index); }

inline PolyVectorField operator+(const PolyVectorField& x, const PolyVectorField& y) {
  PolyVectorField r = x;
  for (size_t i = 0; i < r.components.size(); ++i)
    r.components[i] = r.components[i] + y.components[i];
  return r;
}

inline PolyVectorField operator-(const PolyVectorField& x, const PolyVectorField& y) {
  PolyVectorField r = x;
  for (size_t i = 0; i < r.components.size(); ++i)
    r.components[i] = r.components[i] - y.components[i];
  return r;
}

inline PolyVectorField scale(const Rat& c, const PolyVectorField& x) {
  PolyVectorField r = x;
  for (auto& comp : r.components) comp = c * comp;
  return r;
}

inline PolyVectorField scale(const Poly<Rat>& f, const PolyVectorField& x) {
  PolyVectorField r = x;
  for (auto& comp : r.components) comp = f * comp;
  return r;
}

inline bool is_zero_field(const PolyVectorField& x) {
  for (const auto& comp : x.components)
    if (!comp.is_zero()) return false;
  return true;
}

// (X o Y)_k = sum_ij X_i Y_j a[i][j][k]
inline PolyVectorField mul(const Chart& c, const PolyVectorField& x, const PolyVectorField& y) {
  auto r = zero_field(c);
  for (size_t i = 0; i < c.dim; ++i) {
    if (x.components[i].is_zero()) continue;
    for (size_t j = 0; j < c.dim; ++j) {
      if (y.components[j].is_zero()) continue;
      auto xy = x.components[i] * y.components[j];
      for (size_t k = 0; k < c.dim; ++k) {
        if (c.a[i][j][k].is_zero()) continue;
        r.components[k] = r.components[k] + xy * c.a[i][j][k];
      }
    }
  }
  return r;
}

// [X,Y]_k = sum_i X_i d_i(Y_k) - Y_i d_i(X_k)
inline PolyVectorField lie_bracket(const Chart& c, const PolyVectorField& x,
                                   const PolyVectorField& y) {
  auto r = zero_field(c);
  for (size_t k = 0; k < c.dim; ++k)
    for (size_t i = 0; i < c.dim; ++i) {
      if (!x.components[i].is_zero())
        r.components[k] =
            r.components[k] + x.components[i] * partial_derivative(y.components[k], c.coords[i]);
      if (!y.components[i].is_zero())
        r.components[k] =
            r.components[k] - y.components[i] * partial_derivative(x.components[k], c.coords[i]);
    }
  return r;
}

namespace detail {
inline void add_violation(ChartReport& rep, std::string identity, Poly<Rat> residual) {
  rep.pass = false;
  rep.violations.push_back({std::move(identity), std::move(residual)});
}
}  // namespace detail

// Exact axioms: commutativity of the tensor, the unit axiom, associativity.
inline ChartReport validate(const Chart& c) {
  ChartReport rep;
  const size_t n = c.dim;
  if (c.a.size() != n || c.coords.size() != n || c.unit_index >= n)
    throw std::invalid_argument("chart shape mismatch");
  for (const auto& ai : c.a) {
    if (ai.size() != n) throw std::invalid_argument("chart tensor shape mismatch");
    for (const auto& aij : ai)
      if (aij.size() != n) throw std::invalid_argument("chart tensor shape mismatch");
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (c.a[i][j][k] != c.a[j][i][k])
          detail::add_violation(rep,
                                "symmetry(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    ";" + std::to_string(k + 1) + ")",
                                c.a[i][j][k] - c.a[j][i][k]);
  for (size_t j = 0; j < n; ++j)
    for (size_t k = 0; k < n; ++k) {
      Poly<Rat> want = (j == k) ? poly_const<Rat>(c.coords, rat(1)) : poly_zero<Rat>(c.coords);
      if (c.a[c.unit_index][j][k] != want)
        detail::add_violation(rep,
                              "unit(" + std::to_string(j + 1) + ";" + std::to_string(k + 1) + ")",
                              c.a[c.unit_index][j][k] - want);
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
          Poly<Rat> acc = poly_zero<Rat>(c.coords);
          for (size_t m = 0; m < n; ++m)
            acc = acc + c.a[i][j][m] * c.a[m][k][l] - c.a[j][k][m] * c.a[i][m][l];
          if (!acc.is_zero())
            detail::add_violation(rep,
                                  "associativity(" + std::to_string(i + 1) + "," +
                                      std::to_string(j + 1) + "," + std::to_string(k + 1) + ";" +
                                      std::to_string(l + 1) + ")",
                                  acc);
        }
  return rep;
}

// The nine-term integrability expression evaluated on four fields; vanishing
// on all coordinate quadruples is the F-manifold condition beyond the axioms.
inline PolyVectorField integrability_tensor(const Chart& c, const PolyVectorField& x,
                                            const PolyVectorField& y, const PolyVectorField& z,
                                            const PolyVectorField& w) {
  auto xy = mul(c, x, y);
  auto zw = mul(c, z, w);
  auto t = lie_bracket(c, xy, zw);
  t = t - mul(c, lie_bracket(c, xy, z), w);
  t = t - mul(c, lie_bracket(c, xy, w), z);
  t = t - mul(c, x, lie_bracket(c, y, zw));
  t = t + mul(c, x, mul(c, lie_bracket(c, y, z), w));
  t = t + mul(c, x, mul(c, lie_bracket(c, y, w), z));
  t = t - mul(c, y, lie_bracket(c, x, zw));
  t = t + mul(c, y, mul(c, lie_bracket(c, x, z), w));
  t = t + mul(c, y, mul(c, lie_bracket(c, x, w), z));
  return t;
}

// Coordinate quadruples with the symmetries (X<->Y, Z<->W) deduplicated.
inline ChartReport integrability_check(const Chart& c) {
  ChartReport rep;
  const size_t n = c.dim;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b)
      for (size_t cc = 0; cc < n; ++cc)
        for (size_t d = cc; d < n; ++d) {
          auto t = integrability_tensor(c, coordinate_field(c, a), coordinate_field(c, b),
                                        coordinate_field(c, cc), coordinate_field(c, d));
          for (size_t k = 0; k < n; ++k)
            if (!t.components[k].is_zero())
              detail::add_violation(rep,
                                    "integrability(" + std::to_string(a + 1) + "," +
                                        std::to_string(b + 1) + ";" + std::to_string(cc + 1) +
                                        "," + std::to_string(d + 1) + ")[" +
                                        std::to_string(k + 1) + "]",
                                    t.components[k]);
        }
  return rep;
}

// [E, X o Y] - [E,X] o Y - X o [E,Y] - d * X o Y on two fields.
inline PolyVectorField euler_residual(const Chart& c, const PolyVectorField& e, const Rat& d,
                                      const PolyVectorField& x, const PolyVectorField& y) {
  auto xy = mul(c, x, y);
  auto r = lie_bracket(c, e, xy);
  r = r - mul(c, lie_bracket(c, e, x), y);
  r = r - mul(c, x, lie_bracket(c, e, y));
  r = r - scale(d, xy);
  return r;
}

inline ChartReport euler_check(const Chart& c, const PolyVectorField& e, const Rat& d) {
  ChartReport rep;
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i; j < c.dim; ++j) {
      auto r = euler_residual(c, e, d, coordinate_field(c, i), coordinate_field(c, j));
      for (size_t k = 0; k < c.dim; ++k)
        if (!r.components[k].is_zero())
          detail::add_violation(rep,
                                "euler(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    ")[" + std::to_string(k + 1) + "]",
                                r.components[k]);
    }
  return rep;
}

// o-power of a field: E^1 = E, E^(k+1) = E o E^k.
inline PolyVectorField field_power(const Chart& c, const PolyVectorField& e, unsigned k) {
  if (k == 0) return unit_field(c);
  auto r = e;
  for (unsigned i = 1; i < k; ++i) r = mul(c, r, e);
  return r;
}

// [E^n, E^m] = d (m - n) E^(n+m-1) for an Euler field of weight d.
inline ChartReport euler_power_identity_check(const Chart& c, const PolyVectorField& e,
                                              const Rat& d, unsigned n, unsigned m) {
  ChartReport rep;
  auto en = field_power(c, e, n);
  auto em = field_power(c, e, m);
  auto lhs = lie_bracket(c, en, em);
  Rat factor = d * rat(static_cast<long>(m) - static_cast<long>(n));
  auto rhs = scale(factor, field_power(c, e, n + m - 1));
  auto diff = lhs - rhs;
  for (size_t k = 0; k < c.dim; ++k)
    if (!diff.components[k].is_zero())
      detail::add_violation(rep,
                            "euler_power(" + std::to_string(n) + "," + std::to_string(m) + ")[" +
                                std::to_string(k + 1) + "]",
                            diff.components[k]);
  return rep;
}

// Seeks E = t_u d_u + sum_{i != u} w_i t_i d_i of weight 1 with unknown
// rational w_i. The Euler residual is affine in the w_i, so monomial matching
// yields an exact linear system; free unknowns are pinned to 0.
inline std::optional<EulerCandidate> solve_euler_weights(const Chart& c) {
  const size_t n = c.dim;
  const size_t u = c.unit_index;
  // Residual contribution of each diagonal generator t_m d_m with d = 0, and
  // the constant part: the unit-coordinate generator with the -1 * XoY term.
  std::vector<PolyVectorField> gen(n, zero_field(c));
  for (size_t m = 0; m < n; ++m) {
    auto f = zero_field(c);
    f.components[m] = poly_var<Rat>(c.coords, c.coords[m]);
    gen[m] = f;
  }
  // Unknown slots: all m != u.
  std::vector<size_t> unknowns;
  for (size_t m = 0; m < n; ++m)
    if (m != u) unknowns.push_back(m);

  // Rows of the linear system, keyed by (i, j, k, monomial).
  std::vector<std::vector<Rat>> rows;  // per row: coefficients of unknowns
  std::vector<Rat> rhs;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      auto di = coordinate_field(c, i);
      auto dj = coordinate_field(c, j);
      // Constant part: generator at the unit slot, with weight term d = 1.
      auto base = euler_residual(c, gen[u], rat(1), di, dj);
      std::vector<PolyVectorField> parts;
      for (size_t m : unknowns) parts.push_back(euler_residual(c, gen[m], rat(0), di, dj));
      for (size_t k = 0; k < n; ++k) {
        // Collect every monomial appearing in base or any part.
        std::vector<Mono> monos;
        auto collect = [&](const Poly<Rat>& p) {
          for (const auto& [mo, co] : p.terms) monos.push_back(mo);
        };
        collect(base.components[k]);
        for (const auto& pt : parts) collect(pt.components[k]);
        std::sort(monos.begin(), monos.end(), GrlexLess{});
        monos.erase(std::unique(monos.begin(), monos.end()), monos.end());
        for (const auto& mo : monos) {
          std::vector<Rat> row(unknowns.size(), rat(0));
          for (size_t t = 0; t < unknowns.size(); ++t) {
            auto it = parts[t].components[k].terms.find(mo);
            if (it != parts[t].components[k].terms.end()) row[t] = it->second;
          }
          Rat b = rat(0);
          auto it = base.components[k].terms.find(mo);
          if (it != base.components[k].terms.end()) b = -it->second;
          rows.push_back(std::move(row));
          rhs.push_back(b);
        }
      }
    }

  // Exact Gaussian elimination.
  const size_t cols = unknowns.size();
  size_t rank = 0;
  std::vector<size_t> pivot_col;
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t sel = rows.size();
    for (size_t r = rank; r < rows.size(); ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    std::swap(rhs[rank], rhs[sel]);
    Rat inv = 1 / rows[rank][col];
    for (size_t cc = 0; cc < cols; ++cc) rows[rank][cc] = rows[rank][cc] * inv;
    rhs[rank] = rhs[rank] * inv;
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rat f = rows[r][col];
      for (size_t cc = 0; cc < cols; ++cc) rows[r][cc] = rows[r][cc] - f * rows[rank][cc];
      rhs[r] = rhs[r] - f * rhs[rank];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (size_t r = rank; r < rows.size(); ++r)
    if (rhs[r] != 0) return std::nullopt;  // inconsistent: no diagonal Euler field

  std::vector<Rat> w(cols, rat(0));  // free unknowns pinned to zero
  for (size_t r = 0; r < rank; ++r) w[pivot_col[r]] = rhs[r];

  auto e = zero_field(c);
  e.components[u] = poly_var<Rat>(c.coords, c.coords[u]);
  for (size_t t = 0; t < unknowns.size(); ++t)
    e.components[unknowns[t]] = w[t] * poly_var<Rat>(c.coords, c.coords[unknowns[t]]);
  EulerCandidate cand{e, rat(1)};
  // The ansatz restricts which solutions are found, never their correctness.
  if (!euler_check(c, cand.field, cand.weight).pass) return std::nullopt;
  return cand;
}

inline FiniteAlgebra fiber_algebra(const Chart& c, const std::vector<Cplx>& p) {
  FiniteAlgebra f;
  f.dim = c.dim;
  f.c.assign(c.dim, std::vector<std::vector<Cplx>>(c.dim, std::vector<Cplx>(c.dim)));
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = 0; j < c.dim; ++j)
      for (size_t k = 0; k < c.dim; ++k) f.c[i][j][k] = eval(c.a[i][j][k], p);
  f.unit.assign(c.dim, Cplx(0, 0));
  f.unit[c.unit_index] = Cplx(1, 0);
  return f;
}

// Direct product: block structure on concatenated coordinates, then a
// constant-linear change of coordinates making e = e_1 + e_2 a coordinate
// field again (the unit axiom is an exact tensor identity in every chart).
inline Chart product_chart(const Chart& c1, const Chart& c2) {
  const size_t m = c1.dim, n = c2.dim, nn = m + n;
  Chart c;
  c.dim = nn;
  c.coords = default_coords(nn);
  c.unit_index = c1.unit_index;
  const size_t u1 = c1.unit_index;
  const size_t u2 = m + c2.unit_index;

  // Block tensor over the new names.
  std::vector<std::string> names1(c.coords.begin(), c.coords.begin() + static_cast<long>(m));
  std::vector<std::string> names2(c.coords.begin() + static_cast<long>(m), c.coords.end());
  auto zero = poly_zero<Rat>(c.coords);
  std::vector<std::vector<std::vector<Poly<Rat>>>> blk(
      nn, std::vector<std::vector<Poly<Rat>>>(nn, std::vector<Poly<Rat>>(nn, zero)));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      for (size_t k = 0; k < m; ++k)
        blk[i][j][k] = poly_extend(poly_rename(c1.a[i][j][k], names1), c.coords);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        blk[m + i][m + j][m + k] = poly_extend(poly_rename(c2.a[i][j][k], names2), c.coords);

  // Basis change B_q = delta_q except B_{u1} = delta_{u1} + delta_{u2};
  // coordinates transform by old = P s, i.e. old_{u2} = s_{u2} + s_{u1}.
  auto p_entry = [&](size_t p, size_t q) -> long {
    if (p == q) return 1;
    if (p == u2 && q == u1) return 1;
    return 0;
  };
  auto pinv_entry = [&](size_t p, size_t q) -> long {
    if (p == q) return 1;
    if (p == u2 && q == u1) return -1;
    return 0;
  };
  std::vector<Poly<Rat>> old_in_new(nn, zero);
  for (size_t p = 0; p < nn; ++p) {
    for (size_t q = 0; q < nn; ++q)
      if (long e = p_entry(p, q); e != 0)
        old_in_new[p] = old_in_new[p] + rat(e) * poly_var<Rat>(c.coords, c.coords[q]);
  }

  auto a_new = blk;
  for (size_t q1 = 0; q1 < nn; ++q1)
    for (size_t q2 = 0; q2 < nn; ++q2)
      for (size_t k = 0; k < nn; ++k) {
        Poly<Rat> acc = zero;
        for (size_t p1 = 0; p1 < nn; ++p1) {
          if (p_entry(p1, q1) == 0) continue;
          for (size_t p2 = 0; p2 < nn; ++p2) {
            if (p_entry(p2, q2) == 0) continue;
            for (size_t r = 0; r < nn; ++r) {
              long w = p_entry(p1, q1) * p_entry(p2, q2) * pinv_entry(k, r);
              if (w == 0 || blk[p1][p2][r].is_zero()) continue;
              acc = acc + rat(w) * compose(blk[p1][p2][r], old_in_new);
            }
          }
        }
        a_new[q1][q2][k] = acc;
      }
  c.a = std::move(a_new);
  return c;
}

struct IdempotentFrame {
  std::vector<std::vector<Cplx>> idempotents;  // at the base point
  double max_commutator = 0.0;                 // central-difference estimate
};

namespace detail {

// Greedy character matching of decomposition factors against a reference.
inline std::vector<size_t> match_factors(const AlgebraDecomposition& ref,
                                         const AlgebraDecomposition& dec) {
  const size_t n = ref.factors.size();
  std::vector<size_t> match(n, n);
  std::vector<bool> used(dec.factors.size(), false);
  for (size_t i = 0; i < n; ++i) {
    double best = 1e300;
    size_t bi = dec.factors.size();
    for (size_t j = 0; j < dec.factors.size(); ++j) {
      if (used[j]) continue;
      double d = 0;
      for (size_t k = 0; k < ref.factors[i].character.size(); ++k)
        d = std::max(d, std::abs(ref.factors[i].character[k] - dec.factors[j].character[k]));
      if (d < best) {
        best = d;
        bi = j;
      }
    }
    match[i] = bi;
    used[bi] = true;
  }
  return match;
}

}  // namespace detail

// Idempotent vector fields near a semisimple point, with a central-difference
// estimate of the largest commutator norm ||[e_i, e_j]||.
inline IdempotentFrame idempotent_frame(const Chart& c, const std::vector<Cplx>& p, double h,
                                        double tol = 1e-8) {
  auto base = decompose(fiber_algebra(c, p), tol);
  const size_t n = c.dim;
  for (const auto& f : base.factors)
    if (f.block_dim != 1)
      throw std::runtime_error("non-semisimple fiber: idempotent frame undefined");

  auto idem_at = [&](const std::vector<Cplx>& q) {
    auto dec = decompose(fiber_algebra(c, q), tol);
    if (dec.factors.size() != n)
      throw std::runtime_error("non-semisimple fiber: idempotent frame undefined");
    auto match = detail::match_factors(base, dec);
    std::vector<std::vector<Cplx>> e(n);
    for (size_t i = 0; i < n; ++i) e[i] = dec.factors[match[i]].idempotent;
    return e;
  };

  IdempotentFrame frame;
  frame.idempotents.resize(n);
  for (size_t i = 0; i < n; ++i) frame.idempotents[i] = base.factors[i].idempotent;

  // d_l e_i(k) by central differences.
  std::vector<std::vector<std::vector<Cplx>>> deriv(
      n, std::vector<std::vector<Cplx>>(n, std::vector<Cplx>(n)));
  for (size_t l = 0; l < n; ++l) {
    auto qp = p, qm = p;
    qp[l] += Cplx(h, 0);
    qm[l] -= Cplx(h, 0);
    auto ep = idem_at(qp);
    auto em = idem_at(qm);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) deriv[l][i][k] = (ep[i][k] - em[i][k]) / (2.0 * h);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Cplx acc(0, 0);
        for (size_t l = 0; l < n; ++l)
          acc += frame.idempotents[i][l] * deriv[l][j][k] -
                 frame.idempotents[j][l] * deriv[l][i][k];
        frame.max_commutator = std::max(frame.max_commutator, std::abs(acc));
      }
  return frame;
}

}  // namespace fmf
