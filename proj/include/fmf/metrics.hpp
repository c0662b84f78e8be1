#pragma once

// Multiplication-invariant metrics on a chart: invariance of the (3,0)-tensor
// A, Levi-Civita data, the potentiality checks, flatness, coidentity,
// conformal Euler weights, and the aggregate Frobenius verdict.  All checks
// clear denominators by det(g), so every test is exact polynomial identity.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <fmf/chart.hpp>
#include <fmf/poly.hpp>
#include <fmf/rational.hpp>
#include <fmf/resultant.hpp>

namespace fmf {

struct MetricField {
  std::vector<std::string> coords;
  std::vector<std::vector<Poly<Rat>>> g;
};

inline MetricField make_metric(std::vector<std::string> coords) {
  MetricField m;
  const size_t n = coords.size();
  m.g.assign(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(coords)));
  m.coords = std::move(coords);
  return m;
}

inline void set_metric(MetricField& m, size_t i, size_t j, const Poly<Rat>& p) {
  if (i >= m.g.size() || j >= m.g.size()) throw std::out_of_range("set_metric: index out of range");
  m.g[i][j] = poly_extend(p, m.coords);
  m.g[j][i] = m.g[i][j];
}

inline MetricField identity_metric(std::vector<std::string> coords) {
  MetricField m = make_metric(std::move(coords));
  for (size_t i = 0; i < m.g.size(); ++i) set_metric(m, i, i, poly_const<Rat>(m.coords, rat(1)));
  return m;
}

inline MetricField antidiagonal_metric(std::vector<std::string> coords) {
  MetricField m = make_metric(std::move(coords));
  const size_t n = m.g.size();
  for (size_t i = 0; i < n; ++i) set_metric(m, i, n - 1 - i, poly_const<Rat>(m.coords, rat(1)));
  return m;
}

inline Poly<Rat> metric_det(const MetricField& m) { return bareiss_det(m.g, m.coords); }

inline void validate_metric(const Chart& c, const MetricField& m) {
  if (m.coords != c.coords)
    throw std::invalid_argument("metric: coordinate list does not match the chart");
  if (m.g.size() != c.dim) throw std::invalid_argument("metric: wrong number of rows");
  for (const auto& row : m.g)
    if (row.size() != c.dim) throw std::invalid_argument("metric: wrong number of columns");
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i + 1; j < c.dim; ++j)
      if (!(m.g[i][j] - m.g[j][i]).is_zero())
        throw std::invalid_argument("metric: not symmetric at entry (" + std::to_string(i + 1) +
                                    "," + std::to_string(j + 1) + ")");
  if (metric_det(m).is_zero()) throw std::invalid_argument("metric: determinant vanishes identically");
}

// --- invariance ---------------------------------------------------------------

// A[i][j][k] = g(d_i, d_j o d_k)
inline std::vector<std::vector<std::vector<Poly<Rat>>>> invariance_tensor(const Chart& c,
                                                                          const MetricField& m) {
  const size_t n = c.dim;
  std::vector<std::vector<std::vector<Poly<Rat>>>> A(
      n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords))));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Poly<Rat> s = poly_zero<Rat>(m.coords);
        for (size_t l = 0; l < n; ++l) s = s + m.g[i][l] * c.a[j][k][l];
        A[i][j][k] = s;
      }
  return A;
}

// Total symmetry of A; since A is already symmetric in its last two slots,
// testing the first transposition generates the full symmetric group.
inline ChartReport invariance_check(const Chart& c, const MetricField& m) {
  validate_metric(c, m);
  const auto A = invariance_tensor(c, m);
  ChartReport rep;
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i + 1; j < c.dim; ++j)
      for (size_t k = 0; k < c.dim; ++k) {
        const Poly<Rat> r = A[i][j][k] - A[j][i][k];
        if (!r.is_zero())
          detail::add_violation(rep, "invariance(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                 ";" + std::to_string(k + 1) + ")",
                        r);
      }
  return rep;
}

// --- Levi-Civita data -----------------------------------------------------------

// Christoffel symbols as exact rational functions with the shared denominator
// det(g): Gamma^k_ij = num[k][i][j] / det.
struct ChristoffelData {
  std::vector<std::string> coords;
  Poly<Rat> det;
  std::vector<std::vector<Poly<Rat>>> adjugate;            // g^{-1} = adjugate / det
  std::vector<std::vector<std::vector<Poly<Rat>>>> first;  // Gamma_{l,ij}, polynomial
  std::vector<std::vector<std::vector<Poly<Rat>>>> num;    // det * Gamma^k_{ij}
};

inline ChristoffelData christoffel(const MetricField& m) {
  const size_t n = m.g.size();
  ChristoffelData ch;
  ch.coords = m.coords;
  ch.det = metric_det(m);
  if (ch.det.is_zero()) throw std::invalid_argument("christoffel: metric determinant vanishes");
  ch.adjugate.assign(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords)));
  for (size_t k = 0; k < n; ++k)
    for (size_t l = 0; l < n; ++l) {
      std::vector<std::vector<Poly<Rat>>> minor;
      for (size_t r = 0; r < n; ++r) {
        if (r == l) continue;
        std::vector<Poly<Rat>> row;
        for (size_t s = 0; s < n; ++s)
          if (s != k) row.push_back(m.g[r][s]);
        minor.push_back(std::move(row));
      }
      Poly<Rat> cof = minor.empty() ? poly_const<Rat>(m.coords, rat(1)) : bareiss_det(minor, m.coords);
      if ((k + l) % 2 == 1) cof = -cof;
      ch.adjugate[k][l] = cof;
    }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Poly<Rat> s = poly_zero<Rat>(m.coords);
      for (size_t l = 0; l < n; ++l) s = s + m.g[i][l] * ch.adjugate[l][j];
      const Poly<Rat> want = i == j ? ch.det : poly_zero<Rat>(m.coords);
      if (!(s - want).is_zero()) throw std::logic_error("christoffel: adjugate identity failed");
    }
  ch.first.assign(n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords))));
  for (size_t l = 0; l < n; ++l)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        const Poly<Rat> v = rat(1, 2) * (partial_derivative(m.g[l][j], m.coords[i]) +
                                         partial_derivative(m.g[l][i], m.coords[j]) -
                                         partial_derivative(m.g[i][j], m.coords[l]));
        ch.first[l][i][j] = v;
        ch.first[l][j][i] = v;
      }
  ch.num.assign(n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords))));
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i; j < n; ++j) {
        Poly<Rat> s = poly_zero<Rat>(m.coords);
        for (size_t l = 0; l < n; ++l) s = s + ch.adjugate[k][l] * ch.first[l][i][j];
        ch.num[k][i][j] = s;
        ch.num[k][j][i] = s;
      }
  return ch;
}

namespace detail {

// det * grad A, the covariant derivative of A assembled from Christoffels.
inline std::vector<std::vector<std::vector<std::vector<Poly<Rat>>>>> nabla_A_cleared(
    const Chart& c, const MetricField& m, const ChristoffelData& ch,
    const std::vector<std::vector<std::vector<Poly<Rat>>>>& A) {
  const size_t n = c.dim;
  std::vector<std::vector<std::vector<std::vector<Poly<Rat>>>>> T(
      n, std::vector<std::vector<std::vector<Poly<Rat>>>>(
             n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords)))));
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z)
        for (size_t w = 0; w < n; ++w) {
          Poly<Rat> s = ch.det * partial_derivative(A[y][z][w], m.coords[x]);
          for (size_t mm = 0; mm < n; ++mm) {
            s = s - ch.num[mm][x][y] * A[mm][z][w];
            s = s - ch.num[mm][x][z] * A[y][mm][w];
            s = s - ch.num[mm][x][w] * A[y][z][mm];
          }
          T[x][y][z][w] = s;
        }
  return T;
}

// det * (grad o)(x, z, w)^l, the covariant derivative of the multiplication.
inline std::vector<std::vector<std::vector<std::vector<Poly<Rat>>>>> nabla_mul_cleared(
    const Chart& c, const ChristoffelData& ch) {
  const size_t n = c.dim;
  std::vector<std::vector<std::vector<std::vector<Poly<Rat>>>>> N(
      n, std::vector<std::vector<std::vector<Poly<Rat>>>>(
             n, std::vector<std::vector<Poly<Rat>>>(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(ch.coords)))));
  for (size_t l = 0; l < n; ++l)
    for (size_t x = 0; x < n; ++x)
      for (size_t z = 0; z < n; ++z)
        for (size_t w = 0; w < n; ++w) {
          Poly<Rat> s = ch.det * partial_derivative(c.a[z][w][l], ch.coords[x]);
          for (size_t k = 0; k < n; ++k) s = s + c.a[z][w][k] * ch.num[l][x][k];
          for (size_t mm = 0; mm < n; ++mm) {
            s = s - ch.num[mm][x][z] * c.a[mm][w][l];
            s = s - ch.num[mm][x][w] * c.a[z][mm][l];
          }
          N[l][x][z][w] = s;
        }
  return N;
}

}  // namespace detail

// grad A assembled two independent ways: covariant derivative of A directly,
// and g(Y, grad o (X, Z, W)); the report requires the two assemblies to agree
// and the tensor to be symmetric in all four slots.
inline ChartReport nabla_A_check(const Chart& c, const MetricField& m) {
  validate_metric(c, m);
  const auto A = invariance_tensor(c, m);
  const ChristoffelData ch = christoffel(m);
  const auto T = detail::nabla_A_cleared(c, m, ch, A);
  const auto N = detail::nabla_mul_cleared(c, ch);
  const size_t n = c.dim;
  ChartReport rep;
  const auto tag = [](size_t a, size_t b, size_t cc, size_t d) {
    return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," + std::to_string(cc + 1) +
           "," + std::to_string(d + 1) + ")";
  };
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z)
        for (size_t w = 0; w < n; ++w) {
          Poly<Rat> via_mul = poly_zero<Rat>(m.coords);
          for (size_t l = 0; l < n; ++l) via_mul = via_mul + m.g[y][l] * N[l][x][z][w];
          const Poly<Rat> d = T[x][y][z][w] - via_mul;
          if (!d.is_zero()) detail::add_violation(rep, "nabla_A route" + tag(x, y, z, w), d);
        }
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < n; ++y)
      for (size_t z = 0; z < n; ++z)
        for (size_t w = 0; w < n; ++w) {
          const Poly<Rat> s1 = T[x][y][z][w] - T[y][x][z][w];
          if (!s1.is_zero()) detail::add_violation(rep, "nabla_A symmetry xy" + tag(x, y, z, w), s1);
          const Poly<Rat> s2 = T[x][y][z][w] - T[x][z][y][w];
          if (!s2.is_zero()) detail::add_violation(rep, "nabla_A symmetry yz" + tag(x, y, z, w), s2);
          const Poly<Rat> s3 = T[x][y][z][w] - T[x][y][w][z];
          if (!s3.is_zero()) detail::add_violation(rep, "nabla_A symmetry zw" + tag(x, y, z, w), s3);
        }
  return rep;
}

// Symmetry of grad o in its three arguments (the last two are symmetric by
// construction, so only the first transposition needs testing).
inline ChartReport nabla_mul_symmetry_check(const Chart& c, const MetricField& m) {
  validate_metric(c, m);
  const ChristoffelData ch = christoffel(m);
  const auto N = detail::nabla_mul_cleared(c, ch);
  const size_t n = c.dim;
  ChartReport rep;
  for (size_t l = 0; l < n; ++l)
    for (size_t x = 0; x < n; ++x)
      for (size_t z = x + 1; z < n; ++z)
        for (size_t w = 0; w < n; ++w) {
          const Poly<Rat> d = N[l][x][z][w] - N[l][z][x][w];
          if (!d.is_zero())
            detail::add_violation(rep, "nabla_mul(" + std::to_string(l + 1) + ";" + std::to_string(x + 1) +
                                   "," + std::to_string(z + 1) + "," + std::to_string(w + 1) + ")",
                          d);
        }
  return rep;
}

// --- coidentity and 1-forms -----------------------------------------------------

inline std::vector<Poly<Rat>> metric_covector(const MetricField& m, const PolyVectorField& z) {
  const size_t n = m.g.size();
  if (z.components.size() != n) throw std::invalid_argument("metric_covector: field dimension mismatch");
  std::vector<Poly<Rat>> eps(n, poly_zero<Rat>(m.coords));
  for (size_t j = 0; j < n; ++j)
    for (size_t k = 0; k < n; ++k) eps[j] = eps[j] + m.g[j][k] * poly_extend(z.components[k], m.coords);
  return eps;
}

inline ChartReport one_form_closed_check(const std::vector<std::string>& coords,
                                         const std::vector<Poly<Rat>>& eps) {
  ChartReport rep;
  for (size_t i = 0; i < eps.size(); ++i)
    for (size_t j = i + 1; j < eps.size(); ++j) {
      const Poly<Rat> d =
          partial_derivative(poly_extend(eps[j], coords), coords[i]) -
          partial_derivative(poly_extend(eps[i], coords), coords[j]);
      if (!d.is_zero())
        detail::add_violation(rep, "closed(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", d);
    }
  return rep;
}

// d eps = 0 for the coidentity eps(X) = g(X, e).
inline ChartReport coidentity_check(const Chart& c, const MetricField& m) {
  validate_metric(c, m);
  return one_form_closed_check(m.coords, metric_covector(m, unit_field(c)));
}

// --- curvature -------------------------------------------------------------------

// Riemann tensor cleared by det^2; exact-zero test for flatness.
inline ChartReport flatness_check(const MetricField& m) {
  const ChristoffelData ch = christoffel(m);
  const size_t n = m.g.size();
  ChartReport rep;
  for (size_t l = 0; l < n; ++l)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        for (size_t k = 0; k < n; ++k) {
          Poly<Rat> r = partial_derivative(ch.num[l][j][k], m.coords[i]) * ch.det -
                        ch.num[l][j][k] * partial_derivative(ch.det, m.coords[i]) -
                        partial_derivative(ch.num[l][i][k], m.coords[j]) * ch.det +
                        ch.num[l][i][k] * partial_derivative(ch.det, m.coords[j]);
          for (size_t mm = 0; mm < n; ++mm)
            r = r + ch.num[l][i][mm] * ch.num[mm][j][k] - ch.num[l][j][mm] * ch.num[mm][i][k];
          if (!r.is_zero())
            detail::add_violation(rep, "riemann(" + std::to_string(l + 1) + ";" + std::to_string(i + 1) +
                                   "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")",
                          r);
        }
  return rep;
}

// --- Lie derivatives --------------------------------------------------------------

inline std::vector<std::vector<Poly<Rat>>> lie_metric(const MetricField& m,
                                                      const PolyVectorField& z) {
  const size_t n = m.g.size();
  if (z.components.size() != n) throw std::invalid_argument("lie_metric: field dimension mismatch");
  std::vector<Poly<Rat>> comp;
  comp.reserve(n);
  for (const auto& p : z.components) comp.push_back(poly_extend(p, m.coords));
  std::vector<std::vector<Poly<Rat>>> L(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(m.coords)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      Poly<Rat> s = poly_zero<Rat>(m.coords);
      for (size_t k = 0; k < n; ++k) {
        s = s + comp[k] * partial_derivative(m.g[i][j], m.coords[k]);
        s = s + m.g[k][j] * partial_derivative(comp[k], m.coords[i]);
        s = s + m.g[i][k] * partial_derivative(comp[k], m.coords[j]);
      }
      L[i][j] = s;
      L[j][i] = s;
    }
  return L;
}

// Exact test of Lie_E(g) = D * g.
inline ChartReport lie_Eg_check(const Chart& c, const MetricField& m, const PolyVectorField& e,
                                const Rat& D) {
  validate_metric(c, m);
  const auto L = lie_metric(m, e);
  ChartReport rep;
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i; j < c.dim; ++j) {
      const Poly<Rat> r = L[i][j] - D * m.g[i][j];
      if (!r.is_zero())
        detail::add_violation(rep, "lie_E_g(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", r);
    }
  return rep;
}

// det * covariant derivative of a vector field: (grad_i z)^k cleared by det.
inline std::vector<std::vector<Poly<Rat>>> nabla_field(const ChristoffelData& ch,
                                                       const PolyVectorField& z) {
  const size_t n = ch.num.size();
  if (z.components.size() != n) throw std::invalid_argument("nabla_field: field dimension mismatch");
  std::vector<std::vector<Poly<Rat>>> D(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(ch.coords)));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      Poly<Rat> s = ch.det * partial_derivative(poly_extend(z.components[k], ch.coords), ch.coords[i]);
      for (size_t mm = 0; mm < n; ++mm)
        s = s + ch.num[k][i][mm] * poly_extend(z.components[mm], ch.coords);
      D[i][k] = s;
    }
  return D;
}

// --- conformal weight and the aggregate verdict ------------------------------------

// Solve Lie_E(g) = D * g for a constant D; none when no constant works.
inline std::optional<Rat> solve_conformal_weight(const MetricField& m, const PolyVectorField& e,
                                                 const std::vector<std::vector<Poly<Rat>>>* lie = nullptr) {
  const auto L = lie ? *lie : lie_metric(m, e);
  const size_t n = m.g.size();
  std::optional<Rat> D;
  for (size_t i = 0; i < n && !D; ++i)
    for (size_t j = 0; j < n && !D; ++j) {
      if (m.g[i][j].is_zero()) continue;
      const auto q = divide_exact(L[i][j], m.g[i][j]);
      if (!q) return std::nullopt;
      if (q->is_zero()) {
        D = rat(0);
      } else if (q->terms.size() == 1 && mono_degree(q->terms.begin()->first) == 0) {
        D = q->terms.begin()->second;
      } else {
        return std::nullopt;
      }
    }
  if (!D) return std::nullopt;  // zero metric cannot reach here; guard anyway
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!(L[i][j] - *D * m.g[i][j]).is_zero()) return std::nullopt;
  return D;
}

struct FrobeniusManifoldReport {
  ChartReport axioms;        // chart validate + integrability
  ChartReport invariance;    // A totally symmetric
  ChartReport potentiality;  // grad A four-symmetric, both assembly routes
  ChartReport coidentity;    // d eps = 0
  ChartReport flatness;      // Riemann = 0
  ChartReport unit_killing;  // Lie_e(g) = 0
  ChartReport euler;         // Lie_E(o) = weight * o
  bool conformal = false;    // Lie_E(g) = D * g for constant D
  std::optional<Rat> D;
  bool pass = false;
};

inline FrobeniusManifoldReport frobenius_report(const Chart& c, const MetricField& m,
                                                const EulerCandidate& e) {
  validate_metric(c, m);
  FrobeniusManifoldReport rep;
  rep.axioms = validate(c);
  {
    const ChartReport integ = integrability_check(c);
    for (const auto& v : integ.violations) detail::add_violation(rep.axioms, v.identity, v.residual);
  }
  rep.invariance = invariance_check(c, m);
  rep.potentiality = nabla_A_check(c, m);
  rep.coidentity = coidentity_check(c, m);
  rep.flatness = flatness_check(m);
  {
    const auto L = lie_metric(m, unit_field(c));
    for (size_t i = 0; i < c.dim; ++i)
      for (size_t j = i; j < c.dim; ++j)
        if (!L[i][j].is_zero())
          detail::add_violation(rep.unit_killing,
                        "lie_e_g(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
                        L[i][j]);
  }
  rep.euler = euler_check(c, e.field, e.weight);
  rep.D = solve_conformal_weight(m, e.field);
  rep.conformal = rep.D.has_value();
  rep.pass = rep.axioms.pass && rep.invariance.pass && rep.potentiality.pass &&
             rep.coidentity.pass && rep.flatness.pass && rep.unit_killing.pass && rep.euler.pass &&
             rep.conformal;
  return rep;
}

}  // namespace fmf
