#pragma once

// Spectral geometry of a chart: the spectrum ideal cutting out the analytic
// spectrum in the cotangent coordinates, characteristic-polynomial data of
// multiplication by an Euler field (lambda map, discriminant, bifurcation
// polynomial), the caustic heuristic, logarithmic tangency along the
// discriminant, and the reconstruction of the multiplication from the
// discriminant plus the unit direction.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fmf/algebra.hpp"
#include "fmf/chart.hpp"
#include "fmf/resultant.hpp"
#include "fmf/roots.hpp"

namespace fmf {

// Generators of the ideal cutting out the spectrum inside the cotangent
// coordinates (y_1..y_n, chart coordinates): y_unit - 1 first, then
// y_i y_j - sum_k a[i][j][k] y_k for i <= j.
struct SpectrumIdeal {
  size_t dim = 0;
  std::vector<std::string> vars;  // y_1..y_n followed by the chart coordinates
  std::vector<Poly<Rat>> generators;
};

struct OnSpectrumReport {
  bool on = false;
  double max_residual = 0.0;
};

// Coefficients of det(z I - (E o)) = z^n + sum_i lambda_i z^{n-i}; the roots
// at a point are the eigenvalues of multiplication by E there.
struct LLData {
  std::vector<Poly<Rat>> lambda;  // lambda_1 .. lambda_n
  Poly<Rat> discriminant;         // lambda_n
  Poly<Rat> bifurcation;          // disc_z(z^n + sum lambda_i z^{n-i}); 1 when n = 1
};

struct DLambdaReport {
  bool pass = false;
  double max_deviation = 0.0;
  double threshold = 0.0;
  std::vector<Cplx> pushforward;  // finite-difference image of the unit field
  std::vector<Cplx> expected;     // unit field of the target chart at lambda(p)
};

struct LogTangencyReport {
  bool pass = false;
  std::vector<bool> divisible;  // (E o d_i)(lambda_n) lies in (lambda_n)
  bool determinant_match = false;
  Poly<Rat> determinant;  // det of the coefficient matrix of the fields E o d_i
};

inline std::vector<std::string> fiber_vars(size_t n) {
  std::vector<std::string> v;
  v.reserve(n);
  for (size_t i = 1; i <= n; ++i) v.push_back("y" + std::to_string(i));
  return v;
}

inline SpectrumIdeal spectrum_ideal(const Chart& c) {
  const size_t n = c.dim;
  SpectrumIdeal s;
  s.dim = n;
  s.vars = fiber_vars(n);
  for (const auto& t : c.coords) {
    if (std::find(s.vars.begin(), s.vars.end(), t) != s.vars.end())
      throw std::invalid_argument("spectrum_ideal: coordinate name '" + t +
                                  "' collides with a fiber variable");
    s.vars.push_back(t);
  }
  auto y = [&](size_t i) { return poly_var<Rat>(s.vars, "y" + std::to_string(i + 1)); };
  s.generators.push_back(y(c.unit_index) - poly_const<Rat>(s.vars, rat(1)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      Poly<Rat> g = y(i) * y(j);
      for (size_t k = 0; k < n; ++k)
        g = g - poly_extend(c.a[i][j][k], s.vars) * y(k);
      s.generators.push_back(g);
    }
  return s;
}

// pt lists values for s.vars in order: the fiber coordinates, then the base
// point.
inline OnSpectrumReport on_spectrum(const SpectrumIdeal& s, const std::vector<Cplx>& pt,
                                    double tol = 1e-8) {
  if (pt.size() != s.vars.size())
    throw std::invalid_argument("on_spectrum: point dimension mismatch");
  double worst = 0.0;
  for (const auto& g : s.generators) worst = std::max(worst, std::abs(eval(g, pt)));
  return {worst <= tol, worst};
}

// Matrix of multiplication by x in the coordinate basis: column j holds
// x o d_j.
inline std::vector<std::vector<Poly<Rat>>> multiplication_matrix(const Chart& c,
                                                                 const PolyVectorField& x) {
  std::vector<std::vector<Poly<Rat>>> m(
      c.dim, std::vector<Poly<Rat>>(c.dim, poly_zero<Rat>(c.coords)));
  for (size_t j = 0; j < c.dim; ++j) {
    auto col = mul(c, x, coordinate_field(c, j));
    for (size_t k = 0; k < c.dim; ++k) m[k][j] = col.components[k];
  }
  return m;
}

namespace detail {

// Faddeev-LeVerrier: coefficients c_1..c_n of det(z I - A), exact over the
// rationals.
inline std::vector<Poly<Rat>> char_coeffs(const std::vector<std::vector<Poly<Rat>>>& a,
                                          const std::vector<std::string>& vars) {
  const size_t n = a.size();
  const auto zero = poly_zero<Rat>(vars);
  std::vector<std::vector<Poly<Rat>>> acc(n, std::vector<Poly<Rat>>(n, zero));
  for (size_t i = 0; i < n; ++i) acc[i][i] = poly_const<Rat>(vars, rat(1));
  std::vector<Poly<Rat>> cs;
  for (size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Poly<Rat>>> prod(n, std::vector<Poly<Rat>>(n, zero));
    for (size_t i = 0; i < n; ++i)
      for (size_t l = 0; l < n; ++l) {
        if (a[i][l].is_zero()) continue;
        for (size_t j = 0; j < n; ++j)
          if (!acc[l][j].is_zero()) prod[i][j] = prod[i][j] + a[i][l] * acc[l][j];
      }
    Poly<Rat> tr = zero;
    for (size_t i = 0; i < n; ++i) tr = tr + prod[i][i];
    Poly<Rat> ck = rat(-1, static_cast<long>(k)) * tr;
    cs.push_back(ck);
    for (size_t i = 0; i < n; ++i) prod[i][i] = prod[i][i] + ck;
    acc = std::move(prod);
  }
  return cs;
}

inline std::vector<std::vector<Poly<Rat>>> mat_mul(const std::vector<std::vector<Poly<Rat>>>& a,
                                                   const std::vector<std::vector<Poly<Rat>>>& b,
                                                   const std::vector<std::string>& vars) {
  const size_t n = a.size();
  std::vector<std::vector<Poly<Rat>>> r(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(vars)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < n; ++l) {
      if (a[i][l].is_zero()) continue;
      for (size_t j = 0; j < n; ++j)
        if (!b[l][j].is_zero()) r[i][j] = r[i][j] + a[i][l] * b[l][j];
    }
  return r;
}

// Discriminant of the characteristic polynomial of a, computed as the
// determinant of the Hankel matrix of power sums s_k = tr(a^k):
// det(s_{i+j})_{0 <= i,j < n} = prod_{i<j} (u_i - u_j)^2 for the eigenvalues
// u_i. Equal to discriminant_uni of the monic characteristic polynomial but
// avoids the Sylvester determinant, whose intermediate swell dominates once
// the coefficients carry many terms.
inline Poly<Rat> trace_hankel_discriminant(const std::vector<std::vector<Poly<Rat>>>& a,
                                           const std::vector<std::string>& vars) {
  const size_t n = a.size();
  if (n < 2) return poly_const<Rat>(vars, rat(1));
  std::vector<Poly<Rat>> s(2 * n - 1, poly_zero<Rat>(vars));
  s[0] = poly_const<Rat>(vars, rat(static_cast<long>(n)));
  std::vector<std::vector<Poly<Rat>>> pw = a;
  for (size_t k = 1; k <= 2 * n - 2; ++k) {
    for (size_t i = 0; i < n; ++i) s[k] = s[k] + pw[i][i];
    if (k < 2 * n - 2) pw = mat_mul(pw, a, vars);
  }
  std::vector<std::vector<Poly<Rat>>> h(n, std::vector<Poly<Rat>>(n, poly_zero<Rat>(vars)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) h[i][j] = s[i + j];
  return bareiss_det(std::move(h), vars);
}

}  // namespace detail

inline LLData ll_map(const Chart& c, const EulerCandidate& e) {
  if (e.weight != rat(1))
    throw std::invalid_argument("ll_map requires an Euler field of weight 1");
  if (!euler_check(c, e.field, e.weight).pass)
    throw std::invalid_argument("ll_map: the field does not pass euler_check");
  LLData ll;
  const auto m = multiplication_matrix(c, e.field);
  ll.lambda = detail::char_coeffs(m, c.coords);
  ll.discriminant = ll.lambda.back();
  ll.bifurcation = detail::trace_hankel_discriminant(m, c.coords);
  return ll;
}

// Squarefree polynomial whose zero set contains the caustic, with equality
// for a generic probe field; computed as the z-discriminant of the
// characteristic polynomial of a seeded random constant field. An
// identically vanishing discriminant for every probe means the multiplication
// is nowhere semisimple.
inline Poly<Rat> caustic_poly(const Chart& c, std::uint64_t seed = 0) {
  if (!validate(c).pass) throw std::invalid_argument("caustic_poly requires a valid chart");
  if (c.dim == 1) return poly_const<Rat>(c.coords, rat(1));
  std::mt19937 rng(static_cast<std::uint32_t>(seed ^ (seed >> 32)) + 0x9E3779B9u);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  for (int attempt = 0; attempt < 8; ++attempt) {
    PolyVectorField x = zero_field(c);
    bool all_zero = true;
    for (size_t i = 0; i < c.dim; ++i) {
      Rat v = rat(num(rng), den(rng));
      if (!(v == Rat(0))) all_zero = false;
      x.components[i] = poly_const<Rat>(c.coords, v);
    }
    if (all_zero) continue;
    Poly<Rat> disc = detail::trace_hankel_discriminant(multiplication_matrix(c, x), c.coords);
    if (disc.is_zero()) continue;
    if (disc.is_constant()) return poly_const<Rat>(c.coords, rat(1));
    return squarefree_part(disc);
  }
  throw std::runtime_error(
      "not generically semisimple: the probe discriminant vanishes identically");
}

// Compares the finite-difference pushforward of lambda along the unit field
// at p with the unit field of the coefficient-space chart at lambda(p),
// whose components are (-n, -(n-1) a_1, ..., -a_{n-1}).
inline DLambdaReport dlambda_e_check(const Chart& c, const LLData& ll,
                                     const std::vector<Cplx>& p, double h) {
  const size_t n = c.dim;
  if (p.size() != n) throw std::invalid_argument("dlambda_e_check: point dimension mismatch");
  if (!(h > 0)) throw std::invalid_argument("dlambda_e_check: step must be positive");
  if (std::abs(eval(ll.bifurcation, p)) <= 1e-10)
    throw std::runtime_error("dlambda_e_check: point on the bifurcation locus");
  std::vector<Cplx> pp = p, pm = p;
  pp[c.unit_index] += h;
  pm[c.unit_index] -= h;
  DLambdaReport rep;
  rep.pushforward.resize(n);
  rep.expected.resize(n);
  std::vector<Cplx> a(n);
  for (size_t i = 0; i < n; ++i) {
    rep.pushforward[i] = (eval(ll.lambda[i], pp) - eval(ll.lambda[i], pm)) / Cplx(2 * h, 0);
    a[i] = eval(ll.lambda[i], p);
  }
  rep.expected[0] = Cplx(-static_cast<double>(n), 0);
  for (size_t i = 2; i <= n; ++i)
    rep.expected[i - 1] = -static_cast<double>(n - i + 1) * a[i - 2];
  double amax = 0.0;
  for (const auto& v : a) amax = std::max(amax, std::abs(v));
  for (size_t i = 0; i < n; ++i)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.pushforward[i] - rep.expected[i]));
  rep.threshold = 1e-6 + 10.0 * (1.0 + amax) * h * h;
  rep.pass = rep.max_deviation <= rep.threshold;
  return rep;
}

// Tangency of the fields E o d_i to the discriminant: each applied to
// lambda_n must land back in the ideal (lambda_n), and the determinant of
// their coefficient matrix (the E o matrix) must equal (-1)^n lambda_n.
inline LogTangencyReport log_tangency_check(const Chart& c, const EulerCandidate& e) {
  LLData ll = ll_map(c, e);
  auto m = multiplication_matrix(c, e.field);
  LogTangencyReport rep;
  rep.pass = true;
  for (size_t i = 0; i < c.dim; ++i) {
    Poly<Rat> applied = poly_zero<Rat>(c.coords);
    for (size_t k = 0; k < c.dim; ++k)
      applied = applied + m[k][i] * partial_derivative(ll.discriminant, c.coords[k]);
    bool ok = applied.is_zero() || divide_exact(applied, ll.discriminant).has_value();
    rep.divisible.push_back(ok);
    rep.pass = rep.pass && ok;
  }
  rep.determinant = bareiss_det(m, c.coords);
  Poly<Rat> want = (c.dim % 2 == 0) ? ll.discriminant : rat(-1) * ll.discriminant;
  rep.determinant_match = (rep.determinant == want);
  rep.pass = rep.pass && rep.determinant_match;
  return rep;
}

// Recovers the semisimple fiber algebra at p from the discriminant
// hypersurface and the (constant) unit direction: the line p + s e must meet
// the hypersurface in n distinct simple points; the gradient covectors there,
// carried back to p along the line, cut out the idempotent directions, and
// summing to the unit fixes their scale.
inline FiniteAlgebra reconstruct_multiplication(const Poly<Rat>& discriminant,
                                                const std::vector<Cplx>& unit_direction,
                                                const std::vector<Cplx>& p, double tol = 1e-8) {
  const size_t n = discriminant.vars.size();
  if (unit_direction.size() != n || p.size() != n)
    throw std::invalid_argument("reconstruct_multiplication: dimension mismatch");
  auto line = restrict_to_line(discriminant, p, unit_direction);  // ascending in s
  if (line.size() != n + 1)
    throw std::runtime_error(
        "non-generic point: the unit line meets the discriminant in the wrong degree");
  std::vector<Cplx> desc(line.rbegin(), line.rend());
  auto roots = complex_roots(desc, tol);
  if (roots.size() != n)
    throw std::runtime_error("non-generic point: intersection with a multiple point");
  std::vector<Poly<Rat>> grad;
  grad.reserve(n);
  for (const auto& v : discriminant.vars) grad.push_back(partial_derivative(discriminant, v));
  Eigen::MatrixXcd covectors(n, n);
  for (size_t j = 0; j < n; ++j) {
    std::vector<Cplx> q(n);
    for (size_t k = 0; k < n; ++k) q[k] = p[k] + roots[j].value * unit_direction[k];
    for (size_t k = 0; k < n; ++k) covectors(j, k) = eval(grad[k], q);
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(covectors);
  if (lu.rank() < static_cast<Eigen::Index>(n))
    throw std::runtime_error("non-generic point: tangent hyperplanes are linearly dependent");
  Eigen::VectorXcd evec(n);
  for (size_t k = 0; k < n; ++k) evec(k) = unit_direction[k];
  // beta_j is the derivative of the restricted discriminant at the j-th
  // intersection; simple roots keep it away from zero.
  Eigen::VectorXcd beta = covectors * evec;
  for (size_t j = 0; j < n; ++j)
    if (std::abs(beta(j)) <= tol * (1.0 + covectors.row(j).norm()))
      throw std::runtime_error("non-generic point: a tangent hyperplane contains the unit");
  Eigen::MatrixXcd dual = lu.inverse();  // column k annihilated by all rows but k
  Eigen::MatrixXcd idem(n, n);
  for (size_t j = 0; j < n; ++j) idem.col(j) = beta(j) * dual.col(j);
  Eigen::MatrixXcd idem_inv = idem.fullPivLu().inverse();
  FiniteAlgebra alg;
  alg.dim = n;
  alg.unit = unit_direction;
  alg.c.assign(n, std::vector<std::vector<Cplx>>(n, std::vector<Cplx>(n, Cplx(0, 0))));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k) {
        Cplx s(0, 0);
        for (size_t l = 0; l < n; ++l) s += idem(k, l) * idem_inv(l, i) * idem_inv(l, j);
        alg.c[i][j][k] = s;
      }
  return alg;
}

inline FiniteAlgebra reconstruct_multiplication(const Poly<Rat>& discriminant, size_t unit_index,
                                                const std::vector<Cplx>& p, double tol = 1e-8) {
  if (unit_index >= discriminant.vars.size())
    throw std::invalid_argument("reconstruct_multiplication: unit index out of range");
  std::vector<Cplx> e(discriminant.vars.size(), Cplx(0, 0));
  e[unit_index] = Cplx(1, 0);
  return reconstruct_multiplication(discriminant, e, p, tol);
}

// CSV slice of a polynomial over a real grid in two of its variables, the
// remaining coordinates held at `at`. Header names the two axes; rows are
// emitted row-major (outer loop over the first axis). The value column is the
// real part of the evaluation.
inline std::string discriminant_slice_csv(const Poly<Rat>& f, size_t vi, size_t vj, double lo,
                                          double hi, size_t grid, std::vector<Cplx> at) {
  if (vi >= f.vars.size() || vj >= f.vars.size() || vi == vj)
    throw std::invalid_argument("discriminant_slice_csv: bad axis indices");
  if (grid < 2) throw std::invalid_argument("discriminant_slice_csv: grid needs >= 2 points");
  if (at.size() != f.vars.size())
    throw std::invalid_argument("discriminant_slice_csv: base point dimension mismatch");
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << f.vars[vi] << ',' << f.vars[vj] << ",value\n";
  for (size_t r = 0; r < grid; ++r) {
    double x = lo + (hi - lo) * static_cast<double>(r) / static_cast<double>(grid - 1);
    for (size_t s = 0; s < grid; ++s) {
      double y = lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(grid - 1);
      at[vi] = Cplx(x, 0);
      at[vj] = Cplx(y, 0);
      out << fmt(x) << ',' << fmt(y) << ',' << fmt(eval(f, at).real()) << '\n';
    }
  }
  return out.str();
}

}  // namespace fmf
