#pragma once

// Builders that produce charts from explicit presentations: families of
// covector sections over the base, one- and two-variable quotient rings, and
// numeric unfoldings solved at a parameter point.  A named catalog wires the
// standard families together with their Euler fields.

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include <fmf/algebra.hpp>
#include <fmf/chart.hpp>
#include <fmf/poly.hpp>
#include <fmf/rational.hpp>
#include <fmf/resultant.hpp>
#include <fmf/roots.hpp>

namespace fmf {

// --- section families ------------------------------------------------------

// n covector sections over an n-dimensional base, given by their components
// sections[s][i] in the chart coordinates.  The unit component must be the
// constant 1 on every section.
struct SectionFamily {
  std::vector<std::string> coords;
  size_t unit_index = 0;
  std::vector<std::vector<Poly<Rat>>> sections;
};

// For each coordinate pair (i, j), solve the linear system that makes the
// product field evaluate to sigma_s(d_i) * sigma_s(d_j) on every section s.
// The solve runs over the fraction field via determinants; every entry must
// come out polynomial.
inline Chart from_sections(const SectionFamily& fam) {
  const size_t n = fam.sections.size();
  if (n == 0) throw std::invalid_argument("from_sections: at least one section is required");
  if (fam.coords.size() != n)
    throw std::invalid_argument("from_sections: need as many coordinates as sections");
  if (fam.unit_index >= n) throw std::invalid_argument("from_sections: unit index out of range");
  std::vector<std::vector<Poly<Rat>>> s(n);
  const Poly<Rat> one = poly_const<Rat>(fam.coords, Rat(1));
  for (size_t r = 0; r < n; ++r) {
    if (fam.sections[r].size() != n)
      throw std::invalid_argument("from_sections: each section needs one component per coordinate");
    s[r].reserve(n);
    for (const auto& comp : fam.sections[r]) s[r].push_back(poly_extend(comp, fam.coords));
    if (!(s[r][fam.unit_index] - one).is_zero())
      throw std::invalid_argument("from_sections: the unit component of every section must be 1");
  }
  const Poly<Rat> den = bareiss_det(s, fam.coords);
  if (den.is_zero()) throw std::invalid_argument("from_sections: the sections are linearly dependent");
  Chart c = make_chart(n, fam.unit_index);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      std::vector<Poly<Rat>> rhs(n, poly_zero<Rat>(fam.coords));
      for (size_t r = 0; r < n; ++r) rhs[r] = s[r][i] * s[r][j];
      for (size_t k = 0; k < n; ++k) {
        auto m = s;
        for (size_t r = 0; r < n; ++r) m[r][k] = rhs[r];
        auto q = divide_exact(bareiss_det(m, fam.coords), den);
        if (!q) throw std::runtime_error("structure constants not polynomial");
        set_structure(c, i, j, k, *q);
      }
    }
  return c;
}

// --- one-variable curve families --------------------------------------------

struct CurveFamilyInput {
  size_t dim = 0;
  Poly<Rat> equation;  // polynomial in x and y; y is replaced by t2 + 2x*t3 + ... + (n-1)x^{n-2}*tn
};

namespace detail {

inline Poly<Rat> tilde_coordinate(const std::vector<std::string>& vars, size_t n) {
  Poly<Rat> s = poly_zero<Rat>(vars);
  for (size_t i = 2; i <= n; ++i) {
    Poly<Rat> term = poly_var<Rat>(vars, "t" + std::to_string(i));
    if (i > 2) term = rat(static_cast<long>(i - 1)) * (term * poly_var<Rat>(vars, "x", static_cast<unsigned>(i - 2)));
    s = s + term;
  }
  return s;
}

}  // namespace detail

// Quotient-ring chart with basis 1, x, ..., x^{n-1} modulo the substituted
// curve equation P(x, t); the i-th coordinate field maps to x^{i-1}, and the
// structure constants are read off from x^{i+j-2} mod P.
inline Chart curve_family(const CurveFamilyInput& in) {
  const size_t n = in.dim;
  if (n < 2) throw std::invalid_argument("curve_family: dimension must be at least 2");
  const Poly<Rat> f = poly_restrict(in.equation, {"x", "y"});
  const std::vector<std::string> coords = default_coords(n);
  std::vector<std::string> full = {"x"};
  full.insert(full.end(), coords.begin(), coords.end());
  const Poly<Rat> P = compose(f, {poly_var<Rat>(full, "x"), detail::tilde_coordinate(full, n)});
  const bool monic = degree_in(P, "x") == n &&
                     (leading_coeff_in(P, "x") - poly_const<Rat>(full, Rat(1))).is_zero();
  if (!monic)
    throw std::invalid_argument(
        "curve_family: the substituted equation must be monic of degree n in x");
  auto cs = coeffs_descending(P, "x");
  std::vector<Poly<Rat>> fold(n, poly_zero<Rat>(coords));  // x^n = sum_j fold[j] x^j
  for (size_t j = 0; j < n; ++j) fold[j] = -poly_restrict(cs[n - j], coords);
  std::vector<std::vector<Poly<Rat>>> pw(2 * n - 1, std::vector<Poly<Rat>>(n, poly_zero<Rat>(coords)));
  for (size_t m = 0; m < n; ++m) pw[m][m] = poly_const<Rat>(coords, Rat(1));
  for (size_t m = n; m <= 2 * n - 2; ++m) {
    const auto& prev = pw[m - 1];
    for (size_t j = 0; j + 1 < n; ++j) pw[m][j + 1] = prev[j];
    for (size_t j = 0; j < n; ++j) pw[m][j] = pw[m][j] + prev[n - 1] * fold[j];
  }
  Chart c = make_chart(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j)
      for (size_t k = 0; k < n; ++k) set_structure(c, i, j, k, pw[i + j][k]);
  return c;
}

// --- two-variable quotient families ------------------------------------------

enum class TwoVarKind { D4, F4, H4 };

namespace detail {

struct RewriteTraceEntry {
  long eliminated;  // scaled weighted degree of the monomial rewritten
  long introduced;  // max scaled weighted degree among the monomials created
};

// One rewrite step eliminates a single monomial with x- or y-exponent >= 2,
// always picking the reducible monomial of highest weighted degree.
inline Poly<Rat> two_var_reduce(Poly<Rat> p, const Poly<Rat>& xrule, const Poly<Rat>& yrule,
                                long wx, long wy, unsigned& steps,
                                std::vector<RewriteTraceEntry>* trace = nullptr) {
  const size_t ix = var_index(p.vars, "x");
  const size_t iy = var_index(p.vars, "y");
  const auto wdeg = [&](const Mono& m) {
    return wx * static_cast<long>(m[ix]) + wy * static_cast<long>(m[iy]);
  };
  for (;;) {
    const Mono* pick = nullptr;
    Rat pickc;
    for (const auto& [m, cv] : p.terms) {
      if (m[ix] < 2 && m[iy] < 2) continue;
      if (!pick || wdeg(m) > wdeg(*pick) || (wdeg(m) == wdeg(*pick) && GrlexLess{}(*pick, m))) {
        pick = &m;
        pickc = cv;
      }
    }
    if (!pick) return p;
    if (++steps > 20000) throw std::logic_error("two_var_family: rewrite failed to terminate");
    const Mono eliminated = *pick;
    const bool usex = eliminated[ix] >= 2;
    Mono rest = eliminated;
    rest[usex ? ix : iy] -= 2;
    Poly<Rat> restp = poly_zero<Rat>(p.vars);
    poly_add_term(restp, rest, pickc);
    Poly<Rat> removed = poly_zero<Rat>(p.vars);
    poly_add_term(removed, eliminated, pickc);
    const Poly<Rat> add = restp * (usex ? xrule : yrule);
    if (trace && !add.terms.empty()) {
      long hi = std::numeric_limits<long>::min();
      for (const auto& [m, cv] : add.terms) hi = std::max(hi, wdeg(m));
      trace->push_back({wdeg(eliminated), hi});
    }
    p = (p - removed) + add;
  }
}

}  // namespace detail

struct TwoVarReport {
  unsigned max_steps = 0;
  std::vector<detail::RewriteTraceEntry> trace;
};

// Chart on the basis images (1, x, y, xy) modulo x^2 -> -(t2 + y*t4) and
// y^2 -> -(t3 + x*t4)^r with r = 1, 2, 3 for the three kinds.  Rewriting
// orders monomials by the weights x -> 1 and y -> 1.2 / 1.6 / 1.8 (scaled by
// 5 to stay integral).
inline Chart two_var_family(TwoVarKind kind, TwoVarReport* report = nullptr) {
  const unsigned r = kind == TwoVarKind::D4 ? 1u : kind == TwoVarKind::F4 ? 2u : 3u;
  const long wx = 5;
  const long wy = kind == TwoVarKind::D4 ? 6 : kind == TwoVarKind::F4 ? 8 : 9;
  const std::vector<std::string> full = {"x", "y", "t1", "t2", "t3", "t4"};
  const Poly<Rat> x = poly_var<Rat>(full, "x");
  const Poly<Rat> y = poly_var<Rat>(full, "y");
  const Poly<Rat> xrule = -(poly_var<Rat>(full, "t2") + y * poly_var<Rat>(full, "t4"));
  const Poly<Rat> yrule = -poly_pow(poly_var<Rat>(full, "t3") + x * poly_var<Rat>(full, "t4"), r);
  const std::vector<Poly<Rat>> basis = {poly_const<Rat>(full, Rat(1)), x, y, x * y};
  const std::vector<std::string> coords = default_coords(4);
  const size_t ix = var_index(full, "x");
  const size_t iy = var_index(full, "y");
  Chart c = make_chart(4, 0);
  unsigned max_steps = 0;
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i; j < 4; ++j) {
      unsigned steps = 0;
      const Poly<Rat> prod = detail::two_var_reduce(basis[i] * basis[j], xrule, yrule, wx, wy,
                                                    steps, report ? &report->trace : nullptr);
      max_steps = std::max(max_steps, steps);
      std::vector<Poly<Rat>> comp(4, poly_zero<Rat>(full));
      for (const auto& [m, cv] : prod.terms) {
        const unsigned a = m[ix], b = m[iy];
        if (a > 1 || b > 1) throw std::logic_error("two_var_family: reduction left a reducible term");
        Mono mm = m;
        mm[ix] = 0;
        mm[iy] = 0;
        poly_add_term(comp[a + 2 * b], mm, cv);
      }
      for (size_t k = 0; k < 4; ++k) set_structure(c, i, j, k, poly_restrict(comp[k], coords));
    }
  if (report) report->max_steps = max_steps;
  return c;
}

// --- explicit three-sheet normal forms ---------------------------------------

struct CatalogEntry {
  std::string name;
  Chart chart;
  std::optional<EulerCandidate> euler;
};

// Three-sheet family over (t1, t2, t3): sheet positions x_s = d f_s / d t2 for
// f = (0, t2^p2, t2^p3 * g) with g = g0 + g1 t2 + ... + t2^{p3-2} t3.  The
// third covector component is b2 x^2 + b1 x with b2 = 1/(u (u - p2 t2^{p2-p3}))
// and b1 = -b2 p2 t2^{p2-1}, u = p3 g + t2 g'; the shared denominator must
// divide out on every sheet.
inline CatalogEntry three_sheet(long p2, long p3, std::vector<Rat> g = {}) {
  if (p3 < 2 || p2 < p3)
    throw std::invalid_argument("threeSheet: parameters must satisfy p2 >= p3 >= 2");
  if (g.empty()) {
    g.assign(static_cast<size_t>(p3 - 1), Rat(0));
    g[0] = Rat(2);
  }
  if (g.size() != static_cast<size_t>(p3 - 1))
    throw std::invalid_argument("threeSheet: g needs exactly p3 - 1 coefficients");
  if (g[0] == 0) throw std::invalid_argument("threeSheet: g(0) must be nonzero");
  if (p2 == p3 && g[0] == 1)
    throw std::invalid_argument("threeSheet: g(0) = 1 is excluded when p2 = p3");
  const std::vector<std::string> coords = default_coords(3);
  const Poly<Rat> t2 = poly_var<Rat>(coords, "t2");
  const Poly<Rat> t3 = poly_var<Rat>(coords, "t3");
  Poly<Rat> gp = poly_zero<Rat>(coords);
  for (size_t i = 0; i < g.size(); ++i) gp = gp + g[i] * poly_pow(t2, static_cast<unsigned>(i));
  gp = gp + poly_pow(t2, static_cast<unsigned>(p3 - 2)) * t3;
  const Poly<Rat> gd = partial_derivative(gp, "t2");
  const Poly<Rat> shift = rat(p2) * poly_pow(t2, static_cast<unsigned>(p2 - 1));
  const std::vector<Poly<Rat>> v = {
      poly_zero<Rat>(coords),
      shift,
      rat(p3) * poly_pow(t2, static_cast<unsigned>(p3 - 1)) * gp + poly_pow(t2, static_cast<unsigned>(p3)) * gd,
  };
  const Poly<Rat> u = rat(p3) * gp + t2 * gd;
  const Poly<Rat> den = u * (u - rat(p2) * poly_pow(t2, static_cast<unsigned>(p2 - p3)));
  SectionFamily fam;
  fam.coords = coords;
  fam.unit_index = 0;
  for (size_t s = 0; s < 3; ++s) {
    auto w = divide_exact(v[s] * (v[s] - shift), den);
    if (!w) throw std::runtime_error("structure constants not polynomial");
    fam.sections.push_back({poly_const<Rat>(coords, Rat(1)), v[s], *w});
  }
  CatalogEntry out;
  out.name = "threeSheet(" + std::to_string(p2) + "," + std::to_string(p3) + ")";
  out.chart = from_sections(fam);
  // E = t1 d1 + (1/p2) t2 d2 + ((p2-p3) g - t2 g') / (p2 t2^{p3-2}) d3 when the
  // last division is exact; otherwise the chart ships without an Euler field.
  if (auto q = divide_exact(rat(p2 - p3) * gp - t2 * gd, poly_pow(t2, static_cast<unsigned>(p3 - 2)))) {
    PolyVectorField e;
    e.components = {poly_var<Rat>(coords, "t1"), rat(1, p2) * t2, rat(1, p2) * *q};
    out.euler = EulerCandidate{e, Rat(1)};
  }
  return out;
}

// Two covector branches t2^p2 and t3^p3 glued along the unit section.
inline CatalogEntry q2_simple(long p2, long p3) {
  if (p2 < 2 || p3 < 2) throw std::invalid_argument("q2simple: parameters must be at least 2");
  const std::vector<std::string> coords = default_coords(3);
  const Poly<Rat> one = poly_const<Rat>(coords, Rat(1));
  const Poly<Rat> zero = poly_zero<Rat>(coords);
  SectionFamily fam;
  fam.coords = coords;
  fam.unit_index = 0;
  fam.sections = {
      {one, zero, zero},
      {one, rat(p2) * poly_var<Rat>(coords, "t2", static_cast<unsigned>(p2 - 1)), zero},
      {one, zero, rat(p3) * poly_var<Rat>(coords, "t3", static_cast<unsigned>(p3 - 1))},
  };
  CatalogEntry out;
  out.name = "q2simple(" + std::to_string(p2) + "," + std::to_string(p3) + ")";
  out.chart = from_sections(fam);
  PolyVectorField e;
  e.components = {poly_var<Rat>(coords, "t1"), rat(1, p2) * poly_var<Rat>(coords, "t2"),
                  rat(1, p3) * poly_var<Rat>(coords, "t3")};
  out.euler = EulerCandidate{e, Rat(1)};
  return out;
}

// --- numeric unfoldings -------------------------------------------------------

struct UnfoldingInput {
  enum class Flavor { hypersurface, boundary };
  Flavor flavor = Flavor::hypersurface;
  std::vector<std::string> internal_vars;  // one or two; for boundary flavor the first is the boundary variable
  std::vector<std::string> params;
  Poly<Rat> potential;
};

namespace detail {

inline double eval_magnitude(const Poly<Rat>& p, const std::vector<Cplx>& pt) {
  double s = 0;
  for (const auto& [m, c] : p.terms) {
    double v = std::abs(to_complex(c));
    for (size_t i = 0; i < m.size(); ++i) v *= std::pow(std::abs(pt[i]), static_cast<double>(m[i]));
    s += v;
  }
  return s;
}

inline Cplx eval_dual(const Poly<Rat>& p, const std::vector<Cplx>& pt) { return eval(p, pt); }

}  // namespace detail

// Critical points of the unfolding at the parameter point t, and the algebra
// they carry: the section matrix V(s, i) = dF/dt_i at critical point s is
// inverted to express products of sections in the section basis.
inline FiniteAlgebra unfolding_numeric(const UnfoldingInput& in, const std::vector<Cplx>& t,
                                       double tol = 1e-8) {
  const size_t n = in.params.size();
  const size_t nv = in.internal_vars.size();
  if (n == 0) throw std::invalid_argument("unfolding_numeric: at least one parameter is required");
  if (nv == 0 || nv > 2)
    throw std::invalid_argument("unfolding_numeric: one or two internal variables are supported");
  if (t.size() != n)
    throw std::invalid_argument("unfolding_numeric: parameter point has the wrong dimension");
  if (!(tol > 0)) throw std::invalid_argument("unfolding_numeric: tolerance must be positive");
  std::vector<std::string> full = in.internal_vars;
  full.insert(full.end(), in.params.begin(), in.params.end());
  const Poly<Rat> F = poly_restrict(in.potential, full);
  const std::string& xname = in.internal_vars[0];
  std::vector<Poly<Rat>> gens;
  {
    Poly<Rat> gx = partial_derivative(F, xname);
    if (in.flavor == UnfoldingInput::Flavor::boundary) gx = poly_var<Rat>(full, xname) * gx;
    gens.push_back(gx);
    if (nv == 2) gens.push_back(partial_derivative(F, in.internal_vars[1]));
  }
  // exact elimination of the second variable, then numeric roots in the first
  Poly<Rat> elim = gens[0];
  if (nv == 2) {
    const std::string& yname = in.internal_vars[1];
    const unsigned d0 = degree_in(gens[0], yname);
    const unsigned d1 = degree_in(gens[1], yname);
    if (d0 == 0)
      elim = gens[0];
    else if (d1 == 0)
      elim = gens[1];
    else
      elim = resultant(gens[0], gens[1], yname);
    if (elim.is_zero())
      throw std::invalid_argument("unfolding_numeric: the critical ideal has a positive-dimensional part");
  }
  std::vector<Cplx> at(full.size(), Cplx(0, 0));
  for (size_t i = 0; i < n; ++i) at[nv + i] = t[i];
  const auto numeric_coeffs = [&](const Poly<Rat>& p, const std::string& var,
                                  const std::vector<Cplx>& point) {
    std::vector<Cplx> out;
    for (const auto& coef : coeffs_descending(p, var)) out.push_back(eval(coef, point));
    double scale = 0;
    for (const Cplx& c : out) scale = std::max(scale, std::abs(c));
    size_t lead = 0;
    while (lead + 1 < out.size() && std::abs(out[lead]) <= 1e-13 * (1 + scale)) ++lead;
    return std::vector<Cplx>(out.begin() + static_cast<long>(lead), out.end());
  };
  const std::vector<Cplx> ex = numeric_coeffs(elim, xname, at);
  if (ex.size() <= 1) throw std::runtime_error("non-generic parameter: no critical points in x");
  std::vector<std::vector<Cplx>> pts;  // full point vectors
  for (const RootCluster& xr : complex_roots(ex)) {
    std::vector<Cplx> base = at;
    base[0] = xr.value;
    if (nv == 1) {
      pts.push_back(base);
      continue;
    }
    const std::string& yname = in.internal_vars[1];
    const bool use_second = degree_in(gens[1], yname) > 0;
    const Poly<Rat>& ygen = use_second ? gens[1] : gens[0];
    const Poly<Rat>& other = use_second ? gens[0] : gens[1];
    if (degree_in(ygen, yname) == 0)
      throw std::invalid_argument("unfolding_numeric: no generator involves the second variable");
    const std::vector<Cplx> ey = numeric_coeffs(ygen, yname, base);
    if (ey.size() <= 1) continue;
    for (const RootCluster& yr : complex_roots(ey)) {
      std::vector<Cplx> p = base;
      p[1] = yr.value;
      // drop pairings that solve ygen but miss the other generator; without
      // this every x-root would collect all y-roots and polish onto duplicates
      if (std::abs(eval(other, p)) > 1e-5 * (1 + detail::eval_magnitude(other, p))) continue;
      pts.push_back(p);
    }
  }
  // Newton polish on the exact generators
  std::vector<std::vector<Poly<Rat>>> jac(gens.size());
  for (size_t g = 0; g < gens.size(); ++g)
    for (size_t v = 0; v < nv; ++v) jac[g].push_back(partial_derivative(gens[g], in.internal_vars[v]));
  for (auto& p : pts) {
    for (int it = 0; it < 12; ++it) {
      if (nv == 1) {
        const Cplx f0 = eval(gens[0], p);
        const Cplx d0 = eval(jac[0][0], p);
        if (std::abs(d0) < 1e-300) break;
        const Cplx step = f0 / d0;
        p[0] -= step;
        if (std::abs(step) < 1e-15 * (1 + std::abs(p[0]))) break;
      } else {
        const Cplx f0 = eval(gens[0], p), f1 = eval(gens[1], p);
        const Cplx a = eval(jac[0][0], p), b = eval(jac[0][1], p);
        const Cplx c = eval(jac[1][0], p), d = eval(jac[1][1], p);
        const Cplx det = a * d - b * c;
        if (std::abs(det) < 1e-300) break;
        const Cplx dx = (f0 * d - f1 * b) / det;
        const Cplx dy = (a * f1 - c * f0) / det;
        p[0] -= dx;
        p[1] -= dy;
        if (std::abs(dx) + std::abs(dy) < 1e-15 * (1 + std::abs(p[0]) + std::abs(p[1]))) break;
      }
    }
  }
  // keep true zeros of every generator
  std::vector<std::vector<Cplx>> kept;
  for (const auto& p : pts) {
    bool ok = true;
    for (const auto& g : gens)
      if (std::abs(eval(g, p)) > 1e-7 * (1 + detail::eval_magnitude(g, p))) ok = false;
    if (ok) kept.push_back(p);
  }
  for (size_t a = 0; a < kept.size(); ++a)
    for (size_t b = a + 1; b < kept.size(); ++b) {
      double dist = 0;
      for (size_t v = 0; v < nv; ++v) dist = std::max(dist, std::abs(kept[a][v] - kept[b][v]));
      if (dist <= tol)
        throw std::runtime_error("non-generic parameter: two critical points within tolerance");
    }
  if (kept.size() != n)
    throw std::runtime_error("non-generic parameter: found " + std::to_string(kept.size()) +
                             " critical points, expected " + std::to_string(n));
  Eigen::MatrixXcd V(n, n);
  for (size_t s = 0; s < n; ++s)
    for (size_t i = 0; i < n; ++i) V(s, i) = eval(partial_derivative(F, in.params[i]), kept[s]);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(V);
  if (lu.rank() < static_cast<long>(n))
    throw std::runtime_error("non-generic parameter: degenerate section matrix");
  FiniteAlgebra alg;
  alg.dim = n;
  alg.c.assign(n, std::vector<std::vector<Cplx>>(n, std::vector<Cplx>(n, Cplx(0, 0))));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      Eigen::VectorXcd w(n);
      for (size_t s = 0; s < n; ++s) w(s) = V(s, i) * V(s, j);
      const Eigen::VectorXcd z = lu.solve(w);
      for (size_t k = 0; k < n; ++k) {
        alg.c[i][j][k] = z(k);
        alg.c[j][i][k] = z(k);
      }
    }
  const Eigen::VectorXcd u = lu.solve(Eigen::VectorXcd::Ones(n));
  alg.unit.assign(n, Cplx(0, 0));
  for (size_t k = 0; k < n; ++k) alg.unit[k] = u(k);
  return alg;
}

// Named unfoldings used for cross-validation against the symbolic builders.
inline UnfoldingInput unfolding_preset(const std::string& name, long n = 0) {
  UnfoldingInput in;
  const auto build = [&](size_t nparams, std::vector<std::string> internals) {
    in.internal_vars = std::move(internals);
    in.params = default_coords(nparams);
    std::vector<std::string> full = in.internal_vars;
    full.insert(full.end(), in.params.begin(), in.params.end());
    return full;
  };
  if (name == "An") {
    if (n < 1) throw std::invalid_argument("unfolding_preset: An needs n >= 1");
    const auto full = build(static_cast<size_t>(n), {"x"});
    const Poly<Rat> x = poly_var<Rat>(full, "x");
    Poly<Rat> F = rat(-1, n + 1) * poly_pow(x, static_cast<unsigned>(n + 1)) + poly_var<Rat>(full, "t1");
    for (long i = 2; i <= n; ++i)
      F = F + poly_var<Rat>(full, "x", static_cast<unsigned>(i - 1)) * poly_var<Rat>(full, "t" + std::to_string(i));
    in.potential = F;
    in.flavor = UnfoldingInput::Flavor::hypersurface;
    return in;
  }
  if (name == "Bn") {
    if (n < 1) throw std::invalid_argument("unfolding_preset: Bn needs n >= 1");
    const auto full = build(static_cast<size_t>(n), {"x", "y"});
    const Poly<Rat> x = poly_var<Rat>(full, "x");
    const Poly<Rat> y = poly_var<Rat>(full, "y");
    Poly<Rat> F = rat(-1, n) * poly_pow(x, static_cast<unsigned>(n)) + y * y + poly_var<Rat>(full, "t1");
    for (long i = 2; i <= n; ++i)
      F = F + poly_var<Rat>(full, "x", static_cast<unsigned>(i - 1)) * poly_var<Rat>(full, "t" + std::to_string(i));
    in.potential = F;
    in.flavor = UnfoldingInput::Flavor::boundary;
    return in;
  }
  if (name == "D4") {
    const auto full = build(4, {"x", "y"});
    const Poly<Rat> x = poly_var<Rat>(full, "x");
    const Poly<Rat> y = poly_var<Rat>(full, "y");
    in.potential = rat(1, 3) * poly_pow(x, 3) + rat(1, 3) * poly_pow(y, 3) + poly_var<Rat>(full, "t1") +
                   x * poly_var<Rat>(full, "t2") + y * poly_var<Rat>(full, "t3") +
                   x * y * poly_var<Rat>(full, "t4");
    in.flavor = UnfoldingInput::Flavor::hypersurface;
    return in;
  }
  if (name == "E6") {
    const auto full = build(6, {"x", "y"});
    const Poly<Rat> x = poly_var<Rat>(full, "x");
    const Poly<Rat> y = poly_var<Rat>(full, "y");
    in.potential = poly_pow(x, 4) + poly_pow(y, 3) + poly_var<Rat>(full, "t1") +
                   x * poly_var<Rat>(full, "t2") + y * poly_var<Rat>(full, "t3") +
                   poly_pow(x, 2) * poly_var<Rat>(full, "t4") + x * y * poly_var<Rat>(full, "t5") +
                   poly_pow(x, 2) * y * poly_var<Rat>(full, "t6");
    in.flavor = UnfoldingInput::Flavor::hypersurface;
    return in;
  }
  if (name == "F4") {
    const auto full = build(4, {"x", "y"});
    const Poly<Rat> x = poly_var<Rat>(full, "x");
    const Poly<Rat> y = poly_var<Rat>(full, "y");
    in.potential = poly_pow(x, 2) + poly_pow(y, 3) + poly_var<Rat>(full, "t1") +
                   x * poly_var<Rat>(full, "t2") + y * poly_var<Rat>(full, "t3") +
                   x * y * poly_var<Rat>(full, "t4");
    in.flavor = UnfoldingInput::Flavor::boundary;
    return in;
  }
  throw std::invalid_argument("unfolding_preset: unknown name '" + name + "'");
}

// --- catalog ------------------------------------------------------------------

namespace detail {

inline long catalog_long(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (...) {
    throw std::invalid_argument(std::string("catalog: parameter ") + what +
                                " must be an integer, got '" + s + "'");
  }
}

inline void catalog_arity(const std::string& name, const std::vector<std::string>& args, size_t lo,
                          size_t hi) {
  if (args.size() < lo || args.size() > hi)
    throw std::invalid_argument("catalog: " + name + " takes " + std::to_string(lo) +
                                (hi > lo ? " to " + std::to_string(hi) : "") + " parameter(s), got " +
                                std::to_string(args.size()));
}

inline CatalogEntry curve_entry(std::string name, size_t dim, const Poly<Rat>& f) {
  CatalogEntry out;
  out.name = std::move(name);
  out.chart = curve_family({dim, f});
  out.euler = solve_euler_weights(out.chart);
  return out;
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::string>> catalog_names() {
  return {
      {"A1n", "n >= 1 pairwise-distinct idempotent directions"},
      {"I2", "m >= 2"},
      {"An", "n >= 1"},
      {"Bn", "n >= 2"},
      {"H3", "no parameters"},
      {"D4", "no parameters"},
      {"F4", "no parameters"},
      {"H4", "no parameters"},
      {"curve", "f(x,y), n — substituted equation must be monic of degree n in x"},
      {"threeSheet", "p2 >= p3 >= 2, optional g coefficients g0,g1,..."},
      {"q2simple", "p2 >= 2, p3 >= 2"},
      {"nilpotent2d", "no parameters"},
  };
}

inline CatalogEntry catalog(const std::string& name, const std::vector<std::string>& args = {}) {
  using detail::catalog_arity;
  using detail::catalog_long;
  if (name == "A1n") {
    catalog_arity(name, args, 1, 1);
    const long n = catalog_long(args[0], "n");
    if (n < 1) throw std::invalid_argument("catalog: A1n needs n >= 1");
    Chart c = make_chart(static_cast<size_t>(n), 0);
    const Poly<Rat> one = poly_const<Rat>(c.coords, Rat(1));
    for (size_t i = 1; i < c.dim; ++i) set_structure(c, i, i, i, one);
    PolyVectorField e;
    for (size_t i = 0; i < c.dim; ++i) e.components.push_back(poly_var<Rat>(c.coords, c.coords[i]));
    return {"A1n(" + std::to_string(n) + ")", c, EulerCandidate{e, Rat(1)}};
  }
  if (name == "I2") {
    catalog_arity(name, args, 1, 1);
    const long m = catalog_long(args[0], "m");
    if (m < 2) throw std::invalid_argument("catalog: I2 needs m >= 2");
    Chart c = make_chart(2, 0);
    set_structure(c, 1, 1, 0, poly_var<Rat>(c.coords, "t2", static_cast<unsigned>(m - 2)));
    PolyVectorField e;
    e.components = {poly_var<Rat>(c.coords, "t1"), rat(2, m) * poly_var<Rat>(c.coords, "t2")};
    return {"I2(" + std::to_string(m) + ")", c, EulerCandidate{e, Rat(1)}};
  }
  if (name == "An") {
    catalog_arity(name, args, 1, 1);
    const long n = catalog_long(args[0], "n");
    if (n < 1) throw std::invalid_argument("catalog: An needs n >= 1");
    if (n == 1) {
      Chart c = make_chart(1, 0);
      PolyVectorField e;
      e.components = {poly_var<Rat>(c.coords, "t1")};
      return {"An(1)", c, EulerCandidate{e, Rat(1)}};
    }
    const std::vector<std::string> xy = {"x", "y"};
    return detail::curve_entry("An(" + std::to_string(n) + ")", static_cast<size_t>(n),
                               poly_var<Rat>(xy, "x", static_cast<unsigned>(n)) - poly_var<Rat>(xy, "y"));
  }
  if (name == "Bn") {
    catalog_arity(name, args, 1, 1);
    const long n = catalog_long(args[0], "n");
    if (n < 2) throw std::invalid_argument("catalog: Bn needs n >= 2");
    const std::vector<std::string> xy = {"x", "y"};
    return detail::curve_entry(
        "Bn(" + std::to_string(n) + ")", static_cast<size_t>(n),
        poly_var<Rat>(xy, "x", static_cast<unsigned>(n)) - poly_var<Rat>(xy, "x") * poly_var<Rat>(xy, "y"));
  }
  if (name == "H3") {
    catalog_arity(name, args, 0, 0);
    const std::vector<std::string> xy = {"x", "y"};
    return detail::curve_entry("H3", 3, poly_var<Rat>(xy, "x", 3) - poly_var<Rat>(xy, "y", 2));
  }
  if (name == "D4" || name == "F4" || name == "H4") {
    catalog_arity(name, args, 0, 0);
    const TwoVarKind kind =
        name == "D4" ? TwoVarKind::D4 : name == "F4" ? TwoVarKind::F4 : TwoVarKind::H4;
    CatalogEntry out;
    out.name = name;
    out.chart = two_var_family(kind);
    out.euler = solve_euler_weights(out.chart);
    return out;
  }
  if (name == "curve") {
    catalog_arity(name, args, 2, 2);
    const long n = catalog_long(args[1], "n");
    if (n < 2) throw std::invalid_argument("catalog: curve needs n >= 2");
    const Poly<Rat> f = parse_poly(args[0], {"x", "y"});
    return detail::curve_entry("curve(" + args[0] + "," + std::to_string(n) + ")",
                               static_cast<size_t>(n), f);
  }
  if (name == "threeSheet") {
    catalog_arity(name, args, 2, 3);
    const long p2 = catalog_long(args[0], "p2");
    const long p3 = catalog_long(args[1], "p3");
    std::vector<Rat> g;
    if (args.size() == 3) {
      std::string item;
      for (size_t i = 0; i <= args[2].size(); ++i) {
        if (i == args[2].size() || args[2][i] == ',') {
          if (item.empty()) throw std::invalid_argument("catalog: empty g coefficient");
          g.push_back(rat_parse(item));
          item.clear();
        } else {
          item += args[2][i];
        }
      }
    }
    return three_sheet(p2, p3, std::move(g));
  }
  if (name == "q2simple") {
    catalog_arity(name, args, 2, 2);
    return q2_simple(catalog_long(args[0], "p2"), catalog_long(args[1], "p3"));
  }
  if (name == "nilpotent2d") {
    catalog_arity(name, args, 0, 0);
    CatalogEntry out;
    out.name = "nilpotent2d";
    out.chart = make_chart(2, 0);
    out.euler = solve_euler_weights(out.chart);
    return out;
  }
  std::string known;
  for (const auto& [nm, schema] : catalog_names()) known += (known.empty() ? "" : ", ") + nm;
  throw std::invalid_argument("catalog: unknown name '" + name + "'; known names: " + known);
}

}  // namespace fmf
