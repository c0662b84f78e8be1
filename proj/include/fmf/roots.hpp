#pragma once

// Numeric root finding for univariate polynomials: companion-matrix
// eigenvalues, Newton polishing, and multiplicity clustering.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fmf/poly.hpp"

namespace fmf {

struct RootCluster {
  Cplx value;
  int multiplicity;
};

namespace detail {

inline Cplx horner(const std::vector<Cplx>& coeffs_desc, Cplx x) {
  Cplx acc(0.0, 0.0);
  for (const Cplx& c : coeffs_desc) acc = acc * x + c;
  return acc;
}

inline Cplx horner_derivative(const std::vector<Cplx>& coeffs_desc, Cplx x) {
  Cplx acc(0.0, 0.0);
  size_t n = coeffs_desc.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    double k = static_cast<double>(n - 1 - i);
    acc = acc * x + coeffs_desc[i] * k;
  }
  return acc;
}

inline double coeff_norm(const std::vector<Cplx>& coeffs) {
  double m = 0.0;
  for (const Cplx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace detail

// Roots of the polynomial with the given descending coefficients; nearby roots
// are merged into clusters of the given radius, and multiplicities sum to the
// (effective) degree.
inline std::vector<RootCluster> complex_roots(std::vector<Cplx> coeffs, double tol = 1e-8) {
  double scale = detail::coeff_norm(coeffs);
  if (scale == 0.0) throw std::invalid_argument("complex_roots of zero polynomial");
  // Leading coefficients that vanish relative to the coefficient size do not
  // contribute roots; exact inputs produce exact zeros here.
  size_t lead = 0;
  while (lead < coeffs.size() && std::abs(coeffs[lead]) <= 1e-14 * scale) ++lead;
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(lead));
  if (coeffs.size() <= 1) throw std::invalid_argument("complex_roots requires degree >= 1");

  // Roots at zero split off exactly.
  int zeros = 0;
  while (coeffs.size() > 1 && std::abs(coeffs.back()) <= 1e-300) {
    coeffs.pop_back();
    ++zeros;
  }

  std::vector<Cplx> roots;
  if (coeffs.size() > 1) {
    size_t deg = coeffs.size() - 1;
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (size_t i = 0; i < deg; ++i) {
      companion(i, deg - 1) = -coeffs[deg - i] / coeffs[0];
      if (i + 1 < deg) companion(i + 1, i) = Cplx(1.0, 0.0);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("complex_roots: eigenvalue iteration failed");
    for (long i = 0; i < solver.eigenvalues().size(); ++i) {
      Cplx r = solver.eigenvalues()(i);
      // Newton polish while it improves the residual.
      for (int it = 0; it < 24; ++it) {
        Cplx f = detail::horner(coeffs, r);
        Cplx df = detail::horner_derivative(coeffs, r);
        if (std::abs(df) < 1e-300) break;
        Cplx next = r - f / df;
        if (std::abs(detail::horner(coeffs, next)) >= std::abs(f)) break;
        r = next;
      }
      roots.push_back(r);
    }
  }
  for (int i = 0; i < zeros; ++i) roots.push_back(Cplx(0.0, 0.0));

  // Transitive clustering at distance tol.
  std::vector<int> cluster(roots.size(), -1);
  int nclusters = 0;
  for (size_t i = 0; i < roots.size(); ++i) {
    if (cluster[i] != -1) continue;
    cluster[i] = nclusters;
    // Grow the cluster transitively.
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t j = 0; j < roots.size(); ++j) {
        if (cluster[j] != -1) continue;
        for (size_t k = 0; k < roots.size(); ++k) {
          if (cluster[k] == nclusters && std::abs(roots[j] - roots[k]) <= tol) {
            cluster[j] = nclusters;
            changed = true;
            break;
          }
        }
      }
    }
    ++nclusters;
  }
  std::vector<RootCluster> out(nclusters, RootCluster{Cplx(0, 0), 0});
  for (size_t i = 0; i < roots.size(); ++i) {
    out[cluster[i]].value += roots[i];
    out[cluster[i]].multiplicity += 1;
  }
  for (auto& rc : out) rc.value /= static_cast<double>(rc.multiplicity);
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

// Descending complex coefficient list of a univariate exact polynomial.
template <class K>
std::vector<Cplx> complex_coeffs_descending(const Poly<K>& p, const std::string& var) {
  for (size_t i = 0; i < p.vars.size(); ++i)
    if (p.vars[i] != var && degree_in(p, p.vars[i]) > 0)
      throw std::invalid_argument("polynomial is not univariate in '" + var + "'");
  auto cs = coeffs_descending(p, var);
  std::vector<Cplx> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(to_complex(c.constant_value()));
  return out;
}

template <class K>
std::vector<RootCluster> complex_roots(const Poly<K>& p, const std::string& var,
                                       double tol = 1e-8) {
  if (p.is_zero()) throw std::invalid_argument("complex_roots of zero polynomial");
  return complex_roots(complex_coeffs_descending(p, var), tol);
}

// Coefficients (ascending in the line parameter s) of p evaluated along the
// line base + s * dir.
template <class K>
std::vector<Cplx> restrict_to_line(const Poly<K>& p, const std::vector<Cplx>& base,
                                   const std::vector<Cplx>& dir) {
  if (base.size() != p.vars.size() || dir.size() != p.vars.size())
    throw std::invalid_argument("restrict_to_line: dimension mismatch");
  auto convolve = [](const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    std::vector<Cplx> r(a.size() + b.size() - 1, Cplx(0, 0));
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  // Power tables for the linear factors (base_i + s dir_i).
  std::vector<std::vector<std::vector<Cplx>>> pows(p.vars.size());
  auto factor_pow = [&](size_t i, unsigned e) -> const std::vector<Cplx>& {
    auto& table = pows[i];
    if (table.empty()) table.push_back({Cplx(1.0, 0.0)});
    while (table.size() <= e) table.push_back(convolve(table.back(), {base[i], dir[i]}));
    return table[e];
  };
  std::vector<Cplx> acc{Cplx(0.0, 0.0)};
  for (const auto& [m, c] : p.terms) {
    std::vector<Cplx> t{to_complex(c)};
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = convolve(t, factor_pow(i, m[i]));
    if (t.size() > acc.size()) acc.resize(t.size(), Cplx(0, 0));
    for (size_t i = 0; i < t.size(); ++i) acc[i] += t[i];
  }
  // Drop exactly-cancelled top coefficients so the length reflects the true
  // degree of the restriction.
  while (acc.size() > 1 && acc.back() == Cplx(0.0, 0.0)) acc.pop_back();
  return acc;
}

}  // namespace fmf
