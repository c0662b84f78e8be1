#pragma once

// Finite-dimensional commutative associative unital algebras over C at a
// point: simultaneous generalized-eigenspace decomposition into local factors
// (idempotents, characters, block dimensions), the block-dimension partition,
// the socle-based Frobenius/Gorenstein test, and Gram matrices g_f(x,y) =
// f(x*y) attached to linear functionals.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fmf/rational.hpp"

namespace fmf {

struct FiniteAlgebra {
  size_t dim = 0;
  // x_i * x_j = sum_k c[i][j][k] x_k
  std::vector<std::vector<std::vector<Cplx>>> c;
  std::vector<Cplx> unit;
};

struct AlgebraFactor {
  std::vector<Cplx> idempotent;              // e_k in the ambient basis
  std::vector<Cplx> character;               // lambda_k(x_i) for each basis vector
  size_t block_dim = 0;
  std::vector<std::vector<Cplx>> basis;      // orthonormal basis of the block
};

struct AlgebraDecomposition {
  std::vector<AlgebraFactor> factors;
  std::vector<size_t> partition;             // block dims, sorted descending
};

struct FrobeniusReport {
  bool frobenius = false;                    // all factors Gorenstein
  std::vector<bool> gorenstein;              // per factor
  std::vector<size_t> socle_dims;            // per factor
};

struct GramReport {
  std::vector<std::vector<Cplx>> gram;
  size_t rank = 0;
  bool nondegenerate = false;
};

namespace detail {

inline double algebra_scale(const FiniteAlgebra& a) {
  double s = 0.0;
  for (const auto& pi : a.c)
    for (const auto& pj : pi)
      for (const Cplx& v : pj) s = std::max(s, std::abs(v));
  for (const Cplx& v : a.unit) s = std::max(s, std::abs(v));
  return 1.0 + s;
}

inline Eigen::MatrixXcd mult_operator(const FiniteAlgebra& a, const std::vector<Cplx>& z) {
  const size_t n = a.dim;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Cplx acc(0, 0);
      for (size_t l = 0; l < n; ++l) acc += z[l] * a.c[l][j][i];
      m(static_cast<long>(i), static_cast<long>(j)) = acc;
    }
  return m;
}

inline Eigen::MatrixXcd basis_operator(const FiniteAlgebra& a, size_t i) {
  std::vector<Cplx> z(a.dim, Cplx(0, 0));
  z[i] = Cplx(1, 0);
  return mult_operator(a, z);
}

}  // namespace detail

inline std::vector<Cplx> algebra_multiply(const FiniteAlgebra& a, const std::vector<Cplx>& x,
                                          const std::vector<Cplx>& y) {
  std::vector<Cplx> r(a.dim, Cplx(0, 0));
  for (size_t i = 0; i < a.dim; ++i)
    for (size_t j = 0; j < a.dim; ++j) {
      if (x[i] == Cplx(0, 0) || y[j] == Cplx(0, 0)) continue;
      for (size_t k = 0; k < a.dim; ++k) r[k] += x[i] * y[j] * a.c[i][j][k];
    }
  return r;
}

// Commutativity, associativity, and the unit axiom, with numeric tolerance
// relative to the structure-constant magnitude.
inline void validate_algebra(const FiniteAlgebra& a, double tol = 1e-10) {
  const size_t n = a.dim;
  if (n == 0) throw std::invalid_argument("algebra dimension must be positive");
  if (a.c.size() != n || a.unit.size() != n)
    throw std::invalid_argument("algebra tensor/unit shape mismatch");
  for (const auto& pi : a.c) {
    if (pi.size() != n) throw std::invalid_argument("algebra tensor shape mismatch");
    for (const auto& pj : pi)
      if (pj.size() != n) throw std::invalid_argument("algebra tensor shape mismatch");
  }
  const double s = detail::algebra_scale(a);
  const double eps = tol * s * s;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        if (std::abs(a.c[i][j][k] - a.c[j][i][k]) > eps)
          throw std::invalid_argument("algebra is not commutative at entry (" +
                                      std::to_string(i) + "," + std::to_string(j) + "," +
                                      std::to_string(k) + ")");
  // Associator tensor in coordinates.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (size_t k = 0; k < n; ++k)
        for (size_t l = 0; l < n; ++l) {
          Cplx acc(0, 0);
          for (size_t m = 0; m < n; ++m)
            acc += a.c[i][j][m] * a.c[m][k][l] - a.c[j][k][m] * a.c[i][m][l];
          if (std::abs(acc) > eps)
            throw std::invalid_argument("algebra is not associative at entry (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(k) + "," + std::to_string(l) + ")");
        }
  Eigen::MatrixXcd me = detail::mult_operator(a, a.unit);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Cplx want = (i == j) ? Cplx(1, 0) : Cplx(0, 0);
      if (std::abs(me(static_cast<long>(i), static_cast<long>(j)) - want) > eps)
        throw std::invalid_argument("unit does not act as the identity");
    }
}

namespace detail {

struct Cluster {
  Cplx center;
  size_t multiplicity;
};

inline std::vector<Cluster> cluster_values(const std::vector<Cplx>& vals, double radius) {
  std::vector<int> label(vals.size(), -1);
  int nc = 0;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (label[i] != -1) continue;
    label[i] = nc;
    bool grew = true;
    while (grew) {
      grew = false;
      for (size_t j = 0; j < vals.size(); ++j) {
        if (label[j] != -1) continue;
        for (size_t k = 0; k < vals.size(); ++k)
          if (label[k] == nc && std::abs(vals[j] - vals[k]) <= radius) {
            label[j] = nc;
            grew = true;
            break;
          }
      }
    }
    ++nc;
  }
  std::vector<Cluster> out(nc, Cluster{Cplx(0, 0), 0});
  for (size_t i = 0; i < vals.size(); ++i) {
    out[label[i]].center += vals[i];
    out[label[i]].multiplicity += 1;
  }
  for (auto& cl : out) cl.center /= static_cast<double>(cl.multiplicity);
  return out;
}

// One decomposition attempt from a given generic element; empty result means
// the verification gates rejected every clustering radius.
inline std::optional<AlgebraDecomposition> try_decompose(const FiniteAlgebra& a,
                                                         const std::vector<Cplx>& z,
                                                         double tol) {
  const size_t n = a.dim;
  const long ln = static_cast<long>(n);
  Eigen::MatrixXcd mz = mult_operator(a, z);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(mz, false);
  if (es.info() != Eigen::Success) return std::nullopt;
  std::vector<Cplx> eigs(n);
  for (long i = 0; i < ln; ++i) eigs[static_cast<size_t>(i)] = es.eigenvalues()(i);

  double znorm = 0.0;
  for (const Cplx& v : z) znorm += std::abs(v);
  const double scale = algebra_scale(a);
  const double r0 = tol * (1.0 + znorm);
  const double rmax = std::max(1e-4 * (1.0 + mz.norm()), 64.0 * r0);

  std::vector<Eigen::MatrixXcd> ops(n);
  for (size_t i = 0; i < n; ++i) ops[i] = basis_operator(a, i);

  for (double radius = r0; radius <= rmax * 4.0; radius *= 4.0) {
    auto clusters = cluster_values(eigs, radius);
    // Generalized eigenspace of each cluster: the near-kernel of
    // (M_z - mu I)^m, taking exactly m singular directions.
    Eigen::MatrixXcd u(ln, ln);
    std::vector<size_t> dims;
    long col = 0;
    for (const auto& cl : clusters) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(ln, ln);
      Eigen::MatrixXcd shifted = mz - cl.center * Eigen::MatrixXcd::Identity(ln, ln);
      for (size_t e = 0; e < cl.multiplicity; ++e) p = p * shifted;
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p, Eigen::ComputeFullV);
      for (size_t j = 0; j < cl.multiplicity; ++j)
        u.col(col++) = svd.matrixV().col(ln - 1 - static_cast<long>(j));
      dims.push_back(cl.multiplicity);
    }
    // Independent blocks: the assembled basis must be well-conditioned.
    Eigen::JacobiSVD<Eigen::MatrixXcd> usvd(u);
    if (usvd.singularValues()(ln - 1) < 1e-8) continue;

    Eigen::PartialPivLU<Eigen::MatrixXcd> ulu(u);
    Eigen::MatrixXcd uinv = ulu.inverse();

    // Characters from block traces (exact for a true invariant block).
    std::vector<AlgebraFactor> factors(clusters.size());
    bool ok = true;
    long off = 0;
    for (size_t k = 0; k < clusters.size(); ++k) {
      const long m = static_cast<long>(dims[k]);
      AlgebraFactor& f = factors[k];
      f.block_dim = dims[k];
      f.basis.assign(dims[k], std::vector<Cplx>(n));
      for (long j = 0; j < m; ++j)
        for (long i = 0; i < ln; ++i) f.basis[static_cast<size_t>(j)][static_cast<size_t>(i)] = u(i, off + j);
      f.character.resize(n);
      for (size_t i = 0; i < n; ++i) {
        Eigen::MatrixXcd compressed = uinv * ops[i] * u;
        Cplx tr(0, 0);
        for (long j = 0; j < m; ++j) tr += compressed(off + j, off + j);
        f.character[i] = tr / static_cast<double>(m);
      }
      // The compression of each multiplication operator to the block must be
      // character + nilpotent: (A_i - lambda I)^m kills the block.
      for (size_t i = 0; i < n && ok; ++i) {
        Eigen::MatrixXcd shifted = ops[i] - f.character[i] * Eigen::MatrixXcd::Identity(ln, ln);
        Eigen::MatrixXcd pw = Eigen::MatrixXcd::Identity(ln, ln);
        for (long e = 0; e < m; ++e) pw = pw * shifted;
        double denom = 1.0;
        for (long e = 0; e < m; ++e) denom *= (1.0 + ops[i].norm());
        if ((pw * u.block(0, off, ln, m)).norm() / denom > 1e-6) ok = false;
      }
      off += m;
    }
    if (!ok) continue;

    // Idempotents: the projector applied to the unit.
    Eigen::VectorXcd ev(ln);
    for (size_t i = 0; i < n; ++i) ev(static_cast<long>(i)) = a.unit[i];
    Eigen::VectorXcd coords = ulu.solve(ev);
    off = 0;
    for (size_t k = 0; k < clusters.size(); ++k) {
      const long m = static_cast<long>(dims[k]);
      Eigen::VectorXcd sel = Eigen::VectorXcd::Zero(ln);
      for (long j = 0; j < m; ++j) sel(off + j) = coords(off + j);
      Eigen::VectorXcd ek = u * sel;
      factors[k].idempotent.resize(n);
      for (size_t i = 0; i < n; ++i) factors[k].idempotent[i] = ek(static_cast<long>(i));
      off += m;
    }
    const double vtol = 1e-6 * scale * scale;
    for (size_t j = 0; j < factors.size() && ok; ++j)
      for (size_t k = 0; k < factors.size() && ok; ++k) {
        auto prod = algebra_multiply(a, factors[j].idempotent, factors[k].idempotent);
        for (size_t i = 0; i < n; ++i) {
          Cplx want = (j == k) ? factors[j].idempotent[i] : Cplx(0, 0);
          if (std::abs(prod[i] - want) > vtol) ok = false;
        }
      }
    // Distinct factors must carry distinct characters beyond the tolerance.
    for (size_t j = 0; j < factors.size() && ok; ++j)
      for (size_t k = j + 1; k < factors.size() && ok; ++k) {
        double diff = 0.0;
        for (size_t i = 0; i < n; ++i)
          diff = std::max(diff, std::abs(factors[j].character[i] - factors[k].character[i]));
        if (diff <= tol) ok = false;
      }
    if (!ok) continue;

    std::sort(factors.begin(), factors.end(), [](const AlgebraFactor& x, const AlgebraFactor& y) {
      for (size_t i = 0; i < x.character.size(); ++i) {
        if (x.character[i].real() != y.character[i].real())
          return x.character[i].real() < y.character[i].real();
        if (x.character[i].imag() != y.character[i].imag())
          return x.character[i].imag() < y.character[i].imag();
      }
      return false;
    });
    AlgebraDecomposition dec;
    dec.factors = std::move(factors);
    for (const auto& f : dec.factors) dec.partition.push_back(f.block_dim);
    std::sort(dec.partition.rbegin(), dec.partition.rend());
    return dec;
  }
  return std::nullopt;
}

}  // namespace detail

// Simultaneous decomposition into generalized eigenspaces of all
// multiplication operators, driven by a seeded generic element. Throws
// std::invalid_argument on invariant violations and std::runtime_error with
// "tolerance ambiguity" when no clustering at this tolerance yields a
// consistent family of eigenspaces.
inline AlgebraDecomposition decompose(const FiniteAlgebra& a, double tol = 1e-8,
                                      unsigned seed = 0xF4C3) {
  validate_algebra(a);
  for (unsigned attempt = 0; attempt < 5; ++attempt) {
    std::mt19937 rng(seed + attempt);
    std::uniform_int_distribution<int> num(-19, 19);
    std::uniform_int_distribution<int> den(1, 13);
    std::vector<Cplx> z(a.dim);
    for (auto& v : z)
      v = Cplx(static_cast<double>(num(rng)) / den(rng), 0.0);
    auto dec = detail::try_decompose(a, z, tol);
    if (dec) return *dec;
  }
  throw std::runtime_error(
      "tolerance ambiguity: eigenvalue clusters at this tolerance do not yield "
      "consistent simultaneous eigenspaces");
}

inline std::vector<size_t> partition(const FiniteAlgebra& a, double tol = 1e-8,
                                     unsigned seed = 0xF4C3) {
  return decompose(a, tol, seed).partition;
}

// Socle test: for each local factor Q_k with maximal ideal m_k, the
// annihilator Ann_{Q_k}(m_k) is the joint kernel of multiplication by a basis
// of m_k; the factor is Gorenstein iff that socle is a line.
inline FrobeniusReport is_frobenius(const FiniteAlgebra& a, double tol = 1e-8,
                                    unsigned seed = 0xF4C3) {
  auto dec = decompose(a, tol, seed);
  const long ln = static_cast<long>(a.dim);
  FrobeniusReport rep;
  rep.frobenius = true;
  for (const auto& f : dec.factors) {
    const long m = static_cast<long>(f.block_dim);
    if (m == 1) {
      rep.gorenstein.push_back(true);
      rep.socle_dims.push_back(1);
      continue;
    }
    Eigen::MatrixXcd b(ln, m);
    for (long j = 0; j < m; ++j)
      for (long i = 0; i < ln; ++i) b(i, j) = f.basis[static_cast<size_t>(j)][static_cast<size_t>(i)];
    // Character as a row functional on block coordinates.
    Eigen::RowVectorXcd lrow(m);
    for (long j = 0; j < m; ++j) {
      Cplx acc(0, 0);
      for (long i = 0; i < ln; ++i) acc += b(i, j) * f.character[static_cast<size_t>(i)];
      lrow(j) = acc;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> lsvd(lrow, Eigen::ComputeFullV);
    Eigen::MatrixXcd w = lsvd.matrixV().rightCols(m - 1);  // basis of m_k
    // Stack the block compressions of multiplication by each ideal generator.
    Eigen::MatrixXcd stacked((m - 1) * m, m);
    for (long col = 0; col < m - 1; ++col) {
      Eigen::VectorXcd ambient = b * w.col(col);
      std::vector<Cplx> zc(a.dim);
      for (size_t i = 0; i < a.dim; ++i) zc[i] = ambient(static_cast<long>(i));
      Eigen::MatrixXcd op = detail::mult_operator(a, zc);
      stacked.block(col * m, 0, m, m) = b.adjoint() * op * b;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> ssvd(stacked);
    double smax = ssvd.singularValues()(0);
    size_t socle = 0;
    for (long i = 0; i < m; ++i)
      if (ssvd.singularValues()(i) <= 1e-7 * (1.0 + smax)) ++socle;
    rep.socle_dims.push_back(socle);
    rep.gorenstein.push_back(socle == 1);
    if (socle != 1) rep.frobenius = false;
  }
  return rep;
}

// Gram matrix g(x_i, x_j) = f(x_i * x_j) of a linear functional, with its
// rank; f generates the dual as a module iff g is nondegenerate.
inline GramReport bilinear_from_linear(const FiniteAlgebra& a, const std::vector<Cplx>& f,
                                       double tol = 1e-8) {
  if (f.size() != a.dim) throw std::invalid_argument("covector dimension mismatch");
  const long ln = static_cast<long>(a.dim);
  GramReport rep;
  rep.gram.assign(a.dim, std::vector<Cplx>(a.dim, Cplx(0, 0)));
  Eigen::MatrixXcd g(ln, ln);
  for (size_t i = 0; i < a.dim; ++i)
    for (size_t j = 0; j < a.dim; ++j) {
      Cplx acc(0, 0);
      for (size_t k = 0; k < a.dim; ++k) acc += a.c[i][j][k] * f[k];
      rep.gram[i][j] = acc;
      g(static_cast<long>(i), static_cast<long>(j)) = acc;
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * (1.0 + smax)) ++rep.rank;
  rep.nondegenerate = (rep.rank == a.dim);
  return rep;
}

// Direct product: block-diagonal structure tensor, concatenated units.
inline FiniteAlgebra product_algebra(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  FiniteAlgebra p;
  p.dim = a.dim + b.dim;
  p.c.assign(p.dim, std::vector<std::vector<Cplx>>(p.dim, std::vector<Cplx>(p.dim, Cplx(0, 0))));
  for (size_t i = 0; i < a.dim; ++i)
    for (size_t j = 0; j < a.dim; ++j)
      for (size_t k = 0; k < a.dim; ++k) p.c[i][j][k] = a.c[i][j][k];
  for (size_t i = 0; i < b.dim; ++i)
    for (size_t j = 0; j < b.dim; ++j)
      for (size_t k = 0; k < b.dim; ++k) p.c[a.dim + i][a.dim + j][a.dim + k] = b.c[i][j][k];
  p.unit.resize(p.dim);
  for (size_t i = 0; i < a.dim; ++i) p.unit[i] = a.unit[i];
  for (size_t i = 0; i < b.dim; ++i) p.unit[a.dim + i] = b.unit[i];
  return p;
}

// The semisimple coordinate algebra: x_i * x_j = delta_ij x_i, unit (1,...,1).
inline FiniteAlgebra diagonal_algebra(size_t n) {
  FiniteAlgebra a;
  a.dim = n;
  a.c.assign(n, std::vector<std::vector<Cplx>>(n, std::vector<Cplx>(n, Cplx(0, 0))));
  for (size_t i = 0; i < n; ++i) a.c[i][i][i] = Cplx(1, 0);
  a.unit.assign(n, Cplx(1, 0));
  return a;
}

}  // namespace fmf
