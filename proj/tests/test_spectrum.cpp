#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "fmf/spectrum.hpp"

using namespace fmf;

namespace {

Chart dihedral_chart(unsigned m) {
  Chart c = make_chart(2);
  set_structure(c, 1, 1, 0, poly_var<Rat>(c.coords, "t2", m - 2));
  return c;
}

EulerCandidate dihedral_euler(const Chart& c, unsigned m) {
  auto e = zero_field(c);
  e.components[0] = poly_var<Rat>(c.coords, "t1");
  e.components[1] = rat(2, m) * poly_var<Rat>(c.coords, "t2");
  return {e, rat(1)};
}

Chart split_chart(size_t n) {
  Chart c = make_chart(n);
  for (size_t i = 1; i < n; ++i)
    set_structure(c, i, i, i, poly_const<Rat>(c.coords, rat(1)));
  return c;
}

// E = t1 d1 + sum_{i>=2} t_i d_i; eigenvalues t1 and t1 + t_i.
EulerCandidate split_euler(const Chart& c) {
  auto e = zero_field(c);
  for (size_t i = 0; i < c.dim; ++i) e.components[i] = poly_var<Rat>(c.coords, c.coords[i]);
  return {e, rat(1)};
}

// Three smooth spectrum components: d2 o d2 = p2 t2^(p2-1) d2,
// d3 o d3 = p3 t3^(p3-1) d3, d2 o d3 = 0.
Chart three_plane_chart(unsigned p2, unsigned p3) {
  Chart c = make_chart(3);
  set_structure(c, 1, 1, 1, rat(p2) * poly_var<Rat>(c.coords, "t2", p2 - 1));
  set_structure(c, 2, 2, 2, rat(p3) * poly_var<Rat>(c.coords, "t3", p3 - 1));
  return c;
}

// Elementary symmetric polynomials of the given values.
std::vector<Poly<Rat>> elementary_symmetric(const std::vector<Poly<Rat>>& v) {
  std::vector<Poly<Rat>> e(v.size() + 1, poly_zero<Rat>(v[0].vars));
  e[0] = poly_const<Rat>(v[0].vars, rat(1));
  for (const auto& x : v)
    for (size_t j = e.size() - 1; j >= 1; --j) e[j] = e[j] + x * e[j - 1];
  return e;
}

std::vector<Cplx> lift_character(const std::vector<Cplx>& character,
                                 const std::vector<Cplx>& base) {
  std::vector<Cplx> pt = character;
  pt.insert(pt.end(), base.begin(), base.end());
  return pt;
}

double algebra_distance(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  REQUIRE(a.dim == b.dim);
  double worst = 0.0;
  for (size_t i = 0; i < a.dim; ++i)
    for (size_t j = 0; j < a.dim; ++j)
      for (size_t k = 0; k < a.dim; ++k)
        worst = std::max(worst, std::abs(a.c[i][j][k] - b.c[i][j][k]));
  return worst;
}

}  // namespace

TEST_CASE("spectrum ideal of the dihedral family matches the fiber relations") {
  for (unsigned m : {3u, 5u}) {
    auto s = spectrum_ideal(dihedral_chart(m));
    REQUIRE(s.vars == std::vector<std::string>{"y1", "y2", "t1", "t2"});
    REQUIRE(s.generators.size() == 1 + 3);
    REQUIRE(s.generators[0] == parse_poly("y1 - 1", s.vars));
    REQUIRE(s.generators[1] == parse_poly("y1^2 - y1", s.vars));
    REQUIRE(s.generators[2] == parse_poly("y1*y2 - y2", s.vars));
    std::string rel = "y2^2 - t2^" + std::to_string(m - 2) + "*y1";
    REQUIRE(s.generators[3] == parse_poly(rel, s.vars));
  }
}

TEST_CASE("spectrum ideal generator count and collision guard") {
  auto s = spectrum_ideal(split_chart(4));
  REQUIRE(s.generators.size() == 1 + 4 * 5 / 2);
  for (const auto& g : s.generators) {
    unsigned ydeg = 0;
    for (const auto& [mono, coeff] : g.terms) {
      unsigned d = 0;
      for (size_t i = 0; i < 4; ++i) d += mono[i];
      ydeg = std::max(ydeg, d);
    }
    REQUIRE(ydeg <= 2);
  }

  Chart clash = make_chart(2);
  clash.coords[1] = "y1";
  for (auto& plane : clash.a)
    for (auto& row : plane)
      for (auto& p : row) p = poly_rename(p, clash.coords);
  REQUIRE_THROWS_AS(spectrum_ideal(clash), std::invalid_argument);
}

TEST_CASE("spectrum ideal of the three-plane chart vanishes on its components") {
  auto c = three_plane_chart(2, 2);
  auto s = spectrum_ideal(c);
  // Components over a base point: y = (1,0,0), (1, 2 t2, 0), (1, 0, 2 t3).
  std::vector<Cplx> base{Cplx(0.3, 0), Cplx(-1.2, 0), Cplx(0.7, 0)};
  auto at = [&](Cplx y2, Cplx y3) {
    return on_spectrum(s, lift_character({Cplx(1, 0), y2, y3}, base));
  };
  REQUIRE(at(Cplx(0, 0), Cplx(0, 0)).on);
  REQUIRE(at(2.0 * base[1], Cplx(0, 0)).on);
  REQUIRE(at(Cplx(0, 0), 2.0 * base[2]).on);
  // Mixing the two nonzero branches violates y2 y3 = 0.
  REQUIRE_FALSE(at(2.0 * base[1], 2.0 * base[2]).on);
}

TEST_CASE("points on and off the dihedral spectrum") {
  auto s = spectrum_ideal(dihedral_chart(5));
  REQUIRE(on_spectrum(s, {Cplx(1, 0), Cplx(1, 0), Cplx(0, 0), Cplx(1, 0)}).on);
  auto off = on_spectrum(s, {Cplx(0, 0), Cplx(1, 0), Cplx(0, 0), Cplx(1, 0)});
  REQUIRE_FALSE(off.on);
  REQUIRE(off.max_residual >= 1.0);  // the unit generator evaluates to -1
}

TEST_CASE("characters of the fiber algebra lie on the spectrum") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> coord(0.4, 1.6);
  auto probe = [&](const Chart& c) {
    auto s = spectrum_ideal(c);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Cplx> p;
      for (size_t i = 0; i < c.dim; ++i) p.emplace_back(coord(rng), coord(rng) / 3);
      auto dec = decompose(fiber_algebra(c, p));
      for (const auto& factor : dec.factors) {
        auto rep = on_spectrum(s, lift_character(factor.character, p), 1e-7);
        REQUIRE(rep.on);
      }
    }
  };
  probe(dihedral_chart(4));
  probe(split_chart(3));
  probe(three_plane_chart(3, 2));
}

TEST_CASE("lambda map of the dihedral family") {
  for (unsigned m : {3u, 4u, 7u}) {
    auto c = dihedral_chart(m);
    auto ll = ll_map(c, dihedral_euler(c, m));
    REQUIRE(ll.lambda.size() == 2);
    REQUIRE(ll.lambda[0] == parse_poly("-2*t1", c.coords));
    std::string l2 = "t1^2 - 4/" + std::to_string(m * m) + "*t2^" + std::to_string(m);
    REQUIRE(ll.lambda[1] == parse_poly(l2, c.coords));
    REQUIRE(ll.discriminant == ll.lambda[1]);
    std::string bif = "16/" + std::to_string(m * m) + "*t2^" + std::to_string(m);
    REQUIRE(ll.bifurcation == parse_poly(bif, c.coords));
  }
}

TEST_CASE("lambda map of split charts gives signed symmetric polynomials") {
  for (size_t n : {2u, 3u}) {
    auto c = split_chart(n);
    auto ll = ll_map(c, split_euler(c));
    // Eigenvalues of E o are t1 and t1 + t_i.
    std::vector<Poly<Rat>> vals{poly_var<Rat>(c.coords, "t1")};
    for (size_t i = 1; i < n; ++i)
      vals.push_back(poly_var<Rat>(c.coords, "t1") + poly_var<Rat>(c.coords, c.coords[i]));
    auto sym = elementary_symmetric(vals);
    for (size_t i = 1; i <= n; ++i) {
      Poly<Rat> want = (i % 2 ? rat(-1) : rat(1)) * sym[i];
      REQUIRE(ll.lambda[i - 1] == want);
    }
  }
}

TEST_CASE("the last lambda entry is the signed determinant") {
  auto check = [](const Chart& c, const EulerCandidate& e) {
    auto ll = ll_map(c, e);
    auto det = bareiss_det(multiplication_matrix(c, e.field), c.coords);
    Poly<Rat> want = (c.dim % 2 == 0) ? det : rat(-1) * det;
    REQUIRE(ll.discriminant == want);
  };
  auto d3 = dihedral_chart(3);
  check(d3, dihedral_euler(d3, 3));
  auto s3 = split_chart(3);
  check(s3, split_euler(s3));
}

TEST_CASE("bifurcation agrees with the Sylvester discriminant route") {
  auto check = [](const Chart& c, const EulerCandidate& e) {
    auto ll = ll_map(c, e);
    auto vs = c.coords;
    vs.push_back("z");
    Poly<Rat> f = poly_var<Rat>(vs, "z", static_cast<unsigned>(c.dim));
    for (size_t i = 1; i <= c.dim; ++i)
      f = f + poly_extend(ll.lambda[i - 1], vs) *
                  poly_var<Rat>(vs, "z", static_cast<unsigned>(c.dim - i));
    REQUIRE(ll.bifurcation == poly_restrict(discriminant_uni(f, "z"), c.coords));
  };
  auto d5 = dihedral_chart(5);
  check(d5, dihedral_euler(d5, 5));
  auto s3 = split_chart(3);
  check(s3, split_euler(s3));
  auto t32 = three_plane_chart(3, 2);
  check(t32, *solve_euler_weights(t32));
}

TEST_CASE("lambda map rejects non-Euler input") {
  auto c = dihedral_chart(3);
  auto e = dihedral_euler(c, 3);
  REQUIRE_THROWS_AS(ll_map(c, EulerCandidate{e.field, rat(2)}), std::invalid_argument);
  REQUIRE_THROWS_AS(ll_map(c, EulerCandidate{unit_field(c), rat(1)}), std::invalid_argument);
}

TEST_CASE("one-dimensional chart has trivial spectral data") {
  auto c = make_chart(1);
  EulerCandidate e{zero_field(c), rat(1)};
  e.field.components[0] = poly_var<Rat>(c.coords, "t1");
  auto ll = ll_map(c, e);
  REQUIRE(ll.lambda[0] == parse_poly("-t1", c.coords));
  REQUIRE(ll.bifurcation == poly_const<Rat>(c.coords, rat(1)));
  auto alg = reconstruct_multiplication(ll.discriminant, size_t{0}, {Cplx(1, 0)});
  REQUIRE(std::abs(alg.c[0][0][0] - Cplx(1, 0)) < 1e-12);
}

TEST_CASE("roots of the lambda polynomial are the Euler eigenvalues") {
  auto c = dihedral_chart(5);
  auto ll = ll_map(c, dihedral_euler(c, 5));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> coord(0.5, 1.5);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Cplx> p{Cplx(coord(rng), coord(rng)), Cplx(coord(rng), coord(rng))};
    std::vector<Cplx> coeffs{Cplx(1, 0), eval(ll.lambda[0], p), eval(ll.lambda[1], p)};
    auto roots = complex_roots(coeffs);
    std::vector<Cplx> froots;
    for (const auto& r : roots)
      for (unsigned k = 0; k < r.multiplicity; ++k) froots.push_back(r.value);

    Eigen::MatrixXcd m(2, 2);
    auto mat = multiplication_matrix(c, dihedral_euler(c, 5).field);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) m(i, j) = eval(mat[i][j], p);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    REQUIRE(es.info() == Eigen::Success);
    std::vector<Cplx> evs{es.eigenvalues()(0), es.eigenvalues()(1)};
    auto lt = [](Cplx a, Cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    };
    std::sort(froots.begin(), froots.end(), lt);
    std::sort(evs.begin(), evs.end(), lt);
    for (size_t i = 0; i < 2; ++i) REQUIRE(std::abs(froots[i] - evs[i]) < 1e-8);
  }
}

TEST_CASE("bifurcation polynomial vanishes exactly at eigenvalue collisions") {
  auto c = split_chart(2);
  auto ll = ll_map(c, split_euler(c));
  // Collision iff the second coordinate vanishes.
  REQUIRE(ll.bifurcation == parse_poly("t2^2", c.coords));

  auto d = dihedral_chart(3);
  auto lld = ll_map(d, dihedral_euler(d, 3));
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(0.5, 1.5);
  for (int trial = 0; trial < 4; ++trial) {
    Cplx t1(coord(rng), 0), t2(coord(rng), 0);
    REQUIRE(std::abs(eval(lld.bifurcation, {t1, t2})) > 1e-6);
    REQUIRE(std::abs(eval(lld.bifurcation, {t1, Cplx(0, 0)})) < 1e-14);
  }
}

TEST_CASE("caustic of the dihedral family is the second coordinate axis") {
  for (unsigned m : {3u, 5u}) {
    auto k = caustic_poly(dihedral_chart(m), 0);
    REQUIRE(k == parse_poly("t2", default_coords(2)));
  }
  // Determinism per seed.
  REQUIRE(caustic_poly(dihedral_chart(4), 9) == caustic_poly(dihedral_chart(4), 9));
}

TEST_CASE("caustic zero set lies inside the bifurcation zero set") {
  auto c = dihedral_chart(5);
  auto ll = ll_map(c, dihedral_euler(c, 5));
  auto k = caustic_poly(c, 3);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  for (int trial = 0; trial < 8; ++trial) {
    // Points on the caustic: t2 = 0.
    std::vector<Cplx> p{Cplx(coord(rng), coord(rng)), Cplx(0, 0)};
    REQUIRE(std::abs(eval(k, p)) < 1e-14);
    REQUIRE(std::abs(eval(ll.bifurcation, p)) < 1e-14);
  }
}

TEST_CASE("split charts have empty caustic") {
  REQUIRE(caustic_poly(split_chart(2), 0) == poly_const<Rat>(default_coords(2), rat(1)));
  REQUIRE(caustic_poly(split_chart(3), 0) == poly_const<Rat>(default_coords(3), rat(1)));
}

TEST_CASE("nowhere-semisimple chart is rejected by the caustic heuristic") {
  Chart nil = make_chart(2);  // d2 o d2 = 0
  REQUIRE_THROWS_WITH(caustic_poly(nil, 0),
                      Catch::Matchers::ContainsSubstring("not generically semisimple"));
}

TEST_CASE("pushforward of the unit field matches the target unit field") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  auto rep = dlambda_e_check(c, ll, {Cplx(0, 0), Cplx(1, 0)}, 1e-3);
  REQUIRE(rep.pass);
  // lambda entries are at most quadratic in t1, so central differences are
  // exact to rounding here.
  REQUIRE(rep.max_deviation < 1e-9);
  REQUIRE(std::abs(rep.expected[0] - Cplx(-2, 0)) < 1e-12);

  auto s = split_chart(2);
  auto lls = ll_map(s, split_euler(s));
  auto reps = dlambda_e_check(s, lls, {Cplx(0, 0), Cplx(1, 0)}, 1e-4);
  REQUIRE(reps.pass);
  REQUIRE(reps.max_deviation < 1e-9);
  REQUIRE(std::abs(reps.expected[1] - Cplx(1, 0)) < 1e-12);  // -a_1 = 1 at this point
}

TEST_CASE("pushforward check rejects points on the bifurcation locus") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  REQUIRE_THROWS_AS(dlambda_e_check(c, ll, {Cplx(0, 0), Cplx(0, 0)}, 1e-3), std::runtime_error);
}

TEST_CASE("discriminant tangency of the Euler-multiplied basis fields") {
  for (unsigned m : {3u, 6u}) {
    auto c = dihedral_chart(m);
    auto rep = log_tangency_check(c, dihedral_euler(c, m));
    REQUIRE(rep.pass);
    REQUIRE(rep.divisible == std::vector<bool>{true, true});
    REQUIRE(rep.determinant_match);
  }
  auto s = split_chart(2);
  REQUIRE(log_tangency_check(s, split_euler(s)).pass);
}

TEST_CASE("bare coordinate fields are not tangent to the discriminant") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  auto d2 = partial_derivative(ll.discriminant, "t2");
  REQUIRE(d2 == parse_poly("-4/3*t2^2", c.coords));
  REQUIRE_FALSE(divide_exact(d2, ll.discriminant).has_value());
  // The unit direction itself is fine: d1(lambda_2) = 2 t1 is not divisible
  // either, which is exactly why the fields must be multiplied by E first.
  REQUIRE_FALSE(divide_exact(partial_derivative(ll.discriminant, "t1"), ll.discriminant)
                    .has_value());
}

TEST_CASE("reconstruction at the dihedral base example") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  std::vector<Cplx> p{Cplx(0, 0), Cplx(1, 0)};
  auto alg = reconstruct_multiplication(ll.discriminant, size_t{0}, p);
  REQUIRE_NOTHROW(validate_algebra(alg, 1e-9));
  REQUIRE(algebra_distance(alg, fiber_algebra(c, p)) < 1e-8);
  // d2 o d2 = t2 d1 evaluates to d1 here.
  REQUIRE(std::abs(alg.c[1][1][0] - Cplx(1, 0)) < 1e-9);
  REQUIRE(std::abs(alg.c[1][1][1]) < 1e-9);
}

TEST_CASE("reconstruction with a non-axis unit direction") {
  // Product of two lines in canonical coordinates: discriminant u1 u2 and
  // unit direction (1,1); the recovered idempotents are the coordinate axes.
  auto disc = parse_poly("u1*u2", {"u1", "u2"});
  auto alg = reconstruct_multiplication(disc, std::vector<Cplx>{Cplx(1, 0), Cplx(1, 0)},
                                        {Cplx(1, 0), Cplx(2, 0)});
  auto expected = diagonal_algebra(2);
  REQUIRE(algebra_distance(alg, expected) < 1e-10);
}

TEST_CASE("reconstruction rejects non-generic points") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  REQUIRE_THROWS_WITH(
      reconstruct_multiplication(ll.discriminant, size_t{0}, {Cplx(0, 0), Cplx(0, 0)}),
      Catch::Matchers::ContainsSubstring("non-generic point"));
  auto disc = parse_poly("u1*u2", {"u1", "u2"});
  // Along the first axis the restriction has degree one only.
  REQUIRE_THROWS_WITH(reconstruct_multiplication(disc, size_t{0}, {Cplx(1, 0), Cplx(2, 0)}),
                      Catch::Matchers::ContainsSubstring("non-generic point"));
}

TEST_CASE("reconstruction agrees with the fiber algebra at random points") {
  std::mt19937 rng(2026);
  std::uniform_real_distribution<double> coord(0.6, 1.4);
  auto run = [&](const Chart& c, const EulerCandidate& e, int count) {
    auto ll = ll_map(c, e);
    int done = 0;
    while (done < count) {
      std::vector<Cplx> p;
      for (size_t i = 0; i < c.dim; ++i) p.emplace_back(coord(rng), 0.3 * coord(rng));
      if (std::abs(eval(ll.bifurcation, p)) < 1e-3) continue;
      auto alg = reconstruct_multiplication(ll.discriminant, c.unit_index, p, 1e-9);
      REQUIRE(algebra_distance(alg, fiber_algebra(c, p)) < 1e-7);
      ++done;
    }
  };
  auto d3 = dihedral_chart(3);
  run(d3, dihedral_euler(d3, 3), 7);
  auto d4 = dihedral_chart(4);
  run(d4, dihedral_euler(d4, 4), 7);
  auto s3 = split_chart(3);
  run(s3, split_euler(s3), 6);
}

TEST_CASE("discriminant slice export") {
  auto c = dihedral_chart(3);
  auto ll = ll_map(c, dihedral_euler(c, 3));
  auto csv = discriminant_slice_csv(ll.discriminant, 0, 1, -1.0, 1.0, 3,
                                    {Cplx(0, 0), Cplx(0, 0)});
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "t1,t2,value");
  size_t rows = 0;
  std::vector<std::string> cells;
  while (std::getline(in, line)) {
    ++rows;
    if (rows == 1) {
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
    }
  }
  REQUIRE(rows == 9);
  REQUIRE(cells.size() == 3);
  // First row-major cell: t1 = -1, t2 = -1, value = 1 + 4/9.
  REQUIRE(std::abs(std::stod(cells[0]) + 1.0) < 1e-12);
  REQUIRE(std::abs(std::stod(cells[1]) + 1.0) < 1e-12);
  REQUIRE(std::abs(std::stod(cells[2]) - (1.0 + 4.0 / 9.0)) < 1e-9);
  REQUIRE_THROWS_AS(discriminant_slice_csv(ll.discriminant, 0, 0, -1, 1, 3,
                                           {Cplx(0, 0), Cplx(0, 0)}),
                    std::invalid_argument);
}
