#include <catch2/catch_amalgamated.hpp>

#include <tuple>

#include "fmf/construct.hpp"
#include "fmf/metrics.hpp"

using namespace fmf;

namespace {

Poly<Rat> tvar(const std::vector<std::string>& coords, const std::string& name, unsigned e = 1) {
  return poly_var<Rat>(coords, name, e);
}

Poly<Rat> cst(const std::vector<std::string>& coords, long num, long den = 1) {
  return poly_const<Rat>(coords, rat(num, den));
}

CatalogEntry i2(long m) { return catalog("I2", {std::to_string(m)}); }

// Antidiagonal metric scaled by (1 + t2); stays invariant and flat on I2.
MetricField scaled_antidiag(const Chart& c) {
  MetricField m = make_metric(c.coords);
  const Poly<Rat> s = cst(c.coords, 1) + tvar(c.coords, "t2");
  set_metric(m, 0, 1, s);
  return m;
}

// Identity metric in the idempotent basis of A1^n, pushed to the standard
// chart coordinates: g = [[n, 1, ..., 1], [1, I]].
MetricField a1n_idempotent_identity(const Chart& c) {
  MetricField m = make_metric(c.coords);
  set_metric(m, 0, 0, cst(c.coords, static_cast<long>(c.dim)));
  for (size_t i = 1; i < c.dim; ++i) {
    set_metric(m, 0, i, cst(c.coords, 1));
    set_metric(m, i, i, cst(c.coords, 1));
  }
  return m;
}

// Invariant metric on I2(m) with a non-closed coidentity: rows (1, t1) and
// (t1, t2^{m-2}); invariance forces g_22 = t2^{m-2} g_11.
MetricField twisted_i2_metric(const Chart& c, long m) {
  MetricField g = make_metric(c.coords);
  set_metric(g, 0, 0, cst(c.coords, 1));
  set_metric(g, 0, 1, tvar(c.coords, "t1"));
  set_metric(g, 1, 1, poly_pow(tvar(c.coords, "t2"), static_cast<unsigned>(m - 2)));
  return g;
}

bool all_zero(const std::vector<std::vector<Poly<Rat>>>& m) {
  for (const auto& row : m)
    for (const auto& p : row)
      if (!p.is_zero()) return false;
  return true;
}

}  // namespace

TEST_CASE("metric builders and validation") {
  const Chart c = i2(3).chart;
  MetricField m = antidiagonal_metric(c.coords);
  REQUIRE_NOTHROW(validate_metric(c, m));
  REQUIRE((metric_det(m) - cst(c.coords, -1)).is_zero());

  MetricField id = identity_metric(c.coords);
  REQUIRE_NOTHROW(validate_metric(c, id));
  REQUIRE((metric_det(id) - cst(c.coords, 1)).is_zero());

  MetricField bad = make_metric(c.coords);
  bad.g[0][1] = cst(c.coords, 1);  // poke one triangle only
  REQUIRE_THROWS_WITH(validate_metric(c, bad), Catch::Matchers::ContainsSubstring("not symmetric"));

  MetricField sing = make_metric(c.coords);
  set_metric(sing, 0, 0, cst(c.coords, 1));
  set_metric(sing, 0, 1, cst(c.coords, 1));
  set_metric(sing, 1, 1, cst(c.coords, 1));
  REQUIRE_THROWS_WITH(validate_metric(c, sing), Catch::Matchers::ContainsSubstring("determinant"));

  MetricField other = antidiagonal_metric(default_coords(3));
  REQUIRE_THROWS_WITH(validate_metric(c, other), Catch::Matchers::ContainsSubstring("coordinate"));
}

TEST_CASE("invariance holds for the antidiagonal pairing and fails for the identity") {
  for (long m : {3L, 5L, 8L}) {
    const Chart c = i2(m).chart;
    const MetricField g = antidiagonal_metric(c.coords);
    REQUIRE(invariance_check(c, g).pass);

    const auto A = invariance_tensor(c, g);
    REQUIRE(A[0][0][0].is_zero());
    REQUIRE((A[0][0][1] - cst(c.coords, 1)).is_zero());
    REQUIRE(A[0][1][1].is_zero());
    REQUIRE((A[1][1][1] - poly_pow(tvar(c.coords, "t2"), static_cast<unsigned>(m - 2))).is_zero());
  }

  const Chart c4 = i2(4).chart;
  const ChartReport bad = invariance_check(c4, identity_metric(c4.coords));
  REQUIRE_FALSE(bad.pass);
  REQUIRE_FALSE(bad.violations.empty());
  REQUIRE(bad.violations.front().identity.find("invariance") != std::string::npos);
  // witness: A_122 = t2^2 against A_212 = 1
  bool witnessed = false;
  for (const auto& v : bad.violations)
    if (v.identity == "invariance(1,2;2)") {
      const Poly<Rat> want = poly_pow(tvar(c4.coords, "t2"), 2) - cst(c4.coords, 1);
      REQUIRE((v.residual - want).is_zero());
      witnessed = true;
    }
  REQUIRE(witnessed);
}

TEST_CASE("invariance of the pushed idempotent identity on A1^n") {
  const Chart c = catalog("A1n", {"3"}).chart;
  const MetricField g = a1n_idempotent_identity(c);
  REQUIRE(invariance_check(c, g).pass);
  REQUIRE_FALSE(invariance_check(c, identity_metric(c.coords)).pass);
}

TEST_CASE("christoffel data for constant and scaled pairings") {
  const Chart c = i2(3).chart;
  {
    const ChristoffelData ch = christoffel(antidiagonal_metric(c.coords));
    REQUIRE((ch.det - cst(c.coords, -1)).is_zero());
    for (size_t l = 0; l < 2; ++l) {
      REQUIRE(all_zero(ch.first[l]));
      REQUIRE(all_zero(ch.num[l]));
    }
  }
  {
    const MetricField g = scaled_antidiag(c);
    const ChristoffelData ch = christoffel(g);
    const Poly<Rat> s = cst(c.coords, 1) + tvar(c.coords, "t2");
    REQUIRE((ch.det + s * s).is_zero());
    REQUIRE((ch.adjugate[0][1] + s).is_zero());
    REQUIRE(ch.adjugate[0][0].is_zero());
    // only Gamma_{1,22} = 1 and Gamma^2_22 = 1/(1+t2) survive
    REQUIRE((ch.first[0][1][1] - cst(c.coords, 1)).is_zero());
    REQUIRE(ch.first[1][1][1].is_zero());
    REQUIRE(ch.first[0][0][1].is_zero());
    REQUIRE((ch.num[1][1][1] + s).is_zero());
    REQUIRE(ch.num[0][1][1].is_zero());
    REQUIRE(ch.num[0][0][0].is_zero());
    REQUIRE(ch.num[1][0][1].is_zero());
  }
}

TEST_CASE("covariant derivative of A is symmetric and both assemblies agree") {
  for (long m : {3L, 6L}) {
    const Chart c = i2(m).chart;
    REQUIRE(nabla_A_check(c, antidiagonal_metric(c.coords)).pass);
    REQUIRE(nabla_mul_symmetry_check(c, antidiagonal_metric(c.coords)).pass);
  }
  {
    const Chart c = i2(3).chart;
    REQUIRE(nabla_A_check(c, scaled_antidiag(c)).pass);
    REQUIRE(nabla_mul_symmetry_check(c, scaled_antidiag(c)).pass);
  }
  {
    const Chart c = catalog("nilpotent2d").chart;
    REQUIRE(nabla_A_check(c, antidiagonal_metric(c.coords)).pass);
  }
  {
    const Chart c = catalog("A1n", {"3"}).chart;
    REQUIRE(nabla_A_check(c, a1n_idempotent_identity(c)).pass);
  }
}

TEST_CASE("potentiality, multiplication symmetry, and closed coidentity stand or fall together") {
  // On an F-manifold with invariant metric the three conditions are
  // equivalent; check the verdicts coincide across the inventory.
  struct Pair {
    Chart c;
    MetricField g;
  };
  std::vector<Pair> inventory;
  inventory.push_back({i2(3).chart, antidiagonal_metric(i2(3).chart.coords)});
  inventory.push_back({i2(5).chart, antidiagonal_metric(i2(5).chart.coords)});
  inventory.push_back({i2(3).chart, scaled_antidiag(i2(3).chart)});
  inventory.push_back({i2(3).chart, twisted_i2_metric(i2(3).chart, 3)});
  inventory.push_back({i2(4).chart, twisted_i2_metric(i2(4).chart, 4)});
  inventory.push_back({catalog("nilpotent2d").chart, antidiagonal_metric(default_coords(2))});
  {
    const Chart c = catalog("A1n", {"3"}).chart;
    inventory.push_back({c, a1n_idempotent_identity(c)});
  }
  for (const Pair& p : inventory) {
    REQUIRE(validate(p.c).pass);
    REQUIRE(integrability_check(p.c).pass);
    REQUIRE(invariance_check(p.c, p.g).pass);
    const bool closed = coidentity_check(p.c, p.g).pass;
    const bool pot = nabla_A_check(p.c, p.g).pass;
    const bool mul = nabla_mul_symmetry_check(p.c, p.g).pass;
    CAPTURE(to_string(p.g.g[0][0]), to_string(p.g.g[0][1]));
    REQUIRE(closed == pot);
    REQUIRE(pot == mul);
  }
}

TEST_CASE("twisted invariant metric has a non-closed coidentity") {
  const Chart c = i2(3).chart;
  const MetricField g = twisted_i2_metric(c, 3);
  REQUIRE(invariance_check(c, g).pass);
  const ChartReport rep = coidentity_check(c, g);
  REQUIRE_FALSE(rep.pass);
  REQUIRE(rep.violations.size() == 1);
  REQUIRE(rep.violations.front().identity == "closed(1,2)");
  // d eps(d1, d2) = d_1 g_21 - d_2 g_11 = 1
  REQUIRE((rep.violations.front().residual - cst(c.coords, 1)).is_zero());
}

TEST_CASE("coidentity detects a non-closed unit covector") {
  const Chart c = i2(3).chart;
  MetricField g = make_metric(c.coords);
  set_metric(g, 0, 0, tvar(c.coords, "t2"));
  set_metric(g, 0, 1, cst(c.coords, 1));
  const ChartReport rep = coidentity_check(c, g);
  REQUIRE_FALSE(rep.pass);
  REQUIRE((rep.violations.front().residual - cst(c.coords, -1)).is_zero());
  REQUIRE(coidentity_check(c, antidiagonal_metric(c.coords)).pass);
}

TEST_CASE("flatness by exact curvature") {
  const auto coords = default_coords(2);
  REQUIRE(flatness_check(antidiagonal_metric(coords)).pass);
  REQUIRE(flatness_check(identity_metric(coords)).pass);
  {
    // diag(1, t2) is a reparametrization of the flat line element
    MetricField g = identity_metric(coords);
    set_metric(g, 1, 1, tvar(coords, "t2"));
    REQUIRE(flatness_check(g).pass);
  }
  {
    const Chart c = i2(3).chart;
    REQUIRE(flatness_check(scaled_antidiag(c)).pass);
  }
  {
    // the cone metric diag(1, t1) has curvature
    MetricField g = identity_metric(coords);
    set_metric(g, 1, 1, tvar(coords, "t1"));
    const ChartReport rep = flatness_check(g);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.violations.front().identity.find("riemann") != std::string::npos);
  }
}

TEST_CASE("Euler rescales the antidiagonal pairing with weight 1 + 2/m") {
  for (long m = 3; m <= 8; ++m) {
    const CatalogEntry e = i2(m);
    const MetricField g = antidiagonal_metric(e.chart.coords);
    REQUIRE(e.euler.has_value());
    REQUIRE(lie_Eg_check(e.chart, g, e.euler->field, rat(1) + rat(2, m)).pass);
    REQUIRE_FALSE(lie_Eg_check(e.chart, g, e.euler->field, rat(1)).pass);
    const auto D = solve_conformal_weight(g, e.euler->field);
    REQUIRE(D.has_value());
    REQUIRE(*D == rat(1) + rat(2, m));
  }
}

TEST_CASE("pushed idempotent identity on A1^n rescales with weight 2") {
  const CatalogEntry e = catalog("A1n", {"3"});
  const MetricField g = a1n_idempotent_identity(e.chart);
  REQUIRE(e.euler.has_value());
  REQUIRE(lie_Eg_check(e.chart, g, e.euler->field, rat(2)).pass);
  const auto D = solve_conformal_weight(g, e.euler->field);
  REQUIRE(D.has_value());
  REQUIRE(*D == rat(2));
}

TEST_CASE("scaled pairing admits no constant conformal weight") {
  const CatalogEntry e = i2(3);
  REQUIRE_FALSE(solve_conformal_weight(scaled_antidiag(e.chart), e.euler->field).has_value());
}

TEST_CASE("a field is parallel exactly when it is Killing with closed covector") {
  const Chart c = i2(3).chart;
  const MetricField g = antidiagonal_metric(c.coords);
  const ChristoffelData ch = christoffel(g);
  const auto probe = [&](const PolyVectorField& z) {
    const bool parallel = all_zero(nabla_field(ch, z));
    const bool killing = all_zero(lie_metric(g, z));
    const bool closed = one_form_closed_check(c.coords, metric_covector(g, z)).pass;
    REQUIRE(parallel == (killing && closed));
    return std::tuple{parallel, killing, closed};
  };

  const Poly<Rat> t1 = tvar(c.coords, "t1"), t2 = tvar(c.coords, "t2");
  const Poly<Rat> zero = poly_zero<Rat>(c.coords);

  auto [p1, k1, c1] = probe(unit_field(c));
  REQUIRE(p1);

  // boost: Killing for the hyperbolic pairing, covector not closed
  auto [p2, k2, c2] = probe(PolyVectorField{{t1, -t2}});
  REQUIRE_FALSE(p2);
  REQUIRE(k2);
  REQUIRE_FALSE(c2);

  // dilation: closed covector, not Killing
  auto [p3, k3, c3] = probe(PolyVectorField{{t1, t2}});
  REQUIRE_FALSE(p3);
  REQUIRE_FALSE(k3);
  REQUIRE(c3);

  // constant fields stay parallel for the curved representative too
  const MetricField gs = scaled_antidiag(c);
  const ChristoffelData chs = christoffel(gs);
  REQUIRE(all_zero(nabla_field(chs, unit_field(c))));
  REQUIRE(all_zero(lie_metric(gs, unit_field(c))));
  REQUIRE_FALSE(all_zero(nabla_field(chs, PolyVectorField{{zero, poly_const<Rat>(c.coords, rat(1))}})));
}

TEST_CASE("frobenius verdict for the dihedral family") {
  for (long m = 3; m <= 8; ++m) {
    const CatalogEntry e = i2(m);
    const FrobeniusManifoldReport rep =
        frobenius_report(e.chart, antidiagonal_metric(e.chart.coords), *e.euler);
    CAPTURE(m);
    REQUIRE(rep.pass);
    REQUIRE(rep.D.has_value());
    REQUIRE(*rep.D == rat(1) + rat(2, m));
  }
}

TEST_CASE("frobenius verdict rejects the identity pairing with a witness") {
  const CatalogEntry e = i2(4);
  const FrobeniusManifoldReport rep =
      frobenius_report(e.chart, identity_metric(e.chart.coords), *e.euler);
  REQUIRE_FALSE(rep.pass);
  REQUIRE_FALSE(rep.invariance.pass);
  REQUIRE_FALSE(rep.invariance.violations.empty());
}

TEST_CASE("frobenius verdict on split semisimple and nilpotent charts") {
  {
    const CatalogEntry e = catalog("A1n", {"3"});
    const FrobeniusManifoldReport rep =
        frobenius_report(e.chart, a1n_idempotent_identity(e.chart), *e.euler);
    REQUIRE(rep.pass);
    REQUIRE(rep.D.has_value());
    REQUIRE(*rep.D == rat(2));
  }
  {
    const CatalogEntry e = catalog("nilpotent2d");
    const FrobeniusManifoldReport rep =
        frobenius_report(e.chart, antidiagonal_metric(e.chart.coords), *e.euler);
    REQUIRE(rep.pass);
    REQUIRE(rep.D.has_value());
    REQUIRE(*rep.D == rat(1));
  }
}

TEST_CASE("frobenius verdict isolates the failing conformal condition") {
  const CatalogEntry e = i2(3);
  const FrobeniusManifoldReport rep = frobenius_report(e.chart, scaled_antidiag(e.chart), *e.euler);
  REQUIRE_FALSE(rep.pass);
  REQUIRE(rep.axioms.pass);
  REQUIRE(rep.invariance.pass);
  REQUIRE(rep.potentiality.pass);
  REQUIRE(rep.coidentity.pass);
  REQUIRE(rep.flatness.pass);
  REQUIRE(rep.unit_killing.pass);
  REQUIRE(rep.euler.pass);
  REQUIRE_FALSE(rep.conformal);
  REQUIRE_FALSE(rep.D.has_value());
}
