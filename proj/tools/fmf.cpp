// Command-line surface: loads chart documents, dispatches the verification
// suites and spectral computations, and emits schema-versioned JSON reports
// on stdout (diagnostics go to stderr).
//
// Exit codes: 0 all requested checks pass, 1 check failure or computation
// refusal, 2 usage error, 3 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmf/construct.hpp"
#include "fmf/io.hpp"
#include "fmf/metrics.hpp"
#include "fmf/spectrum.hpp"

namespace {

using nlohmann::ordered_json;

ordered_json report_head(const std::string& command) {
  ordered_json r;
  r["schema_version"] = 1;
  r["command"] = command;
  return r;
}

ordered_json check_json(const fmf::ChartReport& rep) {
  ordered_json violations = ordered_json::array();
  for (const auto& v : rep.violations)
    violations.push_back({{"identity", v.identity}, {"residual", fmf::to_string(v.residual)}});
  return ordered_json{{"pass", rep.pass}, {"violations", std::move(violations)}};
}

int finish(ordered_json r, bool pass) {
  r["pass"] = pass;
  std::cout << r.dump(2) << "\n";
  return pass ? 0 : 1;
}

std::vector<fmf::Cplx> parse_point(const std::string& text, size_t n) {
  std::vector<fmf::Cplx> p;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      p.emplace_back(v, 0.0);
    } catch (const std::exception&) {
      throw fmf::DocumentError("cannot parse point component \"" + item + "\"");
    }
  }
  if (p.size() != n)
    throw fmf::DocumentError("point needs " + std::to_string(n) + " components, got " +
                             std::to_string(p.size()));
  return p;
}

ordered_json point_json(const std::vector<fmf::Cplx>& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : p) arr.push_back(v.real());
  return arr;
}

fmf::RealizedChart load(const std::string& path) {
  return fmf::realize(fmf::parse_document(fmf::read_file(path)));
}

const fmf::EulerCandidate& need_euler(const fmf::RealizedChart& rz) {
  if (!rz.euler) throw fmf::DocumentError("document has no euler field");
  return *rz.euler;
}

const fmf::MetricField& need_metric(const fmf::RealizedChart& rz) {
  if (!rz.metric) throw fmf::DocumentError("document has no metric");
  return *rz.metric;
}

int run_verify(const std::string& path) {
  const fmf::RealizedChart rz = load(path);
  const fmf::ChartReport axioms = fmf::validate(rz.chart);
  const fmf::ChartReport integ = fmf::integrability_check(rz.chart);
  ordered_json r = report_head("verify");
  ordered_json checks;
  checks["validate"] = check_json(axioms);
  checks["integrability"] = check_json(integ);
  bool pass = axioms.pass && integ.pass;
  if (rz.euler) {
    const fmf::ChartReport eu = fmf::euler_check(rz.chart, rz.euler->field, rz.euler->weight);
    ordered_json je = check_json(eu);
    je["present"] = true;
    je["weight"] = fmf::to_string(rz.euler->weight);
    checks["euler"] = std::move(je);
    pass = pass && eu.pass;
  } else {
    checks["euler"] = ordered_json{{"present", false}};
  }
  r["checks"] = std::move(checks);
  return finish(std::move(r), pass);
}

int run_ll(const std::string& path) {
  const fmf::RealizedChart rz = load(path);
  const fmf::LLData ll = fmf::ll_map(rz.chart, need_euler(rz));
  ordered_json r = report_head("ll");
  ordered_json lambda = ordered_json::array();
  for (const auto& p : ll.lambda) lambda.push_back(fmf::to_string(p));
  r["lambda"] = std::move(lambda);
  r["discriminant"] = fmf::to_string(ll.discriminant);
  r["bifurcation"] = fmf::to_string(ll.bifurcation);
  return finish(std::move(r), true);
}

int run_caustic(const std::string& path, std::uint64_t seed) {
  const fmf::RealizedChart rz = load(path);
  const fmf::Poly<fmf::Rat> k = fmf::caustic_poly(rz.chart, seed);
  ordered_json r = report_head("caustic");
  r["seed"] = seed;
  r["caustic"] = fmf::to_string(k);
  return finish(std::move(r), true);
}

int run_decompose(const std::string& path, const std::string& point, std::uint64_t seed) {
  const fmf::RealizedChart rz = load(path);
  const auto p = parse_point(point, rz.chart.dim);
  const fmf::AlgebraDecomposition dec =
      fmf::decompose(fmf::fiber_algebra(rz.chart, p), 1e-8, static_cast<unsigned>(seed) + 0xF4C3);
  ordered_json r = report_head("decompose");
  r["point"] = point_json(p);
  r["partition"] = dec.partition;
  bool semisimple = true;
  for (size_t b : dec.partition) semisimple = semisimple && b == 1;
  r["semisimple"] = semisimple;
  return finish(std::move(r), true);
}

int run_frobenius_test(const std::string& path, const std::string& point, std::uint64_t seed) {
  const fmf::RealizedChart rz = load(path);
  const auto p = parse_point(point, rz.chart.dim);
  const fmf::FiniteAlgebra alg = fmf::fiber_algebra(rz.chart, p);
  const unsigned s = static_cast<unsigned>(seed) + 0xF4C3;
  const fmf::FrobeniusReport fr = fmf::is_frobenius(alg, 1e-8, s);
  const fmf::AlgebraDecomposition dec = fmf::decompose(alg, 1e-8, s);
  ordered_json r = report_head("frobenius-test");
  r["point"] = point_json(p);
  r["frobenius"] = fr.frobenius;
  r["gorenstein"] = fr.gorenstein;
  r["socle_dims"] = fr.socle_dims;
  r["partition"] = dec.partition;
  return finish(std::move(r), fr.frobenius);
}

int run_reconstruct(const std::string& path, const std::string& point, double tol) {
  const fmf::RealizedChart rz = load(path);
  const auto p = parse_point(point, rz.chart.dim);
  const fmf::LLData ll = fmf::ll_map(rz.chart, need_euler(rz));
  const fmf::FiniteAlgebra got =
      fmf::reconstruct_multiplication(ll.discriminant, rz.chart.unit_index, p);
  const fmf::FiniteAlgebra want = fmf::fiber_algebra(rz.chart, p);
  double dev = 0.0;
  for (size_t i = 0; i < want.dim; ++i)
    for (size_t j = 0; j < want.dim; ++j)
      for (size_t k = 0; k < want.dim; ++k)
        dev = std::max(dev, std::abs(got.c[i][j][k] - want.c[i][j][k]));
  ordered_json r = report_head("reconstruct");
  r["point"] = point_json(p);
  r["tol"] = tol;
  r["max_deviation"] = dev;
  return finish(std::move(r), dev <= tol);
}

int run_logcheck(const std::string& path) {
  const fmf::RealizedChart rz = load(path);
  const fmf::LogTangencyReport rep = fmf::log_tangency_check(rz.chart, need_euler(rz));
  ordered_json r = report_head("logcheck");
  r["divisible"] = rep.divisible;
  r["determinant_match"] = rep.determinant_match;
  return finish(std::move(r), rep.pass);
}

int run_metric_check(const std::string& path) {
  const fmf::RealizedChart rz = load(path);
  const fmf::MetricField& g = need_metric(rz);
  try {
    fmf::validate_metric(rz.chart, g);
  } catch (const std::invalid_argument& e) {
    throw fmf::DocumentError(e.what());
  }
  ordered_json r = report_head("metric-check");
  ordered_json checks;
  bool pass;
  if (rz.euler) {
    const fmf::FrobeniusManifoldReport rep = fmf::frobenius_report(rz.chart, g, *rz.euler);
    checks["axioms"] = check_json(rep.axioms);
    checks["invariance"] = check_json(rep.invariance);
    checks["potentiality"] = check_json(rep.potentiality);
    checks["coidentity"] = check_json(rep.coidentity);
    checks["flatness"] = check_json(rep.flatness);
    checks["unit_killing"] = check_json(rep.unit_killing);
    checks["euler"] = check_json(rep.euler);
    ordered_json conf;
    conf["pass"] = rep.conformal;
    if (rep.D) conf["D"] = fmf::to_string(*rep.D);
    checks["conformal"] = std::move(conf);
    pass = rep.pass;
  } else {
    const fmf::ChartReport inv = fmf::invariance_check(rz.chart, g);
    const fmf::ChartReport pot = fmf::nabla_A_check(rz.chart, g);
    const fmf::ChartReport coid = fmf::coidentity_check(rz.chart, g);
    const fmf::ChartReport flat = fmf::flatness_check(g);
    fmf::ChartReport killing;
    const auto L = fmf::lie_metric(g, fmf::unit_field(rz.chart));
    for (size_t i = 0; i < rz.chart.dim; ++i)
      for (size_t j = i; j < rz.chart.dim; ++j)
        if (!L[i][j].is_zero())
          fmf::detail::add_violation(
              killing, "lie_e_g(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")",
              L[i][j]);
    checks["invariance"] = check_json(inv);
    checks["potentiality"] = check_json(pot);
    checks["coidentity"] = check_json(coid);
    checks["flatness"] = check_json(flat);
    checks["unit_killing"] = check_json(killing);
    pass = inv.pass && pot.pass && coid.pass && flat.pass && killing.pass;
  }
  r["checks"] = std::move(checks);
  return finish(std::move(r), pass);
}

int run_catalog(const std::string& name, const std::vector<std::string>& args, bool dump) {
  const fmf::CatalogEntry ce = fmf::catalog(name, args);
  if (dump) {
    std::cout << fmf::print_document(fmf::document_from(ce.chart, ce.euler));
    return 0;
  }
  ordered_json r = report_head("catalog");
  r["name"] = ce.name;
  r["dimension"] = ce.chart.dim;
  r["coordinates"] = ce.chart.coords;
  r["euler"] = ce.euler.has_value();
  return finish(std::move(r), true);
}

int run_slice(const std::string& path, const std::string& vars, size_t grid, double lo, double hi,
              const std::string& out) {
  const fmf::RealizedChart rz = load(path);
  const fmf::LLData ll = fmf::ll_map(rz.chart, need_euler(rz));
  const auto idx = fmf::detail::split_key(vars, 2, rz.chart.dim);
  if (!idx) throw fmf::DocumentError("--vars needs two 1-based coordinate indices \"i,j\"");
  if ((*idx)[0] == (*idx)[1]) throw fmf::DocumentError("--vars needs two distinct indices");
  const std::vector<fmf::Cplx> base(rz.chart.dim, fmf::Cplx(0, 0));
  const std::string csv =
      fmf::discriminant_slice_csv(ll.discriminant, (*idx)[0], (*idx)[1], lo, hi, grid, base);
  if (out == "-") {
    std::cout << csv;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw fmf::DocumentError("cannot write \"" + out + "\"");
  f << csv;
  ordered_json r = report_head("slice");
  r["vars"] = ordered_json::array({(*idx)[0] + 1, (*idx)[1] + 1});
  r["grid"] = grid;
  r["rows"] = grid * grid;
  r["out"] = out;
  return finish(std::move(r), true);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"F-manifold chart toolkit: verification suites, spectral data, metric checks"};
  app.require_subcommand(1);

  std::string file, point = "0", vars = "1,2", out = "-", name;
  std::vector<std::string> args;
  std::uint64_t seed = 0;
  double tol = 1e-7, lo = -1.0, hi = 1.0;
  std::size_t grid = 20;
  bool dump = false;

  auto* verify = app.add_subcommand("verify", "unit, commutativity, integrability, Euler checks");
  verify->add_option("chart", file, "chart document path")->required();

  auto* ll = app.add_subcommand("ll", "eigenvalue-coefficient map, discriminant, bifurcation");
  ll->add_option("chart", file)->required();

  auto* caustic = app.add_subcommand("caustic", "caustic polynomial from a seeded probe field");
  caustic->add_option("chart", file)->required();
  caustic->add_option("--seed", seed, "probe seed (default 0)");

  auto* dec = app.add_subcommand("decompose", "tangent algebra block partition at a point");
  dec->add_option("chart", file)->required();
  dec->add_option("--point", point, "comma-separated coordinates")->required();
  dec->add_option("--seed", seed, "generic-element seed (default 0)");

  auto* frob = app.add_subcommand("frobenius-test", "Gorenstein test of the fiber algebra");
  frob->add_option("chart", file)->required();
  frob->add_option("--point", point)->required();
  frob->add_option("--seed", seed, "generic-element seed (default 0)");

  auto* rec = app.add_subcommand("reconstruct", "rebuild the fiber algebra from the discriminant");
  rec->add_option("chart", file)->required();
  rec->add_option("--point", point)->required();
  rec->add_option("--tol", tol, "max entrywise deviation (default 1e-7)");

  auto* logc = app.add_subcommand("logcheck", "discriminant tangency of the fields E o d_i");
  logc->add_option("chart", file)->required();

  auto* mc = app.add_subcommand("metric-check", "invariance, potentiality, flatness, Frobenius");
  mc->add_option("chart", file)->required();

  auto* cat = app.add_subcommand("catalog", "built-in chart constructions");
  cat->add_option("name", name, "entry name")->required();
  cat->add_option("args", args, "entry arguments");
  cat->add_flag("--dump", dump, "print the full chart document");

  auto* slice = app.add_subcommand("slice", "CSV grid of the discriminant in two coordinates");
  slice->add_option("chart", file)->required();
  slice->add_option("--vars", vars, "two 1-based coordinate indices (default 1,2)");
  slice->add_option("--grid", grid, "samples per axis (default 20)");
  slice->add_option("--min", lo, "grid lower bound (default -1)");
  slice->add_option("--max", hi, "grid upper bound (default 1)");
  slice->add_option("--out", out, "CSV path, - for stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return run_verify(file);
    if (*ll) return run_ll(file);
    if (*caustic) return run_caustic(file, seed);
    if (*dec) return run_decompose(file, point, seed);
    if (*frob) return run_frobenius_test(file, point, seed);
    if (*rec) return run_reconstruct(file, point, tol);
    if (*logc) return run_logcheck(file);
    if (*mc) return run_metric_check(file);
    if (*cat) return run_catalog(name, args, dump);
    if (*slice) return run_slice(file, vars, grid, lo, hi, out);
  } catch (const fmf::DocumentError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    ordered_json r = report_head("error");
    r["error"] = e.what();
    r["pass"] = false;
    std::cout << r.dump(2) << "\n";
    return 1;
  }
  return 2;
}
