#pragma once

// Chart documents: a JSON interchange format for charts with optional Euler
// field and metric. Structure and metric tables are exhaustive (every i<=j
// key present, zeros included) so that parse and print round-trip bit-exactly.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <fmf/chart.hpp>
#include <fmf/metrics.hpp>
#include <fmf/poly.hpp>

namespace fmf {

struct DocumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EulerDocument {
  std::vector<std::string> components;
  std::string weight;
  bool operator==(const EulerDocument&) const = default;
};

struct ChartDocument {
  int schema_version = 1;
  size_t dimension = 0;
  std::vector<std::string> coordinates;
  size_t unit = 1;  // 1-based
  std::map<std::string, std::string> structure;  // "i,j,k" with i<=j, exhaustive
  std::optional<EulerDocument> euler;
  std::optional<std::map<std::string, std::string>> metric;  // "i,j" with i<=j, exhaustive
  bool operator==(const ChartDocument&) const = default;
};

struct RealizedChart {
  Chart chart;
  std::optional<EulerCandidate> euler;
  std::optional<MetricField> metric;
};

namespace detail {

inline std::string ijk_key(size_t i, size_t j, size_t k) {
  return std::to_string(i + 1) + "," + std::to_string(j + 1) + "," + std::to_string(k + 1);
}

inline std::string ij_key(size_t i, size_t j) {
  return std::to_string(i + 1) + "," + std::to_string(j + 1);
}

// Parses "a,b"/"a,b,c" keys of 1-based indices; returns {} on malformed input.
inline std::optional<std::vector<size_t>> split_key(const std::string& key, size_t parts, size_t n) {
  std::vector<size_t> out;
  std::string cur;
  std::istringstream in(key);
  while (std::getline(in, cur, ',')) {
    if (cur.empty() || cur.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    const unsigned long v = std::stoul(cur);
    if (v < 1 || v > n) return std::nullopt;
    out.push_back(static_cast<size_t>(v - 1));
  }
  if (out.size() != parts) return std::nullopt;
  return out;
}

}  // namespace detail

inline ChartDocument document_from(const Chart& c, const std::optional<EulerCandidate>& e = {},
                                   const std::optional<MetricField>& m = {}) {
  ChartDocument d;
  d.dimension = c.dim;
  d.coordinates = c.coords;
  d.unit = c.unit_index + 1;
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i; j < c.dim; ++j)
      for (size_t k = 0; k < c.dim; ++k) d.structure[detail::ijk_key(i, j, k)] = to_string(c.a[i][j][k]);
  if (e) {
    EulerDocument ed;
    for (const auto& p : e->field.components) ed.components.push_back(to_string(p));
    ed.weight = to_string(e->weight);
    d.euler = std::move(ed);
  }
  if (m) {
    std::map<std::string, std::string> entries;
    for (size_t i = 0; i < m->g.size(); ++i)
      for (size_t j = i; j < m->g.size(); ++j) entries[detail::ij_key(i, j)] = to_string(m->g[i][j]);
    d.metric = std::move(entries);
  }
  return d;
}

inline std::string print_document(const ChartDocument& d) {
  nlohmann::ordered_json j;
  j["schema_version"] = d.schema_version;
  j["dimension"] = d.dimension;
  j["coordinates"] = d.coordinates;
  j["unit"] = d.unit;
  nlohmann::ordered_json st = nlohmann::ordered_json::object();
  for (const auto& [k, v] : d.structure) st[k] = v;
  j["structure"] = std::move(st);
  if (d.euler) {
    j["euler"] = {{"components", d.euler->components}, {"weight", d.euler->weight}};
  }
  if (d.metric) {
    nlohmann::ordered_json me = nlohmann::ordered_json::object();
    for (const auto& [k, v] : *d.metric) me[k] = v;
    j["metric"] = std::move(me);
  }
  return j.dump(2) + "\n";
}

inline ChartDocument parse_document(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DocumentError("document must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "schema_version" && key != "dimension" && key != "coordinates" && key != "unit" &&
        key != "structure" && key != "euler" && key != "metric")
      throw DocumentError("unknown field \"" + key + "\"");

  ChartDocument d;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw DocumentError("missing integer field \"schema_version\"");
  d.schema_version = j["schema_version"].get<int>();
  if (d.schema_version != 1)
    throw DocumentError("unsupported schema_version " + std::to_string(d.schema_version));

  if (!j.contains("dimension") || !j["dimension"].is_number_unsigned() ||
      j["dimension"].get<size_t>() < 1)
    throw DocumentError("missing positive integer field \"dimension\"");
  d.dimension = j["dimension"].get<size_t>();
  const size_t n = d.dimension;

  if (!j.contains("coordinates") || !j["coordinates"].is_array())
    throw DocumentError("missing array field \"coordinates\"");
  for (const auto& c : j["coordinates"]) {
    if (!c.is_string() || c.get<std::string>().empty())
      throw DocumentError("coordinates must be nonempty strings");
    d.coordinates.push_back(c.get<std::string>());
  }
  if (d.coordinates.size() != n)
    throw DocumentError("expected " + std::to_string(n) + " coordinates, got " +
                        std::to_string(d.coordinates.size()));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a + 1; b < n; ++b)
      if (d.coordinates[a] == d.coordinates[b])
        throw DocumentError("duplicate coordinate \"" + d.coordinates[a] + "\"");

  if (!j.contains("unit") || !j["unit"].is_number_unsigned())
    throw DocumentError("missing integer field \"unit\"");
  d.unit = j["unit"].get<size_t>();
  if (d.unit < 1 || d.unit > n) throw DocumentError("unit index out of range");

  if (!j.contains("structure") || !j["structure"].is_object())
    throw DocumentError("missing object field \"structure\"");
  for (const auto& [key, val] : j["structure"].items()) {
    const auto idx = detail::split_key(key, 3, n);
    if (!idx) throw DocumentError("malformed structure key \"" + key + "\"");
    if ((*idx)[0] > (*idx)[1])
      throw DocumentError("structure key \"" + key + "\": indices must satisfy i<=j");
    if (!val.is_string()) throw DocumentError("structure entry \"" + key + "\" must be a string");
    d.structure[key] = val.get<std::string>();
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t jj = i; jj < n; ++jj)
      for (size_t k = 0; k < n; ++k) {
        const std::string key = detail::ijk_key(i, jj, k);
        if (!d.structure.count(key)) throw DocumentError("missing structure entry \"" + key + "\"");
      }

  if (j.contains("euler")) {
    const auto& je = j["euler"];
    if (!je.is_object() || !je.contains("components") || !je["components"].is_array() ||
        !je.contains("weight") || !je["weight"].is_string())
      throw DocumentError("euler must be an object with \"components\" and string \"weight\"");
    EulerDocument ed;
    for (const auto& c : je["components"]) {
      if (!c.is_string()) throw DocumentError("euler components must be strings");
      ed.components.push_back(c.get<std::string>());
    }
    if (ed.components.size() != n)
      throw DocumentError("euler field needs " + std::to_string(n) + " components");
    ed.weight = je["weight"].get<std::string>();
    d.euler = std::move(ed);
  }

  if (j.contains("metric")) {
    if (!j["metric"].is_object()) throw DocumentError("metric must be an object");
    std::map<std::string, std::string> entries;
    for (const auto& [key, val] : j["metric"].items()) {
      const auto idx = detail::split_key(key, 2, n);
      if (!idx) throw DocumentError("malformed metric key \"" + key + "\"");
      if ((*idx)[0] > (*idx)[1])
        throw DocumentError("metric key \"" + key + "\": indices must satisfy i<=j");
      if (!val.is_string()) throw DocumentError("metric entry \"" + key + "\" must be a string");
      entries[key] = val.get<std::string>();
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t jj = i; jj < n; ++jj)
        if (!entries.count(detail::ij_key(i, jj)))
          throw DocumentError("missing metric entry \"" + detail::ij_key(i, jj) + "\"");
    d.metric = std::move(entries);
  }
  return d;
}

inline RealizedChart realize(const ChartDocument& d) {
  RealizedChart r;
  Chart& c = r.chart;
  c.dim = d.dimension;
  c.coords = d.coordinates;
  c.unit_index = d.unit - 1;
  c.a.assign(c.dim, std::vector<std::vector<Poly<Rat>>>(
                        c.dim, std::vector<Poly<Rat>>(c.dim, poly_zero<Rat>(c.coords))));
  for (size_t i = 0; i < c.dim; ++i)
    for (size_t j = i; j < c.dim; ++j)
      for (size_t k = 0; k < c.dim; ++k) {
        const std::string key = detail::ijk_key(i, j, k);
        try {
          c.a[i][j][k] = parse_poly(d.structure.at(key), c.coords);
        } catch (const std::exception& e) {
          throw DocumentError("structure entry \"" + key + "\": " + e.what());
        }
        c.a[j][i][k] = c.a[i][j][k];
      }
  if (d.euler) {
    EulerCandidate e;
    for (size_t i = 0; i < c.dim; ++i) {
      try {
        e.field.components.push_back(parse_poly(d.euler->components[i], c.coords));
      } catch (const std::exception& ex) {
        throw DocumentError("euler component " + std::to_string(i + 1) + ": " + ex.what());
      }
    }
    try {
      e.weight = rat_parse(d.euler->weight);
    } catch (const std::exception& ex) {
      throw DocumentError(std::string("euler weight: ") + ex.what());
    }
    r.euler = std::move(e);
  }
  if (d.metric) {
    MetricField m = make_metric(c.coords);
    for (size_t i = 0; i < c.dim; ++i)
      for (size_t j = i; j < c.dim; ++j) {
        const std::string key = detail::ij_key(i, j);
        try {
          set_metric(m, i, j, parse_poly(d.metric->at(key), c.coords));
        } catch (const std::exception& e) {
          throw DocumentError("metric entry \"" + key + "\": " + e.what());
        }
      }
    r.metric = std::move(m);
  }
  return r;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads, realizes, and validates a chart document; a unit or commutativity
// axiom violation is reported through the error message with its witness.
inline RealizedChart parse_chart(const std::string& path) {
  RealizedChart r = realize(parse_document(read_file(path)));
  const ChartReport rep = validate(r.chart);
  if (!rep.pass) {
    std::string msg = "chart fails validation";
    if (!rep.violations.empty())
      msg += ": " + rep.violations.front().identity + " with residual " +
             to_string(rep.violations.front().residual);
    throw DocumentError(msg);
  }
  return r;
}

}  // namespace fmf
