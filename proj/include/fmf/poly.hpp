#pragma once

// Exact sparse multivariate polynomials over a coefficient field (rationals or
// Gaussian rationals), with graded-lexicographic term order, a plain-text
// grammar with bit-exact round-trip, formal derivatives, substitution, and
// complex evaluation.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "fmf/rational.hpp"

namespace fmf {

using Mono = std::vector<unsigned>;

inline unsigned mono_degree(const Mono& m) {
  unsigned d = 0;
  for (unsigned e : m) d += e;
  return d;
}

// Graded lexicographic: total degree first, ties broken left-to-right with a
// larger exponent counting as a larger monomial.
struct GrlexLess {
  bool operator()(const Mono& a, const Mono& b) const {
    unsigned da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da < db;
    for (size_t i = 0; i < a.size() && i < b.size(); ++i)
      if (a[i] != b[i]) return a[i] < b[i];
    return a.size() < b.size();
  }
};

template <class K>
struct Poly {
  std::vector<std::string> vars;            // ordered ambient variable list
  std::map<Mono, K, GrlexLess> terms;       // invariant: no zero coefficients

  bool is_zero() const { return terms.empty(); }

  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 && mono_degree(terms.begin()->first) == 0);
  }

  K constant_value() const {
    if (terms.empty()) return K();
    auto it = terms.find(Mono(vars.size(), 0));
    return it == terms.end() ? K() : it->second;
  }

  unsigned total_degree() const {  // degree of the zero polynomial reported as 0
    unsigned d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, mono_degree(m));
    return d;
  }
};

// The coefficient parameter is non-deduced so that implicit conversions
// (notably GMP expression templates) collapse to K at the call site.
template <class K>
void poly_add_term(Poly<K>& p, const Mono& m, const std::type_identity_t<K>& c) {
  if (c == K()) return;
  auto [it, inserted] = p.terms.emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second == K()) p.terms.erase(it);
  }
}

template <class K>
Poly<K> poly_zero(std::vector<std::string> vars) {
  Poly<K> p;
  p.vars = std::move(vars);
  return p;
}

template <class K>
Poly<K> poly_const(std::vector<std::string> vars, const K& c) {
  Poly<K> p;
  p.vars = std::move(vars);
  poly_add_term(p, Mono(p.vars.size(), 0), c);
  return p;
}

inline size_t var_index(const std::vector<std::string>& vars, const std::string& name) {
  auto it = std::find(vars.begin(), vars.end(), name);
  if (it == vars.end()) throw std::invalid_argument("unknown variable '" + name + "'");
  return static_cast<size_t>(it - vars.begin());
}

template <class K>
Poly<K> poly_var(std::vector<std::string> vars, const std::string& name, unsigned exp = 1) {
  Poly<K> p;
  p.vars = std::move(vars);
  Mono m(p.vars.size(), 0);
  m[var_index(p.vars, name)] = exp;
  poly_add_term(p, m, K(1));
  return p;
}

// Re-expresses p over a smaller variable list; every variable that actually
// occurs in p must be present in vars.
template <class K>
Poly<K> poly_restrict(const Poly<K>& p, const std::vector<std::string>& vars) {
  if (p.vars == vars) return p;
  std::vector<long> pos(p.vars.size(), -1);
  for (size_t i = 0; i < p.vars.size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), p.vars[i]);
    if (it != vars.end()) pos[i] = it - vars.begin();
  }
  Poly<K> q;
  q.vars = vars;
  for (const auto& [m, c] : p.terms) {
    Mono mm(vars.size(), 0);
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) {
        if (pos[i] < 0)
          throw std::invalid_argument("poly_restrict: active variable '" + p.vars[i] +
                                      "' missing from target list");
        mm[static_cast<size_t>(pos[i])] = m[i];
      }
    poly_add_term(q, mm, c);
  }
  return q;
}

// Re-expresses p over a superset variable list (by name).
template <class K>
Poly<K> poly_extend(const Poly<K>& p, const std::vector<std::string>& vars) {
  if (p.vars == vars) return p;
  std::vector<size_t> pos(p.vars.size());
  for (size_t i = 0; i < p.vars.size(); ++i) pos[i] = var_index(vars, p.vars[i]);
  Poly<K> q;
  q.vars = vars;
  for (const auto& [m, c] : p.terms) {
    Mono mm(vars.size(), 0);
    for (size_t i = 0; i < m.size(); ++i) mm[pos[i]] = m[i];
    poly_add_term(q, mm, c);
  }
  return q;
}

inline std::vector<std::string> var_union(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
  std::vector<std::string> u = a;
  for (const auto& v : b)
    if (std::find(u.begin(), u.end(), v) == u.end()) u.push_back(v);
  return u;
}

template <class K>
std::pair<Poly<K>, Poly<K>> poly_align(const Poly<K>& a, const Poly<K>& b) {
  if (a.vars == b.vars) return {a, b};
  auto u = var_union(a.vars, b.vars);
  return {poly_extend(a, u), poly_extend(b, u)};
}

template <class K>
Poly<K> operator+(const Poly<K>& a, const Poly<K>& b) {
  auto [x, y] = poly_align(a, b);
  for (const auto& [m, c] : y.terms) poly_add_term(x, m, c);
  return x;
}

template <class K>
Poly<K> operator-(const Poly<K>& a) {
  Poly<K> r = a;
  for (auto& [m, c] : r.terms) c = -c;
  return r;
}

template <class K>
Poly<K> operator-(const Poly<K>& a, const Poly<K>& b) {
  return a + (-b);
}

template <class K>
Poly<K> operator*(const Poly<K>& a, const Poly<K>& b) {
  auto [x, y] = poly_align(a, b);
  Poly<K> r = poly_zero<K>(x.vars);
  for (const auto& [ma, ca] : x.terms)
    for (const auto& [mb, cb] : y.terms) {
      Mono m(ma.size());
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      poly_add_term(r, m, ca * cb);
    }
  return r;
}

template <class K>
Poly<K> operator*(const std::type_identity_t<K>& c, const Poly<K>& a) {
  Poly<K> r = poly_zero<K>(a.vars);
  if (c == K()) return r;
  for (const auto& [m, k] : a.terms) poly_add_term(r, m, c * k);
  return r;
}

template <class K>
bool operator==(const Poly<K>& a, const Poly<K>& b) {
  auto [x, y] = poly_align(a, b);
  return x.terms == y.terms;
}

template <class K>
bool operator!=(const Poly<K>& a, const Poly<K>& b) {
  return !(a == b);
}

template <class K>
Poly<K> poly_pow(const Poly<K>& a, unsigned e) {
  Poly<K> r = poly_const<K>(a.vars, K(1));
  Poly<K> base = a;
  while (e > 0) {
    if (e & 1u) r = r * base;
    e >>= 1u;
    if (e) base = base * base;
  }
  return r;
}

template <class K>
unsigned degree_in(const Poly<K>& p, const std::string& var) {
  size_t i = var_index(p.vars, var);
  unsigned d = 0;
  for (const auto& [m, c] : p.terms) d = std::max(d, m[i]);
  return d;
}

template <class K>
Poly<K> partial_derivative(const Poly<K>& p, const std::string& var) {
  size_t i = var_index(p.vars, var);
  Poly<K> r = poly_zero<K>(p.vars);
  for (const auto& [m, c] : p.terms) {
    if (m[i] == 0) continue;
    Mono mm = m;
    mm[i] -= 1;
    poly_add_term(r, mm, c * K(static_cast<long>(m[i])));
  }
  return r;
}

// --- evaluation ---------------------------------------------------------

namespace detail {
inline Cplx pow_cached(std::vector<Cplx>& table, const Cplx& base, unsigned e) {
  while (table.size() <= e) table.push_back(table.back() * base);
  return table[e];
}
}  // namespace detail

template <class K>
Cplx eval(const Poly<K>& p, const std::vector<Cplx>& point) {
  if (point.size() != p.vars.size())
    throw std::invalid_argument("evaluation point dimension mismatch");
  std::vector<std::vector<Cplx>> pows(p.vars.size(), std::vector<Cplx>{Cplx(1.0, 0.0)});
  Cplx acc(0.0, 0.0);
  for (const auto& [m, c] : p.terms) {
    Cplx t = to_complex(c);
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) t *= detail::pow_cached(pows[i], point[i], m[i]);
    acc += t;
  }
  return acc;
}

// Exact evaluation at a point with coordinates in the coefficient field.
template <class K>
K eval_exact(const Poly<K>& p, const std::vector<K>& point) {
  if (point.size() != p.vars.size())
    throw std::invalid_argument("evaluation point dimension mismatch");
  K acc = K();
  for (const auto& [m, c] : p.terms) {
    K t = c;
    for (size_t i = 0; i < m.size(); ++i)
      for (unsigned e = 0; e < m[i]; ++e) t = t * point[i];
    acc = acc + t;
  }
  return acc;
}

// Substitutes images[i] for the i-th variable of p; all images must share one
// ambient variable list, which becomes the result's list.
template <class K>
Poly<K> compose(const Poly<K>& p, const std::vector<Poly<K>>& images) {
  if (images.size() != p.vars.size())
    throw std::invalid_argument("compose: one image per variable required");
  for (const auto& im : images)
    if (im.vars != images[0].vars)
      throw std::invalid_argument("compose: images must share a variable list");
  Poly<K> acc = poly_zero<K>(images.empty() ? std::vector<std::string>{} : images[0].vars);
  std::vector<std::vector<Poly<K>>> pows(images.size());
  auto image_pow = [&](size_t i, unsigned e) {
    auto& table = pows[i];
    if (table.empty()) table.push_back(poly_const<K>(images[i].vars, K(1)));
    while (table.size() <= e) table.push_back(table.back() * images[i]);
    return table[e];
  };
  for (const auto& [m, c] : p.terms) {
    Poly<K> t = poly_const<K>(acc.vars, c);
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) t = t * image_pow(i, m[i]);
    acc = acc + t;
  }
  return acc;
}

// Substitution of a single variable, keeping the ambient list of p.
template <class K>
Poly<K> substitute(const Poly<K>& p, const std::string& var, const Poly<K>& image) {
  std::vector<Poly<K>> images;
  auto target = var_union(p.vars, image.vars);
  images.reserve(p.vars.size());
  for (const auto& v : p.vars) {
    if (v == var)
      images.push_back(poly_extend(image, target));
    else
      images.push_back(poly_var<K>(target, v));
  }
  return compose(p, images);
}

// --- univariate views ----------------------------------------------------

// Coefficients of p seen as univariate in `var`, descending powers; entries are
// polynomials in the remaining variables (same ambient list for simplicity).
template <class K>
std::vector<Poly<K>> coeffs_descending(const Poly<K>& p, const std::string& var) {
  size_t i = var_index(p.vars, var);
  unsigned d = degree_in(p, var);
  std::vector<Poly<K>> cs(d + 1, poly_zero<K>(p.vars));
  for (const auto& [m, c] : p.terms) {
    Mono mm = m;
    unsigned e = mm[i];
    mm[i] = 0;
    poly_add_term(cs[d - e], mm, c);
  }
  return cs;
}

template <class K>
Poly<K> from_coeffs_descending(const std::vector<Poly<K>>& cs, const std::string& var,
                               const std::vector<std::string>& vars) {
  Poly<K> r = poly_zero<K>(vars);
  unsigned d = static_cast<unsigned>(cs.size() - 1);
  for (size_t j = 0; j < cs.size(); ++j)
    r = r + poly_extend(cs[j], vars) * poly_var<K>(vars, var, d - static_cast<unsigned>(j));
  return r;
}

// Leading coefficient with respect to one variable.
template <class K>
Poly<K> leading_coeff_in(const Poly<K>& p, const std::string& var) {
  auto cs = coeffs_descending(p, var);
  return cs.empty() ? poly_zero<K>(p.vars) : cs.front();
}

// --- exact division ------------------------------------------------------

// Quotient a/b when the division is exact over the coefficient field;
// nullopt when b does not divide a. Runs on the graded-lex leading terms.
template <class K>
std::optional<Poly<K>> divide_exact(const Poly<K>& a, const Poly<K>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  auto [r, d] = poly_align(a, b);
  Poly<K> q = poly_zero<K>(r.vars);
  const auto& dlt = *d.terms.rbegin();  // leading term of divisor
  while (!r.is_zero()) {
    const auto& rlt = *r.terms.rbegin();
    Mono qm(rlt.first.size());
    for (size_t i = 0; i < qm.size(); ++i) {
      if (rlt.first[i] < dlt.first[i]) return std::nullopt;
      qm[i] = rlt.first[i] - dlt.first[i];
    }
    K qc = rlt.second / dlt.second;
    Poly<K> qt = poly_zero<K>(r.vars);
    poly_add_term(qt, qm, qc);
    q = q + qt;
    r = r - qt * d;
  }
  return q;
}

template <class K>
bool divides(const Poly<K>& b, const Poly<K>& a) {
  return divide_exact(a, b).has_value();
}

// --- printing ------------------------------------------------------------

template <class K>
std::string to_string(const Poly<K>& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = p.terms.rbegin(); it != p.terms.rend(); ++it) {
    const Mono& m = it->first;
    K c = it->second;
    bool neg = is_negative(c);
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    std::string cs = to_string(c);
    bool constant_term = mono_degree(m) == 0;
    bool unit_coeff = (c == K(1));
    bool printed_coeff = false;
    if (constant_term || !unit_coeff) {
      out += cs;
      printed_coeff = true;
    }
    for (size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (printed_coeff) out += " * ";
      printed_coeff = true;
      out += p.vars[i];
      if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
  }
  return out;
}

// --- parsing -------------------------------------------------------------

// Grammar: terms separated by '+'/'-'; a term is '*'-separated factors; a
// factor is a rational "p" or "p/q", or a declared variable with optional
// "^e". Whitespace is insignificant. Canonical printing round-trips exactly.
inline Poly<Rat> parse_poly(const std::string& text, const std::vector<std::string>& vars) {
  Poly<Rat> result = poly_zero<Rat>(vars);
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) -> void {
    throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos) +
                                " in '" + text + "': " + why);
  };
  skip_ws();
  if (pos == text.size()) fail("empty input");
  bool first_term = true;
  while (true) {
    skip_ws();
    int sign = 1;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -1;
      ++pos;
    } else if (!first_term) {
      fail("expected '+' or '-' between terms");
    }
    first_term = false;
    Rat coeff = rat(sign);
    Mono mono(vars.size(), 0);
    bool any_factor = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t start = pos;
        while (pos < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        std::string num = text.substr(start, pos - start);
        skip_ws();
        if (pos < text.size() && text[pos] == '/') {
          ++pos;
          skip_ws();
          size_t ds = pos;
          while (pos < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (ds == pos) fail("expected denominator digits after '/'");
          num += "/" + text.substr(ds, pos - ds);
        }
        coeff = coeff * rat_parse(num);
        any_factor = true;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
          ++pos;
        std::string name = text.substr(start, pos - start);
        size_t vi;
        try {
          vi = var_index(vars, name);
        } catch (const std::invalid_argument&) {
          fail("unknown variable '" + name + "'");
          return result;  // unreachable
        }
        unsigned exp = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip_ws();
          size_t es = pos;
          while (pos < text.size() &&
                 std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (es == pos) fail("expected exponent digits after '^'");
          exp = static_cast<unsigned>(std::stoul(text.substr(es, pos - es)));
        }
        mono[vi] += exp;
        any_factor = true;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any_factor) fail("empty term");
    poly_add_term(result, mono, coeff);
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '+' && text[pos] != '-') fail("trailing garbage");
  }
  return result;
}

template <class K>
Poly<K> poly_rename(const Poly<K>& p, const std::vector<std::string>& new_names) {
  if (new_names.size() != p.vars.size())
    throw std::invalid_argument("rename: variable count mismatch");
  Poly<K> q = p;
  q.vars = new_names;
  return q;
}

}  // namespace fmf
