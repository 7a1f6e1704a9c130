#pragma once

// JSON configuration files:
//   {"degree": 6, "vertices": 6, "edges": [[0, 3, 1], ...],
//    "kernel": [{"numerators": [...], "denominator": 2}],
//    "transcendental": {"definite2": [a, b, c]} | {"twoU": n}
//                    | {"discr": {"factors": [...], "qvalues": [...], "pairing": [[...]]}, "rank": r}}
// Rationals may be written as JSON integers or as strings like "-1/2".

#include "k3lines/fano.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace k3lines {

namespace detail {

using Json = nlohmann::json;

inline void allow_only(const Json& j, const std::set<std::string>& keys, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) throw InputError(where + ": unknown field \"" + it.key() + "\"");
}

inline const Json& required(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field \"" + key + "\"");
  return j.at(key);
}

inline Integer json_integer(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    if (denominator(q) != 1) throw InputError(where + ": expected an integer");
    return numerator(q);
  }
  throw InputError(where + ": expected an integer");
}

inline Rational json_rational(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError(where + ": expected a rational number");
}

inline const Json& json_array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  return j;
}

inline std::size_t json_count(const Json& j, const std::string& where) {
  Integer v = json_integer(j, where);
  if (v < 0 || v > 100000) throw InputError(where + ": out of range");
  return static_cast<std::size_t>(v);
}

inline TranscendentalSpec parse_transcendental(const Json& j) {
  const std::string where = "transcendental";
  if (!j.is_object() || j.empty()) throw InputError(where + ": expected a non-empty object");
  if (j.contains("definite2")) {
    allow_only(j, {"definite2"}, where);
    const Json& a = json_array(j.at("definite2"), where + ".definite2");
    if (a.size() != 3) throw InputError(where + ".definite2: expected [a, b, c]");
    return Definite2{json_integer(a[0], where), json_integer(a[1], where), json_integer(a[2], where)};
  }
  if (j.contains("twoU")) {
    allow_only(j, {"twoU"}, where);
    return TwoU{json_integer(j.at("twoU"), where + ".twoU")};
  }
  if (j.contains("discr")) {
    allow_only(j, {"discr", "rank"}, where);
    const Json& d = j.at("discr");
    allow_only(d, {"factors", "qvalues", "pairing"}, where + ".discr");
    const Json& f = json_array(required(d, "factors", where + ".discr"), where + ".discr.factors");
    const Json& q = json_array(required(d, "qvalues", where + ".discr"), where + ".discr.qvalues");
    const std::size_t k = f.size();
    if (q.size() != k) throw InputError(where + ".discr: qvalues and factors differ in length");
    std::vector<Integer> orders;
    std::vector<Rational> qs;
    for (std::size_t i = 0; i < k; ++i) {
      orders.push_back(json_integer(f[i], where + ".discr.factors"));
      qs.push_back(json_rational(q[i], where + ".discr.qvalues"));
    }
    RationalMatrix b(k, k);
    if (d.contains("pairing")) {
      const Json& p = json_array(d.at("pairing"), where + ".discr.pairing");
      if (p.size() != k) throw InputError(where + ".discr.pairing: expected a " + std::to_string(k) + "x" + std::to_string(k) + " matrix");
      for (std::size_t i = 0; i < k; ++i) {
        const Json& row = json_array(p[i], where + ".discr.pairing");
        if (row.size() != k) throw InputError(where + ".discr.pairing: ragged matrix");
        for (std::size_t c = 0; c < k; ++c) b(i, c) = json_rational(row[c], where + ".discr.pairing");
      }
    } else {
      for (std::size_t i = 0; i < k; ++i) b(i, i) = qs[i];
    }
    GenericDiscr g{FiniteQuadraticForm(orders, qs, b), json_count(required(j, "rank", where), where + ".rank")};
    return g;
  }
  throw InputError(where + ": expected one of definite2, twoU, discr");
}

}  // namespace detail

inline LineConfiguration parse_configuration(const nlohmann::json& j) {
  using detail::Json;
  detail::allow_only(j, {"degree", "vertices", "edges", "kernel", "transcendental"}, "configuration");
  LineConfiguration cfg;
  Integer degree = detail::json_integer(detail::required(j, "degree", "configuration"), "degree");
  if (degree < 2 || degree > 1000 || degree % 2 != 0) throw InputError("degree must be an even integer >= 2");
  cfg.degree = static_cast<std::int64_t>(degree);
  const std::size_t n = detail::json_count(detail::required(j, "vertices", "configuration"), "vertices");
  cfg.graph = Multigraph(n);
  if (j.contains("edges")) {
    for (const auto& e : detail::json_array(j.at("edges"), "edges")) {
      const Json& t = detail::json_array(e, "edge");
      if (t.size() != 3) throw InputError("edge: expected [i, j, multiplicity]");
      std::size_t v = detail::json_count(t[0], "edge"), w = detail::json_count(t[1], "edge");
      Integer m = detail::json_integer(t[2], "edge");
      if (v >= w) throw InputError("edge [" + std::to_string(v) + ", " + std::to_string(w) + "]: need i < j");
      if (w >= n) throw InputError("edge endpoint " + std::to_string(w) + " out of range");
      if (m < 1 || m > 3) throw InputError("edge multiplicity must lie in [1, 3]");
      if (cfg.graph.multiplicity(v, w)) throw InputError("duplicate edge");
      cfg.graph.set_multiplicity(v, w, static_cast<int>(m));
    }
  }
  if (j.contains("kernel")) {
    for (const auto& k : detail::json_array(j.at("kernel"), "kernel")) {
      detail::allow_only(k, {"numerators", "denominator"}, "kernel");
      std::vector<Integer> num;
      for (const auto& x : detail::json_array(detail::required(k, "numerators", "kernel"), "kernel.numerators"))
        num.push_back(detail::json_integer(x, "kernel.numerators"));
      Integer den = k.contains("denominator") ? detail::json_integer(k.at("denominator"), "kernel.denominator") : Integer(1);
      if (den < 1) throw InputError("kernel.denominator must be positive");
      cfg.kernel.emplace_back(num, den);
    }
  }
  if (j.contains("transcendental")) cfg.transcendental = detail::parse_transcendental(j.at("transcendental"));
  validate(cfg);
  return cfg;
}

inline LineConfiguration parse_configuration(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  return parse_configuration(j);
}

inline LineConfiguration load_configuration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_configuration(ss.str());
}

}  // namespace k3lines
