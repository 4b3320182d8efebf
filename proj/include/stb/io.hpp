// Copyright 2026 The stb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scene files, bundle labels and report serialization. Reports use
// nlohmann::ordered_json so that key order and bytes are stable.

#pragma once

#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "stb/koszul.hpp"
#include "stb/scenes.hpp"
#include "stb/steiner.hpp"
#include "stb/torelli.hpp"

namespace stb::io {

using Json = nlohmann::ordered_json;

/// Malformed scene file or report.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Scalars

inline Json rational_to_json(const Rational& q) {
  if (denominator(q) == 1 && numerator(q) >= std::numeric_limits<std::int64_t>::min() &&
      numerator(q) <= std::numeric_limits<std::int64_t>::max())
    return numerator(q).convert_to<std::int64_t>();
  return to_string(q);
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception&) {
      throw SchemaError("bad rational '" + j.get<std::string>() + "'");
    }
  }
  throw SchemaError("coefficient must be an integer or a \"num/den\" string, got " + j.dump());
}

inline std::vector<Rational> rationals_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of coefficients, got " + j.dump());
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_from_json(x));
  return out;
}

inline Json rationals_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(rational_to_json(q));
  return out;
}

template <class Vector>
Json ints_to_json(const Vector& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// Scene files

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw SchemaError(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline Exponent exponent_from_json(const Json& j) {
  if (!j.is_array()) throw SchemaError("exponent must be an array of integers");
  Exponent e;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<int>() < 0) throw SchemaError("exponent entries must be nonnegative integers");
    e.push_back(x.get<int>());
  }
  return e;
}

/// A form given either densely ("coefficients" on the lex-descending monomial
/// basis) or sparsely ("terms": [{"exponent": [...], "coefficient": c}]).
inline std::vector<Rational> form_coefficients(const Json& j, std::size_t num_vars, int degree) {
  MonomialBasis basis(num_vars, degree);
  if (j.contains("coefficients")) {
    auto c = rationals_from_json(j.at("coefficients"));
    if (c.size() != basis.size())
      throw SchemaError("expected " + std::to_string(basis.size()) + " coefficients, got " + std::to_string(c.size()));
    return c;
  }
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) throw SchemaError("'terms' must be an array");
  std::vector<Rational> c(basis.size());
  for (const auto& t : terms) {
    Exponent e = exponent_from_json(field(t, "exponent"));
    auto idx = e.size() == num_vars ? basis.index_of(e) : MonomialBasis::npos;
    if (idx == MonomialBasis::npos) throw SchemaError("term exponent " + t.at("exponent").dump() + " does not fit the form");
    c[idx] += rational_from_json(field(t, "coefficient"));
  }
  return c;
}

}  // namespace detail

/// Parses the data part of a scene file. Validation beyond the schema is
/// left to build_scene.
inline SceneData scene_data_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("scene must be a JSON object");
  const Json& kind = detail::field(j, "kind");
  if (!kind.is_string()) throw SchemaError("'kind' must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "p1_series") {
    P1Series p;
    p.a = detail::int_field(j, "a");
    if (j.contains("basis")) {
      if (!j.at("basis").is_array()) throw SchemaError("'basis' must be an array of forms");
      for (const auto& v : j.at("basis")) p.basis.push_back(rationals_from_json(v));
    }
    return p;
  }
  if (k == "complete_intersection") {
    CompleteIntersection ci;
    ci.N = detail::int_field(j, "N");
    const Json& gens = detail::field(j, "generators");
    if (!gens.is_array()) throw SchemaError("'generators' must be an array");
    for (const auto& g : gens) {
      DenseForm form;
      form.degree = detail::int_field(g, "degree");
      if (form.degree < 0 || ci.N < 0) throw SchemaError("negative degree or N");
      form.coefficients = detail::form_coefficients(g, static_cast<std::size_t>(ci.N + 1), form.degree);
      ci.generators.push_back(std::move(form));
    }
    return ci;
  }
  if (k == "monomial_variety") {
    MonomialVariety mv;
    mv.source_vars = detail::int_field(j, "source_vars");
    mv.a = detail::int_field(j, "a");
    const Json& mons = detail::field(j, "monomials");
    if (!mons.is_array()) throw SchemaError("'monomials' must be an array");
    for (const auto& m : mons) mv.monomials.push_back(detail::exponent_from_json(m));
    return mv;
  }
  if (k == "scroll_curve") {
    ScrollCurve sc;
    sc.a = detail::int_field(j, "a");
    sc.b = detail::int_field(j, "b");
    sc.d = detail::int_field(j, "d");
    sc.e = detail::int_field(j, "e");
    if (j.contains("section")) {
      if (!j.at("section").is_array()) throw SchemaError("'section' must be an array of blocks");
      for (const auto& block : j.at("section")) sc.section.push_back(rationals_from_json(block));
    } else {
      if (sc.d < 0) throw SchemaError("negative d");
      const Json& terms = detail::field(j, "terms");
      if (!terms.is_array()) throw SchemaError("'terms' must be an array");
      sc.section.resize(static_cast<std::size_t>(sc.d + 1));
      for (int i = 0; i <= sc.d; ++i) {
        int c = stb::detail::scroll_block_degree(sc.a, sc.b, sc.d, sc.e, i);
        sc.section[i].assign(c < 0 ? 0 : static_cast<std::size_t>(c + 1), Rational(0));
      }
      for (const auto& t : terms) {
        Exponent e = detail::exponent_from_json(detail::field(t, "exponent"));  // s, t, u, v
        if (e.size() != 4 || e[2] + e[3] != sc.d)
          throw SchemaError("scroll term exponent must be [s,t,u,v] with u+v = d");
        int c = stb::detail::scroll_block_degree(sc.a, sc.b, sc.d, sc.e, e[2]);
        MonomialBasis bin(2, std::max(c, 0));
        auto idx = c >= 0 ? bin.index_of({e[0], e[1]}) : MonomialBasis::npos;
        if (idx == MonomialBasis::npos) throw SchemaError("scroll term " + t.at("exponent").dump() + " has the wrong degree");
        sc.section[e[2]][idx] += rational_from_json(detail::field(t, "coefficient"));
      }
    }
    return sc;
  }
  if (k == "point_set") {
    PointSet ps;
    ps.r = detail::int_field(j, "r");
    const Json& pts = detail::field(j, "points");
    if (!pts.is_array()) throw SchemaError("'points' must be an array");
    for (const auto& p : pts) ps.points.push_back(rationals_from_json(p));
    return ps;
  }
  throw SchemaError("unknown scene kind '" + k + "'");
}

/// Parses and validates a scene. Schema problems raise SchemaError, geometric
/// ones raise stb::Error.
inline Scene scene_from_json(const Json& j, std::string fallback_id = {}) {
  std::string id = std::move(fallback_id);
  if (j.is_object() && j.contains("id")) {
    if (!j.at("id").is_string()) throw SchemaError("'id' must be a string");
    id = j.at("id").get<std::string>();
  }
  return build_scene(scene_data_from_json(j), std::move(id));
}

inline Scene scene_from_string(const std::string& text, std::string fallback_id = {}) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return scene_from_json(j, std::move(fallback_id));
}

inline Json scene_to_json(const Scene& s) {
  Json j;
  j["id"] = s.id;
  j["kind"] = std::string(kind_name(s.kind()));
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, P1Series>) {
          j["a"] = d.a;
          if (!d.basis.empty()) {
            j["basis"] = Json::array();
            for (const auto& v : d.basis) j["basis"].push_back(rationals_to_json(v));
          }
        } else if constexpr (std::is_same_v<T, CompleteIntersection>) {
          j["N"] = d.N;
          j["generators"] = Json::array();
          for (const auto& g : d.generators)
            j["generators"].push_back(Json{{"degree", g.degree}, {"coefficients", rationals_to_json(g.coefficients)}});
        } else if constexpr (std::is_same_v<T, MonomialVariety>) {
          j["source_vars"] = d.source_vars;
          j["a"] = d.a;
          j["monomials"] = Json::array();
          for (const auto& m : d.monomials) j["monomials"].push_back(ints_to_json(m));
        } else if constexpr (std::is_same_v<T, ScrollCurve>) {
          j["a"] = d.a;
          j["b"] = d.b;
          j["d"] = d.d;
          j["e"] = d.e;
          j["section"] = Json::array();
          for (const auto& v : d.section) j["section"].push_back(rationals_to_json(v));
        } else {
          j["r"] = d.r;
          j["points"] = Json::array();
          for (const auto& v : d.points) j["points"].push_back(rationals_to_json(v));
        }
      },
      s.data);
  return j;
}

// ---------------------------------------------------------------------------
// Labels

/// "5", "O(5)", "O", "(1,1)", "O(1,1)", and symbolic "K", "k+2A", "K-1A",
/// "K+A" resolved against the scene's canonical label and polarization.
inline Label parse_label(const std::string& text, const Scene& s) {
  static const std::regex integer(R"(\s*(-?\d+)\s*)");
  static const std::regex twist(R"(\s*O\s*(?:\(\s*(-?\d+)\s*\))?\s*)");
  static const std::regex pair(R"(\s*O?\s*\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*)");
  static const std::regex symbolic(R"(\s*[kK]\s*(?:([+-])\s*(\d*)\s*\*?\s*A)?\s*)");
  std::smatch m;
  if (std::regex_match(text, m, integer)) return {std::stoi(m[1]), 0};
  if (std::regex_match(text, m, pair)) return {std::stoi(m[1]), std::stoi(m[2])};
  if (std::regex_match(text, m, twist)) return {m[1].matched ? std::stoi(m[1]) : 0, 0};
  if (std::regex_match(text, m, symbolic)) {
    Label l = canonical_label(s);
    if (m[1].matched) {
      int c = m[2].length() == 0 ? 1 : std::stoi(m[2]);
      if (m[1] == "-") c = -c;
      l = l + c * polarization(s);
    }
    return l;
  }
  throw SchemaError("cannot parse bundle label '" + text + "'");
}

inline std::string label_to_string(const Scene& s, Label l) {
  if (s.kind() == SceneKind::ScrollCurve) return "(" + std::to_string(l.h) + "," + std::to_string(l.f) + ")";
  return "O(" + std::to_string(l.h) + ")";
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const VallesReport<PrimeField>& r) {
  Json j;
  j["prime"] = r.prime;
  j["scanned"] = r.scanned;
  j["unstable"] = Json::array();
  for (const auto& e : r.unstable) j["unstable"].push_back(Json{{"lambda", ints_to_json(e.lambda)}, {"coker", e.coker}});
  return j;
}

inline VallesReport<PrimeField> valles_report_from_json(const Json& j) {
  try {
    VallesReport<PrimeField> r;
    r.prime = j.at("prime").get<std::uint32_t>();
    r.scanned = j.at("scanned").get<std::uint64_t>();
    for (const auto& e : j.at("unstable"))
      r.unstable.push_back({e.at("lambda").get<Vec<PrimeField>>(), e.at("coker").get<std::size_t>()});
    return r;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("bad Valles report: ") + e.what());
  }
}

inline Json to_json(const KoszulGroupDim& k) {
  return Json{{"p", k.p}, {"q", k.q}, {"dim", k.dim}, {"middle", k.middle}, {"rank_in", k.rank_in}, {"rank_out", k.rank_out}};
}

inline Json points_to_json(const std::vector<Vec<PrimeField>>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(ints_to_json(p));
  return out;
}

inline Json to_json(const RecoveryTable& t) {
  Json j;
  j["prime"] = t.prime;
  j["all_match"] = t.all_match();
  j["rows"] = Json::array();
  for (const auto& r : t.rows)
    j["rows"].push_back(Json{{"params", ints_to_json(r.params)},
                             {"lambda", ints_to_json(r.lambda)},
                             {"recovered", ints_to_json(r.recovered)},
                             {"expected", ints_to_json(r.expected)},
                             {"match", r.match}});
  return j;
}

inline Json to_json(const TorelliReport& r, const Scene& s) {
  Json j;
  j["scene"] = r.scene_id;
  j["kind"] = std::string(kind_name(s.kind()));
  j["B"] = label_to_string(s, r.b_label);
  j["a"] = r.a;
  j["m"] = r.m;
  j["b"] = r.b;
  if (r.vanishing) j["vanishing"] = *r.vanishing;
  else j["vanishing"] = nullptr;
  if (r.h1_vanishes) j["h1_vanishes"] = *r.h1_vanishes;
  else j["h1_vanishes"] = nullptr;
  j["primes"] = ints_to_json(r.primes);
  j["consensus"] = r.consensus;
  j["bad_primes"] = ints_to_json(r.bad_primes);
  j["outcomes"] = Json::array();
  for (const auto& o : r.outcomes) {
    Json x;
    x["prime"] = o.prime;
    x["verdict"] = std::string(verdict_name(o.verdict));
    x["scanned"] = o.scanned;
    x["image_points"] = o.image_points;
    x["unstable_points"] = o.unstable_points;
    x["singular_points"] = o.singular_points;
    x["extra"] = points_to_json(o.extra);
    x["missing"] = points_to_json(o.missing);
    if (o.invalid_witness)
      x["invalid_witness"] = Json{{"u1", ints_to_json(o.invalid_witness->first)}, {"v", ints_to_json(o.invalid_witness->second)}};
    if (o.recovery) x["recovery"] = to_json(*o.recovery);
    if (!o.recovery_error.empty()) x["recovery_error"] = o.recovery_error;
    j["outcomes"].push_back(std::move(x));
  }
  return j;
}

inline Json to_json(const DkReport& r) {
  Json j;
  j["scene"] = r.scene_id;
  j["a"] = r.a;
  j["m"] = r.m;
  j["b"] = r.b;
  if (r.seed) j["seed"] = *r.seed;
  j["consensus"] = r.consensus;
  j["bad_primes"] = ints_to_json(r.bad_primes);
  j["outcomes"] = Json::array();
  for (const auto& o : r.outcomes) {
    Json x;
    x["prime"] = o.prime;
    x["verdict"] = std::string(verdict_name(o.verdict));
    x["degenerate"] = o.degenerate;
    x["contained"] = o.contained;
    x["k_dim"] = o.k_dim;
    x["rnc_flag"] = o.rnc_flag;
    x["implication_ok"] = o.implication_ok;
    x["extra"] = points_to_json(o.extra);
    x["valles"] = to_json(o.valles);
    j["outcomes"].push_back(std::move(x));
  }
  return j;
}

inline Json error_json(std::string_view name, std::string_view message) {
  return Json{{"error", std::string(name)}, {"message", std::string(message)}};
}

// ---------------------------------------------------------------------------
// Text tables

/// Left-aligned columns padded to the widest cell.
inline std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    std::string text;
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      std::string cell = row[c];
      if (c + 1 < row.size()) cell.resize(width[c] + 2, ' ');
      text += cell;
    }
    out << text << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& r : rows) line(r);
  return out.str();
}

}  // namespace stb::io
