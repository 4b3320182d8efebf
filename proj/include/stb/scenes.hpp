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

// Polarized test varieties: P^1 with a linear series, complete
// intersections, monomial images of P^m, curves on smooth rational normal
// surface scrolls, and finite point sets.
//
// Every section space is modelled the same way: a list of ambient monomials
// in the scene's coordinate variables, modulo a span of relations. The basis
// of H^0 is a subset of those monomials (see QuotientPiece), so evaluating a
// section at a point is evaluating monomials at the point's coordinates.
//
//   P1Series              variables (s, t)           label k  -> O(k)
//   CompleteIntersection  variables (x_0 .. x_N)     label k  -> O_X(k)
//   MonomialVariety       variables (y_0 .. y_m)     label k  -> k-fold products
//   ScrollCurve           variables (s, t, u, v)     label (alpha, beta) -> alpha*H + beta*F
//
// On the scroll Y = P(O(a) + O(b)) the sections of alpha*H + beta*F are the
// sums of c_i(s, t) u^i v^(alpha - i), deg c_i = a*i + b*(alpha - i) + beta,
// listed block by block with i ascending.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stb/exactfield.hpp"
#include "stb/polyalg.hpp"

namespace stb {

/// Line bundle descriptor relative to a scene. One-parameter scenes use `h`
/// only (twist k, or the absolute degree on P^1); scroll curves use the pair
/// (h, f) for the restriction of h*H + f*F.
struct Label {
  int h = 0;
  int f = 0;

  bool operator==(const Label&) const = default;
  friend Label operator+(Label x, Label y) { return {x.h + y.h, x.f + y.f}; }
  friend Label operator-(Label x, Label y) { return {x.h - y.h, x.f - y.f}; }
  friend Label operator*(int c, Label x) { return {c * x.h, c * x.f}; }
  Label operator-() const { return {-h, -f}; }
};

struct DenseForm {
  int degree = 0;
  std::vector<Rational> coefficients;  // on monomial_basis(num_vars, degree)
};

struct P1Series {
  int a = 0;
  std::vector<std::vector<Rational>> basis;  // binary forms of degree a; empty means all of H^0(O(a))
};

struct CompleteIntersection {
  int N = 0;
  std::vector<DenseForm> generators;
};

struct MonomialVariety {
  int source_vars = 0;
  int a = 0;
  std::vector<Exponent> monomials;
};

struct ScrollCurve {
  int a = 0;
  int b = 0;
  int d = 0;
  int e = 0;
  std::vector<std::vector<Rational>> section;  // block i = 0..d, binary form of degree a*i + b*(d-i) + e
};

struct PointSet {
  int r = 0;
  std::vector<std::vector<Rational>> points;
};

using SceneData = std::variant<P1Series, CompleteIntersection, MonomialVariety, ScrollCurve, PointSet>;

enum class SceneKind { P1Series, CompleteIntersection, MonomialVariety, ScrollCurve, PointSet };

inline std::string_view kind_name(SceneKind k) {
  switch (k) {
    case SceneKind::P1Series: return "p1_series";
    case SceneKind::CompleteIntersection: return "complete_intersection";
    case SceneKind::MonomialVariety: return "monomial_variety";
    case SceneKind::ScrollCurve: return "scroll_curve";
    case SceneKind::PointSet: return "point_set";
  }
  return "unknown";
}

struct Scene {
  std::string id;
  SceneData data;

  SceneKind kind() const { return static_cast<SceneKind>(data.index()); }
  template <class T>
  const T& as() const {
    return std::get<T>(data);
  }
};

namespace detail {

inline int scroll_block_degree(int a, int b, int alpha, int beta, int i) { return a * i + b * (alpha - i) + beta; }

template <ExactField F>
Vec<F> convert(const F& f, const std::vector<Rational>& v) {
  Vec<F> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(f.from_rational(q));
  return out;
}

inline bool all_zero(const std::vector<Rational>& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

/// Curve section of a scroll scene as (exponent in s,t,u,v; coefficient) terms.
inline std::vector<std::pair<Exponent, Rational>> scroll_section_terms(const ScrollCurve& sc) {
  std::vector<std::pair<Exponent, Rational>> terms;
  for (int i = 0; i <= sc.d; ++i) {
    int c = scroll_block_degree(sc.a, sc.b, sc.d, sc.e, i);
    if (c < 0) continue;
    MonomialBasis bin(2, c);
    for (std::size_t k = 0; k < bin.size(); ++k) {
      if (sc.section[i][k] == 0) continue;
      terms.push_back({Exponent{bin[k][0], bin[k][1], i, sc.d - i}, sc.section[i][k]});
    }
  }
  return terms;
}

inline std::vector<Exponent> scroll_ambient(int a, int b, Label l) {
  std::vector<Exponent> out;
  if (l.h < 0) return out;
  for (int i = 0; i <= l.h; ++i) {
    int c = scroll_block_degree(a, b, l.h, l.f, i);
    if (c < 0) continue;
    MonomialBasis bin(2, c);
    for (const auto& m : bin.monomials()) out.push_back({m[0], m[1], i, l.h - i});
  }
  return out;
}

inline std::vector<Exponent> monomial_products(const MonomialVariety& mv, int k) {
  if (k < 0) return {};
  std::set<Exponent, std::greater<>> cur{Exponent(mv.source_vars, 0)};
  for (int step = 0; step < k; ++step) {
    std::set<Exponent, std::greater<>> next;
    for (const auto& p : cur)
      for (const auto& m : mv.monomials) next.insert(add_exponents(p, m));
    cur = std::move(next);
  }
  return {cur.begin(), cur.end()};
}

inline std::size_t rank_over_q(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty()) return 0;
  return rank(Matrix<RationalField>::from_rows(RationalField{}, rows));
}

}  // namespace detail

/// H^0 of a label, as a quotient of the span of `ambient` monomials.
template <ExactField F>
struct SectionSpace {
  Label label;
  std::vector<Exponent> ambient;
  std::map<Exponent, std::size_t> ambient_index;
  QuotientPiece<F> piece;

  std::size_t dim() const { return piece.dim(); }
  const Exponent& representative(std::size_t i) const { return ambient[piece.basis[i]]; }
};

template <ExactField F>
SectionSpace<F> make_section_space(const F& f, Label label, std::vector<Exponent> ambient,
                                   const std::vector<Vec<F>>& relations = {}) {
  SectionSpace<F> s{label, std::move(ambient), {}, quotient_by_relations(f, 0, {})};
  for (std::size_t i = 0; i < s.ambient.size(); ++i) s.ambient_index.emplace(s.ambient[i], i);
  s.piece = quotient_by_relations(f, s.ambient.size(), relations);
  return s;
}

// ---------------------------------------------------------------------------
// Scene-level numerical data

inline Label polarization(const Scene& s) {
  switch (s.kind()) {
    case SceneKind::P1Series: return {s.as<P1Series>().a, 0};
    case SceneKind::ScrollCurve: return {1, 0};
    default: return {1, 0};
  }
}

/// Dimension n of X.
inline int dimension(const Scene& s) {
  switch (s.kind()) {
    case SceneKind::P1Series: return 1;
    case SceneKind::CompleteIntersection: {
      const auto& ci = s.as<CompleteIntersection>();
      return ci.N - static_cast<int>(ci.generators.size());
    }
    case SceneKind::MonomialVariety: return s.as<MonomialVariety>().source_vars - 1;
    case SceneKind::ScrollCurve: return 1;
    case SceneKind::PointSet: return 0;
  }
  return 0;
}

inline std::size_t ambient_num_vars(const Scene& s) {
  switch (s.kind()) {
    case SceneKind::P1Series: return 2;
    case SceneKind::CompleteIntersection: return s.as<CompleteIntersection>().N + 1;
    case SceneKind::MonomialVariety: return s.as<MonomialVariety>().source_vars;
    case SceneKind::ScrollCurve: return 4;
    case SceneKind::PointSet: return s.as<PointSet>().r + 1;
  }
  return 0;
}

/// deg_A(X).
inline long long degree(const Scene& s) {
  switch (s.kind()) {
    case SceneKind::P1Series: return s.as<P1Series>().a;
    case SceneKind::CompleteIntersection: {
      long long d = 1;
      for (const auto& g : s.as<CompleteIntersection>().generators) d *= g.degree;
      return d;
    }
    case SceneKind::ScrollCurve: {
      const auto& sc = s.as<ScrollCurve>();
      return static_cast<long long>(sc.d) * (sc.a + sc.b) + sc.e;  // H^2 = a + b, H.F = 1
    }
    case SceneKind::PointSet: return static_cast<long long>(s.as<PointSet>().points.size());
    case SceneKind::MonomialVariety: break;
  }
  throw Error(ErrorCode::UnsupportedScene, "degree is not available for monomial varieties");
}

/// Label of the canonical bundle omega_X.
inline Label canonical_label(const Scene& s) {
  switch (s.kind()) {
    case SceneKind::P1Series: return {-2, 0};
    case SceneKind::CompleteIntersection: {
      const auto& ci = s.as<CompleteIntersection>();
      int sum = 0;
      for (const auto& g : ci.generators) sum += g.degree;
      return {sum - ci.N - 1, 0};
    }
    case SceneKind::ScrollCurve: {
      // K_Y = -2H + (q-2)F plus X = dH + eF, restricted to X
      const auto& sc = s.as<ScrollCurve>();
      return {sc.d - 2, sc.e + sc.a + sc.b - 2};
    }
    default: break;
  }
  throw Error(ErrorCode::UnsupportedScene, std::string(kind_name(s.kind())) + " has no canonical label");
}

// ---------------------------------------------------------------------------
// Scroll cohomology

/// h^i(Y, alpha*H + beta*F) on the smooth scroll Y = P(O(a) + O(b)).
inline std::size_t scroll_ambient_h(int a, int b, Label l, int i) {
  if (i < 0 || i > 2) return 0;
  if (l.h == -1) return 0;
  if (l.h <= -2) return scroll_ambient_h(a, b, Label{-2 - l.h, a + b - 2 - l.f}, 2 - i);
  if (i == 2) return 0;
  std::size_t sum = 0;
  for (int k = 0; k <= l.h; ++k) {
    int c = detail::scroll_block_degree(a, b, l.h, l.f, k);
    sum += static_cast<std::size_t>(i == 0 ? std::max(0, c + 1) : std::max(0, -c - 1));
  }
  return sum;
}

inline std::size_t scroll_ambient_cohomology_dim(const Scene& s, Label l, int i) {
  if (s.kind() != SceneKind::ScrollCurve) throw Error(ErrorCode::UnsupportedScene, "not a scroll scene");
  const auto& sc = s.as<ScrollCurve>();
  return scroll_ambient_h(sc.a, sc.b, l, i);
}

namespace detail {

/// Multiplication by the curve section H^0(Y, M) -> H^0(Y, M + X) on ambient
/// monomial coordinates.
template <ExactField F>
Matrix<F> scroll_h0_section_map(const F& f, const ScrollCurve& sc, Label m) {
  Label target = m + Label{sc.d, sc.e};
  auto src = scroll_ambient(sc.a, sc.b, m);
  auto dst = scroll_ambient(sc.a, sc.b, target);
  std::map<Exponent, std::size_t> idx;
  for (std::size_t i = 0; i < dst.size(); ++i) idx.emplace(dst[i], i);
  Matrix<F> out(f, dst.size(), src.size());
  for (const auto& [e, c] : scroll_section_terms(sc)) {
    auto cf = f.from_rational(c);
    for (std::size_t j = 0; j < src.size(); ++j) {
      std::size_t i = idx.at(add_exponents(src[j], e));
      out(i, j) = f.add(out(i, j), cf);
    }
  }
  return out;
}

/// Multiplication by the curve section on Cech H^1 when both alpha >= 0. The
/// class s^-x t^-y in block k of H^1(P^1, O(c_k)) is indexed by (k, x).
template <ExactField F>
Matrix<F> scroll_h1_section_map(const F& f, const ScrollCurve& sc, Label m) {
  Label target = m + Label{sc.d, sc.e};
  auto basis = [&](Label l) {
    std::vector<std::pair<int, int>> out;  // (block, x) with x, y >= 1, x + y = -c
    for (int k = 0; k <= l.h; ++k) {
      int c = scroll_block_degree(sc.a, sc.b, l.h, l.f, k);
      for (int x = -c - 1; x >= 1; --x) out.push_back({k, x});
    }
    return out;
  };
  auto src = basis(m);
  auto dst = basis(target);
  std::map<std::pair<int, int>, std::size_t> idx;
  for (std::size_t i = 0; i < dst.size(); ++i) idx.emplace(dst[i], i);
  Matrix<F> out(f, dst.size(), src.size());
  for (const auto& [e, c] : scroll_section_terms(sc)) {
    auto cf = f.from_rational(c);
    for (std::size_t j = 0; j < src.size(); ++j) {
      auto [k, x] = src[j];
      int y = -scroll_block_degree(sc.a, sc.b, m.h, m.f, k) - x;
      int nx = x - e[0], ny = y - e[1];
      if (nx < 1 || ny < 1) continue;
      std::size_t i = idx.at({k + e[2], nx});
      out(i, j) = f.add(out(i, j), cf);
    }
  }
  return out;
}

/// Rank of H^i(Y, M) -> H^i(Y, M + X) given by the curve section.
template <ExactField F>
std::size_t scroll_connecting_rank(const F& f, const ScrollCurve& sc, Label m, int i) {
  Label target = m + Label{sc.d, sc.e};
  if (scroll_ambient_h(sc.a, sc.b, m, i) == 0 || scroll_ambient_h(sc.a, sc.b, target, i) == 0) return 0;
  Label canonical{-2, sc.a + sc.b - 2};
  if (i == 0) return rank(scroll_h0_section_map(f, sc, m));
  if (i == 2) return rank(scroll_h0_section_map(f, sc, canonical - target));  // Serre dual
  if (m.h >= 0 && target.h >= 0) return rank(scroll_h1_section_map(f, sc, m));
  if (m.h <= -2 && target.h <= -2) return rank(scroll_h1_section_map(f, sc, canonical - target));
  throw Error(ErrorCode::UnsupportedLabel, "H^1 connecting map between mixed scroll regimes is not modelled");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Section spaces and multiplication

template <ExactField F>
SectionSpace<F> section_space(const Scene& s, const F& f, Label l) {
  auto one_param = [&] {
    if (l.f != 0) throw Error(ErrorCode::UnsupportedLabel, "scene takes integer twists only");
  };
  switch (s.kind()) {
    case SceneKind::P1Series: {
      one_param();
      return make_section_space(f, l, l.h < 0 ? std::vector<Exponent>{} : MonomialBasis(2, l.h).monomials());
    }
    case SceneKind::CompleteIntersection: {
      one_param();
      const auto& ci = s.as<CompleteIntersection>();
      if (l.h < 0) return make_section_space<F>(f, l, {});
      std::vector<typename GradedQuotientRing<F>::Generator> gens;
      for (const auto& g : ci.generators) gens.push_back({g.degree, detail::convert(f, g.coefficients)});
      GradedQuotientRing<F> ring(f, ci.N + 1, std::move(gens));
      return make_section_space(f, l, MonomialBasis(ci.N + 1, l.h).monomials(), ring.ideal_span(l.h));
    }
    case SceneKind::MonomialVariety: {
      one_param();
      return make_section_space<F>(f, l, detail::monomial_products(s.as<MonomialVariety>(), l.h));
    }
    case SceneKind::ScrollCurve: {
      const auto& sc = s.as<ScrollCurve>();
      Label x{sc.d, sc.e};
      Label below = l - x;
      if (scroll_ambient_h(sc.a, sc.b, below, 1) != detail::scroll_connecting_rank(f, sc, below, 1)) {
        throw Error(ErrorCode::UnsupportedLabel,
                    "H^0(X, L) is not a quotient of H^0(Y, L) for this label (H^1 kernel)");
      }
      auto ambient = detail::scroll_ambient(sc.a, sc.b, l);
      std::vector<Vec<F>> relations;
      if (below.h >= 0) {
        auto m = detail::scroll_h0_section_map(f, sc, below);
        for (std::size_t j = 0; j < m.cols(); ++j) relations.push_back(m.column(j));
      }
      return make_section_space(f, l, std::move(ambient), relations);
    }
    case SceneKind::PointSet: break;
  }
  throw Error(ErrorCode::UnsupportedScene, "point sets have no section-space model");
}

/// H^0(L1) (x) H^0(L2) -> H^0(L1 + L2), left factor major.
template <ExactField F>
Matrix<F> multiplication_map(const Scene& s, const F& f, Label l1, Label l2) {
  auto s1 = section_space(s, f, l1);
  auto s2 = section_space(s, f, l2);
  auto t = section_space(s, f, l1 + l2);
  Matrix<F> out(f, t.dim(), s1.dim() * s2.dim());
  for (std::size_t i = 0; i < s1.dim(); ++i) {
    for (std::size_t j = 0; j < s2.dim(); ++j) {
      auto it = t.ambient_index.find(add_exponents(s1.representative(i), s2.representative(j)));
      if (it == t.ambient_index.end()) throw std::logic_error("product left the target ambient space");
      for (std::size_t r = 0; r < t.dim(); ++r) out(r, i * s2.dim() + j) = t.piece.reduction(r, it->second);
    }
  }
  return out;
}

/// Basis of the linear series V in coordinates of H^0(A): dim H^0(A) x dim V.
template <ExactField F>
Matrix<F> series_basis(const Scene& s, const F& f) {
  if (s.kind() == SceneKind::P1Series && !s.as<P1Series>().basis.empty()) {
    const auto& b = s.as<P1Series>().basis;
    std::vector<Vec<F>> cols;
    for (const auto& v : b) cols.push_back(detail::convert(f, v));
    return Matrix<F>::from_columns(f, static_cast<std::size_t>(s.as<P1Series>().a + 1), cols);
  }
  if (s.kind() == SceneKind::PointSet) {
    return Matrix<F>::identity(f, ambient_num_vars(s));
  }
  return Matrix<F>::identity(f, section_space(s, f, polarization(s)).dim());
}

inline std::size_t series_dim(const Scene& s) {
  if (s.kind() == SceneKind::P1Series && !s.as<P1Series>().basis.empty()) return s.as<P1Series>().basis.size();
  return series_basis(s, RationalField{}).cols();
}

/// H^0(L) (x) V -> H^0(L + A), left factor major.
template <ExactField F>
Matrix<F> series_map(const Scene& s, const F& f, Label l) {
  Matrix<F> full = multiplication_map(s, f, l, polarization(s));
  Matrix<F> vb = series_basis(s, f);
  const std::size_t da = vb.rows(), m = vb.cols();
  const std::size_t dl = da == 0 ? 0 : full.cols() / da;
  Matrix<F> out(f, full.rows(), dl * m);
  for (std::size_t i = 0; i < dl; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < da; ++k) {
        if (f.is_zero(vb(k, j))) continue;
        for (std::size_t r = 0; r < full.rows(); ++r)
          out(r, i * m + j) = f.add(out(r, i * m + j), f.mul(vb(k, j), full(r, i * da + k)));
      }
  return out;
}

// ---------------------------------------------------------------------------
// Cohomology

template <ExactField F>
std::size_t cohomology_dim(const Scene& s, const F& f, Label l, int i) {
  if (i < 0) return 0;
  switch (s.kind()) {
    case SceneKind::P1Series: {
      if (l.f != 0) throw Error(ErrorCode::UnsupportedLabel, "scene takes integer twists only");
      if (i == 0) return static_cast<std::size_t>(std::max(0, l.h + 1));
      if (i == 1) return static_cast<std::size_t>(std::max(0, -l.h - 1));
      return 0;
    }
    case SceneKind::CompleteIntersection: {
      if (l.f != 0) throw Error(ErrorCode::UnsupportedLabel, "scene takes integer twists only");
      int n = dimension(s);
      int sigma = canonical_label(s).h;
      if (i == 0) return l.h < 0 ? 0 : section_space(s, f, l).dim();
      if (i == n) return sigma - l.h < 0 ? 0 : section_space(s, f, Label{sigma - l.h, 0}).dim();
      return 0;
    }
    case SceneKind::ScrollCurve: {
      const auto& sc = s.as<ScrollCurve>();
      Label below = l - Label{sc.d, sc.e};
      auto hy = [&](Label m, int k) { return scroll_ambient_h(sc.a, sc.b, m, k); };
      if (i == 0) {
        std::size_t rk1 = detail::scroll_connecting_rank(f, sc, below, 1);
        return hy(l, 0) - hy(below, 0) + (hy(below, 1) - rk1);
      }
      if (i == 1) {
        std::size_t rk1 = detail::scroll_connecting_rank(f, sc, below, 1);
        std::size_t rk2 = detail::scroll_connecting_rank(f, sc, below, 2);
        return (hy(l, 1) - rk1) + (hy(below, 2) - rk2);
      }
      return 0;
    }
    case SceneKind::PointSet:
      return i == 0 ? s.as<PointSet>().points.size() : 0;
    case SceneKind::MonomialVariety: break;
  }
  throw Error(ErrorCode::UnsupportedScene, "cohomology is not modelled for monomial varieties");
}

inline std::size_t cohomology_dim(const Scene& s, Label l, int i) { return cohomology_dim(s, RationalField{}, l, i); }

// ---------------------------------------------------------------------------
// Points over F_p

template <ExactField F>
struct PointRecord {
  Vec<F> params;  // coordinates in the scene's variables
  Vec<F> image;   // values of the V-basis, first nonzero coordinate 1
  bool smooth = true;  // Jacobian / gradient check where the scene has one
};

template <ExactField F>
Vec<F> evaluate_sections(const F& f, const SectionSpace<F>& space, std::span<const typename F::value_type> point) {
  Vec<F> out;
  out.reserve(space.dim());
  for (std::size_t i = 0; i < space.dim(); ++i) out.push_back(monomial_value(f, space.representative(i), point));
  return out;
}

namespace detail {

template <ExactField F>
Vec<F> series_values(const Scene& s, const F& f, const SectionSpace<F>& a_space, const Matrix<F>& vb,
                     std::span<const typename F::value_type> point) {
  if (s.kind() == SceneKind::PointSet) return Vec<F>(point.begin(), point.end());
  auto vals = evaluate_sections(f, a_space, point);
  return stb::apply(vb.transpose(), std::span<const typename F::value_type>(vals));
}

template <ExactField F>
typename F::value_type eval_terms(const F& f, const std::vector<std::pair<Exponent, Rational>>& terms,
                                  std::span<const typename F::value_type> point) {
  auto acc = f.zero();
  for (const auto& [e, c] : terms) acc = f.add(acc, f.mul(f.from_rational(c), monomial_value(f, e, point)));
  return acc;
}

}  // namespace detail

/// Normalized values of the sections of `l` at a point of the scene.
template <ExactField F>
Vec<F> evaluation_functional(const Scene& s, const F& f, std::span<const typename F::value_type> point, Label l) {
  auto space = section_space(s, f, l);
  auto v = evaluate_sections(f, space, point);
  if (!normalize_projective(f, v)) throw Error(ErrorCode::ZeroEvaluation, "every section of the label vanishes at the point");
  return v;
}

inline std::vector<PointRecord<PrimeField>> enumerate_points(const Scene& s, const PrimeField& f) {
  using V = Vec<PrimeField>;
  std::vector<PointRecord<PrimeField>> out;
  if (s.kind() == SceneKind::PointSet) {
    std::set<V> seen;
    for (const auto& pt : s.as<PointSet>().points) {
      V v = detail::convert(f, pt);
      if (!normalize_projective(f, v) || !seen.insert(v).second)
        throw Error(ErrorCode::BadPrime, "points collide or vanish modulo " + std::to_string(f.p()));
      out.push_back({v, v, true});
    }
    return out;
  }

  auto a_space = section_space(s, f, polarization(s));
  auto vb = series_basis(s, f);
  auto record = [&](V params, bool smooth) {
    V img = detail::series_values(s, f, a_space, vb, params);
    if (!normalize_projective(f, img))
      throw Error(ErrorCode::BadPrime, "linear series has a basepoint modulo " + std::to_string(f.p()));
    out.push_back({std::move(params), std::move(img), smooth});
  };

  switch (s.kind()) {
    case SceneKind::P1Series:
      for (auto& pt : projective_points(f, 2)) record(pt, true);
      break;
    case SceneKind::CompleteIntersection: {
      const auto& ci = s.as<CompleteIntersection>();
      std::vector<std::pair<MonomialBasis, V>> gens;
      std::vector<std::vector<std::pair<MonomialBasis, V>>> grads;
      for (const auto& g : ci.generators) {
        MonomialBasis mb(ci.N + 1, g.degree);
        V c = detail::convert(f, g.coefficients);
        std::vector<std::pair<MonomialBasis, V>> gr;
        for (int v = 0; v <= ci.N; ++v)
          gr.push_back({MonomialBasis(ci.N + 1, g.degree - 1), partial_derivative(f, mb, c, v)});
        grads.push_back(std::move(gr));
        gens.push_back({std::move(mb), std::move(c)});
      }
      for (auto& pt : projective_points(f, ci.N + 1)) {
        bool on = std::all_of(gens.begin(), gens.end(),
                              [&](const auto& g) { return f.is_zero(evaluate_form(f, g.first, g.second, pt)); });
        if (!on) continue;
        Matrix<PrimeField> jac(f, gens.size(), ci.N + 1);
        for (std::size_t r = 0; r < gens.size(); ++r)
          for (int v = 0; v <= ci.N; ++v) jac(r, v) = evaluate_form(f, grads[r][v].first, grads[r][v].second, pt);
        record(pt, rank(jac) == gens.size());
      }
      break;
    }
    case SceneKind::MonomialVariety: {
      std::set<V> seen;
      for (auto& pt : projective_points(f, s.as<MonomialVariety>().source_vars)) {
        V img = detail::series_values(s, f, a_space, vb, pt);
        if (!normalize_projective(f, img)) continue;  // indeterminacy of the monomial map
        if (!seen.insert(img).second) continue;
        out.push_back({pt, std::move(img), true});
      }
      break;
    }
    case SceneKind::ScrollCurve: {
      auto terms = detail::scroll_section_terms(s.as<ScrollCurve>());
      std::vector<std::vector<std::pair<Exponent, Rational>>> grad(4);
      for (const auto& [e, c] : terms)
        for (int v = 0; v < 4; ++v)
          if (e[v] > 0) {
            Exponent de = e;
            --de[v];
            grad[v].push_back({de, c * e[v]});
          }
      auto line = projective_points(f, 2);
      for (const auto& base : line)
        for (const auto& fib : line) {
          V pt{base[0], base[1], fib[0], fib[1]};
          if (!f.is_zero(detail::eval_terms(f, terms, pt))) continue;
          bool smooth = std::any_of(grad.begin(), grad.end(),
                                    [&](const auto& g) { return !f.is_zero(detail::eval_terms(f, g, pt)); });
          record(pt, smooth);
        }
      break;
    }
    case SceneKind::PointSet: break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction and validation

/// Validates scene data over QQ and returns the scene.
inline Scene build_scene(SceneData data, std::string id = {}) {
  Scene s{std::move(id), std::move(data)};
  switch (s.kind()) {
    case SceneKind::P1Series: {
      const auto& p = s.as<P1Series>();
      if (p.a < 1) throw Error(ErrorCode::BadClass, "P^1 series needs a >= 1");
      for (const auto& v : p.basis)
        if (v.size() != static_cast<std::size_t>(p.a + 1))
          throw Error(ErrorCode::ShapeMismatch, "binary form of degree a needs a+1 coefficients");
      if (!p.basis.empty()) {
        if (detail::rank_over_q(p.basis) != p.basis.size())
          throw Error(ErrorCode::DependentBasis, "subspace basis is linearly dependent");
        // gcd of the series has degree 2a + 1 - rank(H^0(O(a)) (x) V -> H^0(O(2a)))
        if (rank(series_map(s, RationalField{}, Label{p.a, 0})) != static_cast<std::size_t>(2 * p.a + 1))
          throw Error(ErrorCode::HasBasepoint, "subspace has a common root");
      }
      break;
    }
    case SceneKind::CompleteIntersection: {
      const auto& ci = s.as<CompleteIntersection>();
      if (ci.N < 2 || ci.generators.empty() || static_cast<int>(ci.generators.size()) > ci.N - 1)
        throw Error(ErrorCode::BadClass, "complete intersection must have 1 <= c <= N-1 generators");
      for (const auto& g : ci.generators) {
        if (g.degree < 1) throw Error(ErrorCode::BadClass, "generator degrees must be positive");
        if (g.coefficients.size() != MonomialBasis(ci.N + 1, g.degree).size())
          throw Error(ErrorCode::ShapeMismatch, "generator coefficient vector has the wrong length");
        if (detail::all_zero(g.coefficients)) throw Error(ErrorCode::ZeroSection, "zero generator");
      }
      break;
    }
    case SceneKind::MonomialVariety: {
      const auto& mv = s.as<MonomialVariety>();
      if (mv.source_vars < 2 || mv.a < 1) throw Error(ErrorCode::BadClass, "need at least two variables and a >= 1");
      std::set<Exponent> seen;
      for (const auto& m : mv.monomials) {
        int deg = 0;
        for (int e : m) {
          if (e < 0) throw Error(ErrorCode::ShapeMismatch, "negative exponent");
          deg += e;
        }
        if (m.size() != static_cast<std::size_t>(mv.source_vars) || deg != mv.a)
          throw Error(ErrorCode::ShapeMismatch, "monomial has the wrong arity or degree");
        if (!seen.insert(m).second) throw Error(ErrorCode::DependentBasis, "repeated monomial");
      }
      if (mv.monomials.size() < 2) throw Error(ErrorCode::BadClass, "need at least two monomials");
      break;
    }
    case SceneKind::ScrollCurve: {
      const auto& sc = s.as<ScrollCurve>();
      if (sc.b < 1 || sc.a < sc.b) throw Error(ErrorCode::BadClass, "scroll needs a >= b >= 1");
      if (sc.d < 2) throw Error(ErrorCode::BadClass, "curve class needs d >= 2");
      if (sc.section.size() != static_cast<std::size_t>(sc.d + 1))
        throw Error(ErrorCode::ShapeMismatch, "curve section needs d+1 blocks");
      bool any = false;
      for (int i = 0; i <= sc.d; ++i) {
        int c = detail::scroll_block_degree(sc.a, sc.b, sc.d, sc.e, i);
        std::size_t want = c < 0 ? 0 : static_cast<std::size_t>(c + 1);
        if (sc.section[i].size() != want) throw Error(ErrorCode::ShapeMismatch, "section block has the wrong length");
        any = any || !detail::all_zero(sc.section[i]);
      }
      if (!any) throw Error(ErrorCode::ZeroSection, "curve section is zero");
      break;
    }
    case SceneKind::PointSet: {
      const auto& ps = s.as<PointSet>();
      if (ps.r < 1) throw Error(ErrorCode::BadClass, "point set needs r >= 1");
      for (const auto& pt : ps.points) {
        if (pt.size() != static_cast<std::size_t>(ps.r + 1))
          throw Error(ErrorCode::ShapeMismatch, "point has the wrong number of coordinates");
        if (detail::all_zero(pt)) throw Error(ErrorCode::ZeroSection, "zero coordinate vector");
      }
      for (std::size_t i = 0; i < ps.points.size(); ++i)
        for (std::size_t j = i + 1; j < ps.points.size(); ++j)
          if (detail::rank_over_q({ps.points[i], ps.points[j]}) < 2)
            throw Error(ErrorCode::DuplicatePoints,
                        "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      break;
    }
  }
  return s;
}

/// Every min(r+1, d) of the points span, checked over the field.
template <ExactField F>
bool linear_general_position(const F& f, const std::vector<Vec<F>>& points) {
  if (points.empty()) return true;
  std::size_t dim = points.front().size();
  std::size_t k = std::min(dim, points.size());
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<Vec<F>> rows;
    for (auto i : idx) rows.push_back(points[i]);
    if (rank(Matrix<F>::from_rows(f, rows)) < k) return false;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == points.size() - k + pos - 1) --pos;
    if (pos == 0) return true;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
}

}  // namespace stb
