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

// Koszul cohomology K_{p,q}(X, N; U): homology at the middle of
//
//   L^{p+1} U (x) M_{q-1}  ->  L^p U (x) M_q  ->  L^{p-1} U (x) M_{q+1}
//
// with M_k = H^0(N (x) A^k) and d(u_I (x) m) = sum_j (-1)^j u_{I - i_j} (x) u_{i_j} m
// (j counted from 0). Exterior powers use the lexicographic basis of
// increasing index tuples; tensor coordinates are exterior-index major.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "stb/exactfield.hpp"
#include "stb/polyalg.hpp"
#include "stb/scenes.hpp"

namespace stb {

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Lexicographic rank of a strictly increasing tuple among the
/// tuple.size()-subsets of {0, ..., dim_u - 1}.
inline std::size_t exterior_rank(std::size_t dim_u, std::span<const std::size_t> tuple) {
  const std::size_t p = tuple.size();
  std::size_t r = 0, next = 0;
  for (std::size_t k = 0; k < p; ++k) {
    if (tuple[k] >= dim_u || (k > 0 && tuple[k] <= tuple[k - 1]))
      throw Error(ErrorCode::BadTuple, "exterior index tuple must be strictly increasing and below dim U");
    for (std::size_t j = next; j < tuple[k]; ++j) r += binomial(dim_u - 1 - j, p - 1 - k);
    next = tuple[k] + 1;
  }
  return r;
}

inline std::vector<std::size_t> exterior_unrank(std::size_t dim_u, std::size_t p, std::size_t rank) {
  if (rank >= binomial(dim_u, p)) throw Error(ErrorCode::BadTuple, "exterior rank out of range");
  std::vector<std::size_t> t;
  std::size_t j = 0;
  for (std::size_t k = 0; k < p; ++k) {
    while (true) {
      std::size_t block = binomial(dim_u - 1 - j, p - 1 - k);
      if (rank < block) break;
      rank -= block;
      ++j;
    }
    t.push_back(j++);
  }
  return t;
}

/// Dimensions of M_lo..M_hi and the action of U between consecutive degrees.
template <ExactField F>
struct GradedModuleWindow {
  F field;
  int lo = 0;
  int hi = -1;
  std::size_t dim_u = 0;
  std::vector<std::size_t> dims;  // dims[k - lo]
  std::vector<Matrix<F>> mult;    // mult[k - lo] : U (x) M_k -> M_{k+1}, column u * dim M_k + x

  bool covers(int k) const { return k >= lo && k <= hi; }
  std::size_t dim(int k) const { return dims.at(static_cast<std::size_t>(k - lo)); }
  const Matrix<F>& action(int k) const { return mult.at(static_cast<std::size_t>(k - lo)); }
};

template <ExactField F>
Matrix<F> koszul_differential(const GradedModuleWindow<F>& w, int p, int q) {
  if (!w.covers(q) || !w.covers(q + 1))
    throw Error(ErrorCode::WindowTooSmall, "window [" + std::to_string(w.lo) + "," + std::to_string(w.hi) +
                                               "] does not contain degrees " + std::to_string(q) + ".." +
                                               std::to_string(q + 1));
  const F& f = w.field;
  const std::size_t n = w.dim_u;
  const std::size_t dq = w.dim(q), dq1 = w.dim(q + 1);
  if (p <= 0) return Matrix<F>(f, 0, p == 0 ? dq : 0);
  const auto pp = static_cast<std::size_t>(p);
  Matrix<F> out(f, binomial(n, pp - 1) * dq1, binomial(n, pp) * dq);
  const Matrix<F>& act = w.action(q);
  const std::size_t count = binomial(n, pp);
  for (std::size_t c = 0; c < count; ++c) {
    auto tuple = exterior_unrank(n, pp, c);
    for (std::size_t j = 0; j < pp; ++j) {
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < pp; ++k)
        if (k != j) rest.push_back(tuple[k]);
      std::size_t rrow = exterior_rank(n, rest);
      const bool negative = j % 2 == 1;
      for (std::size_t x = 0; x < dq; ++x) {
        std::size_t src = tuple[j] * dq + x;
        for (std::size_t r = 0; r < dq1; ++r) {
          auto v = act(r, src);
          if (f.is_zero(v)) continue;
          auto& cell = out(rrow * dq1 + r, c * dq + x);
          cell = negative ? f.sub(cell, v) : f.add(cell, v);
        }
      }
    }
  }
  return out;
}

struct KoszulGroupDim {
  int p = 0;
  int q = 0;
  std::size_t dim = 0;
  std::size_t middle = 0;
  std::size_t rank_in = 0;
  std::size_t rank_out = 0;
};

template <ExactField F>
KoszulGroupDim koszul_dim(const GradedModuleWindow<F>& w, int p, int q) {
  KoszulGroupDim out{p, q, 0, 0, 0, 0};
  if (!w.covers(q - 1) || !w.covers(q) || !w.covers(q + 1))
    throw Error(ErrorCode::WindowTooSmall, "K_{" + std::to_string(p) + "," + std::to_string(q) +
                                               "} needs degrees " + std::to_string(q - 1) + ".." +
                                               std::to_string(q + 1));
  if (p < 0 || static_cast<std::size_t>(p) > w.dim_u) return out;
  out.middle = binomial(w.dim_u, static_cast<std::size_t>(p)) * w.dim(q);
  if (p >= 1) out.rank_out = rank(koszul_differential(w, p, q));
  if (static_cast<std::size_t>(p) + 1 <= w.dim_u) out.rank_in = rank(koszul_differential(w, p + 1, q - 1));
  out.dim = out.middle - out.rank_out - out.rank_in;
  return out;
}

/// Window of M_k = H^0(N + kA) over a scene, acted on by U given as the
/// columns of `u_basis` in coordinates of the scene's series V. Twists whose
/// H^0 vanishes by the cohomology recipes are recorded with dimension 0.
template <ExactField F>
GradedModuleWindow<F> scene_window(const Scene& s, const F& f, Label n_label, const Matrix<F>& u_basis, int lo,
                                   int hi) {
  GradedModuleWindow<F> w{f, lo, hi, u_basis.cols(), {}, {}};
  const Label a = polarization(s);
  const std::size_t m = u_basis.rows();
  auto h0_vanishes = [&](Label l) {
    try {
      return cohomology_dim(s, f, l, 0) == 0;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnsupportedScene) return false;
      throw;
    }
  };
  std::vector<bool> zero;
  for (int k = lo; k <= hi; ++k) {
    Label l = n_label + k * a;
    zero.push_back(h0_vanishes(l));
    w.dims.push_back(zero.back() ? 0 : section_space(s, f, l).dim());
  }
  for (int k = lo; k <= hi; ++k) {
    const std::size_t dk = w.dim(k);
    const std::size_t dk1 = k < hi ? w.dim(k + 1) : 0;
    Matrix<F> act(f, dk1, w.dim_u * dk);
    if (k < hi && dk > 0 && dk1 > 0) {
      Matrix<F> sm = series_map(s, f, n_label + k * a);  // column x * m + v
      for (std::size_t u = 0; u < w.dim_u; ++u)
        for (std::size_t x = 0; x < dk; ++x)
          for (std::size_t v = 0; v < m; ++v) {
            auto c = u_basis(v, u);
            if (f.is_zero(c)) continue;
            for (std::size_t r = 0; r < dk1; ++r)
              act(r, u * dk + x) = f.add(act(r, u * dk + x), f.mul(c, sm(r, x * m + v)));
          }
    }
    w.mult.push_back(std::move(act));
  }
  return w;
}

template <ExactField F>
KoszulGroupDim scene_koszul_dim(const Scene& s, const F& f, Label n_label, const Matrix<F>& u_basis, int p, int q) {
  return koszul_dim(scene_window(s, f, n_label, u_basis, q - 1, q + 1), p, q);
}

template <ExactField F>
struct DualityCheck {
  KoszulGroupDim lhs;
  KoszulGroupDim rhs;
  bool hypotheses_ok = false;
  bool holds() const { return !hypotheses_ok || lhs.dim == rhs.dim; }
};

/// dim K_{p,q}(X, N; U) against dim K_{s-n-p, n+1-q}(X, omega - N; U) with
/// s = dim U - 1, under the vanishing of H^i(N + (q-i)A) and H^i(N + (q-i-1)A)
/// for 0 < i < n.
template <ExactField F>
DualityCheck<F> duality_check(const Scene& s, const F& f, Label n_label, const Matrix<F>& u_basis, int p, int q) {
  if (s.kind() == SceneKind::MonomialVariety || s.kind() == SceneKind::PointSet)
    throw Error(ErrorCode::UnsupportedScene, "duality needs cohomology and a canonical bundle");
  const int n = dimension(s);
  const int sdim = static_cast<int>(u_basis.cols()) - 1;
  const Label a = polarization(s);
  DualityCheck<F> out;
  out.hypotheses_ok = true;
  for (int i = 1; i < n; ++i) {
    if (cohomology_dim(s, f, n_label + (q - i) * a, i) != 0 || cohomology_dim(s, f, n_label + (q - i - 1) * a, i) != 0)
      out.hypotheses_ok = false;
  }
  out.lhs = scene_koszul_dim(s, f, n_label, u_basis, p, q);
  out.rhs = scene_koszul_dim(s, f, canonical_label(s) - n_label, u_basis, sdim - n - p, n + 1 - q);
  return out;
}

struct GreenKp1 {
  int p = 0;  // r - n - 1
  std::size_t dim = 0;
  bool on_minimal_degree = false;  // dim != 0
  bool degree_hypothesis = false;  // deg_A(X) >= r - n + 3
  long long degree = 0;
  int r = 0;
  int n = 0;
};

template <ExactField F>
GreenKp1 green_kp1(const Scene& s, const F& f) {
  if (s.kind() == SceneKind::MonomialVariety || s.kind() == SceneKind::PointSet)
    throw Error(ErrorCode::UnsupportedScene, "Green's K_{p,1} verdict needs a complete series with cohomology");
  const std::size_t h0a = section_space(s, f, polarization(s)).dim();
  if (series_dim(s) != h0a) throw Error(ErrorCode::UnsupportedScene, "the series must be all of H^0(A)");
  GreenKp1 out;
  out.r = static_cast<int>(h0a) - 1;
  out.n = dimension(s);
  out.p = out.r - out.n - 1;
  out.degree = degree(s);
  out.degree_hypothesis = out.degree >= out.r - out.n + 3;
  out.dim = scene_koszul_dim(s, f, Label{0, 0}, Matrix<F>::identity(f, h0a), out.p, 1).dim;
  out.on_minimal_degree = out.dim != 0;
  return out;
}

/// Window of the homogeneous ideal of a finite point set: M_k = ker of the
/// d x dim S_k evaluation matrix, with U = S_1 acting by multiplication.
template <ExactField F>
GradedModuleWindow<F> pointset_ideal_window(const F& f, const std::vector<Vec<F>>& points, std::size_t num_vars,
                                            int k_lo, int k_hi) {
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (rank(Matrix<F>::from_rows(f, {points[i], points[j]})) < 2)
        throw Error(ErrorCode::DuplicatePoints, "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");

  struct Piece {
    MonomialBasis basis;
    std::vector<Vec<F>> kernel;         // canonical kernel vectors, in S_k coordinates
    std::vector<std::size_t> free_cols;  // coordinate of kernel vector t is read at free_cols[t]
  };
  auto piece = [&](int k) {
    Piece pc{MonomialBasis(num_vars, k), {}, {}};
    if (k < 0) return pc;
    Matrix<F> ev(f, points.size(), pc.basis.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t c = 0; c < pc.basis.size(); ++c) ev(i, c) = monomial_value(f, pc.basis[c], points[i]);
    auto rk = rank_kernel(ev);
    std::vector<bool> piv(pc.basis.size(), false);
    for (auto c : rk.pivot_columns) piv[c] = true;
    for (std::size_t c = 0; c < pc.basis.size(); ++c)
      if (!piv[c]) pc.free_cols.push_back(c);
    pc.kernel = std::move(rk.kernel);
    return pc;
  };

  GradedModuleWindow<F> w{f, k_lo, k_hi, num_vars, {}, {}};
  std::vector<Piece> pieces;
  for (int k = k_lo; k <= k_hi; ++k) {
    pieces.push_back(piece(k));
    w.dims.push_back(pieces.back().kernel.size());
  }
  for (int k = k_lo; k <= k_hi; ++k) {
    const Piece& src = pieces[static_cast<std::size_t>(k - k_lo)];
    const std::size_t dk = src.kernel.size();
    if (k == k_hi) {
      w.mult.emplace_back(f, 0, num_vars * dk);
      continue;
    }
    const Piece& dst = pieces[static_cast<std::size_t>(k + 1 - k_lo)];
    Matrix<F> act(f, dst.kernel.size(), num_vars * dk);
    for (std::size_t u = 0; u < num_vars; ++u)
      for (std::size_t x = 0; x < dk; ++x) {
        Vec<F> prod(dst.basis.size(), f.zero());
        for (std::size_t c = 0; c < src.basis.size(); ++c) {
          if (f.is_zero(src.kernel[x][c])) continue;
          Exponent e = src.basis[c];
          ++e[u];
          prod[dst.basis.index_of(e)] = src.kernel[x][c];
        }
        for (std::size_t t = 0; t < dst.free_cols.size(); ++t) act(t, u * dk + x) = prod[dst.free_cols[t]];
      }
    w.mult.push_back(std::move(act));
  }
  return w;
}

struct GreenPoints {
  int r = 0;
  std::size_t dim = 0;  // dim K_{r-2,2}(P^r, I; V)
  bool on_rnc = false;
};

template <ExactField F>
GreenPoints green_points_test(const F& f, const std::vector<Vec<F>>& points) {
  if (points.empty()) throw Error(ErrorCode::NotGeneralPosition, "no points");
  const std::size_t nv = points.front().size();
  const int r = static_cast<int>(nv) - 1;
  if (points.size() < nv || !linear_general_position(f, points))
    throw Error(ErrorCode::NotGeneralPosition, "need d >= r+1 points in linear general position");
  auto w = pointset_ideal_window(f, points, nv, 1, 3);
  GreenPoints out;
  out.r = r;
  out.dim = koszul_dim(w, r - 2, 2).dim;
  out.on_rnc = out.dim != 0;
  return out;
}

}  // namespace stb
