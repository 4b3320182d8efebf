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

// Hand-rolled generators shared by the property tests.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stb/exactfield.hpp"
#include "stb/scenes.hpp"

namespace stb::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t next() { return rng_(); }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  Matrix<PrimeField> matrix(const PrimeField& f, std::size_t r, std::size_t c, unsigned zero_bias = 0) {
    Matrix<PrimeField> m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = below(zero_bias + 1) == 0 ? static_cast<std::uint32_t>(below(f.p())) : 0;
    return m;
  }

  Matrix<RationalField> rational_matrix(std::size_t r, std::size_t c, int bound = 4) {
    RationalField q;
    Matrix<RationalField> m(q, r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = Rational(between(-bound, bound), between(1, 3));
    return m;
  }

  /// Low-rank product A * B with inner dimension k.
  Matrix<PrimeField> low_rank(const PrimeField& f, std::size_t r, std::size_t c, std::size_t k) {
    return matrix(f, r, k) * matrix(f, k, c);
  }

  Vec<PrimeField> nonzero_vector(const PrimeField& f, std::size_t n) {
    while (true) {
      Vec<PrimeField> v(n);
      for (auto& x : v) x = static_cast<std::uint32_t>(below(f.p()));
      if (normalize_projective(f, v)) return v;
    }
  }

  Matrix<PrimeField> invertible(const PrimeField& f, std::size_t n) {
    while (true) {
      auto m = matrix(f, n, n);
      if (rank(m) == n) return m;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline Scene twisted_cubic() { return build_scene(P1Series{3, {}}, "twisted_cubic"); }

inline Scene p1_series(int a) { return build_scene(P1Series{a, {}}, "p1_" + std::to_string(a)); }

/// Diagonal plane quartic c0 x^4 + c1 y^4 + c2 z^4.
inline Scene plane_quartic(int c0, int c1, int c2) {
  MonomialBasis b(3, 4);
  std::vector<Rational> coeffs(b.size());
  coeffs[b.index_of({4, 0, 0})] = c0;
  coeffs[b.index_of({0, 4, 0})] = c1;
  coeffs[b.index_of({0, 0, 4})] = c2;
  return build_scene(CompleteIntersection{2, {DenseForm{4, coeffs}}}, "quartic");
}

/// Sum_i w_k(i) x_i^2 for w = 1, i, i^2: a smooth canonical curve of genus 5 in P^4.
inline Scene ci_three_quadrics() {
  MonomialBasis b(5, 2);
  std::vector<DenseForm> gens;
  for (int k = 0; k < 3; ++k) {
    std::vector<Rational> c(b.size());
    for (int i = 0; i < 5; ++i) {
      Exponent e(5, 0);
      e[static_cast<std::size_t>(i)] = 2;
      int w = 1;
      for (int t = 0; t < k; ++t) w *= i;
      c[b.index_of(e)] = w;
    }
    gens.push_back({2, c});
  }
  return build_scene(CompleteIntersection{4, gens}, "ci_three_quadrics");
}

inline Scene quadric_surface() {
  MonomialBasis b(4, 2);
  std::vector<Rational> c(b.size());
  c[b.index_of({1, 0, 0, 1})] = 1;
  c[b.index_of({0, 1, 1, 0})] = -1;
  return build_scene(CompleteIntersection{3, {DenseForm{2, c}}}, "quadric_surface");
}

/// Members of |2H + F| on S(1,1), smooth over QQ and at every point over F_5, F_7, F_11.
inline Scene scroll_curve_a() {
  return build_scene(ScrollCurve{1, 1, 2, 1, {{0, -1, 1, -2}, {-2, 2, -2, 0}, {2, -2, 2, -1}}}, "scroll_curve_a");
}

inline Scene scroll_curve_b() {
  return build_scene(ScrollCurve{1, 1, 2, 1, {{-2, -2, 1, 1}, {-2, -1, -2, 2}, {1, -2, 2, -2}}}, "scroll_curve_b");
}

inline std::vector<std::vector<Rational>> seven_points_on_cubic() {
  std::vector<std::vector<Rational>> pts;
  for (int s = 0; s < 6; ++s) pts.push_back({s * s * s, s * s, s, 1});
  pts.push_back({1, 0, 0, 0});
  return pts;
}

inline std::vector<std::vector<Rational>> six_general_points() {
  return {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 1, 1, 1}, {1, 2, 3, 4}};
}

}  // namespace stb::testing
