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

#include <gtest/gtest.h>

#include "stb/polyalg.hpp"
#include "support.hpp"

namespace stb {
namespace {

using testing::Gen;

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

TEST(MonomialBasis, BinaryCubics) {
  MonomialBasis b(2, 3);
  EXPECT_EQ(b.monomials(), (std::vector<Exponent>{{3, 0}, {2, 1}, {1, 2}, {0, 3}}));
}

TEST(MonomialBasis, TernaryQuadrics) {
  MonomialBasis b(3, 2);
  EXPECT_EQ(b.monomials(), (std::vector<Exponent>{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}}));
}

TEST(MonomialBasis, SizesOrderAndIndex) {
  EXPECT_EQ(MonomialBasis(4, 2).size(), 10u);
  for (std::size_t n = 1; n <= 5; ++n)
    for (int d = 0; d <= 5; ++d) {
      MonomialBasis b(n, d);
      EXPECT_EQ(b.size(), choose(n - 1 + d, d));
      EXPECT_TRUE(std::is_sorted(b.monomials().begin(), b.monomials().end(), std::greater<>()));
      for (std::size_t i = 0; i < b.size(); ++i) {
        int sum = 0;
        for (int e : b[i]) sum += e;
        EXPECT_EQ(sum, d);
        EXPECT_EQ(b.index_of(b[i]), i);
      }
    }
  EXPECT_EQ(MonomialBasis(3, 2).index_of({1, 1, 1}), MonomialBasis::npos);
}

TEST(FreeTensor, LinearBinaryForms) {
  PrimeField f(5);
  auto m = free_multiplication_tensor(f, 2, 1, 1);
  ASSERT_EQ(m.rows(), 3u);
  ASSERT_EQ(m.cols(), 4u);
  // s (x) t is column 0 * 2 + 1; st is row 1.
  EXPECT_EQ(m.column(1), (Vec<PrimeField>{0, 1, 0}));
}

TEST(FreeTensor, ColumnsAreSingleMonomials) {
  PrimeField f(7);
  for (std::size_t n = 1; n <= 4; ++n)
    for (int d1 = 0; d1 <= 3; ++d1)
      for (int d2 = 0; d2 <= 2; ++d2) {
        auto m = free_multiplication_tensor(f, n, d1, d2);
        for (std::size_t c = 0; c < m.cols(); ++c) {
          auto col = m.column(c);
          EXPECT_EQ(std::count(col.begin(), col.end(), 1u), 1);
          EXPECT_EQ(std::count(col.begin(), col.end(), 0u), static_cast<long>(col.size()) - 1);
        }
      }
}

TEST(FreeTensor, TernaryLinearTimesLinearHasRankSix) {
  RationalField q;
  auto m = free_multiplication_tensor(q, 3, 1, 1);
  EXPECT_EQ(m.rows(), 6u);
  EXPECT_EQ(m.cols(), 9u);
  EXPECT_EQ(rank(m), 6u);
}

TEST(QuotientRing, NoGeneratorsGivesFreePieces) {
  PrimeField f(5);
  GradedQuotientRing<PrimeField> ring(f, 3, {});
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(ring.dim(k), MonomialBasis(3, k).size());
  EXPECT_EQ(ring.multiplication(2, 1), free_multiplication_tensor(f, 3, 2, 1));
  EXPECT_EQ(ring.dim(-1), 0u);
}

GradedQuotientRing<RationalField> fermat_quartic_ring() {
  RationalField q;
  MonomialBasis b(3, 4);
  Vec<RationalField> c(b.size(), 0);
  c[b.index_of({4, 0, 0})] = 1;
  c[b.index_of({0, 4, 0})] = 1;
  c[b.index_of({0, 0, 4})] = 1;
  return GradedQuotientRing<RationalField>(q, 3, {{4, c}});
}

TEST(QuotientRing, PlaneQuarticPieces) {
  auto ring = fermat_quartic_ring();
  EXPECT_EQ(ring.dim(3), 10u);
  EXPECT_EQ(ring.dim(4), 14u);
  EXPECT_EQ(ring.multiplication(2, 1), free_multiplication_tensor(RationalField{}, 3, 2, 1));
}

GradedQuotientRing<PrimeField> diagonal_quadrics(const PrimeField& f) {
  MonomialBasis b(5, 2);
  std::vector<GradedQuotientRing<PrimeField>::Generator> gens;
  for (std::uint32_t k = 0; k < 3; ++k) {
    Vec<PrimeField> c(b.size(), 0);
    for (int i = 0; i < 5; ++i) {
      Exponent e(5, 0);
      e[static_cast<std::size_t>(i)] = 2;
      std::uint32_t w = 1;
      for (std::uint32_t t = 0; t < k; ++t) w = f.mul(w, static_cast<std::uint32_t>(i));
      c[b.index_of(e)] = w;
    }
    gens.push_back({2, c});
  }
  return GradedQuotientRing<PrimeField>(f, 5, gens);
}

TEST(QuotientRing, ThreeQuadricsInP4) {
  PrimeField f(5);
  auto ring = diagonal_quadrics(f);
  EXPECT_EQ(ring.dim(2), 12u);
  auto m = ring.multiplication(1, 1);
  EXPECT_EQ(m.rows(), 12u);
  EXPECT_EQ(m.cols(), 25u);
  EXPECT_EQ(rank(m), 12u);
}

// Coefficients of (1 + t)^c / (1 - t)^(N + 1 - c) by power-series arithmetic.
std::vector<std::int64_t> ci_quadric_hilbert(int c, int vars, int up_to) {
  std::vector<std::int64_t> num(static_cast<std::size_t>(up_to + 1), 0);
  num[0] = 1;
  for (int i = 0; i < c; ++i)
    for (int k = up_to; k >= 1; --k) num[static_cast<std::size_t>(k)] += num[static_cast<std::size_t>(k - 1)];
  for (int i = 0; i < vars - c; ++i)
    for (int k = 1; k <= up_to; ++k) num[static_cast<std::size_t>(k)] += num[static_cast<std::size_t>(k - 1)];
  return num;
}

TEST(QuotientRing, HilbertFunctionOfQuadricComplete) {
  PrimeField f(7);
  auto ring = diagonal_quadrics(f);
  auto expected = ci_quadric_hilbert(3, 5, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(static_cast<std::int64_t>(ring.dim(k)), expected[static_cast<std::size_t>(k)]) << k;
  // Two quadrics in P^3 (an elliptic quartic): 1, 4, 8, 12, 16.
  MonomialBasis b(4, 2);
  Vec<PrimeField> q1(b.size(), 0), q2(b.size(), 0);
  q1[b.index_of({1, 0, 0, 1})] = 1;
  q1[b.index_of({0, 1, 1, 0})] = 6;
  q2[b.index_of({2, 0, 0, 0})] = 1;
  q2[b.index_of({0, 2, 0, 0})] = 1;
  q2[b.index_of({0, 0, 2, 0})] = 1;
  q2[b.index_of({0, 0, 0, 2})] = 1;
  GradedQuotientRing<PrimeField> r2(f, 4, {{2, q1}, {2, q2}});
  auto e2 = ci_quadric_hilbert(2, 4, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(static_cast<std::int64_t>(r2.dim(k)), e2[static_cast<std::size_t>(k)]) << k;
}

TEST(QuotientRing, ReductionKillsIdealAndIsIdempotent) {
  PrimeField f(5);
  auto ring = diagonal_quadrics(f);
  for (int k = 0; k <= 3; ++k) {
    const auto& piece = ring.piece(k);
    for (const auto& row : ring.ideal_span(k)) {
      auto red = ring.reduce(k, std::span<const std::uint32_t>(row));
      EXPECT_TRUE(std::all_of(red.begin(), red.end(), [](auto x) { return x == 0; }));
    }
    // reduction restricted to the basis monomials is the identity: reduce o reduce = reduce
    for (std::size_t i = 0; i < piece.dim(); ++i)
      for (std::size_t j = 0; j < piece.dim(); ++j) EXPECT_EQ(piece.reduction(i, piece.basis[j]), i == j ? 1u : 0u);
  }
}

TEST(QuotientRing, CommutativeAndAssociative) {
  PrimeField f(7);
  auto ring = diagonal_quadrics(f);
  Gen g(99);
  for (int trial = 0; trial < 20; ++trial) {
    int k = g.between(0, 2), l = g.between(0, 2), m = g.between(0, 1);
    auto kl = ring.multiplication(k, l), lk = ring.multiplication(l, k);
    const std::size_t dk = ring.dim(k), dl = ring.dim(l), dm = ring.dim(m);
    for (std::size_t i = 0; i < dk; ++i)
      for (std::size_t j = 0; j < dl; ++j) EXPECT_EQ(kl.column(i * dl + j), lk.column(j * dk + i));
    auto klm = ring.multiplication(k + l, m), lm = ring.multiplication(l, m), k_lm = ring.multiplication(k, l + m);
    const std::size_t dkl = ring.dim(k + l), dlm = ring.dim(l + m);
    for (int sample = 0; sample < 10; ++sample) {
      std::size_t i = g.below(dk), j = g.below(dl), t = g.below(dm);
      auto left = kl.column(i * dl + j);   // a*b in (S/I)_{k+l}
      auto right = lm.column(j * dm + t);  // b*c in (S/I)_{l+m}
      Vec<PrimeField> lhs(ring.dim(k + l + m), 0), rhs(ring.dim(k + l + m), 0);
      for (std::size_t x = 0; x < dkl; ++x)
        for (std::size_t r = 0; r < lhs.size(); ++r) lhs[r] = f.add(lhs[r], f.mul(left[x], klm(r, x * dm + t)));
      for (std::size_t x = 0; x < dlm; ++x)
        for (std::size_t r = 0; r < rhs.size(); ++r) rhs[r] = f.add(rhs[r], f.mul(right[x], k_lm(r, i * dlm + x)));
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(QuotientRing, CachedPiecesAreStable) {
  auto ring = fermat_quartic_ring();
  const auto* first = &ring.piece(5);
  auto copy = ring;
  EXPECT_EQ(&copy.piece(5), first);
  EXPECT_EQ(quotient_piece(ring, 5).dim(), ring.dim(5));
  EXPECT_EQ(quotient_multiplication(ring, 1, 1), ring.multiplication(1, 1));
}

TEST(Forms, EvaluationAndDerivative) {
  PrimeField f(11);
  MonomialBasis b(3, 2);
  Vec<PrimeField> c(b.size(), 0);
  c[b.index_of({2, 0, 0})] = 3;  // 3x^2 + 5yz
  c[b.index_of({0, 1, 1})] = 5;
  Vec<PrimeField> pt{2, 3, 4};
  EXPECT_EQ(evaluate_form(f, b, std::span<const std::uint32_t>(c), std::span<const std::uint32_t>(pt)), (12u + 60u) % 11);
  auto dx = partial_derivative(f, b, std::span<const std::uint32_t>(c), 0);
  EXPECT_EQ(dx, (Vec<PrimeField>{6, 0, 0}));
  auto dz = partial_derivative(f, b, std::span<const std::uint32_t>(c), 2);
  EXPECT_EQ(dz, (Vec<PrimeField>{0, 5, 0}));
}

}  // namespace
}  // namespace stb
