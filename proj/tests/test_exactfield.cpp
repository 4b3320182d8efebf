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

#include <set>

#include "stb/exactfield.hpp"
#include "support.hpp"

namespace stb {
namespace {

using testing::Gen;

TEST(MakeField, AcceptsPrimes) {
  auto f = make_field(FieldKind::Prime, 7);
  EXPECT_EQ(f.kind, FieldKind::Prime);
  EXPECT_EQ(f.p, 7u);
  EXPECT_EQ(f.to_string(), "F_7");
  EXPECT_EQ(make_field(FieldKind::Rationals, std::nullopt).to_string(), "QQ");
  EXPECT_EQ(make_field(FieldKind::Prime, 2147483647).p, 2147483647u);
}

TEST(MakeField, RejectsComposites) {
  for (std::int64_t n : std::initializer_list<std::int64_t>{-3, 0, 1, 4, 6, 9, 91, 2147483649LL}) {
    try {
      make_field(FieldKind::Prime, n);
      FAIL() << n << " accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonPrimeModulus);
    }
  }
  EXPECT_THROW(make_field(FieldKind::Prime, std::nullopt), Error);
}

TEST(PrimeField, InverseOfThreeModSeven) { EXPECT_EQ(PrimeField(7).inv(3), 5u); }

TEST(PrimeField, AxiomsExhaustiveSmallPrimes) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    PrimeField f(p);
    for (std::uint32_t a = 0; a < p; ++a) {
      EXPECT_EQ(f.add(a, f.neg(a)), 0u);
      if (a != 0) {
        EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      }
      for (std::uint32_t b = 0; b < p; ++b) {
        EXPECT_EQ(f.add(a, b), (a + b) % p);
        EXPECT_EQ(f.mul(a, b), (a * b) % p);
        EXPECT_EQ(f.sub(f.add(a, b), b), a);
        for (std::uint32_t c = 0; c < p; ++c) EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
    EXPECT_THROW(f.inv(0), std::domain_error);
  }
}

TEST(PrimeField, ReducesRationals) {
  PrimeField f(7);
  EXPECT_EQ(f.from_rational(Rational(1, 2)), 4u);
  EXPECT_EQ(f.from_rational(Rational(-3)), 4u);
  EXPECT_EQ(f.from_int(-1), 6u);
  try {
    f.from_rational(Rational(1, 14));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadPrime);
  }
}

TEST(Rationals, ParseAndPrintRoundTrip) {
  for (const char* s : {"0", "5", "-7", "3/4", "-12/5", "123456789012345678901234567890"}) {
    EXPECT_EQ(to_string(parse_rational(s)), s);
  }
  EXPECT_EQ(to_string(parse_rational("6/4")), "3/2");
  EXPECT_THROW(parse_rational("2/-4"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(RankKernel, IdentityAndZero) {
  PrimeField f(5);
  auto id = rank_kernel(Matrix<PrimeField>::identity(f, 3));
  EXPECT_EQ(id.rank, 3u);
  EXPECT_TRUE(id.kernel.empty());
  auto z = rank_kernel(Matrix<PrimeField>(f, 2, 3));
  EXPECT_EQ(z.rank, 0u);
  EXPECT_EQ(z.kernel.size(), 3u);
}

// Over F_5 the second row is twice the first (2*3 = 6 = 1), so the rank is 1;
// over QQ the rows are independent.
TEST(RankKernel, SmallExampleOverF5AndQQ) {
  PrimeField f(5);
  auto m = Matrix<PrimeField>::from_rows(f, {{1, 2, 3}, {2, 4, 1}});
  auto rk = rank_kernel(m);
  EXPECT_EQ(rk.rank, 1u);
  ASSERT_EQ(rk.kernel.size(), 2u);
  EXPECT_EQ(rk.kernel[0], (Vec<PrimeField>{3, 1, 0}));
  EXPECT_EQ(rk.kernel[1], (Vec<PrimeField>{2, 0, 1}));
  for (const auto& k : rk.kernel) EXPECT_EQ(stb::apply(m, std::span<const std::uint32_t>(k)), (Vec<PrimeField>{0, 0}));

  RationalField q;
  auto mq = Matrix<RationalField>::from_rows(q, {{1, 2, 3}, {2, 4, 1}});
  auto rq = rank_kernel(mq);
  EXPECT_EQ(rq.rank, 2u);
  ASSERT_EQ(rq.kernel.size(), 1u);
  EXPECT_EQ(rq.kernel[0], (Vec<RationalField>{-2, 1, 0}));
}

TEST(RankKernel, KernelVectorsAreCanonical) {
  Gen g(11);
  PrimeField f(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = g.low_rank(f, 1 + g.below(6), 1 + g.below(8), g.below(5));
    auto rk = rank_kernel(m);
    std::set<std::size_t> pivots(rk.pivot_columns.begin(), rk.pivot_columns.end());
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!pivots.count(j)) free.push_back(j);
    ASSERT_EQ(free.size(), rk.kernel.size());
    for (std::size_t t = 0; t < free.size(); ++t)
      for (std::size_t s = 0; s < free.size(); ++s) EXPECT_EQ(rk.kernel[t][free[s]], s == t ? 1u : 0u);
  }
}

TEST(RankKernel, RankNullityAndKernelProperty) {
  Gen g(2024);
  for (std::uint32_t p : {2u, 5u, 7u, 101u}) {
    PrimeField f(p);
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t r = 1 + g.below(7), c = 1 + g.below(9);
      auto m = trial % 2 ? g.matrix(f, r, c, trial % 4) : g.low_rank(f, r, c, g.below(5));
      auto rk = rank_kernel(m);
      EXPECT_EQ(rk.rank + rk.kernel.size(), c);
      EXPECT_EQ(rk.rank, rank(m.transpose()));
      for (const auto& k : rk.kernel) EXPECT_EQ(stb::apply(m, std::span<const std::uint32_t>(k)), Vec<PrimeField>(r, 0));
    }
  }
}

TEST(RankKernel, RationalRankNullity) {
  Gen g(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + g.below(5), c = 1 + g.below(6);
    auto m = g.rational_matrix(r, c);
    if (trial % 3 == 0) m = m * g.rational_matrix(c, c) ;
    auto rk = rank_kernel(m);
    EXPECT_EQ(rk.rank + rk.kernel.size(), c);
    EXPECT_EQ(rk.rank, rank(m.transpose()));
    for (const auto& k : rk.kernel)
      for (const auto& x : stb::apply(m, std::span<const Rational>(k))) EXPECT_EQ(x, 0);
  }
}

TEST(RankKernel, RankOfProductBoundedByFactors) {
  Gen g(77);
  PrimeField f(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = g.matrix(f, 4, 3 + g.below(3));
    auto b = g.matrix(f, a.cols(), 5);
    EXPECT_LE(rank(a * b), std::min(rank(a), rank(b)));
  }
}

TEST(Solve, FindsSolutionsAndDetectsInconsistency) {
  Gen g(3);
  PrimeField f(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto m = g.low_rank(f, 5, 4, 1 + g.below(4));
    Vec<PrimeField> x(4);
    for (auto& v : x) v = static_cast<std::uint32_t>(g.below(13));
    auto b = stb::apply(m, std::span<const std::uint32_t>(x));
    auto sol = solve(m, std::span<const std::uint32_t>(b));
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(stb::apply(m, std::span<const std::uint32_t>(*sol)), b);
  }
  auto m = Matrix<PrimeField>::from_rows(f, {{1, 0}, {1, 0}});
  Vec<PrimeField> b{1, 2};
  EXPECT_FALSE(solve(m, std::span<const std::uint32_t>(b)).has_value());
}

TEST(LeftKernel, AnnihilatesFromTheLeft) {
  Gen g(8);
  PrimeField f(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = g.low_rank(f, 6, 4, g.below(4));
    for (const auto& y : left_kernel(m)) {
      auto yr = Matrix<PrimeField>::from_rows(f, {y});
      EXPECT_TRUE((yr * m).is_zero());
    }
  }
}

TEST(Matrix, FieldMismatchIsRejected) {
  Matrix<PrimeField> a(PrimeField(5), 2, 2), b(PrimeField(7), 2, 2);
  try {
    auto c = a * b;
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
  }
  Matrix<PrimeField> bad(PrimeField(5), 1, 1);
  bad(0, 0) = 9;
  EXPECT_THROW(rank_kernel(bad), Error);
}

TEST(Matrix, ShapeHelpers) {
  PrimeField f(3);
  auto m = Matrix<PrimeField>::from_rows(f, {{1, 2, 0}, {0, 1, 1}});
  EXPECT_EQ(m.transpose().transpose(), m);
  EXPECT_EQ(hconcat(m, m).cols(), 6u);
  EXPECT_EQ(vconcat(m, m).rows(), 4u);
  std::vector<std::size_t> idx{2, 0};
  EXPECT_EQ(m.select_columns(idx), Matrix<PrimeField>::from_rows(f, {{0, 1}, {1, 0}}));
  EXPECT_EQ(Matrix<PrimeField>::from_columns(f, 2, {m.column(0), m.column(1), m.column(2)}), m);
}

TEST(ProjectivePoints, CountOrderAndNormalization) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    PrimeField f(p);
    for (std::size_t dim = 1; dim <= 4; ++dim) {
      auto pts = projective_points(f, dim);
      EXPECT_EQ(pts.size(), projective_point_count(p, dim));
      std::uint64_t pw = 1;
      for (std::size_t i = 0; i < dim; ++i) pw *= p;
      EXPECT_EQ(pts.size(), (pw - 1) / (p - 1));
      EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
      EXPECT_EQ(std::set<Vec<PrimeField>>(pts.begin(), pts.end()).size(), pts.size());
      for (auto v : pts) {
        auto w = v;
        ASSERT_TRUE(normalize_projective(f, w));
        EXPECT_EQ(w, v);
      }
    }
  }
}

TEST(ProjectivePoints, NormalizeScalesFirstNonzeroToOne) {
  PrimeField f(7);
  Vec<PrimeField> v{0, 3, 6};
  ASSERT_TRUE(normalize_projective(f, v));
  EXPECT_EQ(v, (Vec<PrimeField>{0, 1, 2}));
  Vec<PrimeField> z{0, 0};
  EXPECT_FALSE(normalize_projective(f, z));
}

}  // namespace
}  // namespace stb
