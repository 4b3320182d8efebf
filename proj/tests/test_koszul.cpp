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

#include "stb/koszul.hpp"
#include "stb/torelli.hpp"
#include "support.hpp"

namespace stb {
namespace {

using testing::Gen;
using PF = PrimeField;

template <ExactField F>
Matrix<F> full(const Scene& s, const F& f) {
  return Matrix<F>::identity(f, series_dim(s));
}

Matrix<PF> random_subspace(Gen& g, const PF& f, std::size_t m, std::size_t k) {
  while (true) {
    auto b = g.matrix(f, m, k);
    if (rank(b) == k) return b;
  }
}

TEST(Exterior, RankExamples) {
  for (std::size_t i = 0; i < 5; ++i) {
    std::vector<std::size_t> t{i};
    EXPECT_EQ(exterior_rank(5, t), i);
  }
  std::vector<std::size_t> t01{0, 1}, t02{0, 2}, t12{1, 2};
  EXPECT_EQ(exterior_rank(3, t01), 0u);
  EXPECT_EQ(exterior_rank(3, t02), 1u);
  EXPECT_EQ(exterior_rank(3, t12), 2u);
  std::vector<std::size_t> bad{2, 1};
  EXPECT_THROW(exterior_rank(3, bad), Error);
  std::vector<std::size_t> out_of_range{0, 3};
  EXPECT_THROW(exterior_rank(3, out_of_range), Error);
  EXPECT_THROW(exterior_unrank(3, 2, 3), Error);
}

TEST(Exterior, UnrankInvertsRankExhaustively) {
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t p = 0; p <= n; ++p) {
      std::vector<std::size_t> prev;
      for (std::size_t r = 0; r < binomial(n, p); ++r) {
        auto t = exterior_unrank(n, p, r);
        ASSERT_EQ(t.size(), p);
        EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
        EXPECT_EQ(std::adjacent_find(t.begin(), t.end()), t.end());
        EXPECT_EQ(exterior_rank(n, t), r);
        if (r > 0) {
          EXPECT_LT(prev, t);
        }
        prev = t;
      }
    }
}

TEST(Differential, DegreeOneIsMultiplication) {
  PF f(7);
  auto s = testing::twisted_cubic();
  auto w = scene_window(s, f, Label{0, 0}, full(s, f), 0, 2);
  EXPECT_EQ(koszul_differential(w, 1, 1), w.action(1));
  EXPECT_THROW(koszul_differential(w, 1, 2), Error);
}

TEST(Differential, SquaresToZeroOnRandomWindows) {
  Gen g(2024);
  PF f(7);
  std::vector<Scene> scenes{testing::twisted_cubic(), testing::p1_series(4), testing::plane_quartic(1, 2, 3),
                            testing::ci_three_quadrics(), testing::scroll_curve_a()};
  for (int trial = 0; trial < 50; ++trial) {
    const Scene& s = scenes[g.below(scenes.size())];
    const std::size_t m = series_dim(s);
    auto u = random_subspace(g, f, m, 2 + g.below(m - 1));
    Label n = s.kind() == SceneKind::ScrollCurve ? Label{0, g.between(0, 1)} : Label{g.between(-1, 1), 0};
    int lo = g.between(-1, 1);
    auto w = scene_window(s, f, n, u, lo, lo + 2);
    for (int p = 2; p <= static_cast<int>(u.cols()); ++p) {
      auto outer = koszul_differential(w, p - 1, lo + 1);
      auto inner = koszul_differential(w, p, lo);
      EXPECT_TRUE((outer * inner).is_zero()) << s.id << " p=" << p;
    }
  }
}

TEST(Differential, TwistedCubicWedgeTwoRank) {
  RationalField q;
  auto s = testing::twisted_cubic();
  auto w = scene_window(s, q, Label{0, 0}, full(s, q), 0, 1);
  auto d = koszul_differential(w, 2, 0);
  EXPECT_EQ(d.rows(), 16u);
  EXPECT_EQ(d.cols(), 6u);
  EXPECT_EQ(rank(d), 6u);
}

TEST(KoszulDim, TwistedCubicValues) {
  RationalField q;
  auto s = testing::twisted_cubic();
  for (int p = 1; p <= 3; ++p) EXPECT_EQ(scene_koszul_dim(s, q, Label{0, 0}, full(s, q), p, 0).dim, 0u);
  auto k11 = scene_koszul_dim(s, q, Label{0, 0}, full(s, q), 1, 1);
  EXPECT_EQ(k11.dim, 3u);
  EXPECT_EQ(k11.middle, 16u);
  EXPECT_EQ(k11.rank_out, 7u);
  EXPECT_EQ(k11.rank_in, 6u);
  EXPECT_EQ(scene_koszul_dim(s, q, Label{0, 0}, full(s, q), 0, 1).dim, 0u);
}

TEST(KoszulDim, VanishingInDegreeZero) {
  PF f(11);
  Gen g(7);
  for (auto s : {testing::twisted_cubic(), testing::plane_quartic(1, 1, 1), testing::ci_three_quadrics(),
                 testing::scroll_curve_b(), testing::p1_series(5)}) {
    const std::size_t m = series_dim(s);
    for (int trial = 0; trial < 3; ++trial) {
      auto u = trial == 0 ? full(s, f) : random_subspace(g, f, m, 2 + g.below(m - 1));
      for (int p = 1; p <= static_cast<int>(u.cols()); ++p)
        EXPECT_EQ(scene_koszul_dim(s, f, Label{0, 0}, u, p, 0).dim, 0u) << s.id << " p=" << p;
    }
  }
}

TEST(KoszulDim, InvariantUnderChangeOfBasis) {
  PF f(7);
  Gen g(31);
  for (auto s : {testing::twisted_cubic(), testing::plane_quartic(1, 2, 3), testing::scroll_curve_a()}) {
    const std::size_t m = series_dim(s);
    for (int trial = 0; trial < 4; ++trial) {
      std::size_t k = 2 + g.below(m - 1);
      auto u = random_subspace(g, f, m, k);
      auto moved = u * g.invertible(f, k);
      int p = g.between(0, static_cast<int>(k)), q = g.between(0, 2);
      EXPECT_EQ(scene_koszul_dim(s, f, Label{0, 0}, u, p, q).dim, scene_koszul_dim(s, f, Label{0, 0}, moved, p, q).dim);
    }
  }
}

TEST(KoszulDim, HyperplaneLongExactSequence) {
  PF f(5);
  int premises = 0;
  for (auto s : {testing::twisted_cubic(), testing::p1_series(4), testing::plane_quartic(1, 1, 1),
                 testing::scroll_curve_a()}) {
    const std::size_t m = series_dim(s);
    auto v = full(s, f);
    for (const auto& lambda : projective_points(f, m)) {
      auto w = hyperplane_basis(f, std::span<const std::uint32_t>(lambda));
      for (int p = 0; p + 1 < static_cast<int>(m); ++p) {
        if (scene_koszul_dim(s, f, Label{0, 0}, w, p, 0).dim != 0) continue;
        if (scene_koszul_dim(s, f, Label{0, 0}, w, p, 1).dim == 0) continue;
        ++premises;
        EXPECT_NE(scene_koszul_dim(s, f, Label{0, 0}, v, p, 1).dim, 0u) << s.id << " p=" << p;
      }
    }
  }
  EXPECT_GT(premises, 0);
}

TEST(Duality, TwistedCubicExamples) {
  RationalField q;
  auto s = testing::twisted_cubic();
  auto d = duality_check(s, q, Label{0, 0}, full(s, q), 1, 1);
  EXPECT_TRUE(d.hypotheses_ok);
  EXPECT_EQ(d.lhs.dim, 3u);
  EXPECT_EQ(d.rhs.dim, 3u);
  EXPECT_EQ(d.rhs.p, 1);
  EXPECT_EQ(d.rhs.q, 1);
  auto d21 = duality_check(s, q, Label{0, 0}, full(s, q), 2, 1);
  EXPECT_EQ(d21.rhs.p, 0);
  EXPECT_EQ(d21.lhs.dim, d21.rhs.dim);
  auto ps = build_scene(PointSet{3, testing::six_general_points()});
  EXPECT_THROW(duality_check(ps, q, Label{0, 0}, Matrix<RationalField>::identity(q, 4), 1, 1), Error);
}

TEST(Duality, FullWindowAcrossScenes) {
  PF f(7);
  Gen g(12);
  for (auto s : {testing::twisted_cubic(), testing::p1_series(2), testing::plane_quartic(1, 2, 3),
                 testing::ci_three_quadrics(), testing::quadric_surface()}) {
    const std::size_t m = series_dim(s);
    for (auto u : {full(s, f), random_subspace(g, f, m, m - 1)})
      for (int n = -1; n <= 1; ++n)
        for (int p = 0; p <= static_cast<int>(u.cols()); ++p)
          for (int q = 0; q <= 2; ++q) {
            auto d = duality_check(s, f, Label{n, 0}, u, p, q);
            EXPECT_TRUE(d.hypotheses_ok);
            EXPECT_EQ(d.lhs.dim, d.rhs.dim) << s.id << " N=" << n << " p=" << p << " q=" << q;
          }
  }
}

TEST(Green, Examples) {
  RationalField q;
  auto tc = green_kp1(testing::twisted_cubic(), q);
  EXPECT_EQ(tc.p, 1);
  EXPECT_EQ(tc.dim, 3u);
  EXPECT_TRUE(tc.on_minimal_degree);
  EXPECT_FALSE(tc.degree_hypothesis);

  auto ci = green_kp1(testing::ci_three_quadrics(), PF(5));
  EXPECT_EQ(ci.p, 2);
  EXPECT_EQ(ci.dim, 0u);
  EXPECT_FALSE(ci.on_minimal_degree);
  EXPECT_TRUE(ci.degree_hypothesis);

  auto sc = green_kp1(testing::scroll_curve_a(), PF(7));
  EXPECT_EQ(sc.p, 1);
  EXPECT_NE(sc.dim, 0u);
  EXPECT_TRUE(sc.on_minimal_degree);

  auto sub = build_scene(P1Series{3, {{1, 0, 0, 0}, {0, 0, 0, 1}}});
  EXPECT_THROW(green_kp1(sub, q), Error);
}

TEST(PointsetIdeal, Dimensions) {
  RationalField q;
  auto six = testing::six_general_points();
  auto w6 = pointset_ideal_window(q, six, 4, 0, 3);
  EXPECT_EQ(w6.dim(0), 0u);
  EXPECT_EQ(w6.dim(1), 0u);
  EXPECT_EQ(w6.dim(2), 4u);
  EXPECT_EQ(w6.dim(3), 14u);
  auto w7 = pointset_ideal_window(q, testing::seven_points_on_cubic(), 4, 1, 3);
  EXPECT_EQ(w7.dim(2), 3u);
  auto w0 = pointset_ideal_window(q, std::vector<Vec<RationalField>>{}, 4, 0, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(w0.dim(k), MonomialBasis(4, k).size());
  std::vector<Vec<RationalField>> dup{{1, 0, 0}, {2, 0, 0}};
  EXPECT_THROW(pointset_ideal_window(q, dup, 3, 0, 2), Error);
}

TEST(PointsetIdeal, DifferentialSquaresToZero) {
  PF f(11);
  auto pts = reduce_points(f, testing::seven_points_on_cubic());
  auto w = pointset_ideal_window(f, pts, 4, 1, 3);
  for (int p = 2; p <= 4; ++p) EXPECT_TRUE((koszul_differential(w, p - 1, 2) * koszul_differential(w, p, 1)).is_zero());
}

TEST(GreenPoints, Examples) {
  RationalField q;
  auto cubic = green_points_test(q, testing::seven_points_on_cubic());
  EXPECT_EQ(cubic.dim, 2u);
  EXPECT_TRUE(cubic.on_rnc);
  EXPECT_TRUE(green_points_test(q, testing::six_general_points()).on_rnc);

  auto gen = random_general_points(3, 7, 11, 1);
  auto off = green_points_test(PF(11), reduce_points(PF(11), gen.points));
  EXPECT_EQ(off.dim, 0u);
  EXPECT_FALSE(off.on_rnc);

  std::vector<Vec<RationalField>> collinear{{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  EXPECT_THROW(green_points_test(q, collinear), Error);
}

TEST(GreenPoints, OnRationalNormalCurvesByConstruction) {
  PF f(13);
  for (int r = 2; r <= 4; ++r) {
    std::vector<std::uint32_t> params;
    for (std::uint32_t t = 0; t < static_cast<std::uint32_t>(r + 4); ++t) params.push_back(t);
    std::vector<Vec<PF>> pts;
    for (auto t : params) {
      Vec<PF> v;
      std::uint32_t x = 1;
      for (int i = 0; i <= r; ++i) {
        v.push_back(x);
        x = f.mul(x, t);
      }
      pts.push_back(v);
    }
    auto res = green_points_test(f, pts);
    EXPECT_TRUE(res.on_rnc) << r;
  }
}

}  // namespace
}  // namespace stb
