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

// End-to-end checks: build the tautological Steiner presentation of a scene,
// scan its Valles locus over several primes and compare it with the image of
// X; recover the B-embedding from unique trivial quotients; the
// Dolgachev-Kapranov presentation of a point set and its RNC criterion.
//
// "X is recovered" is checked as exact equality of F_p-point sets, prime by
// prime.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stb/exactfield.hpp"
#include "stb/koszul.hpp"
#include "stb/scenes.hpp"
#include "stb/steiner.hpp"

namespace stb {

enum class Verdict { Equal, Superset, Invalid, Mismatch };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "EQUAL";
    case Verdict::Superset: return "SUPERSET";
    case Verdict::Invalid: return "INVALID";
    case Verdict::Mismatch: return "MISMATCH";
  }
  return "UNKNOWN";
}

enum class H1Policy { Enforce, Skip };

/// Whether H^1(B - A) = 0, when the scene models it.
inline std::optional<bool> h1_vanishes(const Scene& s, Label b_label) {
  if (s.kind() == SceneKind::MonomialVariety || s.kind() == SceneKind::PointSet) return std::nullopt;
  try {
    return cohomology_dim(s, b_label - polarization(s), 1) == 0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnsupportedLabel) throw;
    return std::nullopt;
  }
}

/// H^0(B - A) (x) V -> H^0(B). With H1Policy::Enforce, H^1(B - A) must vanish
/// wherever the scene models cohomology; Skip builds the multiplication map
/// regardless (B = K + nA on a curve has H^1(B - A) = H^1(K) != 0).
template <ExactField F>
SteinerPresentation<F> tautological_presentation(const Scene& s, const F& f, Label b_label,
                                                 H1Policy policy = H1Policy::Enforce) {
  if (s.kind() == SceneKind::PointSet)
    throw Error(ErrorCode::UnsupportedScene, "point sets use the Dolgachev-Kapranov presentation");
  const Label u1 = b_label - polarization(s);
  if (policy == H1Policy::Enforce && s.kind() != SceneKind::MonomialVariety && cohomology_dim(s, f, u1, 1) != 0)
    throw Error(ErrorCode::HypothesisFailed, "H^1(B - A) does not vanish");
  const std::size_t a = section_space(s, f, u1).dim();
  const std::size_t b = section_space(s, f, b_label).dim();
  return make_presentation(series_map(s, f, u1), a, series_dim(s), b);
}

/// H^i(B - (i+1)A) = 0 for 1 <= i <= n.
inline bool vanishing_check(const Scene& s, Label b_label) {
  if (s.kind() == SceneKind::MonomialVariety || s.kind() == SceneKind::PointSet)
    throw Error(ErrorCode::UnsupportedScene, "vanishing check needs cohomology");
  const int n = dimension(s);
  const Label a = polarization(s);
  for (int i = 1; i <= n; ++i)
    if (cohomology_dim(s, b_label - (i + 1) * a, i) != 0) return false;
  return true;
}

struct RecoveryRow {
  Vec<PrimeField> params;
  Vec<PrimeField> lambda;
  Vec<PrimeField> recovered;
  Vec<PrimeField> expected;
  bool match = false;
};

struct RecoveryTable {
  std::uint32_t prime = 0;
  std::vector<RecoveryRow> rows;
  bool all_match() const {
    return std::all_of(rows.begin(), rows.end(), [](const RecoveryRow& r) { return r.match; });
  }
};

/// For each x in X(F_p): the functional cut out by the unique trivial
/// quotient at phi_V(x), against phi_B(x).
inline RecoveryTable recover_embedding_check(const Scene& s, Label b_label, std::uint32_t prime) {
  PrimeField f(prime);
  auto P = tautological_presentation(s, f, b_label, H1Policy::Skip);
  RecoveryTable out{prime, {}};
  for (const auto& x : enumerate_points(s, f)) {
    RecoveryRow row;
    row.params = x.params;
    row.lambda = x.image;
    row.recovered = recover_section_point(P, std::span<const std::uint32_t>(x.image));
    row.expected = evaluation_functional(s, f, std::span<const std::uint32_t>(x.params), b_label);
    row.match = row.recovered == row.expected;
    out.rows.push_back(std::move(row));
  }
  return out;
}

struct PrimeOutcome {
  std::uint32_t prime = 0;
  Verdict verdict = Verdict::Invalid;
  std::uint64_t scanned = 0;
  std::size_t image_points = 0;
  std::size_t unstable_points = 0;
  std::size_t singular_points = 0;  // enumerated points failing the Jacobian check
  std::vector<Vec<PrimeField>> extra;    // unstable, not in the image of X
  std::vector<Vec<PrimeField>> missing;  // in the image of X, not unstable
  std::optional<std::pair<Vec<PrimeField>, Vec<PrimeField>>> invalid_witness;
  std::optional<RecoveryTable> recovery;
  std::string recovery_error;
};

struct TorelliReport {
  std::string scene_id;
  Label b_label;
  std::vector<std::uint32_t> primes;
  std::size_t a = 0, m = 0, b = 0;
  std::optional<bool> vanishing;  // unset where cohomology is not modelled
  std::optional<bool> h1_vanishes;  // H^1(B - A) = 0
  std::vector<PrimeOutcome> outcomes;
  std::string consensus;  // common verdict, or DISAGREE
  std::vector<std::uint32_t> bad_primes;  // primes off the majority verdict
};

namespace detail {

inline Verdict compare_sets(const std::set<Vec<PrimeField>>& image, const std::set<Vec<PrimeField>>& unstable,
                            std::vector<Vec<PrimeField>>& extra, std::vector<Vec<PrimeField>>& missing) {
  std::set_difference(unstable.begin(), unstable.end(), image.begin(), image.end(), std::back_inserter(extra));
  std::set_difference(image.begin(), image.end(), unstable.begin(), unstable.end(), std::back_inserter(missing));
  if (!missing.empty()) return Verdict::Mismatch;
  return extra.empty() ? Verdict::Equal : Verdict::Superset;
}

template <class Outcomes>
std::string consensus_of(const Outcomes& outcomes) {
  if (outcomes.empty()) return "NONE";
  for (const auto& o : outcomes)
    if (o.verdict != outcomes.front().verdict) return "DISAGREE";
  return std::string(verdict_name(outcomes.front().verdict));
}

template <class Outcomes>
std::vector<std::uint32_t> off_majority(const Outcomes& outcomes) {
  std::map<Verdict, std::size_t> votes;
  for (const auto& o : outcomes) ++votes[o.verdict];
  Verdict majority = Verdict::Equal;
  std::size_t best = 0;
  for (const auto& o : outcomes)
    if (votes[o.verdict] > best) {
      best = votes[o.verdict];
      majority = o.verdict;
    }
  std::vector<std::uint32_t> out;
  for (const auto& o : outcomes)
    if (o.verdict != majority) out.push_back(o.prime);
  return out;
}

}  // namespace detail

inline TorelliReport torelli_check(const Scene& s, Label b_label, const std::vector<std::uint32_t>& primes,
                                   bool with_recovery = true) {
  TorelliReport rep;
  rep.scene_id = s.id;
  rep.b_label = b_label;
  rep.primes = primes;
  rep.h1_vanishes = h1_vanishes(s, b_label);
  if (s.kind() != SceneKind::MonomialVariety && s.kind() != SceneKind::PointSet) {
    try {
      rep.vanishing = vanishing_check(s, b_label);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedLabel) throw;
    }
  }
  for (auto p : primes) {
    PrimeField f(p);
    auto P = tautological_presentation(s, f, b_label, H1Policy::Skip);
    rep.a = P.a;
    rep.m = P.m;
    rep.b = P.b;
    PrimeOutcome o;
    o.prime = p;
    auto validity = validate_presentation(P);
    if (!validity.valid) {
      o.verdict = Verdict::Invalid;
      o.invalid_witness = validity.witness;
      rep.outcomes.push_back(std::move(o));
      continue;
    }
    auto points = enumerate_points(s, f);
    std::set<Vec<PrimeField>> image;
    for (const auto& x : points) {
      image.insert(x.image);
      if (!x.smooth) ++o.singular_points;
    }
    auto valles = valles_locus(P);
    std::set<Vec<PrimeField>> unstable;
    for (const auto& e : valles.unstable) unstable.insert(e.lambda);
    o.scanned = valles.scanned;
    o.image_points = image.size();
    o.unstable_points = unstable.size();
    o.verdict = detail::compare_sets(image, unstable, o.extra, o.missing);
    if (with_recovery && o.verdict == Verdict::Equal) {
      try {
        o.recovery = recover_embedding_check(s, b_label, p);
      } catch (const Error& e) {
        o.recovery_error = std::string(e.name());
      }
    }
    rep.outcomes.push_back(std::move(o));
  }
  rep.consensus = detail::consensus_of(rep.outcomes);
  rep.bad_primes = detail::off_majority(rep.outcomes);
  return rep;
}

struct ScrollInvariance {
  bool identical = false;
  std::size_t a = 0, m = 0, b = 0;
  Label b_label;
  std::uint32_t prime = 0;
  std::size_t unstable_points = 0;
  std::size_t union_points = 0;  // image points of both curves
  bool union_contained = false;  // both curves inside the Valles locus of the first
};

/// Compares the tautological presentations of two curves of the same class
/// on the same scroll for B = K_X + c*A, and checks both curves' F_p points
/// against the Valles locus.
inline ScrollInvariance scroll_invariance(const Scene& x1, const Scene& x2, int c = 1, std::uint32_t prime = 5) {
  if (x1.kind() != SceneKind::ScrollCurve || x2.kind() != SceneKind::ScrollCurve)
    throw Error(ErrorCode::UnsupportedScene, "scroll invariance compares two scroll curves");
  const auto& s1 = x1.as<ScrollCurve>();
  const auto& s2 = x2.as<ScrollCurve>();
  if (s1.a != s2.a || s1.b != s2.b || s1.d != s2.d || s1.e != s2.e)
    throw Error(ErrorCode::ClassMismatch, "curves differ in scroll type or class");
  PrimeField f(prime);
  ScrollInvariance out;
  out.b_label = canonical_label(x1) + c * polarization(x1);
  out.prime = prime;
  auto p1 = tautological_presentation(x1, f, out.b_label, H1Policy::Skip);
  auto p2 = tautological_presentation(x2, f, out.b_label, H1Policy::Skip);
  out.identical = p1.a == p2.a && p1.m == p2.m && p1.b == p2.b && p1.tensor == p2.tensor;
  out.a = p1.a;
  out.m = p1.m;
  out.b = p1.b;
  std::set<Vec<PrimeField>> unstable, images;
  for (const auto& e : valles_locus(p1).unstable) unstable.insert(e.lambda);
  for (const auto* x : {&x1, &x2})
    for (const auto& r : enumerate_points(*x, f)) images.insert(r.image);
  out.unstable_points = unstable.size();
  out.union_points = images.size();
  out.union_contained = std::includes(unstable.begin(), unstable.end(), images.begin(), images.end());
  return out;
}

// ---------------------------------------------------------------------------
// Point sets

template <ExactField F>
struct DkPresentation {
  SteinerPresentation<F> presentation;
  bool degenerate = false;  // d = r + 1: U1 = 0
};

/// H^1(I(1))^* (x) V -> H^1(I)^* for points at fixed representatives.
/// H^1(I(k)) = F^d / eval(S_k); U1 = ann(eval(S_1)), U0 = ann(constants),
/// and mu(phi (x) x_j) = (phi_i * x_j(p_i))_i.
template <ExactField F>
DkPresentation<F> dk_presentation(const F& f, const std::vector<Vec<F>>& points) {
  if (points.empty()) throw Error(ErrorCode::NotGeneralPosition, "no points");
  const std::size_t nv = points.front().size();
  const std::size_t d = points.size();
  if (d < nv || !linear_general_position(f, points))
    throw Error(ErrorCode::NotGeneralPosition, "need d >= r+1 points in linear general position");
  Matrix<F> eval1t(f, nv, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < nv; ++j) eval1t(j, i) = points[i][j];
  auto u1 = rank_kernel(eval1t).kernel;  // d - r - 1 vectors
  // U0 = {psi : sum psi_i = 0}; canonical basis has free coordinates 1..d-1.
  const std::size_t a = u1.size(), b = d - 1;
  Matrix<F> t(f, b, a * nv);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < nv; ++j)
      for (std::size_t k = 1; k < d; ++k) t(k - 1, i * nv + j) = f.mul(u1[i][k], points[k][j]);
  return {make_presentation(std::move(t), a, nv, b), a == 0};
}

struct DkOutcome {
  std::uint32_t prime = 0;
  Verdict verdict = Verdict::Invalid;
  bool degenerate = false;
  bool contained = false;  // X inside Valles
  std::size_t k_dim = 0;   // dim K_{r-2,2}(P^r, I; V)
  bool rnc_flag = false;
  bool implication_ok = true;  // SUPERSET implies rnc_flag
  std::vector<Vec<PrimeField>> extra;
  VallesReport<PrimeField> valles;
};

struct DkReport {
  std::string scene_id;
  std::size_t a = 0, m = 0, b = 0;
  std::vector<DkOutcome> outcomes;
  std::string consensus;
  std::vector<std::uint32_t> bad_primes;
  std::optional<std::uint64_t> seed;
};

inline std::vector<Vec<PrimeField>> reduce_points(const PrimeField& f, const std::vector<std::vector<Rational>>& pts) {
  std::vector<Vec<PrimeField>> out;
  std::set<Vec<PrimeField>> seen;
  for (const auto& p : pts) {
    auto v = detail::convert(f, p);
    if (!normalize_projective(f, v) || !seen.insert(v).second)
      throw Error(ErrorCode::BadPrime, "points collide or vanish modulo " + std::to_string(f.p()));
    out.push_back(std::move(v));
  }
  return out;
}

/// Points are used at the given representatives (not normalized) when
/// building the presentation; only the image set is normalized.
inline DkReport dk_check(const Scene& s, const std::vector<std::uint32_t>& primes) {
  if (s.kind() != SceneKind::PointSet) throw Error(ErrorCode::UnsupportedScene, "dk needs a point set");
  const auto& pts = s.as<PointSet>().points;
  DkReport rep;
  rep.scene_id = s.id;
  for (auto p : primes) {
    PrimeField f(p);
    auto normalized = reduce_points(f, pts);
    std::vector<Vec<PrimeField>> reps;
    for (const auto& q : pts) reps.push_back(detail::convert(f, q));
    auto dk = dk_presentation(f, reps);
    rep.a = dk.presentation.a;
    rep.m = dk.presentation.m;
    rep.b = dk.presentation.b;
    DkOutcome o;
    o.prime = p;
    o.degenerate = dk.degenerate;
    auto validity = validate_presentation(dk.presentation);
    auto green = green_points_test(f, normalized);
    o.k_dim = green.dim;
    o.rnc_flag = green.on_rnc;
    if (!validity.valid) {
      o.verdict = Verdict::Invalid;
      rep.outcomes.push_back(std::move(o));
      continue;
    }
    o.valles = valles_locus(dk.presentation);
    std::set<Vec<PrimeField>> image(normalized.begin(), normalized.end()), unstable;
    for (const auto& e : o.valles.unstable) unstable.insert(e.lambda);
    std::vector<Vec<PrimeField>> missing;
    o.verdict = detail::compare_sets(image, unstable, o.extra, missing);
    o.contained = missing.empty();
    o.implication_ok = o.verdict != Verdict::Superset || o.rnc_flag;
    rep.outcomes.push_back(std::move(o));
  }
  rep.consensus = detail::consensus_of(rep.outcomes);
  rep.bad_primes = detail::off_majority(rep.outcomes);
  return rep;
}

struct RescalingOutcome {
  bool invariant = false;
  DkReport original;
  DkReport rescaled;
};

inline RescalingOutcome rescaling_invariance(const Scene& s, const std::vector<Rational>& scaling,
                                             const std::vector<std::uint32_t>& primes) {
  if (s.kind() != SceneKind::PointSet) throw Error(ErrorCode::UnsupportedScene, "rescaling needs a point set");
  auto ps = s.as<PointSet>();
  if (scaling.size() != ps.points.size()) throw Error(ErrorCode::ShapeMismatch, "one scale per point");
  for (std::size_t i = 0; i < scaling.size(); ++i) {
    if (scaling[i] == 0) throw Error(ErrorCode::ZeroScale, "scale factor for point " + std::to_string(i) + " is 0");
    for (auto& c : ps.points[i]) c *= scaling[i];
  }
  Scene scaled = build_scene(ps, s.id + "-rescaled");
  RescalingOutcome out{true, dk_check(s, primes), dk_check(scaled, primes)};
  for (std::size_t k = 0; k < primes.size(); ++k) {
    const auto& x = out.original.outcomes[k];
    const auto& y = out.rescaled.outcomes[k];
    std::vector<Vec<PrimeField>> lx, ly;
    for (const auto& e : x.valles.unstable) lx.push_back(e.lambda);
    for (const auto& e : y.valles.unstable) ly.push_back(e.lambda);
    if (x.verdict != y.verdict || lx != ly || x.rnc_flag != y.rnc_flag) out.invariant = false;
  }
  return out;
}

/// Points nu_r(s, t) = (s^r, s^{r-1} t, ..., t^r) on the rational normal curve.
inline std::vector<std::vector<Rational>> rational_normal_curve_points(int r,
                                                                       const std::vector<std::pair<int, int>>& params) {
  std::vector<std::vector<Rational>> out;
  for (auto [s, t] : params) {
    std::vector<Rational> pt;
    for (int k = r; k >= 0; --k) pt.push_back(boost::multiprecision::pow(BigInt(s), k) *
                                              boost::multiprecision::pow(BigInt(t), r - k));
    out.push_back(std::move(pt));
  }
  return out;
}

struct GeneratedPoints {
  std::vector<std::vector<Rational>> points;
  std::uint64_t seed = 0;  // seed that produced the accepted configuration
  unsigned attempts = 0;
};

/// Seeded random points of P^r(F_p) in linear general position whose
/// K_{r-2,2} certifies the requested side of the RNC criterion. Points are
/// drawn one at a time and a draw breaking general position is discarded.
/// Retries with seed, seed + 1, ... and records the seed that succeeded.
inline GeneratedPoints random_general_points(int r, std::size_t d, std::uint32_t prime, std::uint64_t seed,
                                             bool want_on_rnc = false, unsigned max_attempts = 1000) {
  PrimeField f(prime);
  for (unsigned attempt = 0; attempt < max_attempts; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    std::vector<Vec<PrimeField>> pts;
    unsigned draws = 0;
    while (pts.size() < d && draws < 100 * d) {
      ++draws;
      Vec<PrimeField> v(static_cast<std::size_t>(r + 1));
      for (auto& c : v) c = static_cast<std::uint32_t>(rng() % prime);
      if (!normalize_projective(f, v)) continue;
      pts.push_back(std::move(v));
      if (!linear_general_position(f, pts)) pts.pop_back();
    }
    if (pts.size() < d || green_points_test(f, pts).on_rnc != want_on_rnc) continue;
    GeneratedPoints out{{}, seed + attempt, attempt + 1};
    for (const auto& v : pts) out.points.push_back(std::vector<Rational>(v.begin(), v.end()));
    return out;
  }
  throw Error(ErrorCode::NotGeneralPosition, "no certified configuration within the attempt budget");
}

/// im(mu restricted to U1 (x) W_x) against the sections of B vanishing at x.
struct BpfImageReport {
  std::size_t image_rank = 0;
  std::size_t target_dim = 0;
  std::size_t joint_rank = 0;
  bool equal = false;
};

inline BpfImageReport bpf_image_check(const Scene& s, Label b_label, std::span<const std::uint32_t> params,
                                      std::uint32_t prime) {
  PrimeField f(prime);
  auto P = tautological_presentation(s, f, b_label, H1Policy::Skip);
  auto a_space = section_space(s, f, polarization(s));
  auto lambda = detail::series_values(s, f, a_space, series_basis(s, f), params);
  if (!normalize_projective(f, lambda)) throw Error(ErrorCode::ZeroEvaluation, "V vanishes at the point");
  auto ev = evaluate_sections(f, section_space(s, f, b_label), params);
  if (std::all_of(ev.begin(), ev.end(), [](auto v) { return v == 0; }))
    throw Error(ErrorCode::ZeroEvaluation, "B vanishes at the point");
  Matrix<PrimeField> evrow(f, 1, ev.size());
  for (std::size_t k = 0; k < ev.size(); ++k) evrow(0, k) = ev[k];
  Matrix<PrimeField> target = kernel_matrix(evrow);
  Matrix<PrimeField> image = restricted_tensor(P, std::span<const std::uint32_t>(lambda));
  BpfImageReport out;
  out.image_rank = rank(image);
  out.target_dim = target.cols();
  out.joint_rank = rank(hconcat(image, target));
  out.equal = out.image_rank == out.target_dim && out.joint_rank == out.target_dim;
  return out;
}

}  // namespace stb
