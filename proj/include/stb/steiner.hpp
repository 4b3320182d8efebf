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

// Steiner presentations mu : U1 (x) V -> U0, the unstable-hyperplane test and
// its dual form, the Valles scan over F_p, and recovery of the point of
// P(U0) cut out by a unique trivial quotient.
//
// Column t = i * m + j of the tensor is mu(u1_i (x) v_j).

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "stb/exactfield.hpp"

namespace stb {

enum class Validity { Assumed, Verified, Invalid };

template <ExactField F>
struct SteinerPresentation {
  std::size_t a = 0;  // dim U1
  std::size_t m = 0;  // dim V
  std::size_t b = 0;  // dim U0
  Matrix<F> tensor;   // b x (a * m)
  Validity validity = Validity::Assumed;
  std::vector<std::uint32_t> verified_primes;

  long long bundle_rank() const { return static_cast<long long>(b) - static_cast<long long>(a); }
  const F& field() const { return tensor.field(); }
};

template <ExactField F>
SteinerPresentation<F> make_presentation(Matrix<F> tensor, std::size_t a, std::size_t m, std::size_t b) {
  if (tensor.rows() != b || tensor.cols() != a * m) {
    throw Error(ErrorCode::ShapeMismatch, "tensor is " + std::to_string(tensor.rows()) + "x" +
                                              std::to_string(tensor.cols()) + ", expected " + std::to_string(b) +
                                              "x" + std::to_string(a * m));
  }
  return {a, m, b, std::move(tensor), Validity::Assumed, {}};
}

/// The b x a matrix of u1 |-> mu(u1 (x) v).
template <ExactField F>
Matrix<F> fiber_matrix(const SteinerPresentation<F>& P, std::span<const typename F::value_type> v) {
  const F& f = P.field();
  Matrix<F> out(f, P.b, P.a);
  for (std::size_t i = 0; i < P.a; ++i)
    for (std::size_t j = 0; j < P.m; ++j) {
      if (f.is_zero(v[j])) continue;
      for (std::size_t r = 0; r < P.b; ++r)
        out(r, i) = f.add(out(r, i), f.mul(v[j], P.tensor(r, i * P.m + j)));
    }
  return out;
}

template <ExactField F>
struct ValidityVerdict {
  bool valid = true;
  std::uint32_t prime = 0;
  std::optional<std::pair<Vec<F>, Vec<F>>> witness;  // (u1, v) with mu(u1 (x) v) = 0
};

/// Exhaustive check that mu(u1 (x) v) != 0 for all nonzero u1, v over F_p: for
/// each v in P(V)(F_p) the fiber matrix must be injective.
inline ValidityVerdict<PrimeField> validate_presentation(SteinerPresentation<PrimeField>& P) {
  ValidityVerdict<PrimeField> out;
  out.prime = P.field().p();
  for (const auto& v : projective_points(P.field(), P.m)) {
    auto rk = rank_kernel(fiber_matrix(P, std::span<const std::uint32_t>(v)));
    if (rk.rank < P.a) {
      auto u = rk.kernel.front();
      normalize_projective(P.field(), u);
      out.valid = false;
      out.witness = {std::move(u), v};
      break;
    }
  }
  if (out.valid) {
    if (P.validity != Validity::Invalid) P.validity = Validity::Verified;
    if (std::find(P.verified_primes.begin(), P.verified_primes.end(), out.prime) == P.verified_primes.end())
      P.verified_primes.push_back(out.prime);
  } else {
    P.validity = Validity::Invalid;
  }
  return out;
}

/// Canonical basis of the hyperplane ker(lambda) as an m x (m-1) matrix.
template <ExactField F>
Matrix<F> hyperplane_basis(const F& f, std::span<const typename F::value_type> lambda) {
  Matrix<F> row(f, 1, lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) row(0, j) = lambda[j];
  auto rk = rank_kernel(row);
  if (rk.rank == 0) throw Error(ErrorCode::ShapeMismatch, "lambda is zero");
  return Matrix<F>::from_columns(f, lambda.size(), rk.kernel);
}

/// mu restricted to U1 (x) W for W = ker(lambda): a b x (a (m-1)) matrix.
template <ExactField F>
Matrix<F> restricted_tensor(const SteinerPresentation<F>& P, std::span<const typename F::value_type> lambda) {
  if (lambda.size() != P.m) throw Error(ErrorCode::ShapeMismatch, "lambda has the wrong length");
  const F& f = P.field();
  Matrix<F> w = hyperplane_basis(f, lambda);
  const std::size_t mw = w.cols();
  Matrix<F> out(f, P.b, P.a * mw);
  for (std::size_t i = 0; i < P.a; ++i)
    for (std::size_t k = 0; k < mw; ++k)
      for (std::size_t j = 0; j < P.m; ++j) {
        if (f.is_zero(w(j, k))) continue;
        for (std::size_t r = 0; r < P.b; ++r)
          out(r, i * mw + k) = f.add(out(r, i * mw + k), f.mul(w(j, k), P.tensor(r, i * P.m + j)));
      }
  return out;
}

struct UnstableResult {
  bool unstable = false;
  std::size_t coker_dim = 0;
};

/// ker(lambda) is an unstable plane iff mu restricted to U1 (x) ker(lambda)
/// is not onto U0.
template <ExactField F>
UnstableResult unstable_test(const SteinerPresentation<F>& P, std::span<const typename F::value_type> lambda) {
  std::size_t coker = P.b - rank(restricted_tensor(P, lambda));
  return {coker > 0, coker};
}

template <ExactField F>
struct DualUnstableResult {
  bool unstable = false;
  std::size_t coker_dim = 0;
  std::optional<Vec<F>> witness;  // psi in U0*, normalized
};

/// Dual form: lambda is unstable iff some nonzero psi in U0* has
/// psi(mu(u (x) v)) = phi(u) lambda(v) for a phi in U1*. Solved directly as a
/// linear system in (psi, phi) without forming ker(lambda).
template <ExactField F>
DualUnstableResult<F> unstable_test_dual(const SteinerPresentation<F>& P,
                                         std::span<const typename F::value_type> lambda) {
  if (lambda.size() != P.m) throw Error(ErrorCode::ShapeMismatch, "lambda has the wrong length");
  const F& f = P.field();
  Matrix<F> sys(f, P.a * P.m, P.b + P.a);
  for (std::size_t i = 0; i < P.a; ++i)
    for (std::size_t j = 0; j < P.m; ++j) {
      std::size_t eq = i * P.m + j;
      for (std::size_t k = 0; k < P.b; ++k) sys(eq, k) = P.tensor(k, eq);
      sys(eq, P.b + i) = f.neg(lambda[j]);
    }
  auto rk = rank_kernel(sys);
  DualUnstableResult<F> out;
  out.coker_dim = rk.kernel.size();
  out.unstable = out.coker_dim > 0;
  if (out.unstable) {
    Vec<F> psi(rk.kernel.front().begin(), rk.kernel.front().begin() + static_cast<long>(P.b));
    normalize_projective(f, psi);
    out.witness = std::move(psi);
  }
  return out;
}

template <ExactField F>
struct VallesEntry {
  Vec<F> lambda;
  std::size_t coker = 0;
  bool operator==(const VallesEntry&) const = default;
};

template <ExactField F>
struct VallesReport {
  std::uint32_t prime = 0;
  std::uint64_t scanned = 0;
  std::vector<VallesEntry<F>> unstable;
  bool operator==(const VallesReport&) const = default;
};

/// Scans every point of P(V)(F_p) in canonical order. The scan is split into
/// contiguous blocks across `workers` threads (0 = hardware concurrency);
/// the report order does not depend on the split.
inline VallesReport<PrimeField> valles_locus(const SteinerPresentation<PrimeField>& P, unsigned workers = 0) {
  auto points = projective_points(P.field(), P.m);
  std::vector<std::size_t> coker(points.size(), 0);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, points.size() / 64)));
  auto scan = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k)
      coker[k] = unstable_test(P, std::span<const std::uint32_t>(points[k])).coker_dim;
  };
  if (workers <= 1) {
    scan(0, points.size());
  } else {
    std::vector<std::jthread> pool;
    std::size_t block = (points.size() + workers - 1) / workers;
    for (std::size_t lo = 0; lo < points.size(); lo += block)
      pool.emplace_back(scan, lo, std::min(points.size(), lo + block));
  }
  VallesReport<PrimeField> out;
  out.prime = P.field().p();
  out.scanned = points.size();
  for (std::size_t k = 0; k < points.size(); ++k)
    if (coker[k] > 0) out.unstable.push_back({std::move(points[k]), coker[k]});
  return out;
}

/// The functional psi on U0 (normalized) killing the image of U1 (x) ker(lambda).
template <ExactField F>
Vec<F> recover_section_point(const SteinerPresentation<F>& P, std::span<const typename F::value_type> lambda) {
  auto psi = left_kernel(restricted_tensor(P, lambda));
  if (psi.size() != 1) {
    throw Error(ErrorCode::NonUniqueQuotient,
                "cokernel has dimension " + std::to_string(psi.size()) + ", expected 1");
  }
  normalize_projective(P.field(), psi.front());
  return psi.front();
}

/// P (+) Q over a common V: U1 = U1_P + U1_Q, U0 = U0_P + U0_Q.
template <ExactField F>
SteinerPresentation<F> direct_sum(const SteinerPresentation<F>& P, const SteinerPresentation<F>& Q) {
  if (P.m != Q.m) throw Error(ErrorCode::ShapeMismatch, "direct sum needs a common V");
  Matrix<F> t(P.field(), P.b + Q.b, (P.a + Q.a) * P.m);
  for (std::size_t r = 0; r < P.b; ++r)
    for (std::size_t c = 0; c < P.a * P.m; ++c) t(r, c) = P.tensor(r, c);
  for (std::size_t r = 0; r < Q.b; ++r)
    for (std::size_t c = 0; c < Q.a * Q.m; ++c) t(P.b + r, P.a * P.m + c) = Q.tensor(r, c);
  return make_presentation(std::move(t), P.a + Q.a, P.m, P.b + Q.b);
}

}  // namespace stb
