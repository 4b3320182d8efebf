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

// Graded pieces of polynomial rings and of their quotients by homogeneous
// ideals, computed one degree at a time by linear algebra.
//
// Tensor ordering contract used across the library: the column for a pair
// (i, j) of a product A (x) B -> C sits at index i * dim(B) + j.

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "stb/exactfield.hpp"

namespace stb {

using Exponent = std::vector<int>;

inline Exponent add_exponents(const Exponent& a, const Exponent& b) {
  Exponent out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

/// Monomials of one degree in num_vars variables, ordered lexicographically
/// descending with the x_0 exponent most significant.
class MonomialBasis {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  MonomialBasis(std::size_t num_vars, int degree) : num_vars_(num_vars), degree_(degree) {
    if (num_vars == 0) throw Error(ErrorCode::ShapeMismatch, "monomial basis needs at least one variable");
    if (degree < 0) return;
    Exponent e(num_vars, 0);
    fill(e, 0, degree);
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
  }

  std::size_t num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Exponent>& monomials() const { return monomials_; }
  const Exponent& operator[](std::size_t i) const { return monomials_[i]; }

  std::size_t index_of(const Exponent& e) const {
    auto it = index_.find(e);
    return it == index_.end() ? npos : it->second;
  }

 private:
  void fill(Exponent& e, std::size_t var, int remaining) {
    if (var + 1 == num_vars_) {
      e[var] = remaining;
      monomials_.push_back(e);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = k;
      fill(e, var + 1, remaining - k);
    }
    e[var] = 0;
  }

  std::size_t num_vars_;
  int degree_;
  std::vector<Exponent> monomials_;
  std::map<Exponent, std::size_t> index_;
};

inline MonomialBasis monomial_basis(std::size_t num_vars, int degree) { return MonomialBasis(num_vars, degree); }

template <ExactField F>
typename F::value_type monomial_value(const F& f, const Exponent& e, std::span<const typename F::value_type> point) {
  auto v = f.one();
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) v = f.mul(v, point[i]);
  return v;
}

/// Value at `point` of the form with the given coefficients on `basis`.
template <ExactField F>
typename F::value_type evaluate_form(const F& f, const MonomialBasis& basis, std::span<const typename F::value_type> coeffs,
                                     std::span<const typename F::value_type> point) {
  auto acc = f.zero();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (f.is_zero(coeffs[i])) continue;
    acc = f.add(acc, f.mul(coeffs[i], monomial_value(f, basis[i], point)));
  }
  return acc;
}

/// d/dx_var of a dense form of degree basis.degree(), as a dense form of one
/// degree less.
template <ExactField F>
Vec<F> partial_derivative(const F& f, const MonomialBasis& basis, std::span<const typename F::value_type> coeffs,
                          std::size_t var) {
  MonomialBasis lower(basis.num_vars(), basis.degree() - 1);
  Vec<F> out(lower.size(), f.zero());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Exponent e = basis[i];
    if (e[var] == 0 || f.is_zero(coeffs[i])) continue;
    auto c = f.mul(coeffs[i], f.from_int(e[var]));
    --e[var];
    auto j = lower.index_of(e);
    out[j] = f.add(out[j], c);
  }
  return out;
}

/// Matrix of S_{d1} (x) S_{d2} -> S_{d1+d2}; column (i, j) holds m_i * m_j.
template <ExactField F>
Matrix<F> free_multiplication_tensor(const F& f, std::size_t num_vars, int d1, int d2) {
  MonomialBasis b1(num_vars, d1), b2(num_vars, d2), target(num_vars, d1 + d2);
  Matrix<F> m(f, target.size(), b1.size() * b2.size());
  for (std::size_t i = 0; i < b1.size(); ++i)
    for (std::size_t j = 0; j < b2.size(); ++j)
      m(target.index_of(add_exponents(b1[i], b2[j])), i * b2.size() + j) = f.one();
  return m;
}

/// A quotient W / R of a coordinate space W = F^ambient by the span R of a
/// set of relation vectors. The basis is the set of non-pivot coordinates of
/// the row-reduced relations; `reduction` projects W onto it along R.
template <ExactField F>
struct QuotientPiece {
  std::vector<std::size_t> basis;
  Matrix<F> reduction;  // basis.size() x ambient

  std::size_t dim() const { return basis.size(); }
  std::size_t ambient_dim() const { return reduction.cols(); }
};

template <ExactField F>
QuotientPiece<F> quotient_by_relations(const F& f, std::size_t ambient, const std::vector<Vec<F>>& relations) {
  std::vector<std::size_t> pivots;
  Matrix<F> rref(f, 0, ambient);
  if (!relations.empty()) {
    auto e = echelon(Matrix<F>::from_rows(f, relations));
    pivots = std::move(e.pivots);
    rref = std::move(e.rref);
  }
  std::vector<long> position(ambient, -1);
  std::vector<std::size_t> basis;
  {
    std::size_t k = 0;
    for (std::size_t c = 0; c < ambient; ++c) {
      if (k < pivots.size() && pivots[k] == c) {
        ++k;
        continue;
      }
      position[c] = static_cast<long>(basis.size());
      basis.push_back(c);
    }
  }
  Matrix<F> red(f, basis.size(), ambient);
  for (std::size_t c = 0; c < ambient; ++c)
    if (position[c] >= 0) red(static_cast<std::size_t>(position[c]), c) = f.one();
  for (std::size_t k = 0; k < pivots.size(); ++k)
    for (std::size_t b = 0; b < basis.size(); ++b) red(b, pivots[k]) = f.neg(rref(k, basis[b]));
  return {std::move(basis), std::move(red)};
}

/// S / I for S = F[x_0..x_{n-1}] and I generated by homogeneous forms given
/// as dense coefficient vectors on monomial_basis(num_vars, degree).
template <ExactField F>
class GradedQuotientRing {
 public:
  struct Generator {
    int degree;
    Vec<F> coefficients;
  };

  GradedQuotientRing(F field, std::size_t num_vars, std::vector<Generator> generators)
      : field_(std::move(field)), num_vars_(num_vars), generators_(std::move(generators)),
        cache_(std::make_shared<Cache>()) {
    for (const auto& g : generators_) {
      if (g.degree < 0 || g.coefficients.size() != MonomialBasis(num_vars_, g.degree).size())
        throw Error(ErrorCode::ShapeMismatch, "generator coefficient vector does not match its degree");
    }
  }

  const F& field() const { return field_; }
  std::size_t num_vars() const { return num_vars_; }
  const std::vector<Generator>& generators() const { return generators_; }

  /// Rows spanning I_k inside S_k (the generator multiples).
  std::vector<Vec<F>> ideal_span(int k) const {
    std::vector<Vec<F>> rows;
    if (k < 0) return rows;
    MonomialBasis target(num_vars_, k);
    for (const auto& g : generators_) {
      if (g.degree > k) continue;
      MonomialBasis gb(num_vars_, g.degree), shifts(num_vars_, k - g.degree);
      for (const auto& m : shifts.monomials()) {
        Vec<F> row(target.size(), field_.zero());
        for (std::size_t i = 0; i < gb.size(); ++i) {
          if (field_.is_zero(g.coefficients[i])) continue;
          row[target.index_of(add_exponents(gb[i], m))] = g.coefficients[i];
        }
        rows.push_back(std::move(row));
      }
    }
    return rows;
  }

  /// Basis monomials (indices into monomial_basis(num_vars, k)) and the
  /// reduction matrix of (S/I)_k. Negative k gives the zero space.
  const QuotientPiece<F>& piece(int k) const {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->pieces.find(k);
    if (it != cache_->pieces.end()) return it->second;
    std::size_t ambient = k < 0 ? 0 : MonomialBasis(num_vars_, k).size();
    return cache_->pieces.emplace(k, quotient_by_relations(field_, ambient, ideal_span(k))).first->second;
  }

  std::size_t dim(int k) const { return piece(k).dim(); }

  /// (S/I)_k (x) (S/I)_l -> (S/I)_{k+l}: multiply representatives, then reduce.
  Matrix<F> multiplication(int k, int l) const {
    const auto& pk = piece(k);
    const auto& pl = piece(l);
    const auto& target = piece(k + l);
    Matrix<F> out(field_, target.dim(), pk.dim() * pl.dim());
    if (k < 0 || l < 0) return out;
    MonomialBasis bk(num_vars_, k), bl(num_vars_, l), bt(num_vars_, k + l);
    for (std::size_t i = 0; i < pk.dim(); ++i) {
      for (std::size_t j = 0; j < pl.dim(); ++j) {
        std::size_t idx = bt.index_of(add_exponents(bk[pk.basis[i]], bl[pl.basis[j]]));
        for (std::size_t r = 0; r < target.dim(); ++r) out(r, i * pl.dim() + j) = target.reduction(r, idx);
      }
    }
    return out;
  }

  /// Coordinates in (S/I)_k of an element of S_k given on the monomial basis.
  Vec<F> reduce(int k, std::span<const typename F::value_type> element) const {
    return stb::apply(piece(k).reduction, element);
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<int, QuotientPiece<F>> pieces;
  };

  F field_;
  std::size_t num_vars_;
  std::vector<Generator> generators_;
  std::shared_ptr<Cache> cache_;
};

template <ExactField F>
const QuotientPiece<F>& quotient_piece(const GradedQuotientRing<F>& ring, int k) {
  return ring.piece(k);
}

template <ExactField F>
Matrix<F> quotient_multiplication(const GradedQuotientRing<F>& ring, int k, int l) {
  return ring.multiplication(k, l);
}

}  // namespace stb
