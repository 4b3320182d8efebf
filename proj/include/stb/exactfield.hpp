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

// Exact scalar arithmetic over prime fields and the rationals, and dense
// matrices over either, with echelon-form based rank, kernel and solving.
//
// A field is a small value object (`PrimeField` or `RationalField`) that owns
// the arithmetic; elements are plain values of `Field::value_type` kept in
// canonical form (residues in [0, p), fractions in lowest terms with positive
// denominator), so element equality is representation equality.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stb/error.hpp"

namespace stb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { Prime, Rationals };

struct FieldSpec {
  FieldKind kind = FieldKind::Rationals;
  std::uint32_t p = 0;  // meaningful only for FieldKind::Prime

  bool operator==(const FieldSpec&) const = default;

  std::string to_string() const {
    return kind == FieldKind::Prime ? "F_" + std::to_string(p) : std::string("QQ");
  }
};

constexpr bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

inline FieldSpec make_field(FieldKind kind, std::optional<std::int64_t> p = std::nullopt) {
  if (kind == FieldKind::Rationals) return FieldSpec{FieldKind::Rationals, 0};
  if (!p || *p < 2 || *p >= (std::int64_t{1} << 31) || !is_prime(static_cast<std::uint64_t>(*p))) {
    throw Error(ErrorCode::NonPrimeModulus,
                "modulus " + (p ? std::to_string(*p) : std::string("<none>")) + " is not a prime below 2^31");
  }
  return FieldSpec{FieldKind::Prime, static_cast<std::uint32_t>(*p)};
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Parses "n" or "n/d" (optional sign on the numerator). Throws
/// std::invalid_argument on malformed input or a zero denominator.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+') {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  BigInt n(std::string{num});
  BigInt d(std::string{den});
  if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(n, d);
}

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(make_field(FieldKind::Prime, p).p) {}
  explicit PrimeField(const FieldSpec& spec) : p_(spec.p) {
    if (spec.kind != FieldKind::Prime) throw Error(ErrorCode::FieldMismatch, "expected a prime field spec");
    make_field(FieldKind::Prime, spec.p);
  }

  std::uint32_t p() const { return p_; }
  FieldSpec spec() const { return {FieldKind::Prime, p_}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_canonical(value_type a) const { return a < p_; }

  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + (p_ - b); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>(std::uint64_t{a} * b % p_);
  }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    return static_cast<value_type>(t < 0 ? t + p_ : t);
  }
  value_type div(value_type a, value_type b) const { return mul(a, inv(b)); }

  value_type from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    return static_cast<value_type>(r < 0 ? r + p_ : r);
  }
  value_type from_bigint(const BigInt& n) const {
    BigInt r = n % p_;
    if (r < 0) r += p_;
    return r.convert_to<value_type>();
  }
  value_type from_rational(const Rational& q) const {
    value_type den = from_bigint(denominator(q));
    if (den == 0) {
      throw Error(ErrorCode::BadPrime, stb::to_string(q) + " has a denominator divisible by " + std::to_string(p_));
    }
    return div(from_bigint(numerator(q)), den);
  }

  std::string to_string(value_type a) const { return std::to_string(a); }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

class RationalField {
 public:
  using value_type = Rational;

  FieldSpec spec() const { return {FieldKind::Rationals, 0}; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return a == 0; }
  bool is_canonical(const value_type&) const { return true; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  value_type div(const value_type& a, const value_type& b) const { return mul(a, inv(b)); }

  value_type from_int(std::int64_t n) const { return n; }
  value_type from_bigint(const BigInt& n) const { return Rational(n); }
  value_type from_rational(const Rational& q) const { return q; }

  std::string to_string(const value_type& a) const { return stb::to_string(a); }

  bool operator==(const RationalField&) const = default;
};

template <class F>
concept ExactField = requires(const F& f, const typename F::value_type& a) {
  { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.inv(a) } -> std::convertible_to<typename F::value_type>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
  { f.from_rational(Rational{}) } -> std::convertible_to<typename F::value_type>;
  { f.spec() } -> std::convertible_to<FieldSpec>;
};

template <ExactField F>
using Vec = std::vector<typename F::value_type>;

/// Dense row-major matrix over an exact field.
template <ExactField F>
class Matrix {
 public:
  using value_type = typename F::value_type;

  explicit Matrix(F field = F{}, std::size_t rows = 0, std::size_t cols = 0)
      : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero()) {}

  static Matrix from_rows(const F& field, const std::vector<std::vector<value_type>>& rows) {
    std::size_t ncols = rows.empty() ? 0 : rows.front().size();
    Matrix m(field, rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != ncols) throw Error(ErrorCode::ShapeMismatch, "ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * ncols);
    }
    return m;
  }

  static Matrix from_columns(const F& field, std::size_t rows, const std::vector<std::vector<value_type>>& cols) {
    Matrix m(field, rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) throw Error(ErrorCode::ShapeMismatch, "column length mismatch");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  const F& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const value_type> data() const { return data_; }

  value_type& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const value_type& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<value_type> row(std::size_t r) const {
    return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
  }
  std::vector<value_type> column(std::size_t c) const {
    std::vector<value_type> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, c));
    return out;
  }

  Matrix transpose() const {
    Matrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix out(field_, rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
    return out;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [&](const value_type& a) { return field_.is_zero(a); });
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.cols_ != b.rows_) throw Error(ErrorCode::ShapeMismatch, "product of incompatible shapes");
    const F& f = a.field_;
    Matrix out(f, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const value_type& aik = a(i, k);
        if (f.is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (f.is_zero(b(k, j))) continue;
          out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
        }
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Horizontal concatenation [a | b].
  friend Matrix hconcat(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.rows_ != b.rows_) throw Error(ErrorCode::ShapeMismatch, "hconcat row mismatch");
    Matrix out(a.field_, a.rows_, a.cols_ + b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) out(i, j) = a(i, j);
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, a.cols_ + j) = b(i, j);
    }
    return out;
  }

  friend Matrix vconcat(const Matrix& a, const Matrix& b) {
    require_same_field(a, b);
    if (a.cols_ != b.cols_) throw Error(ErrorCode::ShapeMismatch, "vconcat column mismatch");
    Matrix out(a.field_, a.rows_ + b.rows_, a.cols_);
    std::copy(a.data_.begin(), a.data_.end(), out.data_.begin());
    std::copy(b.data_.begin(), b.data_.end(), out.data_.begin() + a.data_.size());
    return out;
  }

 private:
  static void require_same_field(const Matrix& a, const Matrix& b) {
    if (!(a.field_ == b.field_)) {
      throw Error(ErrorCode::FieldMismatch, a.field_.spec().to_string() + " vs " + b.field_.spec().to_string());
    }
  }

  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<value_type> data_;
};

template <ExactField F>
Vec<F> apply(const Matrix<F>& m, std::span<const typename F::value_type> v) {
  if (v.size() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "vector length mismatch");
  const F& f = m.field();
  Vec<F> out(m.rows(), f.zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!f.is_zero(v[j])) out[i] = f.add(out[i], f.mul(m(i, j), v[j]));
  return out;
}

template <ExactField F>
void check_canonical(const Matrix<F>& m) {
  for (const auto& a : m.data()) {
    if (!m.field().is_canonical(a)) {
      throw Error(ErrorCode::FieldMismatch, "entry " + m.field().to_string(a) + " is not an element of " +
                                                m.field().spec().to_string());
    }
  }
}

template <ExactField F>
struct Echelon {
  Matrix<F> rref;
  std::vector<std::size_t> pivots;  // pivot column of row k is pivots[k]
};

/// Reduced row echelon form by Gauss-Jordan elimination.
template <ExactField F>
Echelon<F> echelon(Matrix<F> m) {
  const F f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    auto scale = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), scale);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!f.is_zero(m(r, j))) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <ExactField F>
struct RankKernel {
  std::size_t rank = 0;
  /// One vector per non-pivot column j (ascending): it has 1 at j, 0 at every
  /// other non-pivot column, and is determined by that normalization.
  std::vector<Vec<F>> kernel;
  std::vector<std::size_t> pivot_columns;
};

template <ExactField F>
RankKernel<F> rank_kernel(const Matrix<F>& m) {
  check_canonical(m);
  const F& f = m.field();
  auto [rref, pivots] = echelon(m);
  RankKernel<F> out;
  out.rank = pivots.size();
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    Vec<F> v(m.cols(), f.zero());
    v[j] = f.one();
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = f.neg(rref(k, j));
    out.kernel.push_back(std::move(v));
  }
  out.pivot_columns = std::move(pivots);
  return out;
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return echelon(m).pivots.size();
}

/// Kernel basis packed as the columns of a cols x dim matrix.
template <ExactField F>
Matrix<F> kernel_matrix(const Matrix<F>& m) {
  return Matrix<F>::from_columns(m.field(), m.cols(), rank_kernel(m).kernel);
}

/// Row vectors y with y * m = 0.
template <ExactField F>
std::vector<Vec<F>> left_kernel(const Matrix<F>& m) {
  return rank_kernel(m.transpose()).kernel;
}

/// Some x with m * x = b, or nullopt when the system is inconsistent.
template <ExactField F>
std::optional<Vec<F>> solve(const Matrix<F>& m, std::span<const typename F::value_type> b) {
  if (b.size() != m.rows()) throw Error(ErrorCode::ShapeMismatch, "right-hand side length mismatch");
  Matrix<F> rhs(m.field(), m.rows(), 1);
  for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
  auto [rref, pivots] = echelon(hconcat(m, rhs));
  const F& f = m.field();
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec<F> x(m.cols(), f.zero());
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = rref(k, m.cols());
  return x;
}

/// Scales v so that its first nonzero coordinate is 1. Returns false for the
/// zero vector.
template <ExactField F>
bool normalize_projective(const F& f, Vec<F>& v) {
  auto it = std::find_if(v.begin(), v.end(), [&](const auto& a) { return !f.is_zero(a); });
  if (it == v.end()) return false;
  auto s = f.inv(*it);
  for (auto& a : v) a = f.mul(a, s);
  return true;
}

/// All points of P^{dim-1}(F_p) as canonical representatives (first nonzero
/// coordinate 1), in lexicographic order of the representatives.
inline std::vector<Vec<PrimeField>> projective_points(const PrimeField& f, std::size_t dim) {
  std::vector<Vec<PrimeField>> out;
  const std::uint64_t p = f.p();
  for (std::size_t lead = dim; lead-- > 0;) {
    std::uint64_t count = 1;
    for (std::size_t k = lead + 1; k < dim; ++k) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Vec<PrimeField> v(dim, 0);
      v[lead] = 1;
      std::uint64_t rest = idx;
      for (std::size_t k = dim; k-- > lead + 1;) {
        v[k] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

inline std::uint64_t projective_point_count(std::uint64_t p, std::size_t dim) {
  std::uint64_t n = 0, pw = 1;
  for (std::size_t i = 0; i < dim; ++i, pw *= p) n += pw;
  return n;
}

}  // namespace stb
