#pragma once

// F_2-linear and affine maps between small bit vectors (dimension <= 32).

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "apn/error.hpp"
#include "apn/field.hpp"

namespace apn {

namespace gf2 {

inline int parity(std::uint32_t v) { return std::popcount(v) & 1; }

inline int dot(std::uint32_t a, std::uint32_t b) { return parity(a & b); }

/// Row-reduced echelon basis of span(vectors): sorted by decreasing leading
/// bit, every leading bit cleared in all other basis vectors.
inline std::vector<std::uint32_t> echelon(std::span<const std::uint32_t> vectors) {
  std::vector<std::uint32_t> basis;
  for (std::uint32_t v : vectors) {
    for (std::uint32_t b : basis)
      if (v & std::bit_floor(b)) v ^= b;
    if (!v) continue;
    const std::uint32_t lead = std::bit_floor(v);
    for (auto& b : basis)
      if (b & lead) b ^= v;
    basis.push_back(v);
  }
  std::sort(basis.rbegin(), basis.rend());
  return basis;
}

inline int rank(std::span<const std::uint32_t> vectors) {
  // Insertion into a semi-echelon set, cheaper than echelon() in hot loops.
  std::uint32_t pivots[32] = {};
  int r = 0;
  for (std::uint32_t v : vectors) {
    while (v) {
      const int lead = 31 - std::countl_zero(v);
      if (!pivots[lead]) {
        pivots[lead] = v;
        ++r;
        break;
      }
      v ^= pivots[lead];
    }
  }
  return r;
}

inline bool independent(std::span<const std::uint32_t> vectors) {
  return rank(vectors) == static_cast<int>(vectors.size());
}

/// All 2^k elements of span(basis); element i is the XOR of basis[j] over
/// the set bits j of i.
inline std::vector<std::uint32_t> span(std::span<const std::uint32_t> basis) {
  std::vector<std::uint32_t> out(std::size_t{1} << basis.size(), 0);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const int j = std::countr_zero(i);
    out[i] = out[i & (i - 1)] ^ basis[j];
  }
  return out;
}

}  // namespace gf2

/// F_2-linear map F_2^{n_in} -> F_2^{n_out}, stored as the images of the unit
/// vectors (the columns of the n_out x n_in matrix). When built from a
/// linearized polynomial the coefficient vector is kept alongside.
class LinearMap {
 public:
  LinearMap() = default;

  LinearMap(int n_in, int n_out, std::vector<std::uint32_t> columns)
      : n_in_(n_in), n_out_(n_out), cols_(std::move(columns)) {
    if (n_in < 0 || n_in > 32 || n_out < 0 || n_out > 32) throw Error("linear map dimensions out of range");
    if (static_cast<int>(cols_.size()) != n_in) throw Error("linear map needs one column per input bit");
    const std::uint64_t limit = std::uint64_t{1} << n_out;
    for (auto c : cols_)
      if (c >= limit) throw Error("linear map column exceeds output dimension");
  }

  static LinearMap zero(int n_in, int n_out) {
    return LinearMap(n_in, n_out, std::vector<std::uint32_t>(n_in, 0));
  }

  static LinearMap identity(int n) {
    std::vector<std::uint32_t> c(n);
    for (int i = 0; i < n; ++i) c[i] = 1u << i;
    return LinearMap(n, n, std::move(c));
  }

  /// x -> sum_i coeffs[i] * x^(2^i) over the given field.
  static LinearMap linearized(const FieldSpec& field, std::vector<Elem> coeffs) {
    const int n = field.n();
    if (static_cast<int>(coeffs.size()) > n) throw Error("too many linearized coefficients");
    coeffs.resize(n, 0);
    std::vector<std::uint32_t> c(n);
    for (int b = 0; b < n; ++b) {
      Elem x = Elem{1} << b, acc = 0;
      for (int i = 0; i < n; ++i) {
        acc ^= field.mul(coeffs[i], x);
        x = field.sqr(x);
      }
      c[b] = acc;
    }
    LinearMap m(n, n, std::move(c));
    m.coeffs_ = std::move(coeffs);
    return m;
  }

  /// Fits a map from its values on unit vectors; `f` must be linear.
  template <class Fn>
  static LinearMap from_function(int n_in, int n_out, Fn&& f) {
    std::vector<std::uint32_t> c(n_in);
    for (int i = 0; i < n_in; ++i) c[i] = static_cast<std::uint32_t>(f(std::uint32_t{1} << i));
    return LinearMap(n_in, n_out, std::move(c));
  }

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const std::vector<std::uint32_t>& columns() const { return cols_; }
  const std::optional<std::vector<Elem>>& coefficients() const { return coeffs_; }

  std::uint32_t operator()(std::uint32_t x) const {
    std::uint32_t r = 0;
    while (x) {
      r ^= cols_[std::countr_zero(x)];
      x &= x - 1;
    }
    return r;
  }

  /// Entry (row, col) of the matrix.
  int bit(int row, int col) const { return (cols_[col] >> row) & 1; }

  /// Values at all 2^n_in inputs.
  std::vector<std::uint32_t> table() const {
    std::vector<std::uint32_t> t(std::size_t{1} << n_in_, 0);
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i & (i - 1)] ^ cols_[std::countr_zero(i)];
    return t;
  }

  int rank() const { return gf2::rank(cols_); }
  bool injective() const { return rank() == n_in_; }
  bool surjective() const { return rank() == n_out_; }
  bool invertible() const { return n_in_ == n_out_ && injective(); }

  /// Basis of the kernel (row-reduced, decreasing leading bit).
  std::vector<std::uint32_t> kernel_basis() const {
    // Track combinations: reduce columns while recording which inputs built them.
    struct Row {
      std::uint32_t image, combo;
    };
    std::vector<Row> pivots;
    std::vector<std::uint32_t> kernel;
    for (int i = 0; i < n_in_; ++i) {
      Row r{cols_[i], 1u << i};
      for (const auto& p : pivots)
        if (r.image & std::bit_floor(p.image)) {
          r.image ^= p.image;
          r.combo ^= p.combo;
        }
      if (r.image) {
        const std::uint32_t lead = std::bit_floor(r.image);
        for (auto& p : pivots)
          if (p.image & lead) {
            p.image ^= r.image;
            p.combo ^= r.combo;
          }
        pivots.push_back(r);
      } else {
        kernel.push_back(r.combo);
      }
    }
    return gf2::echelon(kernel);
  }

  /// this o other
  LinearMap compose(const LinearMap& inner) const {
    if (inner.n_out_ != n_in_) throw Error("composition dimension mismatch");
    std::vector<std::uint32_t> c(inner.n_in_);
    for (int i = 0; i < inner.n_in_; ++i) c[i] = (*this)(inner.cols_[i]);
    return LinearMap(inner.n_in_, n_out_, std::move(c));
  }

  LinearMap operator+(const LinearMap& o) const {
    if (o.n_in_ != n_in_ || o.n_out_ != n_out_) throw Error("sum of maps with different shapes");
    std::vector<std::uint32_t> c(cols_);
    for (int i = 0; i < n_in_; ++i) c[i] ^= o.cols_[i];
    return LinearMap(n_in_, n_out_, std::move(c));
  }

  LinearMap inverse() const {
    if (!invertible()) throw Error("linear map is not invertible");
    const auto t = table();
    std::vector<std::uint32_t> c(n_in_);
    for (std::uint32_t x = 0; x < t.size(); ++x)
      if (std::has_single_bit(t[x])) c[std::countr_zero(t[x])] = x;
    return LinearMap(n_in_, n_out_, std::move(c));
  }

  bool operator==(const LinearMap& o) const {
    return n_in_ == o.n_in_ && n_out_ == o.n_out_ && cols_ == o.cols_;
  }

 private:
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<std::uint32_t> cols_;
  std::optional<std::vector<Elem>> coeffs_;
};

/// Coefficients (a_0, ..., a_{n-1}) with L(x) = sum_i a_i x^(2^i), found by
/// solving the Moore system L(alpha^j) = sum_i a_i alpha^(j 2^i) over the
/// field.
inline std::vector<Elem> linearized_coefficients(const FieldSpec& field, const LinearMap& L) {
  const int n = field.n();
  if (L.n_in() != n || L.n_out() != n) throw Error("map is not an endomorphism of the field");
  if (L.coefficients()) return *L.coefficients();
  // Augmented rows: [alpha^j, alpha^(2j), ..., alpha^(j 2^(n-1)) | L(alpha^j)].
  std::vector<std::vector<Elem>> rows(n, std::vector<Elem>(n + 1));
  for (int j = 0; j < n; ++j) {
    Elem p = Elem{1} << j;
    for (int i = 0; i < n; ++i) {
      rows[j][i] = p;
      p = field.sqr(p);
    }
    rows[j][n] = L.columns()[j];
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    while (piv < n && rows[piv][col] == 0) ++piv;
    if (piv == n) throw Error("singular Moore matrix");  // unreachable for a basis
    std::swap(rows[piv], rows[col]);
    const Elem inv = field.inv(rows[col][col]);
    for (auto& v : rows[col]) v = field.mul(v, inv);
    for (int r = 0; r < n; ++r) {
      if (r == col || rows[r][col] == 0) continue;
      const Elem factor = rows[r][col];
      for (int c = col; c <= n; ++c) rows[r][c] ^= field.mul(factor, rows[col][c]);
    }
  }
  std::vector<Elem> a(n);
  for (int i = 0; i < n; ++i) a[i] = rows[i][n];
  return a;
}

/// x -> linear(x) + constant.
struct AffineMap {
  LinearMap linear;
  std::uint32_t constant = 0;

  std::uint32_t operator()(std::uint32_t x) const { return linear(x) ^ constant; }
  int n_in() const { return linear.n_in(); }
  int n_out() const { return linear.n_out(); }
  bool invertible() const { return linear.invertible(); }

  static AffineMap identity(int n) { return {LinearMap::identity(n), 0}; }
  bool operator==(const AffineMap& o) const { return linear == o.linear && constant == o.constant; }
};

/// Projection F_2^m -> F_2^{m-1} with kernel {0, w}: eliminate the leading
/// bit p of w, then delete coordinate p.
inline LinearMap projection_with_kernel(int m, std::uint32_t w) {
  if (w == 0 || w >= (std::uint64_t{1} << m)) throw Error("kernel vector out of range");
  const int p = 31 - std::countl_zero(w);
  auto squeeze = [p](std::uint32_t y) {
    const std::uint32_t low = y & ((1u << p) - 1);
    return low | ((y >> (p + 1)) << p);
  };
  std::vector<std::uint32_t> c(m);
  for (int i = 0; i < m; ++i) {
    std::uint32_t y = 1u << i;
    if ((y >> p) & 1) y ^= w;
    c[i] = squeeze(y);
  }
  return LinearMap(m, m - 1, std::move(c));
}

}  // namespace apn
