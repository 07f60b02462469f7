#pragma once

// (n,m)-functions as full lookup tables, with their differential, spectral
// and algebraic analysis.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "apn/error.hpp"
#include "apn/field.hpp"
#include "apn/linear.hpp"

namespace apn {

class Vbf {
 public:
  static constexpr int kMaxInput = 16;
  static constexpr int kMaxOutput = 31;

  Vbf() = default;

  Vbf(int n, int m, std::vector<std::uint32_t> values, std::shared_ptr<const FieldSpec> field = nullptr)
      : n_(n), m_(m), table_(std::move(values)), field_(std::move(field)) {
    if (n < 1 || n > kMaxInput) throw Error("input dimension must be in [1,16]");
    if (m < 1 || m > kMaxOutput) throw Error("output dimension must be in [1,31]");
    if (table_.size() != (std::size_t{1} << n))
      throw Error("table has " + std::to_string(table_.size()) + " entries, expected " +
                  std::to_string(std::size_t{1} << n));
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::size_t x = 0; x < table_.size(); ++x)
      if (table_[x] >= limit)
        throw Error("value at " + std::to_string(x) + " does not fit in " + std::to_string(m) + " bits");
    if (field_ && (field_->n() != n || n != m)) throw Error("field binding requires n = m = field degree");
  }

  static Vbf from_table(int n, int m, std::vector<std::uint32_t> values) {
    return Vbf(n, m, std::move(values));
  }

  /// Evaluates sum_i c_i x^{d_i} at every field element.
  static Vbf from_univariate(std::shared_ptr<const FieldSpec> field,
                             const std::vector<std::pair<Elem, std::uint64_t>>& terms) {
    const std::uint32_t q = field->size();
    for (const auto& [c, d] : terms) {
      if (d > q - 1) throw Error("exponent " + std::to_string(d) + " exceeds 2^n - 1");
      if (c >= q) throw Error("coefficient out of range");
    }
    std::vector<std::uint32_t> t(q, 0);
    for (Elem x = 0; x < q; ++x)
      for (const auto& [c, d] : terms) t[x] ^= field->mul(c, field->pow(x, d));
    const int n = field->n();
    return Vbf(n, n, std::move(t), std::move(field));
  }

  static Vbf power_function(std::shared_ptr<const FieldSpec> field, std::uint64_t d) {
    return from_univariate(std::move(field), {{Elem{1}, d}});
  }

  int n() const { return n_; }
  int m() const { return m_; }
  std::size_t size() const { return table_.size(); }
  std::uint32_t operator()(std::uint32_t x) const { return table_[x]; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  const std::shared_ptr<const FieldSpec>& field() const { return field_; }

  Vbf with_field(std::shared_ptr<const FieldSpec> field) const { return Vbf(n_, m_, table_, std::move(field)); }

  /// Pointwise sum; keeps this function's field binding.
  Vbf operator+(const Vbf& o) const {
    if (o.n_ != n_ || o.m_ != m_) throw Error("sum of functions with different dimensions");
    std::vector<std::uint32_t> t(table_);
    for (std::size_t x = 0; x < t.size(); ++x) t[x] ^= o.table_[x];
    return Vbf(n_, m_, std::move(t), field_);
  }

  /// Tables equal (field binding ignored).
  bool operator==(const Vbf& o) const { return n_ == o.n_ && m_ == o.m_ && table_ == o.table_; }

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint32_t> table_;
  std::shared_ptr<const FieldSpec> field_;
};

/// B_F(x,t) = F(x+t) + F(x) + F(t) + F(0).
inline std::uint32_t bform(const Vbf& f, std::uint32_t x, std::uint32_t t) {
  return f(x ^ t) ^ f(x) ^ f(t) ^ f(0);
}

// ---------------------------------------------------------------------------
// Differential properties

struct DifferentialProfile {
  unsigned uniformity = 0;
  std::uint32_t witness_a = 0;  // (a, b) attaining the maximum, first in (a, b) order
  std::uint32_t witness_b = 0;
  /// Row-major 2^n x 2^m counts; empty when n + m exceeds the storage budget.
  std::vector<std::uint32_t> ddt;
  int n = 0, m = 0;

  std::uint32_t at(std::uint32_t a, std::uint32_t b) const {
    return ddt.at((std::size_t{a} << m) | b);
  }
};

inline constexpr int kFullDdtBudget = 24;

/// Full DDT when n + m <= 24, otherwise only the streamed per-row maxima.
inline DifferentialProfile ddt(const Vbf& f) {
  DifferentialProfile p;
  p.n = f.n();
  p.m = f.m();
  const std::size_t rows = f.size(), cols = std::size_t{1} << f.m();
  const bool full = f.n() + f.m() <= kFullDdtBudget;
  if (full) p.ddt.assign(rows * cols, 0);
  std::vector<std::uint32_t> row(cols);
  for (std::uint32_t a = 0; a < rows; ++a) {
    std::fill(row.begin(), row.end(), 0);
    for (std::uint32_t x = 0; x < rows; ++x) ++row[f(x) ^ f(x ^ a)];
    if (full) std::copy(row.begin(), row.end(), p.ddt.begin() + a * cols);
    if (a == 0) continue;
    for (std::uint32_t b = 0; b < cols; ++b)
      if (row[b] > p.uniformity) {
        p.uniformity = row[b];
        p.witness_a = a;
        p.witness_b = b;
      }
  }
  return p;
}

inline unsigned differential_uniformity(const Vbf& f) {
  const std::size_t rows = f.size();
  std::vector<std::uint32_t> row(std::size_t{1} << f.m());
  unsigned best = 0;
  for (std::uint32_t a = 1; a < rows; ++a) {
    std::fill(row.begin(), row.end(), 0);
    for (std::uint32_t x = 0; x < rows; ++x) {
      const unsigned c = ++row[f(x) ^ f(x ^ a)];
      if (c > best) best = c;
    }
  }
  return best;
}

/// Early-exit APN test: stops at the first count exceeding 2. Only x < x^a
/// is visited, so each pair is seen once and a repeat means a count of 4.
inline bool is_apn(const Vbf& f) {
  const std::size_t rows = f.size();
  std::vector<std::uint32_t> seen(std::size_t{1} << f.m(), 0);
  for (std::uint32_t a = 1; a < rows; ++a) {
    // stamp = a makes resetting unnecessary between rows
    for (std::uint32_t x = 0; x < rows; ++x) {
      const std::uint32_t y = x ^ a;
      if (y < x) continue;
      auto& s = seen[f(x) ^ f(y)];
      if (s == a) return false;
      s = a;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Walsh transform

/// In-place fast Walsh-Hadamard transform.
inline void fwht(std::vector<std::int32_t>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1)
    for (std::size_t i = 0; i < v.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
}

/// Component x -> <b, F(x)> as a 0/1 table. With a field binding the inner
/// product is Tr(b F(x)); otherwise the coordinate dot product.
inline std::vector<std::uint8_t> component(const Vbf& f, std::uint32_t b) {
  std::vector<std::uint8_t> c(f.size());
  const auto& fs = f.field();
  for (std::uint32_t x = 0; x < f.size(); ++x)
    c[x] = static_cast<std::uint8_t>(fs ? fs->trace(fs->mul(b, f(x))) : gf2::dot(b, f(x)));
  return c;
}

/// W_F(a,b) = sum_x (-1)^{<b,F(x)> + <a,x>}, trace forms when field-bound.
inline std::int64_t walsh_at(const Vbf& f, std::uint32_t a, std::uint32_t b) {
  const auto& fs = f.field();
  std::int64_t s = 0;
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    const int e = fs ? fs->trace(fs->mul(b, f(x)) ^ fs->mul(a, x)) : gf2::dot(b, f(x)) ^ gf2::dot(a, x);
    s += e ? -1 : 1;
  }
  return s;
}

/// Multiset {W_F(a,b) : a, b != 0} as value -> count.
struct WalshSpectrum {
  std::map<std::int64_t, std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (const auto& [v, c] : counts) t += c;
    return t;
  }
  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> v;
    for (const auto& [k, c] : counts) v.push_back(k);
    return v;
  }
  bool operator==(const WalshSpectrum& o) const { return counts == o.counts; }
};

/// Walsh values for one b over all a, indexed by the coordinate vector a'
/// with <a', x> = Tr(a x) (or a' = a without a field). The value multiset per
/// b does not depend on that relabelling.
inline std::vector<std::int32_t> walsh_row(const Vbf& f, std::uint32_t b) {
  const auto c = component(f, b);
  std::vector<std::int32_t> v(f.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = c[x] ? -1 : 1;
  fwht(v);
  return v;
}

inline WalshSpectrum walsh_spectrum(const Vbf& f) {
  WalshSpectrum s;
  const std::uint32_t outs = 1u << f.m();
  for (std::uint32_t b = 1; b < outs; ++b)
    for (auto w : walsh_row(f, b)) ++s.counts[w];
  return s;
}

// ---------------------------------------------------------------------------
// Algebraic normal form

/// Moebius transform of a Boolean table (in place on a copy).
inline std::vector<std::uint8_t> anf(std::vector<std::uint8_t> t) {
  for (std::size_t h = 1; h < t.size(); h <<= 1)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (i & h) t[i] ^= t[i ^ h];
  return t;
}

/// Maximum degree over all coordinate functions; -1 for the zero function.
inline int algebraic_degree(const Vbf& f) {
  int deg = -1;
  for (int j = 0; j < f.m(); ++j) {
    std::vector<std::uint8_t> t(f.size());
    for (std::uint32_t x = 0; x < f.size(); ++x) t[x] = (f(x) >> j) & 1;
    const auto a = anf(std::move(t));
    for (std::uint32_t u = 0; u < a.size(); ++u)
      if (a[u]) deg = std::max(deg, std::popcount(u));
  }
  return deg;
}

/// Degree at most two, i.e. B_F is bilinear (affine maps included).
inline bool is_quadratic(const Vbf& f) { return algebraic_degree(f) <= 2; }

// ---------------------------------------------------------------------------
// D_F and D_F^* value sets

struct Triple {
  std::uint32_t x = 0, y = 0, t = 0;
  bool operator==(const Triple&) const = default;
};

/// Values of B_F(x,t) + B_F(y,t) = F(x+t)+F(x)+F(y+t)+F(y), each with the first
/// witness in the fixed order: t ascending, then x < y ascending.
struct FourPointSums {
  int m = 0;
  std::vector<std::uint8_t> present;  // indexed by value
  std::vector<Triple> witness;

  bool contains(std::uint32_t v) const { return v < present.size() && present[v]; }
  std::vector<std::uint32_t> values() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < present.size(); ++v)
      if (present[v]) out.push_back(v);
    return out;
  }
  std::size_t count() const { return static_cast<std::size_t>(std::count(present.begin(), present.end(), 1)); }
};

namespace detail {

inline FourPointSums four_point_sums(const Vbf& f, bool restricted) {
  FourPointSums s;
  s.m = f.m();
  const std::size_t outs = std::size_t{1} << f.m();
  s.present.assign(outs, 0);
  s.witness.assign(outs, {});
  std::size_t found = 0;
  auto mark = [&](std::uint32_t v, std::uint32_t x, std::uint32_t y, std::uint32_t t) {
    if (!s.present[v]) {
      s.present[v] = 1;
      s.witness[v] = {x, y, t};
      ++found;
    }
  };
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<std::uint32_t> d(q);
  for (std::uint32_t t = restricted ? 1 : 0; t < q && found < outs; ++t) {
    for (std::uint32_t x = 0; x < q; ++x) d[x] = f(x ^ t) ^ f(x);
    for (std::uint32_t x = 0; x < q && found < outs; ++x) {
      if (!restricted) mark(0, x, x, t);
      for (std::uint32_t y = x + 1; y < q; ++y) {
        if (restricted && x == (y ^ t)) continue;
        mark(d[x] ^ d[y], x, y, t);
      }
    }
  }
  return s;
}

}  // namespace detail

/// D_F^*: x != y, t != 0, x != y + t. Stops once every value has appeared.
inline FourPointSums dstar_set(const Vbf& f) { return detail::four_point_sums(f, true); }

/// D_F: no exclusions.
inline FourPointSums d_set(const Vbf& f) { return detail::four_point_sums(f, false); }

// ---------------------------------------------------------------------------
// Linear projections of the output

inline Vbf project(const Vbf& f, const LinearMap& pi) {
  if (pi.n_in() != f.m()) throw Error("projection input dimension differs from m");
  if (!pi.surjective()) throw Error("projection is not surjective");
  std::vector<std::uint32_t> t(f.size());
  for (std::uint32_t x = 0; x < f.size(); ++x) t[x] = pi(f(x));
  return Vbf(f.n(), pi.n_out(), std::move(t));
}

/// For APN F: pi o F is APN iff D_F^* meets ker(pi) only trivially. Evaluated
/// from D_F^* without building the projected DDT. Returns the first kernel
/// element found in D_F^*, if any.
inline std::optional<std::uint32_t> project_obstruction(const Vbf& f, const LinearMap& pi) {
  if (pi.n_in() != f.m()) throw Error("projection input dimension differs from m");
  if (!pi.surjective()) throw Error("projection is not surjective");
  if (!is_apn(f)) throw Error("projection criterion requires an APN function");
  const auto ds = dstar_set(f);
  const auto kb = pi.kernel_basis();
  for (auto k : gf2::span(kb))
    if (ds.contains(k)) return k;
  return std::nullopt;
}

inline bool project_is_apn(const Vbf& f, const LinearMap& pi) { return !project_obstruction(f, pi); }

}  // namespace apn
