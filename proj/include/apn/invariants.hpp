#pragma once

// Invariants used to tell functions apart: Gamma-rank, the classical Walsh
// spectrum, and bundles of cheaper invariants. None of them can certify that
// two functions are equivalent.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apn/error.hpp"
#include "apn/vbf.hpp"

namespace apn {

/// Dense GF(2) matrix, rows packed into 64-bit words (bit j of word k is
/// column 64k + j).
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * words_, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words() const { return words_; }

  std::uint64_t* row(std::size_t r) { return data_.data() + r * words_; }
  const std::uint64_t* row(std::size_t r) const { return data_.data() + r * words_; }

  bool get(std::size_t r, std::size_t c) const { return (row(r)[c / 64] >> (c % 64)) & 1; }
  void set(std::size_t r, std::size_t c, bool v = true) {
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    if (v)
      row(r)[c / 64] |= bit;
    else
      row(r)[c / 64] &= ~bit;
  }
  void flip(std::size_t r, std::size_t c) { row(r)[c / 64] ^= std::uint64_t{1} << (c % 64); }

  /// Rank of a copy.
  std::size_t rank() const {
    BitMatrix m(*this);
    return m.eliminate();
  }

  /// Destroys the contents and returns the rank. Columns are processed one
  /// 64-bit word at a time: pivots inside the word are chosen greedily and
  /// reduced against each other, then cleared from the remaining rows with
  /// 256-entry lookup tables over groups of eight pivots.
  std::size_t eliminate() {
    std::vector<std::uint32_t> active(rows_);
    for (std::size_t r = 0; r < rows_; ++r) active[r] = static_cast<std::uint32_t>(r);
    std::size_t rank = 0;
    std::vector<std::uint32_t> pivot_rows;
    std::vector<int> pivot_bits;
    std::vector<std::uint64_t> table;
    for (std::size_t w = 0; w < words_ && !active.empty(); ++w) {
      const std::size_t len = words_ - w;
      pivot_rows.clear();
      pivot_bits.clear();
      std::uint64_t taken = 0;
      // Greedy pivot selection within this word.
      for (std::size_t i = 0; i < active.size() && pivot_rows.size() < 64; ++i) {
        std::uint64_t* r = row(active[i]) + w;
        if (!(r[0] & ~std::uint64_t{0})) continue;
        for (std::size_t k = 0; k < pivot_rows.size(); ++k)
          if ((r[0] >> pivot_bits[k]) & 1) xor_into(r, row(pivot_rows[k]) + w, len);
        if (!r[0]) continue;
        const int bit = std::countr_zero(r[0]);
        for (std::size_t k = 0; k < pivot_rows.size(); ++k) {
          std::uint64_t* p = row(pivot_rows[k]) + w;
          if ((p[0] >> bit) & 1) xor_into(p, r, len);
        }
        pivot_rows.push_back(active[i]);
        pivot_bits.push_back(bit);
        taken |= std::uint64_t{1} << bit;
        active[i] = kUsed;
      }
      if (pivot_rows.empty()) continue;
      rank += pivot_rows.size();
      active.erase(std::remove(active.begin(), active.end(), kUsed), active.end());

      // Tables: group g covers pivots [8g, 8g+8).
      const std::size_t groups = (pivot_rows.size() + 7) / 8;
      table.assign(groups * 256 * len, 0);
      for (std::size_t g = 0; g < groups; ++g) {
        std::uint64_t* base = table.data() + g * 256 * len;
        const std::size_t k0 = 8 * g, k1 = std::min(pivot_rows.size(), k0 + 8);
        for (std::size_t idx = 1; idx < (std::size_t{1} << (k1 - k0)); ++idx) {
          const int low = std::countr_zero(idx);
          std::uint64_t* dst = base + idx * len;
          const std::uint64_t* prev = base + (idx & (idx - 1)) * len;
          const std::uint64_t* p = row(pivot_rows[k0 + low]) + w;
          for (std::size_t j = 0; j < len; ++j) dst[j] = prev[j] ^ p[j];
        }
      }
      for (std::uint32_t ri : active) {
        std::uint64_t* r = row(ri) + w;
        const std::uint64_t s = r[0] & taken;
        if (!s) continue;
        for (std::size_t g = 0; g < groups; ++g) {
          const std::size_t k0 = 8 * g, k1 = std::min(pivot_rows.size(), k0 + 8);
          std::size_t idx = 0;
          for (std::size_t k = k0; k < k1; ++k) idx |= ((s >> pivot_bits[k]) & 1) << (k - k0);
          if (idx) xor_into(r, table.data() + (g * 256 + idx) * len, len);
        }
      }
    }
    return rank;
  }

 private:
  static constexpr std::uint32_t kUsed = 0xffffffffu;

  static void xor_into(std::uint64_t* dst, const std::uint64_t* src, std::size_t len) {
    for (std::size_t j = 0; j < len; ++j) dst[j] ^= src[j];
  }

  std::size_t rows_ = 0, cols_ = 0, words_ = 0;
  std::vector<std::uint64_t> data_;
};

/// Largest n + m accepted by gamma_rank (matrix side 2^(n+m)).
inline constexpr int kGammaRankBudget = 16;

/// GF(2) rank of the 2^(n+m) square matrix with rows and columns indexed by
/// pairs (a, b) = a + 2^n b and entry 1 at ((u, v), (a, b)) iff
/// F(a + u) = b + v. Row (u, v) is the graph of F translated by (u, v) and is
/// written straight into the elimination buffer.
inline std::size_t gamma_rank(const Vbf& f) {
  const int n = f.n(), m = f.m();
  if (n + m > kGammaRankBudget)
    throw Error("gamma rank needs n + m <= " + std::to_string(kGammaRankBudget) + ", got " + std::to_string(n + m));
  const std::size_t side = std::size_t{1} << (n + m);
  BitMatrix mat(side, side);
  for (std::uint32_t v = 0; v < (1u << m); ++v)
    for (std::uint32_t u = 0; u < (1u << n); ++u) {
      const std::size_t r = u | (std::size_t{v} << n);
      for (std::uint32_t a = 0; a < (1u << n); ++a) mat.set(r, a | (std::size_t{f(a ^ u) ^ v} << n));
    }
  return mat.eliminate();
}

// ---------------------------------------------------------------------------
// Classical Walsh spectrum

/// Walsh multiset of x^3 (and every quadratic APN function with the same
/// spectrum) for even n >= 4: 0 occurs 2^(n-2)(2^n-1) times,
/// +-2^((n+2)/2) occur (2^n-1)(2^(n-3) +- 2^((n-4)/2))/3 times and
/// +-2^(n/2) occur 2(2^n-1)(2^(n-1) +- 2^(n/2-1))/3 times.
inline WalshSpectrum classical_spectrum(int n) {
  if (n % 2 != 0 || n < 4) throw Error("classical spectrum is defined for even n >= 4");
  if (n > 30) throw Error("n too large");
  const std::int64_t N = (std::int64_t{1} << n) - 1;
  const std::int64_t big = std::int64_t{1} << ((n + 2) / 2), small = std::int64_t{1} << (n / 2);
  auto third = [](std::int64_t v) {
    if (v % 3 != 0) throw Error("classical spectrum count is not integral");
    return v / 3;
  };
  WalshSpectrum s;
  s.counts[0] = static_cast<std::uint64_t>((std::int64_t{1} << (n - 2)) * N);
  s.counts[big] = static_cast<std::uint64_t>(third(N * ((std::int64_t{1} << (n - 3)) + (std::int64_t{1} << ((n - 4) / 2)))));
  s.counts[-big] = static_cast<std::uint64_t>(third(N * ((std::int64_t{1} << (n - 3)) - (std::int64_t{1} << ((n - 4) / 2)))));
  s.counts[small] = static_cast<std::uint64_t>(third(2 * N * ((std::int64_t{1} << (n - 1)) + (std::int64_t{1} << (n / 2 - 1)))));
  s.counts[-small] = static_cast<std::uint64_t>(third(2 * N * ((std::int64_t{1} << (n - 1)) - (std::int64_t{1} << (n / 2 - 1)))));
  return s;
}

inline bool is_classical(const WalshSpectrum& s, int n) { return s == classical_spectrum(n); }

inline bool is_classical(const Vbf& f) {
  if (f.n() != f.m()) throw Error("classical spectrum compares (n,n)-functions");
  return is_classical(walsh_spectrum(f), f.n());
}

/// Multiset of |W|, unchanged by EA and CCZ equivalence.
inline std::map<std::int64_t, std::uint64_t> extended_walsh(const WalshSpectrum& s) {
  std::map<std::int64_t, std::uint64_t> out;
  for (const auto& [v, c] : s.counts) out[v < 0 ? -v : v] += c;
  return out;
}

// ---------------------------------------------------------------------------
// Bundles

struct InvariantBundle {
  unsigned uniformity = 0;
  std::optional<std::size_t> gamma_rank;  // absent when skipped or over budget
  WalshSpectrum walsh;
  int degree = 0;
};

inline InvariantBundle invariant_bundle(const Vbf& f, bool with_gamma_rank = true) {
  InvariantBundle b;
  b.uniformity = differential_uniformity(f);
  if (with_gamma_rank && f.n() + f.m() <= kGammaRankBudget) b.gamma_rank = gamma_rank(f);
  b.walsh = walsh_spectrum(f);
  b.degree = algebraic_degree(f);
  return b;
}

struct Verdict {
  bool inequivalent = false;
  std::string invariant;  // first differing invariant
  std::string scope;      // "CCZ" or "EA": the equivalence the difference rules out
};

/// Compares the bundles invariant by invariant. Only ever reports a proof
/// of inequivalence or "undetermined".
inline Verdict distinguish(const InvariantBundle& a, const InvariantBundle& b) {
  if (a.uniformity != b.uniformity) return {true, "differential-uniformity", "CCZ"};
  if (a.gamma_rank && b.gamma_rank && *a.gamma_rank != *b.gamma_rank) return {true, "gamma-rank", "CCZ"};
  if (extended_walsh(a.walsh) != extended_walsh(b.walsh)) return {true, "walsh-spectrum", "CCZ"};
  if (a.degree != b.degree && std::max(a.degree, b.degree) >= 2) return {true, "algebraic-degree", "EA"};
  return {false, "", ""};
}

inline Verdict distinguish(const Vbf& f, const Vbf& g, bool with_gamma_rank = true) {
  if (f.n() != g.n() || f.m() != g.m()) return {true, "dimensions", "CCZ"};
  return distinguish(invariant_bundle(f, with_gamma_rank), invariant_bundle(g, with_gamma_rank));
}

}  // namespace apn
