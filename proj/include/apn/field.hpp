#pragma once

// Arithmetic in GF(2^n), 2 <= n <= 16, polynomial basis.
//
// Elements are encoded little-endian: bit i of the encoding is the coordinate
// of alpha^i, where alpha is the root of the defining polynomial.

#include <array>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "apn/error.hpp"

namespace apn {

using Elem = std::uint32_t;

namespace detail {

inline int poly_degree(std::uint32_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

// Remainder of a modulo b over GF(2)[x].
inline std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) a ^= b << (da - db);
  return a;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= v; ++p) {
    if (v % p == 0) {
      out.push_back(p);
      while (v % p == 0) v /= p;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

}  // namespace detail

/// True iff `modulus` (bit n set) is irreducible over GF(2). Exhaustive
/// trial division by every polynomial of degree 1..n/2.
inline bool is_irreducible(std::uint32_t modulus) {
  const int n = detail::poly_degree(modulus);
  if (n < 1) return false;
  for (std::uint32_t d = 2; detail::poly_degree(d) <= n / 2; ++d)
    if (detail::poly_mod(modulus, d) == 0) return false;
  return true;
}

class FieldSpec {
 public:
  static constexpr int kMinDegree = 2;
  static constexpr int kMaxDegree = 16;

  /// Builds GF(2^n) over `modulus`. If `generator` is absent, alpha (encoding
  /// 2) is used when it is primitive, otherwise the smallest primitive
  /// element is searched for.
  explicit FieldSpec(std::uint32_t modulus, std::optional<Elem> generator = std::nullopt)
      : modulus_(modulus), n_(detail::poly_degree(modulus)) {
    if (n_ < kMinDegree || n_ > kMaxDegree)
      throw Error("field degree must be in [2,16], got modulus 0x" + hex(modulus));
    if (!is_irreducible(modulus)) throw Error("modulus 0x" + hex(modulus) + " is reducible");
    order_ = (Elem{1} << n_) - 1;
    if (generator) {
      if (*generator == 0 || *generator > order_ || !is_primitive_slow(*generator))
        throw Error("generator 0x" + hex(*generator) + " is not a primitive element");
      generator_ = *generator;
    } else {
      generator_ = 0;
      for (Elem g = 2; g <= order_ && !generator_; ++g)
        if (is_primitive_slow(g)) generator_ = g;
      if (order_ == 1) generator_ = 1;
    }
    build_tables();
  }

  /// Preset defining polynomials: n=6 is
  /// x^6+x^4+x^3+x+1, n=8 is x^8+x^4+x^3+x^2+1. Other degrees use the
  /// lexicographically smallest primitive polynomial.
  static std::uint32_t default_modulus(int n) {
    if (n == 6) return 0x5B;
    if (n == 8) return 0x11D;
    if (n < kMinDegree || n > kMaxDegree) throw Error("field degree must be in [2,16]");
    for (std::uint32_t m = (1u << n) | 1u; m < (2u << n); m += 2)
      if (is_irreducible(m) && alpha_is_primitive(m)) return m;
    throw Error("no primitive polynomial found");  // unreachable
  }

  static FieldSpec preset(int n) { return FieldSpec(default_modulus(n)); }

  int n() const { return n_; }
  std::uint32_t modulus() const { return modulus_; }
  Elem generator() const { return generator_; }
  std::uint32_t size() const { return order_ + 1; }
  /// Order of the multiplicative group, 2^n - 1.
  std::uint32_t group_order() const { return order_; }

  static Elem add(Elem x, Elem y) { return x ^ y; }

  Elem mul(Elem x, Elem y) const {
    if (x == 0 || y == 0) return 0;
    std::uint32_t s = log_[x] + log_[y];
    if (s >= order_) s -= order_;
    return exp_[s];
  }

  /// Shift-and-add multiplication with reduction by the modulus; independent
  /// of the log tables.
  Elem mul_direct(Elem x, Elem y) const {
    Elem r = 0;
    const Elem top = Elem{1} << n_;
    while (y) {
      if (y & 1) r ^= x;
      y >>= 1;
      x <<= 1;
      if (x & top) x ^= modulus_;
    }
    return r;
  }

  Elem inv(Elem x) const {
    if (x == 0) throw Error("inverse of zero");
    return exp_[(order_ - log_[x]) % order_];
  }

  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }

  Elem sqr(Elem x) const { return mul(x, x); }

  /// x^k for k >= 0, with 0^0 = 1.
  Elem pow(Elem x, std::uint64_t k) const {
    if (k == 0) return 1;
    if (x == 0) return 0;
    return exp_[static_cast<std::uint32_t>((std::uint64_t{log_[x]} * (k % order_)) % order_)];
  }

  /// generator^k, k taken modulo 2^n - 1.
  Elem gen_pow(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(order_);
    if (r < 0) r += order_;
    return exp_[static_cast<std::uint32_t>(r)];
  }

  /// Discrete log to base generator; x must be nonzero.
  std::uint32_t log(Elem x) const {
    if (x == 0) throw Error("log of zero");
    return log_[x];
  }

  /// Absolute trace, Tr(x) = sum_{i<n} x^(2^i).
  int trace(Elem x) const { return trace_bits_[x]; }

  /// Relative trace to GF(2^m), sum_{i < n/m} x^(2^(i*m)). m must divide n.
  Elem trace_to_subfield(Elem x, int m) const {
    if (m <= 0 || n_ % m != 0)
      throw Error("subfield degree " + std::to_string(m) + " does not divide " + std::to_string(n_));
    Elem acc = 0;
    Elem term = x;
    for (int i = 0; i < n_ / m; ++i) {
      acc ^= term;
      for (int j = 0; j < m; ++j) term = sqr(term);
    }
    return acc;
  }

  /// {1, w, w^2} with w = generator^((2^n-1)/3). Requires even n.
  std::array<Elem, 3> cube_roots_of_unity() const {
    if (n_ % 2 != 0) throw Error("GF(4) is not a subfield for odd n");
    const std::uint32_t third = order_ / 3;
    return {Elem{1}, exp_[third], exp_[2 * third]};
  }

  /// Smallest encoding with absolute trace 1.
  Elem trace_one_element() const {
    for (Elem x = 1; x <= order_; ++x)
      if (trace(x)) return x;
    throw Error("no trace-one element");  // unreachable
  }

  /// Vector a with Tr(x) = popcount(a & x) mod 2, i.e. a_i = Tr(alpha^i).
  std::uint32_t trace_functional() const { return trace_functional_; }

  /// Formats an element as hex ("0x1b") or as a generator power ("g^12").
  std::string format(Elem x, bool as_power) const {
    if (!as_power) return "0x" + hex(x);
    if (x == 0) return "0";
    return "g^" + std::to_string(log_[x]);
  }

  /// Parses "0x..", plain hex digits, "0", or "g^k".
  Elem parse(const std::string& text) const {
    std::string s = text;
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
    s = s.substr(start);
    if (s.empty()) throw Error("empty field element");
    if (s.rfind("g^", 0) == 0 || s.rfind("a^", 0) == 0) {
      std::size_t pos = 0;
      long long k = 0;
      try {
        k = std::stoll(s.substr(2), &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos + 2 != s.size()) throw Error("malformed power '" + text + "'");
      return gen_pow(k);
    }
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos, 16);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw Error("malformed hex element '" + text + "'");
    if (v > order_) throw Error("element '" + text + "' out of range for n=" + std::to_string(n_));
    return static_cast<Elem>(v);
  }

  bool operator==(const FieldSpec& o) const {
    return modulus_ == o.modulus_ && generator_ == o.generator_;
  }

  static std::string hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    if (v == 0) return "0";
    std::string s;
    while (v) {
      s.insert(s.begin(), digits[v & 15]);
      v >>= 4;
    }
    return s;
  }

 private:
  static bool alpha_is_primitive(std::uint32_t modulus) {
    const int n = detail::poly_degree(modulus);
    const std::uint64_t order = (std::uint64_t{1} << n) - 1;
    auto pw = [&](std::uint64_t k) {
      std::uint32_t r = 1, b = 2;
      const std::uint32_t top = 1u << n;
      auto mm = [&](std::uint32_t x, std::uint32_t y) {
        std::uint32_t acc = 0;
        while (y) {
          if (y & 1) acc ^= x;
          y >>= 1;
          x <<= 1;
          if (x & top) x ^= modulus;
        }
        return acc;
      };
      while (k) {
        if (k & 1) r = mm(r, b);
        b = mm(b, b);
        k >>= 1;
      }
      return r;
    };
    if (pw(order) != 1) return false;
    for (auto p : detail::prime_factors(order))
      if (pw(order / p) == 1) return false;
    return true;
  }

  Elem pow_direct(Elem x, std::uint64_t k) const {
    Elem r = 1;
    while (k) {
      if (k & 1) r = mul_direct(r, x);
      x = mul_direct(x, x);
      k >>= 1;
    }
    return r;
  }

  bool is_primitive_slow(Elem g) const {
    if (pow_direct(g, order_) != 1) return false;
    for (auto p : detail::prime_factors(order_))
      if (pow_direct(g, order_ / p) == 1) return false;
    return true;
  }

  void build_tables() {
    const std::uint32_t q = order_ + 1;
    exp_.assign(2 * q, 0);
    log_.assign(q, 0);
    Elem x = 1;
    for (std::uint32_t k = 0; k < order_; ++k) {
      exp_[k] = x;
      log_[x] = k;
      x = mul_direct(x, generator_);
    }
    for (std::uint32_t k = order_; k < 2 * q; ++k) exp_[k] = exp_[k - order_];

    trace_bits_.assign(q, 0);
    trace_functional_ = 0;
    for (int i = 0; i < n_; ++i) {
      Elem t = 0, term = Elem{1} << i;
      for (int j = 0; j < n_; ++j) {
        t ^= term;
        term = mul_direct(term, term);
      }
      // t is 0 or 1
      if (t & 1) trace_functional_ |= 1u << i;
    }
    for (Elem v = 0; v < q; ++v)
      trace_bits_[v] = static_cast<std::uint8_t>(__builtin_parity(v & trace_functional_));
  }

  std::uint32_t modulus_;
  int n_;
  std::uint32_t order_ = 0;
  Elem generator_ = 0;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint8_t> trace_bits_;
  std::uint32_t trace_functional_ = 0;
};

}  // namespace apn
