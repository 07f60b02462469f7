#pragma once

// Shared helpers for the test binaries: seeded random objects and
// brute-force oracles that avoid the library's own fast paths.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "apn/constructions.hpp"
#include "apn/field.hpp"
#include "apn/linear.hpp"
#include "apn/vbf.hpp"

namespace apn::oracle {

inline std::shared_ptr<const FieldSpec> field(int n) { return std::make_shared<const FieldSpec>(FieldSpec::preset(n)); }

inline Vbf cube(int n) { return Vbf::power_function(field(n), 3); }

inline LinearMap random_linear(std::mt19937_64& rng, int n_in, int n_out) {
  std::vector<std::uint32_t> c(n_in);
  for (auto& v : c) v = static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << n_out) - 1));
  return LinearMap(n_in, n_out, std::move(c));
}

inline LinearMap random_invertible(std::mt19937_64& rng, int n) {
  for (;;) {
    auto m = random_linear(rng, n, n);
    if (m.invertible()) return m;
  }
}

inline AffineMap random_affine_bijection(std::mt19937_64& rng, int n) {
  return {random_invertible(rng, n), static_cast<std::uint32_t>(rng() & ((1u << n) - 1))};
}

inline AffineMap random_affine(std::mt19937_64& rng, int n_in, int n_out) {
  return {random_linear(rng, n_in, n_out), static_cast<std::uint32_t>(rng() & ((1u << n_out) - 1))};
}

inline Vbf random_function(std::mt19937_64& rng, int n, int m) {
  std::vector<std::uint32_t> t(std::size_t{1} << n);
  for (auto& v : t) v = static_cast<std::uint32_t>(rng() & ((std::uint64_t{1} << m) - 1));
  return Vbf(n, m, std::move(t));
}

/// Differential uniformity by counting every (a, x) directly.
inline unsigned brute_uniformity(const Vbf& f) {
  unsigned best = 0;
  std::vector<unsigned> cnt(std::size_t{1} << f.m());
  for (std::uint32_t a = 1; a < f.size(); ++a) {
    std::fill(cnt.begin(), cnt.end(), 0u);
    for (std::uint32_t x = 0; x < f.size(); ++x) best = std::max(best, ++cnt[f(x ^ a) ^ f(x)]);
  }
  return best;
}

inline bool brute_apn(const Vbf& f) { return brute_uniformity(f) <= 2; }

/// outer o f o inner, without field binding.
inline Vbf affine_composite(const Vbf& f, const AffineMap& outer, const AffineMap& inner) {
  std::vector<std::uint32_t> t(f.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = outer(f(inner(x)));
  return Vbf(f.n(), outer.n_out(), std::move(t));
}

/// Appends a Boolean coordinate as bit m.
inline Vbf lift(const Vbf& f, const std::vector<std::uint32_t>& bit) {
  std::vector<std::uint32_t> t(f.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = f(x) | ((bit[x] & 1u) << f.m());
  return Vbf(f.n(), f.m() + 1, std::move(t));
}

/// A (4,5) pair (f, g) for concatenation tests: the two halves of an EA
/// image of x^3 on GF(2^5) along a random hyperplane. Odd variants perturb
/// one value of g; every third variant replaces g by an unrelated EA image.
inline std::pair<Vbf, Vbf> concat_pair(std::mt19937_64& rng, int variant) {
  const auto F = ea_transform(cube(5), random_affine_bijection(rng, 5), random_affine_bijection(rng, 5),
                              random_affine(rng, 5, 5));
  std::uint32_t a = 0;
  while (a == 0) a = rng() & 31;
  const HyperplaneSpec h(5, a, 0);
  std::uint32_t e0 = 0;
  while (gf2::dot(a, e0) == 0) e0 = rng() & 31;
  auto [f, g] = split(F, Embedding::from_hyperplane(h, e0));
  if (variant % 2 == 1) {
    auto t = g.table();
    t[rng() & 15] ^= 1 + (rng() % 31);
    g = Vbf(4, 5, std::move(t));
  } else if (variant % 3 == 0) {
    const auto other = ea_transform(cube(5), random_affine_bijection(rng, 5), random_affine_bijection(rng, 5),
                                    random_affine(rng, 5, 5));
    g = split(other, Embedding::canonical(5)).second;
  }
  return {f, g};
}

}  // namespace apn::oracle
