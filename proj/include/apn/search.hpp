#pragma once

// Counting experiments and parameter searches.
//
// Random sampling uses SplitMix64 in counter mode: sample i of a run with
// seed s is splitmix64_mix(s + (i + 1) * 0x9e3779b97f4a7c15), where
//   z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//   z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//   z =  z ^ (z >> 31)
// so any sample can be regenerated on its own and results do not depend on
// how samples are split across workers.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "apn/constructions.hpp"
#include "apn/error.hpp"
#include "apn/linear.hpp"
#include "apn/parallel.hpp"
#include "apn/vbf.hpp"

namespace apn {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ull;

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Value number `index` of the stream for `seed`.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  return splitmix64_mix(seed + (index + 1) * kGoldenGamma);
}

/// Sequential form of the same stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += kGoldenGamma;
    return splitmix64_mix(state_);
  }
  /// Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw Error("empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
      const std::uint64_t v = next();
      if (v < limit) return v % bound;
    }
  }

 private:
  std::uint64_t state_;
};

enum class SearchMode { exhaustive, random };

struct SearchOptions {
  SearchMode mode = SearchMode::exhaustive;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::size_t cap = 1000;
  bool allow_long = false;  // permits the n = 6 exhaustive run
};

struct SearchReport {
  std::string space;
  std::string mode;
  std::uint64_t space_size = 0;
  std::uint64_t examined = 0;
  std::uint64_t hits = 0;
  std::vector<std::uint64_t> hit_codes;  // ascending, at most `cap`
  std::size_t cap = 0;
  bool truncated = false;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double seconds = 0;
  /// Oracle checks: hits re-tested with is_apn, plus a 1% sample of all
  /// examined candidates compared criterion against is_apn.
  std::uint64_t hits_verified = 0;
  std::uint64_t sample_checked = 0;
  std::uint64_t disagreements = 0;
  /// Random mode: hits / examined * space_size.
  double estimate = 0;
};

/// Largest n for which the exhaustive Tr.L search runs without allow_long.
inline constexpr int kExhaustiveTrLimit = 5;

namespace detail {

inline bool one_percent(std::uint64_t key, std::uint64_t salt) {
  return splitmix64_mix(key ^ (salt * 0xd1b54a32d192ed03ull)) % 100 == 0;
}

}  // namespace detail

/// Counts linear maps L with L(e0) = 0 for which F + Tr(x) L(x) is APN. The
/// maps are coded as in TraceLinearCriterion, so the space has 2^(n(n-1))
/// codes; exhaustive mode splits it into contiguous ranges per worker.
inline SearchReport search_tr_l(const FieldSpec& field, const Vbf& F, Elem e0, const SearchOptions& opt) {
  const auto t_start = std::chrono::steady_clock::now();
  const int n = field.n();
  const TraceLinearCriterion crit(field, F, e0);
  SearchReport rep;
  rep.space = "linear L on GF(2^" + std::to_string(n) + ") with L(0x" + FieldSpec::hex(e0) + ") = 0";
  rep.space_size = crit.space_size();
  rep.cap = opt.cap;
  rep.seed = opt.seed;
  rep.workers = std::max(1u, opt.workers);
  const bool exhaustive = opt.mode == SearchMode::exhaustive;
  rep.mode = exhaustive ? "exhaustive" : "random";
  if (exhaustive) {
    if (n > 6 || (n > kExhaustiveTrLimit && !opt.allow_long))
      throw Error("exhaustive search over 2^" + std::to_string(n * (n - 1)) +
                  " maps is over budget" + (n == 6 ? " (pass the long-run flag)" : ""));
  }
  const std::uint64_t total = exhaustive ? rep.space_size : opt.samples;
  const bool verify_all_hits = n <= kExhaustiveTrLimit || !exhaustive;
  const std::uint64_t mask = rep.space_size - 1;

  struct Partial {
    std::uint64_t hits = 0, verified = 0, checked = 0, bad = 0;
    std::vector<std::uint64_t> codes;
  };
  std::vector<Partial> parts(rep.workers);
  const auto hyper = [&](const LinearMap& L) { return is_apn(hyperplane_modify(field, F, L)); };

  parallel_chunks(rep.workers, total, [&](unsigned w, std::uint64_t begin, std::uint64_t end) {
    Partial& p = parts[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      const std::uint64_t code = exhaustive ? i : (splitmix64_at(opt.seed, i) & mask);
      const bool hit = crit.holds(code);
      const bool sampled = detail::one_percent(i, opt.seed);
      const bool verify = hit && (verify_all_hits || detail::one_percent(code, opt.seed + 1));
      if (sampled || verify) {
        const bool direct = hyper(crit.decode(code));
        if (direct != hit) ++p.bad;
        if (sampled) ++p.checked;
        if (verify) ++p.verified;
      }
      if (!hit) continue;
      ++p.hits;
      if (exhaustive) {
        if (p.codes.size() < opt.cap) p.codes.push_back(code);
      } else {
        p.codes.push_back(code);
        if (p.codes.size() > 4 * opt.cap + 64) {
          std::sort(p.codes.begin(), p.codes.end());
          p.codes.erase(std::unique(p.codes.begin(), p.codes.end()), p.codes.end());
          if (p.codes.size() > opt.cap) p.codes.resize(opt.cap);
        }
      }
    }
  });

  for (const auto& p : parts) {
    rep.hits += p.hits;
    rep.hits_verified += p.verified;
    rep.sample_checked += p.checked;
    rep.disagreements += p.bad;
    rep.hit_codes.insert(rep.hit_codes.end(), p.codes.begin(), p.codes.end());
  }
  std::sort(rep.hit_codes.begin(), rep.hit_codes.end());
  rep.hit_codes.erase(std::unique(rep.hit_codes.begin(), rep.hit_codes.end()), rep.hit_codes.end());
  if (rep.hit_codes.size() > opt.cap) rep.hit_codes.resize(opt.cap);
  rep.examined = total;
  // Distinct hits exceed the list when it was cut; for random mode compare
  // against the distinct count only when the list is known to be complete.
  rep.truncated = exhaustive ? rep.hits > rep.hit_codes.size() : rep.hit_codes.size() >= opt.cap && rep.hits > opt.cap;
  if (!exhaustive && total > 0)
    rep.estimate = static_cast<double>(rep.hits) / static_cast<double>(total) * static_cast<double>(rep.space_size);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Coset constants

struct CosetSearchReport {
  std::vector<std::uint32_t> admissible;
  std::vector<CosetConstants> tuples;  // two per admissible sum
  std::uint64_t verified = 0;
  std::uint64_t failures = 0;
  std::uint64_t seed = 0;
  double seconds = 0;
};

/// For each admissible sum s: the tuple (0, 0, 0, s) and one seeded random
/// tuple with the same sum, each checked with is_apn.
inline CosetSearchReport search_coset_constants(const Vbf& F, const CosetDecomposition& dec, std::uint64_t seed = 1) {
  const auto t_start = std::chrono::steady_clock::now();
  CosetSearchReport rep;
  rep.seed = seed;
  const auto sums = admissible_sums(F, dec);
  rep.admissible = sums.admissible;
  SplitMix64 rng(seed);
  const std::uint64_t outs = std::uint64_t{1} << F.m();
  for (std::uint32_t s : rep.admissible) {
    CosetConstants a{0, 0, 0, s};
    CosetConstants b{};
    for (int i = 0; i < 3; ++i) b[i] = static_cast<std::uint32_t>(rng.below(outs));
    b[3] = s ^ b[0] ^ b[1] ^ b[2];
    for (const auto& t : {a, b}) {
      rep.tuples.push_back(t);
      ++rep.verified;
      if (!is_apn(coset_modify(F, dec, t))) ++rep.failures;
    }
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Subspace sampling

struct SubspaceSample {
  int n = 0;
  int codim = 0;
  std::vector<std::vector<std::uint32_t>> bases;  // row-reduced echelon form
  std::vector<HyperplaneSpec> hyperplanes;        // codim 1
  std::vector<CosetDecomposition> decompositions; // codim 2
};

/// Draws up to `count` distinct subspaces of codimension 1 or 2, in the order
/// first seen. Stops early once every subspace has been found or after a
/// fixed number of draws.
inline SubspaceSample enumerate_subspaces(int n, int codim, std::size_t count, std::uint64_t seed) {
  if (codim != 1 && codim != 2) throw Error("codimension must be 1 or 2");
  if (n < codim + 1 || n > 16) throw Error("dimension out of range");
  SubspaceSample out;
  out.n = n;
  out.codim = codim;
  // Number of subspaces (Gaussian binomial), used as a stopping bound.
  const std::uint64_t q = std::uint64_t{1} << n;
  std::uint64_t available = q - 1;  // hyperplanes
  if (codim == 2) available = (q - 1) * (q / 2 - 1) / 3;
  const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(count, available));
  SplitMix64 rng(seed);
  std::set<std::vector<std::uint32_t>> seen;
  const int dim = n - codim;
  const std::uint64_t max_draws = 1000000 + 1000 * static_cast<std::uint64_t>(want);
  for (std::uint64_t draw = 0; draw < max_draws && out.bases.size() < want; ++draw) {
    std::vector<std::uint32_t> vecs(dim);
    for (auto& v : vecs) v = static_cast<std::uint32_t>(rng.next() & (q - 1));
    if (!gf2::independent(vecs)) continue;
    auto basis = gf2::echelon(vecs);
    if (!seen.insert(basis).second) continue;
    out.bases.push_back(basis);
    if (codim == 1) {
      std::uint32_t a = 1;
      while (std::any_of(basis.begin(), basis.end(), [&](std::uint32_t b) { return gf2::dot(a, b); })) ++a;
      out.hyperplanes.emplace_back(n, a, 0);
    } else {
      std::uint32_t leads = 0;
      for (auto b : basis) leads |= std::bit_floor(b);
      std::array<int, 2> free{};
      int k = 0;
      for (int i = 0; i < n && k < 2; ++i)
        if (!((leads >> i) & 1)) free[k++] = i;
      const std::uint32_t p1 = 1u << free[0], p2 = 1u << free[1];
      out.decompositions.emplace_back(n, basis, std::array<std::uint32_t, 4>{0, p1, p2, p1 | p2});
    }
  }
  return out;
}

}  // namespace apn
