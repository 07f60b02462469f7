#include <gtest/gtest.h>

#include <random>

#include "apn/constructions.hpp"
#include "apn/invariants.hpp"
#include "support.hpp"

using namespace apn;
using apn::oracle::cube;

namespace {

/// Plain row-by-row insertion rank over GF(2), rows as vector<bool>.
std::size_t naive_rank(std::vector<std::vector<bool>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p][c]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && rows[r][c])
        for (std::size_t k = 0; k < cols; ++k) rows[r][k] = rows[r][k] ^ rows[rank][k];
    ++rank;
  }
  return rank;
}

std::size_t naive_gamma_rank(const Vbf& f) {
  const std::size_t side = std::size_t{1} << (f.n() + f.m());
  const std::uint32_t maskn = (1u << f.n()) - 1;
  std::vector<std::vector<bool>> rows(side, std::vector<bool>(side, false));
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      const std::uint32_t u = r & maskn, v = static_cast<std::uint32_t>(r >> f.n());
      const std::uint32_t a = c & maskn, b = static_cast<std::uint32_t>(c >> f.n());
      rows[r][c] = f(a ^ u) == (b ^ v);
    }
  return naive_rank(std::move(rows));
}

}  // namespace

TEST(BitMatrix, RankMatchesNaive) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 1 + rng() % 300, cols = 1 + rng() % 300;
    const double density = (trial % 4 + 1) * 0.1;
    BitMatrix m(rows, cols);
    std::vector<std::vector<bool>> ref(rows, std::vector<bool>(cols));
    std::bernoulli_distribution bit(density);
    // Low-rank structure on some trials: rows are combinations of a few seeds.
    const bool low_rank = trial % 3 == 0;
    std::vector<std::vector<bool>> seeds(5, std::vector<bool>(cols));
    for (auto& s : seeds)
      for (std::size_t c = 0; c < cols; ++c) s[c] = bit(rng);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        bool v = bit(rng);
        if (low_rank) {
          v = false;
          for (std::size_t s = 0; s < seeds.size(); ++s)
            if ((r >> s) & 1) v = v ^ seeds[s][c];
        }
        ref[r][c] = v;
        m.set(r, c, v);
      }
    const auto expect = naive_rank(ref);
    EXPECT_EQ(m.rank(), expect) << rows << "x" << cols;
    EXPECT_LE(expect, std::min(rows, cols));
  }
}

TEST(BitMatrix, IdentityAndAccessors) {
  BitMatrix m(130, 130);
  for (std::size_t i = 0; i < 130; ++i) m.set(i, i);
  EXPECT_EQ(m.rank(), 130u);
  EXPECT_TRUE(m.get(129, 129));
  m.flip(129, 129);
  EXPECT_FALSE(m.get(129, 129));
  EXPECT_EQ(m.rank(), 129u);
}

TEST(GammaRank, MatchesNaiveOnSmallFunctions) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 5 && n + m <= 9; ++m)
      for (int trial = 0; trial < 3; ++trial) {
        const auto f = oracle::random_function(rng, n, m);
        ASSERT_EQ(gamma_rank(f), naive_gamma_rank(f)) << n << " " << m;
      }
  for (int n = 2; n <= 4; ++n) EXPECT_EQ(gamma_rank(cube(n)), naive_gamma_rank(cube(n)));
}

TEST(GammaRank, Bounds) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 5; ++n) {
    const auto f = oracle::random_function(rng, n, n);
    const auto r = gamma_rank(f);
    EXPECT_GE(r, std::size_t{1} << n);
    EXPECT_LE(r, std::size_t{1} << (2 * n));
  }
  EXPECT_THROW(gamma_rank(oracle::random_function(rng, 9, 8)), Error);
}

TEST(GammaRank, EaInvarianceN6) {
  const auto F = cube(6);
  const auto base = gamma_rank(F);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto G = ea_transform(F, oracle::random_affine_bijection(rng, 6), oracle::random_affine_bijection(rng, 6),
                                oracle::random_affine(rng, 6, 6));
    EXPECT_EQ(gamma_rank(G), base);
  }
}

TEST(ClassicalSpectrum, Counts) {
  for (int n = 4; n <= 20; n += 2) {
    const auto s = classical_spectrum(n);
    const std::uint64_t q = std::uint64_t{1} << n;
    EXPECT_EQ(s.total(), q * (q - 1));
    EXPECT_EQ(s.counts.size(), 5u);
  }
  const auto s6 = classical_spectrum(6);
  EXPECT_EQ(s6.counts.at(0), 1008u);
  EXPECT_EQ(s6.counts.at(16), 210u);
  EXPECT_EQ(s6.counts.at(-16), 126u);
  EXPECT_EQ(s6.counts.at(8), 1512u);
  EXPECT_EQ(s6.counts.at(-8), 1176u);
  EXPECT_THROW(classical_spectrum(5), Error);
  EXPECT_THROW(classical_spectrum(2), Error);
}

TEST(ClassicalSpectrum, CubeIsClassical) {
  for (int n = 4; n <= 10; n += 2) EXPECT_TRUE(is_classical(cube(n))) << n;
}

TEST(ClassicalSpectrum, RowSevenIsNot) {
  const auto fs = oracle::field(6);
  const auto maps = tabulated_maps(*fs);
  const auto row7 = hyperplane_modify(*fs, cube(6), maps[6]);
  EXPECT_FALSE(is_classical(row7));
  const auto vals = walsh_spectrum(row7).values();
  EXPECT_EQ(vals, (std::vector<std::int64_t>{-32, -16, -8, 0, 8, 16, 32}));
}

TEST(WalshUnderEa, LinearPartsKeepSignedMultiset) {
  std::mt19937_64 rng(5);
  const auto F = cube(6);
  const auto base = walsh_spectrum(F);
  for (int i = 0; i < 10; ++i) {
    const AffineMap A1{oracle::random_invertible(rng, 6), 0}, A2{oracle::random_invertible(rng, 6), 0};
    const auto G = ea_transform(F, A1, A2, {LinearMap::zero(6, 6), 0});
    EXPECT_EQ(walsh_spectrum(G), base);
    const auto H = ea_transform(F, oracle::random_affine_bijection(rng, 6), oracle::random_affine_bijection(rng, 6),
                                oracle::random_affine(rng, 6, 6));
    EXPECT_EQ(extended_walsh(walsh_spectrum(H)), extended_walsh(base));
  }
}

TEST(Distinguish, Verdicts) {
  const auto F = cube(6);
  EXPECT_FALSE(distinguish(F, F).inequivalent);
  std::mt19937_64 rng(6);
  const auto G = ea_transform(F, oracle::random_affine_bijection(rng, 6), oracle::random_affine_bijection(rng, 6),
                              oracle::random_affine(rng, 6, 6));
  EXPECT_FALSE(distinguish(F, G).inequivalent);
  const auto fs = oracle::field(6);
  const auto row7 = hyperplane_modify(*fs, F, tabulated_maps(*fs)[6]);
  const auto v = distinguish(F, row7);
  EXPECT_TRUE(v.inequivalent);
  EXPECT_EQ(v.invariant, "gamma-rank");
  const auto inv = Vbf::power_function(fs, 62);
  EXPECT_EQ(distinguish(F, inv).invariant, "differential-uniformity");
  // Same uniformity, gamma rank skipped: the spectrum decides.
  EXPECT_EQ(distinguish(F, row7, false).invariant, "walsh-spectrum");
}

TEST(Distinguish, DegreeOnlyCountsFromTwo) {
  InvariantBundle a, b;
  a.degree = 0;
  b.degree = 1;
  EXPECT_FALSE(distinguish(a, b).inequivalent);
  b.degree = 2;
  const auto v = distinguish(a, b);
  EXPECT_TRUE(v.inequivalent);
  EXPECT_EQ(v.scope, "EA");
}
