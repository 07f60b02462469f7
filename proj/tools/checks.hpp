#pragma once

// Reference checks shared by `apn verify` and the acceptance binary. Every
// check compares library output with an independent computation or a fixed
// known value and reports one line per item.

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "apn/constructions.hpp"
#include "apn/invariants.hpp"
#include "apn/search.hpp"
#include "apn/vbf.hpp"

namespace apn::checks {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

/// Runs `body`, which fills detail and returns pass/fail; exceptions fail the check.
inline Check timed(const std::string& name, const std::function<bool(std::string&)>& body) {
  Check c;
  c.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.passed = body(c.detail);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

/// Differential uniformity by counting solutions of F(x+a)+F(x)=b directly,
/// without the library's DDT routine.
inline unsigned direct_uniformity(const Vbf& f) {
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<unsigned> row(std::size_t{1} << f.m());
  unsigned best = 0;
  for (std::uint32_t a = 1; a < q; ++a) {
    std::fill(row.begin(), row.end(), 0u);
    for (std::uint32_t x = 0; x < q; ++x) {
      const unsigned c = ++row[f(x) ^ f(x ^ a)];
      if (c > best) best = c;
    }
  }
  return best;
}

inline bool direct_apn(const Vbf& f) { return direct_uniformity(f) <= 2; }

inline std::shared_ptr<const FieldSpec> preset_field(int n) {
  return std::make_shared<const FieldSpec>(FieldSpec::preset(n));
}


/// The thirteen tabulated maps on GF(2^6) all give quadratic APN functions.
inline Check tabulated_maps_apn() {
  return timed("tabulated maps: 13 quadratic APN functions", [](std::string& d) {
    const auto fs = preset_field(6);
    const auto F = Vbf::power_function(fs, 3);
    const auto maps = tabulated_maps(*fs);
    int ok = 0;
    for (const auto& L : maps) {
      const auto G = hyperplane_modify(*fs, F, L);
      if (direct_apn(G) && algebraic_degree(G) == 2) ++ok;
    }
    d = std::to_string(ok) + "/" + std::to_string(maps.size()) + " APN and quadratic";
    return ok == 13 && maps.size() == 13;
  });
}

/// Row 7 has Walsh values {0, +-8, +-16, +-32}; the other rows are classical.
inline Check tabulated_maps_spectra() {
  return timed("tabulated maps: row 7 non-classical, others classical", [](std::string& d) {
    const auto fs = preset_field(6);
    const auto F = Vbf::power_function(fs, 3);
    const auto maps = tabulated_maps(*fs);
    const auto classical = classical_spectrum(6);
    bool ok = true;
    int classical_rows = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto s = walsh_spectrum(hyperplane_modify(*fs, F, maps[i]));
      if (i == 6) {
        const std::vector<std::int64_t> expect{-32, -16, -8, 0, 8, 16, 32};
        if (s.values() != expect) ok = false;
        d += "row 7 values {";
        for (auto v : s.values()) d += std::to_string(v) + (v == s.values().back() ? "" : ",");
        d += "}; ";
      } else if (s == classical) {
        ++classical_rows;
      } else {
        ok = false;
      }
    }
    d += std::to_string(classical_rows) + "/12 other rows classical";
    return ok && classical_rows == 12;
  });
}

/// Exponential-sum criterion against direct APN testing for every linear map
/// on GF(2^n).
inline Check exp_sum_agreement(int n) {
  return timed("exponential-sum criterion = APN over all linear maps, n=" + std::to_string(n),
                      [n](std::string& d) {
                        if (n * n > 25) throw Error("exhaustive run over 2^" + std::to_string(n * n) + " maps refused");
                        const auto fs = preset_field(n);
                        const auto F = Vbf::power_function(fs, 3);
                        const std::uint64_t total = std::uint64_t{1} << (n * n);
                        const std::uint32_t mask = (1u << n) - 1;
                        std::uint64_t disagree = 0, apn = 0;
                        for (std::uint64_t code = 0; code < total; ++code) {
                          std::vector<std::uint32_t> cols(n);
                          for (int i = 0; i < n; ++i) cols[i] = (code >> (i * n)) & mask;
                          const LinearMap L(n, n, std::move(cols));
                          const bool crit = exp_sum_condition(*fs, L).holds;
                          const bool direct = direct_apn(hyperplane_modify(*fs, F, L));
                          apn += direct;
                          disagree += crit != direct;
                        }
                        d = "criterion ⇔ APN on " + std::to_string(total - disagree) + "/" + std::to_string(total) +
                            " maps (" + std::to_string(apn) + " APN)";
                        return disagree == 0;
                      });
}

inline Check exp_sum_zero_map(const std::vector<int>& dims) {
  return timed("exponential sum for L=0 equals 2^(n-1)-1", [dims](std::string& d) {
    bool ok = true;
    for (int n : dims) {
      const auto fs = preset_field(n);
      const auto r = exp_sum_condition(*fs, LinearMap::zero(n, n));
      d += "n=" + std::to_string(n) + ": " + std::to_string(r.lhs) + " (target " + std::to_string(r.target) + ") ";
      ok = ok && r.lhs == (std::int64_t{1} << (n - 1)) - 1;
    }
    return ok;
  });
}

/// Coset constants on the Tr^8_2 fibres of x^3 over GF(2^8).
inline Check coset_example_n8() {
  return timed("n=8 coset example: admissible sums and modified table", [](std::string& d) {
    const auto fs = preset_field(8);
    const auto F = Vbf::power_function(fs, 3);
    const auto dec = CosetDecomposition::trace_fibres(*fs);
    const auto sums = admissible_sums(F, dec);
    std::vector<std::uint32_t> expect{0, 1, fs->gen_pow(85), fs->gen_pow(170)};
    std::sort(expect.begin(), expect.end());
    const bool sums_ok = sums.admissible == expect;
    d = "admissible {";
    for (auto s : sums.admissible) d += fs->format(s, true) + (s == sums.admissible.back() ? "" : ",");
    d += "}";
    const CosetConstants a{0, 0, fs->gen_pow(170), 1};
    const auto G = coset_modify(F, dec, a);
    bool pointwise = true;
    for (Elem x = 0; x < 256; ++x) {
      const Elem expect_x =
          fs->pow(x, 3) ^ fs->mul(fs->gen_pow(85), fs->mul(fs->trace(x), fs->trace_to_subfield(x, 2)));
      if (G(x) != expect_x) pointwise = false;
    }
    const bool apn = direct_apn(G);
    d += std::string(", table ") + (pointwise ? "matches" : "differs from") + " x^3 + g^85 Tr(x) Tr2(x), " +
         (apn ? "APN" : "not APN");
    return sums_ok && pointwise && apn;
  });
}

/// Gamma ranks of x^3 and the coset-modified function on GF(2^8).
inline Check coset_example_n8_ranks() {
  return timed("n=8 coset example: gamma ranks 11818 and 13842", [](std::string& d) {
    const auto fs = preset_field(8);
    const auto F = Vbf::power_function(fs, 3);
    const auto G = coset_modify(F, CosetDecomposition::trace_fibres(*fs), {0, 0, fs->gen_pow(170), 1});
    const auto rf = gamma_rank(F);
    const auto rg = gamma_rank(G);
    d = "x^3: " + std::to_string(rf) + ", modified: " + std::to_string(rg);
    return rf == 11818 && rg == 13842;
  });
}

/// Predicted number of solutions of 1/x + 1/(x+a) = b (with 1/0 = 0) against
/// enumeration, and the solution set for b = 1/a.
inline std::vector<Check> inverse_root_counts(const std::vector<int>& dims) {
  std::vector<Check> out;
  for (int n : dims) {
    out.push_back(timed("inverse-function root counts, n=" + std::to_string(n), [n](std::string& d) {
      const auto fs = preset_field(n);
      std::uint64_t pairs = 0, bad = 0, bad_sets = 0;
      const auto w = fs->cube_roots_of_unity();
      for (Elem a = 1; a < fs->size(); ++a) {
        for (Elem b = 0; b < fs->size(); ++b) {
          ++pairs;
          std::size_t count = 0;
          for (Elem x = 0; x < fs->size(); ++x) {
            const Elem ix = x ? fs->inv(x) : 0, ixa = (x ^ a) ? fs->inv(x ^ a) : 0;
            count += (ix ^ ixa) == b;
          }
          if (static_cast<std::size_t>(nyberg_root_count(*fs, a, b)) != count) ++bad;
        }
        auto roots = nyberg_roots(*fs, a, fs->inv(a));
        std::vector<Elem> expect{0, a, fs->mul(w[1], a), fs->mul(w[2], a)};
        std::sort(roots.begin(), roots.end());
        std::sort(expect.begin(), expect.end());
        if (roots != expect) ++bad_sets;
      }
      d = std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " counts match, " +
          std::to_string(bad_sets) + " bad root sets for b=1/a";
      return bad == 0 && bad_sets == 0;
    }));
  }
  return out;
}

inline void print(const Check& c, std::FILE* out = stdout) {
  std::fprintf(out, "%s  %-72s %8.2fs  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.seconds,
               c.detail.c_str());
}

}  // namespace apn::checks
