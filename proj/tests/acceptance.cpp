// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// The n=8 gamma-rank item runs only with --long (or APN_LONG=1 in the
// environment); without it the line reports SKIP.

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <random>

#include "checks.hpp"
#include "support.hpp"

using namespace apn;
using checks::Check;
using checks::direct_apn;
using checks::direct_uniformity;
using checks::timed;

namespace {

Check search_counts() {
  return timed("3  exhaustive Tr.L search: 448 at n=4, 4608 at n=5 (4 workers)", [](std::string& d) {
    bool ok = true;
    for (int n : {4, 5}) {
      const auto fs = checks::preset_field(n);
      SearchOptions opt;
      opt.workers = 4;
      const auto rep = search_tr_l(*fs, Vbf::power_function(fs, 3), fs->trace_one_element(), opt);
      d += "n=" + std::to_string(n) + ": " + std::to_string(rep.hits) + " hits in " +
           std::to_string(rep.seconds).substr(0, 5) + "s; ";
      ok = ok && rep.hits == (n == 4 ? 448u : 4608u) && rep.seconds < 60 && rep.disagreements == 0 &&
           rep.hits_verified == rep.hits;
    }
    return ok;
  });
}

Check kernel_criterion_agreement() {
  return timed("4  Tr.L criterion = direct APN (all 2^12 at n=4, 10^4 random at n=5)", [](std::string& d) {
    std::uint64_t total = 0, bad = 0;
    for (int n : {4, 5}) {
      const auto fs = checks::preset_field(n);
      const auto F = Vbf::power_function(fs, 3);
      const Elem e0 = fs->trace_one_element();
      const TraceLinearCriterion fast(*fs, F, e0);
      const std::uint64_t count = n == 4 ? fast.space_size() : 10000;
      SplitMix64 rng(20240);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t code = n == 4 ? i : rng.below(fast.space_size());
        const auto L = fast.decode(code);
        const bool direct = direct_apn(hyperplane_modify(*fs, F, L));
        const bool kernel_form = trace_linear_kernel_criterion(*fs, F, L, e0).holds;
        const bool dual_form = fast.holds(code);
        ++total;
        bad += (kernel_form != direct) || (dual_form != direct);
      }
    }
    d = std::to_string(total - bad) + "/" + std::to_string(total) + " agree";
    return bad == 0;
  });
}

Check exp_sum_criterion() {
  Check all = checks::exp_sum_agreement(4);
  const Check zero = checks::exp_sum_zero_map({4, 5, 6});
  all.name = "5  exponential-sum criterion = direct APN (2^16 maps, n=4); L=0 value";
  all.passed = all.passed && zero.passed && all.seconds < 600;
  all.detail += "; " + zero.detail;
  all.seconds += zero.seconds;
  return all;
}

Check gamma_rank_fast_tier() {
  return timed("7  gamma rank of x^3 at n=6 invariant under 20 random EA maps", [](std::string& d) {
    const auto F = oracle::cube(6);
    const auto base = gamma_rank(F);
    std::mt19937_64 rng(7);
    int equal = 0;
    for (int i = 0; i < 20; ++i) {
      const auto G = ea_transform(F, oracle::random_affine_bijection(rng, 6), oracle::random_affine_bijection(rng, 6),
                                  oracle::random_affine(rng, 6, 6));
      equal += gamma_rank(G) == base;
    }
    d = "rank " + std::to_string(base) + ", " + std::to_string(equal) + "/20 transforms equal";
    return equal == 20;
  });
}

Check concat_agreement() {
  return timed("9  concatenation criterion = direct APN on 1200 (4,5) pairs", [](std::string& d) {
    std::mt19937_64 rng(9);
    int bad = 0, apn = 0;
    const int pairs = 1200;
    for (int i = 0; i < pairs; ++i) {
      const auto [f, g] = oracle::concat_pair(rng, i);
      const bool direct = direct_apn(concatenate(f, g));
      apn += direct;
      bad += concat_is_apn(f, g).holds != direct;
    }
    d = std::to_string(pairs - bad) + "/" + std::to_string(pairs) + " agree (" + std::to_string(apn) + " APN)";
    return bad == 0;
  });
}

Check inverse_extension_apn() {
  return timed("10 inverse extension is an APN (n, n+1)-function for n=4,6", [](std::string& d) {
    bool ok = true;
    for (int n : {4, 6}) {
      const auto G = inverse_extension(FieldSpec::preset(n));
      const auto delta = direct_uniformity(G);
      d += "n=" + std::to_string(n) + ": (" + std::to_string(G.n()) + "," + std::to_string(G.m()) +
           ") delta=" + std::to_string(delta) + "; ";
      ok = ok && G.n() == n && G.m() == n + 1 && delta == 2;
    }
    return ok;
  });
}

Check decomposition_round_trip() {
  return timed("11 x^3 = f1 + u g with f1 differentially 4-uniform, n=4,5,6", [](std::string& d) {
    bool ok = true;
    for (int n : {4, 5, 6}) {
      const auto F = oracle::cube(n);
      const auto dec = decompose_to_4uniform(F);
      bool pointwise = true;
      for (std::uint32_t x = 0; x < F.size(); ++x)
        if ((dec.f1(x) ^ (dec.g(x) ? dec.u : 0)) != F(x)) pointwise = false;
      const auto delta = direct_uniformity(dec.f1);
      d += "n=" + std::to_string(n) + ": delta(f1)=" + std::to_string(delta) + (pointwise ? "" : " MISMATCH") + "; ";
      ok = ok && delta == 4 && pointwise;
    }
    return ok;
  });
}

}  // namespace

int main(int argc, char** argv) {
  bool run_long = false;
  if (const char* env = std::getenv("APN_LONG")) run_long = std::strcmp(env, "0") != 0 && *env;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) {
      run_long = true;
    } else {
      std::cerr << "usage: acceptance [--long]\n";
      return 2;
    }
  }

  std::vector<Check> results;
  auto run = [&](Check c) {
    checks::print(c);
    std::fflush(stdout);
    results.push_back(std::move(c));
  };
  auto renamed = [](Check c, const std::string& name) {
    c.name = name;
    return c;
  };
  auto with_budget = [](Check c, double seconds) {
    if (c.seconds >= seconds) {
      c.passed = false;
      c.detail += " (over the " + std::to_string(static_cast<int>(seconds)) + "s budget)";
    }
    return c;
  };

  run(with_budget(renamed(checks::tabulated_maps_apn(), "1  tabulated maps: 13 quadratic APN functions"), 5));
  run(with_budget(renamed(checks::tabulated_maps_spectra(), "2  tabulated maps: row 7 non-classical, rest classical"),
                  5));
  run(search_counts());
  run(kernel_criterion_agreement());
  run(exp_sum_criterion());
  run(with_budget(renamed(checks::coset_example_n8(), "6  n=8 coset example: admissible sums, table, APN"), 30));
  run(with_budget(gamma_rank_fast_tier(), 120));
  if (run_long) {
    run(renamed(checks::coset_example_n8_ranks(), "7L n=8 gamma ranks 11818 (x^3) and 13842 (modified)"));
  } else {
    std::printf("SKIP  7L n=8 gamma ranks (pass --long or set APN_LONG=1)\n");
  }
  {
    auto counts = checks::inverse_root_counts({4, 6});
    Check c = counts[0];
    c.name = "8  inverse-function root counts = enumeration, n=4,6";
    c.passed = counts[0].passed && counts[1].passed;
    c.detail = "n=4: " + counts[0].detail + "; n=6: " + counts[1].detail;
    c.seconds += counts[1].seconds;
    run(c);
  }
  run(concat_agreement());
  run(with_budget(inverse_extension_apn(), 10));
  run(decomposition_round_trip());

  int failed = 0;
  for (const auto& c : results) failed += !c.passed;
  std::printf("%zu criteria checked, %d failed\n", results.size(), failed);
  return failed ? 1 : 0;
}
