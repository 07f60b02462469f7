// apn: command-line front end for the APN toolkit.
//
// Exit status: 0 on success (or all checks passing), 1 when a verification
// fails, 2 on usage, parse or precondition errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>

#include "apn/constructions.hpp"
#include "apn/invariants.hpp"
#include "apn/io.hpp"
#include "apn/search.hpp"
#include "checks.hpp"

using json = nlohmann::ordered_json;
using namespace apn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

/// Gamma ranks for n + m at or above this need --long (n = 8 takes minutes).
constexpr int kLongGammaRank = 15;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string hex(std::uint64_t v) { return "0x" + FieldSpec::hex(v); }

void emit(const json& j, const std::string& path = "") {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    io::write_file(path, text);
}

std::shared_ptr<const FieldSpec> make_field(int n, const std::string& modulus) {
  if (modulus.empty()) {
    if (n < 2 || n > Vbf::kMaxInput) throw Error("--n must be in [2,16]");
    return std::make_shared<const FieldSpec>(FieldSpec::preset(n));
  }
  const auto poly = static_cast<std::uint32_t>(std::stoul(modulus, nullptr, 16));
  const auto field = std::make_shared<const FieldSpec>(poly);
  if (field->n() != n)
    throw Error("modulus " + modulus + " has degree " + std::to_string(field->n()) + ", not " + std::to_string(n));
  return field;
}

Vbf load_vbf(const std::string& path, std::shared_ptr<const FieldSpec> field = nullptr) {
  Vbf f = io::parse_vbf1(io::read_file(path));
  if (field) {
    if (f.n() != field->n())
      throw Error(path + ": function has n=" + std::to_string(f.n()) + ", field has n=" + std::to_string(field->n()));
    f = Vbf(f.n(), f.m(), f.table(), field);
  }
  return f;
}

json walsh_json(const WalshSpectrum& s) {
  json h = json::object();
  for (const auto& [v, c] : s.counts) h[std::to_string(v)] = c;
  return h;
}

std::string spectrum_verdict(const Vbf& f, const WalshSpectrum& s) {
  if (f.n() != f.m() || f.n() % 2 != 0 || f.n() < 4) return "n/a";
  return is_classical(s, f.n()) ? "classical" : "non-classical";
}

json bundle_json(const InvariantBundle& b) {
  json j;
  j["differential_uniformity"] = b.uniformity;
  j["gamma_rank"] = b.gamma_rank ? json(*b.gamma_rank) : json(nullptr);
  j["algebraic_degree"] = b.degree;
  j["walsh"] = walsh_json(b.walsh);
  return j;
}

json witness_json(const Certificate& c) {
  json w = json::object();
  for (const auto& [k, v] : c.witness) w[k] = v;
  return w;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string path;
  bool as_json = false;
  bool gamma = false;
};

int cmd_analyze(const AnalyzeArgs& a) {
  const Vbf f = load_vbf(a.path);
  const auto prof = ddt(f);
  const bool apn = prof.uniformity <= 2;
  const int degree = algebraic_degree(f);
  const auto spec = walsh_spectrum(f);
  const std::string verdict = spectrum_verdict(f, spec);
  std::optional<std::size_t> rank;
  if (a.gamma) {
    if (f.n() + f.m() > kGammaRankBudget) throw Error("gamma rank needs n + m <= 16");
    rank = gamma_rank(f);
  }
  if (a.as_json) {
    json j;
    j["n"] = f.n();
    j["m"] = f.m();
    j["differential_uniformity"] = prof.uniformity;
    j["apn"] = apn;
    j["algebraic_degree"] = degree;
    j["quadratic"] = degree <= 2;
    j["walsh"] = walsh_json(spec);
    j["spectrum"] = verdict;
    if (rank) j["gamma_rank"] = *rank;
    emit(j);
    return kExitOk;
  }
  std::cout << "n = " << f.n() << ", m = " << f.m() << "\n";
  std::cout << "δ = " << prof.uniformity << "\n";
  std::cout << "APN: " << (apn ? "true" : "false") << ", quadratic: " << (degree <= 2 ? "true" : "false")
            << ", spectrum: " << verdict << "\n";
  std::cout << "algebraic degree = " << degree << "\n";
  std::cout << "walsh:";
  for (const auto& [v, c] : spec.counts) std::cout << " " << v << ":" << c;
  std::cout << "\n";
  if (rank) std::cout << "gamma rank = " << *rank << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string target;
  int n = 0;
  bool run_long = false;
  bool as_json = false;
};

int cmd_verify(const VerifyArgs& a) {
  std::vector<checks::Check> items;
  std::vector<std::string> skipped;
  if (a.target == "table1") {
    items.push_back(checks::tabulated_maps_apn());
    items.push_back(checks::tabulated_maps_spectra());
  } else if (a.target == "example-n8") {
    items.push_back(checks::coset_example_n8());
    if (a.run_long)
      items.push_back(checks::coset_example_n8_ranks());
    else
      skipped.push_back("n=8 coset example: gamma ranks (pass --long)");
  } else if (a.target == "theorem35") {
    const int n = a.n ? a.n : 4;
    if (n < 2 || n > 5) throw Error("theorem35 runs for n in [2,5]");
    if (n == 5 && !a.run_long) throw Error("theorem35 at n=5 covers 2^25 maps; pass --long");
    items.push_back(checks::exp_sum_agreement(n));
    items.push_back(checks::exp_sum_zero_map({n}));
  } else if (a.target == "nyberg") {
    std::vector<int> dims = a.n ? std::vector<int>{a.n} : std::vector<int>{4, 6};
    for (int n : dims)
      if (n < 4 || n % 2 || n > 12) throw Error("nyberg runs for even n in [4,12]");
    items = checks::inverse_root_counts(dims);
  } else {
    throw Error("unknown target '" + a.target + "'");
  }
  bool all = true;
  for (const auto& c : items) all = all && c.passed;
  if (a.as_json) {
    json j;
    j["target"] = a.target;
    j["passed"] = all;
    j["items"] = json::array();
    for (const auto& c : items)
      j["items"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"seconds", c.seconds}});
    j["skipped"] = skipped;
    emit(j);
  } else {
    for (const auto& c : items) checks::print(c);
    for (const auto& s : skipped) std::cout << "SKIP  " << s << "\n";
    std::cout << (all ? "all checks passed" : "verification FAILED") << "\n";
  }
  return all ? kExitOk : kExitFailed;
}

// ---------------------------------------------------------------------------

struct ConstructArgs {
  std::string kind;
  std::string out;
  std::string cert;
  std::string f_path, g_path, lin_path, base_path;
  std::string u, e0, modulus;
  std::vector<std::string> constants;
  int n = 0;
  bool invariants = false;
};

int cmd_construct(const ConstructArgs& a) {
  json params = json::object();
  std::optional<Vbf> result;
  Certificate cert;
  if (a.kind == "switch") {
    if (a.f_path.empty() || a.g_path.empty() || a.u.empty()) throw Error("switch needs --f, --g and --u");
    const Vbf f = load_vbf(a.f_path), g = load_vbf(a.g_path);
    const auto u = static_cast<std::uint32_t>(std::stoul(a.u, nullptr, 16));
    params = {{"f", a.f_path}, {"g", a.g_path}, {"u", hex(u)}};
    auto r = switch_construct(SwitchSpec::join(f, g, u));
    result = r.function;
    cert = r.certificate;
  } else if (a.kind == "concat") {
    if (a.f_path.empty() || a.g_path.empty()) throw Error("concat needs --f and --g");
    const Vbf f = load_vbf(a.f_path), g = load_vbf(a.g_path);
    params = {{"f", a.f_path}, {"g", a.g_path}};
    result = concatenate(f, g);
    cert = concat_is_apn(f, g);
  } else if (a.kind == "hmod") {
    if (!a.n || a.lin_path.empty()) throw Error("hmod needs --n and --lin");
    const auto field = make_field(a.n, a.modulus);
    const Vbf F = a.base_path.empty() ? Vbf::power_function(field, 3) : load_vbf(a.base_path, field);
    LinearMap L = io::parse_lin1(io::read_file(a.lin_path), *field);
    const Elem e0 = a.e0.empty() ? field->trace_one_element() : field->parse(a.e0);
    params = {{"n", a.n},
              {"modulus", hex(field->modulus())},
              {"base", a.base_path.empty() ? "x^3" : a.base_path},
              {"lin", a.lin_path},
              {"e0", hex(e0)}};
    result = hyperplane_modify(*field, F, L);
    cert = trace_linear_kernel_criterion(*field, F, L, e0);
  } else if (a.kind == "coset") {
    if (!a.n || a.constants.size() != 4) throw Error("coset needs --n and four --constants");
    const auto field = make_field(a.n, a.modulus);
    if (a.n % 2) throw Error("coset uses the fibres of the trace onto GF(4); n must be even");
    const Vbf F = a.base_path.empty() ? Vbf::power_function(field, 3) : load_vbf(a.base_path, field);
    const auto dec = CosetDecomposition::trace_fibres(*field);
    CosetConstants c{};
    json shown = json::array();
    for (int i = 0; i < 4; ++i) {
      c[i] = field->parse(a.constants[i]);
      shown.push_back(hex(c[i]));
    }
    params = {{"n", a.n},
              {"modulus", hex(field->modulus())},
              {"base", a.base_path.empty() ? "x^3" : a.base_path},
              {"decomposition", "trace onto GF(4)"},
              {"constants", shown}};
    result = coset_modify(F, dec, c);
    cert = coset_criterion(F, dec, c);
  } else {
    throw Error("unknown construction '" + a.kind + "'");
  }

  io::write_file(a.out, io::format_vbf1(*result));
  json j;
  j["kind"] = a.kind;
  j["params"] = params;
  j["criterion"] = cert.criterion;
  j["holds"] = cert.holds;
  j["witness"] = witness_json(cert);
  if (a.invariants) {
    const auto b = invariant_bundle(*result, result->n() + result->m() < kLongGammaRank);
    j["invariants"] = bundle_json(b);
    j["invariants"]["apn"] = b.uniformity <= 2;
  }
  emit(j, a.cert);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SearchArgs {
  int n = 0;
  std::string space = "tr-l";
  std::string mode = "exhaustive";
  std::string out = "json";
  std::string modulus, e0, output_path;
  bool powers = false;
  SearchOptions opt;
};

int cmd_search(SearchArgs a) {
  const auto field = make_field(a.n, a.modulus);
  const Vbf F = Vbf::power_function(field, 3);
  a.opt.mode = a.mode == "random" ? SearchMode::random : SearchMode::exhaustive;
  std::ostringstream text;
  if (a.space == "coset") {
    if (a.out != "json") throw Error("the coset space only reports json");
    const CosetDecomposition dec = a.n % 2 == 0 ? CosetDecomposition::trace_fibres(*field)
                                                : enumerate_subspaces(a.n, 2, 1, a.opt.seed).decompositions.at(0);
    const auto rep = search_coset_constants(F, dec, a.opt.seed);
    json j;
    j["space"] = "coset constants for x^3 on GF(2^" + std::to_string(a.n) + ")";
    j["n"] = a.n;
    j["subspace_basis"] = json::array();
    for (auto b : dec.basis()) j["subspace_basis"].push_back(hex(b));
    j["admissible"] = json::array();
    for (auto s : rep.admissible) j["admissible"].push_back(hex(s));
    j["tuples"] = json::array();
    for (const auto& t : rep.tuples) j["tuples"].push_back({hex(t[0]), hex(t[1]), hex(t[2]), hex(t[3])});
    j["verified"] = rep.verified;
    j["failures"] = rep.failures;
    j["seed"] = rep.seed;
    j["seconds"] = rep.seconds;
    emit(j, a.output_path);
    return rep.failures ? kExitFailed : kExitOk;
  }
  if (a.n < 3 || a.n > 8) throw Error("the Tr.L space is searched for n in [3,8]");
  const Elem e0 = a.e0.empty() ? field->trace_one_element() : field->parse(a.e0);
  const auto rep = search_tr_l(*field, F, e0, a.opt);
  const TraceLinearCriterion crit(*field, F, e0);
  auto coefficients = [&](std::uint64_t code) {
    std::vector<std::string> c;
    for (auto v : linearized_coefficients(*field, crit.decode(code))) c.push_back(field->format(v, a.powers));
    return c;
  };
  if (a.out == "csv") {
    text << "code";
    for (int i = 0; i < a.n; ++i) text << ",c" << i;
    text << "\n";
    for (auto code : rep.hit_codes) {
      text << code;
      for (const auto& c : coefficients(code)) text << "," << c;
      text << "\n";
    }
    if (a.output_path.empty() || a.output_path == "-")
      std::cout << text.str();
    else
      io::write_file(a.output_path, text.str());
    std::cerr << rep.hits << " hits of " << rep.examined << " examined (" << rep.mode << ")\n";
  } else {
    json j;
    j["space"] = rep.space;
    j["mode"] = rep.mode;
    j["n"] = a.n;
    j["modulus"] = hex(field->modulus());
    j["e0"] = hex(e0);
    j["space_size"] = rep.space_size;
    j["examined"] = rep.examined;
    j["hits"] = rep.hits;
    if (rep.mode == "random") j["estimate"] = rep.estimate;
    j["cap"] = rep.cap;
    j["truncated"] = rep.truncated;
    j["seed"] = rep.seed;
    j["workers"] = rep.workers;
    j["seconds"] = rep.seconds;
    j["verification"] = {{"hits_verified", rep.hits_verified},
                         {"sample_checked", rep.sample_checked},
                         {"disagreements", rep.disagreements}};
    j["hit_list"] = json::array();
    for (auto code : rep.hit_codes) j["hit_list"].push_back({{"code", code}, {"coefficients", coefficients(code)}});
    emit(j, a.output_path);
  }
  return rep.disagreements ? kExitFailed : kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_rank(const std::string& path, bool run_long) {
  const Vbf f = load_vbf(path);
  if (f.n() + f.m() > kGammaRankBudget) throw Error("gamma rank needs n + m <= 16");
  if (f.n() + f.m() >= kLongGammaRank && !run_long)
    throw Error("gamma rank for n + m = " + std::to_string(f.n() + f.m()) + " takes minutes; pass --long");
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = gamma_rank(f);
  emit({{"n", f.n()}, {"m", f.m()}, {"gamma_rank", r}, {"seconds", seconds_since(t0)}});
  return kExitOk;
}

int cmd_compare(const std::string& pa, const std::string& pb, bool gamma, bool run_long) {
  const Vbf f = load_vbf(pa), g = load_vbf(pb);
  const bool use_gamma = gamma && (f.n() + f.m() < kLongGammaRank || run_long);
  json j;
  if (f.n() != g.n() || f.m() != g.m()) {
    j = {{"inequivalent", true}, {"invariant", "dimensions"}, {"scope", "CCZ"}};
  } else {
    const auto ba = invariant_bundle(f, use_gamma), bb = invariant_bundle(g, use_gamma);
    const auto v = distinguish(ba, bb);
    j["inequivalent"] = v.inequivalent;
    j["invariant"] = v.inequivalent ? json(v.invariant) : json(nullptr);
    j["scope"] = v.inequivalent ? json(v.scope) : json(nullptr);
    j["a"] = bundle_json(ba);
    j["b"] = bundle_json(bb);
  }
  emit(j);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for almost perfect nonlinear (APN) functions over GF(2^n)"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Differential, Walsh and degree report for a vbf1 table");
  analyze->add_option("file", an.path, "vbf1 file")->required();
  analyze->add_flag("--json", an.as_json, "JSON output");
  analyze->add_flag("--gamma-rank", an.gamma, "also compute the gamma rank");

  VerifyArgs ve;
  auto* verify = app.add_subcommand("verify", "Run reference checks and print a pass/fail table");
  verify->add_option("target", ve.target,
                     "table1: tabulated Tr.L maps on GF(64); example-n8: coset example on GF(256); "
                     "theorem35: exponential-sum criterion over all linear maps; nyberg: inverse-function root counts")
      ->required()
      ->check(CLI::IsMember({"table1", "example-n8", "theorem35", "nyberg"}));
  verify->add_option("--n", ve.n, "field degree (theorem35, nyberg)");
  verify->add_flag("--long", ve.run_long, "allow multi-minute steps");
  verify->add_flag("--json", ve.as_json, "JSON output");

  ConstructArgs co;
  auto* construct = app.add_subcommand("construct", "Build a function and a certificate for its criterion");
  construct->add_option("kind", co.kind, "switch | concat | hmod | coset")
      ->required()
      ->check(CLI::IsMember({"switch", "concat", "hmod", "coset"}));
  construct->add_option("-o,--out", co.out, "output vbf1 file")->required();
  construct->add_option("--cert", co.cert, "certificate JSON path (default: stdout)");
  construct->add_option("--f", co.f_path, "switch/concat: first function (vbf1)");
  construct->add_option("--g", co.g_path, "switch: Boolean function; concat: second half (vbf1)");
  construct->add_option("--u", co.u, "switch: direction, hex");
  construct->add_option("--n", co.n, "hmod/coset: field degree");
  construct->add_option("--modulus", co.modulus, "defining polynomial, hex (default: preset)");
  construct->add_option("--base", co.base_path, "hmod/coset: base function (default x^3)");
  construct->add_option("--lin", co.lin_path, "hmod: linear map (lin1)");
  construct->add_option("--e0", co.e0, "hmod: element of trace 1 for the criterion");
  construct->add_option("--constants", co.constants, "coset: four constants (hex or g^k)")->delimiter(',');
  construct->add_flag("--invariants", co.invariants, "add an invariant bundle to the certificate");

  SearchArgs se;
  auto* search = app.add_subcommand("search", "Search modifications of x^3 that stay APN");
  search->add_option("--n", se.n, "field degree")->required();
  search->add_option("--space", se.space, "tr-l (default) or coset")->check(CLI::IsMember({"tr-l", "coset"}));
  search->add_option("--mode", se.mode, "exhaustive or random")->check(CLI::IsMember({"exhaustive", "random"}));
  search->add_option("--samples", se.opt.samples, "random mode sample count");
  search->add_option("--seed", se.opt.seed, "seed for random choices");
  search->add_option("--workers", se.opt.workers, "worker threads")->check(CLI::Range(1u, 256u));
  search->add_option("--cap", se.opt.cap, "maximum hits listed");
  search->add_option("--out", se.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  search->add_option("--output", se.output_path, "write to a file instead of stdout");
  search->add_option("--modulus", se.modulus, "defining polynomial, hex (default: preset)");
  search->add_option("--e0", se.e0, "element of trace 1 with L(e0) = 0");
  search->add_flag("--powers", se.powers, "print coefficients as g^k instead of hex");
  search->add_flag("--long", se.opt.allow_long, "allow the n=6 exhaustive run");

  std::string rank_path;
  bool rank_long = false;
  auto* rank = app.add_subcommand("rank", "Gamma rank of a vbf1 table");
  rank->add_option("file", rank_path, "vbf1 file")->required();
  rank->add_flag("--long", rank_long, "allow n + m >= 15");

  std::string cmp_a, cmp_b;
  bool cmp_no_gamma = false, cmp_long = false;
  auto* compare = app.add_subcommand("compare", "Look for an invariant separating two functions");
  compare->add_option("a", cmp_a, "vbf1 file")->required();
  compare->add_option("b", cmp_b, "vbf1 file")->required();
  compare->add_flag("--no-gamma-rank", cmp_no_gamma, "skip the gamma rank");
  compare->add_flag("--long", cmp_long, "compute the gamma rank even when slow");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) return cmd_analyze(an);
    if (*verify) return cmd_verify(ve);
    if (*construct) return cmd_construct(co);
    if (*search) return cmd_search(se);
    if (*rank) return cmd_rank(rank_path, rank_long);
    if (*compare) return cmd_compare(cmp_a, cmp_b, !cmp_no_gamma, cmp_long);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
