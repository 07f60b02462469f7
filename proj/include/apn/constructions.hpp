#pragma once

// Secondary constructions of APN functions and the criteria deciding when
// the constructed function is APN.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apn/error.hpp"
#include "apn/field.hpp"
#include "apn/linear.hpp"
#include "apn/vbf.hpp"

namespace apn {

/// Outcome of evaluating a criterion. `witness` names the values that make
/// it fail and is empty when it holds.
struct Certificate {
  std::string criterion;
  bool holds = false;
  std::vector<std::pair<std::string, std::uint32_t>> witness;

  std::optional<std::uint32_t> get(const std::string& key) const {
    for (const auto& [k, v] : witness)
      if (k == key) return v;
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Hyperplanes and codimension-2 decompositions

/// {x : <functional, x> = beta}.
struct HyperplaneSpec {
  int n = 0;
  std::uint32_t functional = 0;
  int beta = 0;

  HyperplaneSpec() = default;
  HyperplaneSpec(int n_, std::uint32_t a, int b) : n(n_), functional(a), beta(b) {
    if (a == 0 || a >= (std::uint64_t{1} << n_)) throw Error("hyperplane functional must be nonzero");
    if (b != 0 && b != 1) throw Error("hyperplane shift must be 0 or 1");
  }

  /// T_0 = {x : Tr(x) = 0}.
  static HyperplaneSpec trace_zero(const FieldSpec& field) {
    return HyperplaneSpec(field.n(), field.trace_functional(), 0);
  }

  bool contains(std::uint32_t x) const { return gf2::dot(functional, x) == beta; }

  /// Basis of the linear hyperplane {<functional, x> = 0}: unit vectors off
  /// the functional's support, plus e_i + e_p for the other support bits,
  /// where p is the lowest support bit.
  std::vector<std::uint32_t> linear_basis() const {
    const int p = std::countr_zero(functional);
    std::vector<std::uint32_t> b;
    for (int i = 0; i < n; ++i) {
      if (i == p) continue;
      b.push_back(((functional >> i) & 1) ? ((1u << i) | (1u << p)) : (1u << i));
    }
    return b;
  }
};

/// An (n-2)-dimensional subspace U with coset representatives u_1 = 0,
/// u_2, u_3, u_4.
class CosetDecomposition {
 public:
  CosetDecomposition(int n, std::vector<std::uint32_t> basis, std::array<std::uint32_t, 4> reps)
      : n_(n), basis_(std::move(basis)), reps_(reps) {
    if (n < 2 || n > Vbf::kMaxInput) throw Error("coset decomposition dimension out of range");
    if (static_cast<int>(basis_.size()) != n - 2 || !gf2::independent(basis_))
      throw Error("subspace basis must have n-2 independent vectors");
    for (auto b : basis_)
      if (b >= (std::uint64_t{1} << n)) throw Error("basis vector out of range");
    if (reps_[0] != 0) throw Error("first coset representative must be 0");
    coset_.assign(std::size_t{1} << n, 0xff);
    elements_ = gf2::span(basis_);
    for (int i = 0; i < 4; ++i)
      for (auto u : elements_) {
        const std::uint32_t x = u ^ reps_[i];
        if (x >= coset_.size()) throw Error("coset representative out of range");
        if (coset_[x] != 0xff) throw Error("coset representatives are not in distinct cosets");
        coset_[x] = static_cast<std::uint8_t>(i);
      }
  }

  /// Fibres of Tr^n_2 over {0, 1, w, w^2}. Requires even n.
  static CosetDecomposition trace_fibres(const FieldSpec& field) {
    const auto roots = field.cube_roots_of_unity();
    const std::array<Elem, 4> targets{0, roots[0], roots[1], roots[2]};
    const auto tr2 = LinearMap::from_function(field.n(), field.n(),
                                              [&](std::uint32_t x) { return field.trace_to_subfield(x, 2); });
    std::array<std::uint32_t, 4> reps{};
    for (int i = 1; i < 4; ++i) {
      Elem x = 1;
      while (field.trace_to_subfield(x, 2) != targets[i]) ++x;
      reps[i] = x;
    }
    return CosetDecomposition(field.n(), tr2.kernel_basis(), reps);
  }

  int n() const { return n_; }
  const std::vector<std::uint32_t>& basis() const { return basis_; }
  const std::array<std::uint32_t, 4>& reps() const { return reps_; }
  /// Elements of U (coset 0), in span order.
  const std::vector<std::uint32_t>& subspace() const { return elements_; }
  int coset_of(std::uint32_t x) const { return coset_[x]; }

 private:
  int n_;
  std::vector<std::uint32_t> basis_;
  std::array<std::uint32_t, 4> reps_;
  std::vector<std::uint32_t> elements_;
  std::vector<std::uint8_t> coset_;
};

// ---------------------------------------------------------------------------
// Switching

/// F = (f, g) as an (n, m+1)-function: f is the low m bits, g bit m.
struct SwitchSpec {
  Vbf combined;
  std::uint32_t u = 0;

  int m() const { return combined.m() - 1; }
  Vbf f() const {
    std::vector<std::uint32_t> t(combined.size());
    const std::uint32_t mask = (1u << m()) - 1;
    for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = combined(x) & mask;
    return Vbf(combined.n(), m(), std::move(t));
  }
  Vbf g() const {
    std::vector<std::uint32_t> t(combined.size());
    for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = (combined(x) >> m()) & 1;
    return Vbf(combined.n(), 1, std::move(t));
  }

  static SwitchSpec join(const Vbf& f, const Vbf& g, std::uint32_t u) {
    if (f.n() != g.n() || g.m() != 1) throw Error("switch needs f:(n,m) and Boolean g on the same n");
    std::vector<std::uint32_t> t(f.size());
    for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = f(x) | (g(x) << f.m());
    return {Vbf(f.n(), f.m() + 1, std::move(t)), u};
  }
};

struct SwitchResult {
  Vbf function;
  Certificate certificate;
};

/// f + u g, with the criterion: whenever f(x+t)+f(x)+f(y+t)+f(y) = u, the
/// matching sum of g vanishes.
inline SwitchResult switch_construct(const SwitchSpec& sw) {
  const int m = sw.m();
  if (m < 1) throw Error("switch needs m >= 1");
  if (sw.u == 0 || sw.u >= (1u << m)) throw Error("switch direction must be a nonzero m-bit value");
  if (!is_apn(sw.combined)) throw Error("combined (f, g) function is not APN");
  const Vbf f = sw.f();
  const Vbf g = sw.g();
  std::vector<std::uint32_t> t(f.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = f(x) ^ (g(x) ? sw.u : 0);

  Certificate c{"switch", true, {}};
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<std::uint32_t> df(q), dg(q);
  for (std::uint32_t s = 1; s < q && c.holds; ++s) {
    for (std::uint32_t x = 0; x < q; ++x) {
      df[x] = f(x ^ s) ^ f(x);
      dg[x] = g(x ^ s) ^ g(x);
    }
    for (std::uint32_t x = 0; x < q && c.holds; ++x)
      for (std::uint32_t y = x + 1; y < q; ++y)
        if ((df[x] ^ df[y]) == sw.u && (dg[x] ^ dg[y])) {
          c.holds = false;
          c.witness = {{"x", x}, {"y", y}, {"t", s}};
          break;
        }
  }
  return {Vbf(f.n(), m, std::move(t)), c};
}

// ---------------------------------------------------------------------------
// Decomposition of an APN function through a differentially 4-uniform one

struct Decomposition {
  Vbf f1;  // f + u g
  Vbf g;
  std::uint32_t u = 0;
  Triple witness;           // (x, y, t) with g-sum 1 and f-sum u
  unsigned uniformity = 0;  // of f1
  std::uint32_t component = 0;  // c when g was chosen as <c, f>, else 0
};

namespace detail {

inline std::optional<std::pair<std::uint32_t, Triple>> first_g_quadruple(const Vbf& f, const Vbf& g) {
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<std::uint32_t> df(q), dg(q);
  for (std::uint32_t t = 1; t < q; ++t) {
    for (std::uint32_t x = 0; x < q; ++x) {
      df[x] = f(x ^ t) ^ f(x);
      dg[x] = g(x ^ t) ^ g(x);
    }
    for (std::uint32_t x = 0; x < q; ++x)
      for (std::uint32_t y = x + 1; y < q; ++y) {
        if (x == (y ^ t)) continue;
        if (dg[x] ^ dg[y]) return std::make_pair(df[x] ^ df[y], Triple{x, y, t});
      }
  }
  return std::nullopt;
}

}  // namespace detail

/// Writes an APN (n,n)-function f as f1 + u g with f1 differentially
/// 4-uniform: u is the f-part of the first element (u,1) of D^*_{(f,g)}.
/// Without g, the component functions <c, f> (trace form when field-bound)
/// are tried for c = 1, 2, ... and the first admitting a quadruple with
/// g-sum 1 is used.
inline Decomposition decompose_to_4uniform(const Vbf& f, std::optional<Vbf> g = std::nullopt) {
  if (f.n() != f.m()) throw Error("decomposition needs an (n,n)-function");
  if (!is_apn(f)) throw Error("decomposition needs an APN function");
  Decomposition d;
  std::optional<std::pair<std::uint32_t, Triple>> hit;
  if (g) {
    if (g->n() != f.n() || g->m() != 1) throw Error("g must be a Boolean function on the same input");
    hit = detail::first_g_quadruple(f, *g);
    if (!hit) throw Error("every quadruple sum of g vanishes; supply another g");
    d.g = *g;
  } else {
    for (std::uint32_t c = 1; c < (1u << f.m()) && !hit; ++c) {
      const auto comp = component(f, c);
      Vbf gc(f.n(), 1, std::vector<std::uint32_t>(comp.begin(), comp.end()));
      hit = detail::first_g_quadruple(f, gc);
      if (hit) {
        d.g = gc;
        d.component = c;
      }
    }
    if (!hit) throw Error("no component of f admits a quadruple with sum 1");
  }
  d.u = hit->first;
  d.witness = hit->second;
  std::vector<std::uint32_t> t(f.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = f(x) ^ (d.g(x) ? d.u : 0);
  d.f1 = Vbf(f.n(), f.m(), std::move(t), f.field());
  d.uniformity = differential_uniformity(d.f1);
  if (d.uniformity != 2 && d.uniformity != 4)
    throw Error("decomposed function has uniformity " + std::to_string(d.uniformity));
  return d;
}

// ---------------------------------------------------------------------------
// Inverse function: root counts and the (n, n+1) extension

namespace detail {

inline void require_even_field(const FieldSpec& field) {
  if (field.n() % 2 != 0 || field.n() < 4) throw Error("needs an even field degree n >= 4");
}

inline Elem inv0(const FieldSpec& field, Elem x) { return x ? field.inv(x) : 0; }

}  // namespace detail

/// Predicted number of roots of x^-1 + (x+a)^-1 = b (with 0^-1 = 0): 4 iff
/// ab = 1, 2 iff ab != 1 and Tr(1/(ab)) = 0, else 0. For b = 0 there are no
/// roots since inversion is a bijection.
inline int nyberg_root_count(const FieldSpec& field, Elem a, Elem b) {
  detail::require_even_field(field);
  if (a == 0) throw Error("a must be nonzero");
  if (b == 0) return 0;
  const Elem ab = field.mul(a, b);
  if (ab == 1) return 4;
  return field.trace(field.inv(ab)) == 0 ? 2 : 0;
}

/// Roots found by scanning the field.
inline std::vector<Elem> nyberg_roots(const FieldSpec& field, Elem a, Elem b) {
  std::vector<Elem> r;
  for (Elem x = 0; x < field.size(); ++x)
    if ((detail::inv0(field, x) ^ detail::inv0(field, x ^ a)) == b) r.push_back(x);
  return r;
}

/// Boolean g with g(0) + g(a) + g(wa) + g(w^2 a) = 1 for all a != 0: g is 1
/// on exactly one point of every orbit {a, wa, w^2 a}. The orbits are cut by
/// the cube classes A, wA, w^2A (A = cubes) with g = 1 on w^2A; when w is
/// itself a cube (6 | n) those classes do not separate an orbit, and the
/// slices {g^k : k in [j N/3, (j+1) N/3)} (N = 2^n - 1) are used instead.
inline std::vector<std::uint8_t> inverse_extension_bit(const FieldSpec& field) {
  detail::require_even_field(field);
  const std::uint32_t order = field.group_order(), third = order / 3;
  const bool cubes_separate = third % 3 != 0;
  std::vector<std::uint8_t> g(field.size(), 0);
  for (Elem x = 1; x < field.size(); ++x) {
    const std::uint32_t k = field.log(x);
    if (cubes_separate)
      g[x] = (k % 3) == (2 * third) % 3;
    else
      g[x] = k >= 2 * third;
  }
  return g;
}

/// x -> (x^{2^n-2}, g(x)) as an (n, n+1)-function, g in bit n.
inline Vbf inverse_extension(const FieldSpec& field) {
  const auto g = inverse_extension_bit(field);
  std::vector<std::uint32_t> t(field.size());
  for (Elem x = 0; x < field.size(); ++x) t[x] = detail::inv0(field, x) | (std::uint32_t{g[x]} << field.n());
  return Vbf(field.n(), field.n() + 1, std::move(t));
}

// ---------------------------------------------------------------------------
// Concatenation of two (n-1, m)-functions on complementary hyperplanes

/// Identification of F_2^{n-1} with a hyperplane of F_2^n, plus e0 outside.
struct Embedding {
  int n = 0;
  std::vector<std::uint32_t> basis;  // images of the n-1 unit vectors
  std::uint32_t e0 = 0;

  /// Coordinates 1..n-1 carry F_2^{n-1}; e0 is the last unit vector.
  static Embedding canonical(int n) {
    Embedding e;
    e.n = n;
    for (int i = 0; i + 1 < n; ++i) e.basis.push_back(1u << i);
    e.e0 = 1u << (n - 1);
    return e;
  }

  static Embedding from_hyperplane(const HyperplaneSpec& h, std::uint32_t e0) {
    if (h.beta != 0) throw Error("embedding needs a linear hyperplane");
    if (gf2::dot(h.functional, e0) == 0) throw Error("e0 must lie outside the hyperplane");
    return Embedding{h.n, h.linear_basis(), e0};
  }

  std::uint32_t operator()(std::uint32_t x) const {
    std::uint32_t r = 0;
    while (x) {
      r ^= basis[std::countr_zero(x)];
      x &= x - 1;
    }
    return r;
  }

  void validate() const {
    std::vector<std::uint32_t> all(basis);
    all.push_back(e0);
    if (static_cast<int>(basis.size()) != n - 1 || !gf2::independent(all))
      throw Error("embedding basis plus e0 must be a basis of F_2^n");
  }
};

/// F(x) = f(x), F(x + e0) = g(x) for x in the embedded hyperplane.
inline Vbf concatenate(const Vbf& f, const Vbf& g, const Embedding& emb) {
  if (f.n() != g.n() || f.m() != g.m()) throw Error("f and g must have equal dimensions");
  if (emb.n != f.n() + 1) throw Error("embedding dimension must be n-1 + 1");
  emb.validate();
  std::vector<std::uint32_t> t(std::size_t{1} << emb.n);
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    const std::uint32_t ex = emb(x);
    t[ex] = f(x);
    t[ex ^ emb.e0] = g(x);
  }
  return Vbf(emb.n, f.m(), std::move(t));
}

inline Vbf concatenate(const Vbf& f, const Vbf& g) { return concatenate(f, g, Embedding::canonical(f.n() + 1)); }

/// Inverse of concatenate: the restrictions of F to the hyperplane and to
/// its complement coset.
inline std::pair<Vbf, Vbf> split(const Vbf& F, const Embedding& emb) {
  if (emb.n != F.n()) throw Error("embedding dimension differs from F");
  emb.validate();
  const std::size_t half = F.size() / 2;
  std::vector<std::uint32_t> tf(half), tg(half);
  for (std::uint32_t x = 0; x < half; ++x) {
    tf[x] = F(emb(x));
    tg[x] = F(emb(x) ^ emb.e0);
  }
  return {Vbf(F.n() - 1, F.m(), std::move(tf)), Vbf(F.n() - 1, F.m(), std::move(tg))};
}

namespace detail {

/// First (x, y, a) with x != y, y != x + a and equal a-derivatives.
inline std::optional<std::array<std::uint32_t, 3>> apn_violation(const Vbf& f) {
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<std::uint32_t> stamp(std::size_t{1} << f.m(), 0), first(std::size_t{1} << f.m(), 0);
  for (std::uint32_t a = 1; a < q; ++a)
    for (std::uint32_t x = 0; x < q; ++x) {
      if ((x ^ a) < x) continue;
      const std::uint32_t d = f(x) ^ f(x ^ a);
      if (stamp[d] == a) return std::array<std::uint32_t, 3>{first[d], x, a};
      stamp[d] = a;
      first[d] = x;
    }
  return std::nullopt;
}

}  // namespace detail

/// F = concatenate(f, g) is APN iff (1) f and g are APN and (2)
/// f(x+a)+f(x) != g(y+a)+g(y) for all x, y and a != 0.
inline Certificate concat_is_apn(const Vbf& f, const Vbf& g) {
  if (f.n() != g.n() || f.m() != g.m()) throw Error("f and g must have equal dimensions");
  Certificate c{"concat", true, {}};
  if (auto v = detail::apn_violation(f)) {
    c.holds = false;
    c.witness = {{"condition", 1}, {"function", 0}, {"x", (*v)[0]}, {"y", (*v)[1]}, {"a", (*v)[2]}};
    return c;
  }
  if (auto v = detail::apn_violation(g)) {
    c.holds = false;
    c.witness = {{"condition", 1}, {"function", 1}, {"x", (*v)[0]}, {"y", (*v)[1]}, {"a", (*v)[2]}};
    return c;
  }
  const std::uint32_t q = static_cast<std::uint32_t>(f.size());
  std::vector<std::uint32_t> stamp(std::size_t{1} << f.m(), 0), who(std::size_t{1} << f.m(), 0);
  for (std::uint32_t a = 1; a < q; ++a) {
    for (std::uint32_t x = 0; x < q; ++x) {
      const std::uint32_t d = f(x ^ a) ^ f(x);
      stamp[d] = a;
      who[d] = x;
    }
    for (std::uint32_t y = 0; y < q; ++y) {
      const std::uint32_t d = g(y ^ a) ^ g(y);
      if (stamp[d] == a) {
        c.holds = false;
        c.witness = {{"condition", 2}, {"x", who[d]}, {"y", y}, {"a", a}};
        return c;
      }
    }
  }
  return c;
}

/// For quadratic f and g = f + L + c: the concatenation is APN iff
/// x -> L(x) + B_f(x, A) is injective for every A.
inline Certificate quadratic_concat_criterion(const Vbf& f, const LinearMap& L, std::uint32_t /*c*/ = 0) {
  if (!is_quadratic(f)) throw Error("criterion needs a quadratic f");
  if (L.n_in() != f.n() || L.n_out() != f.m()) throw Error("L must map F_2^{n-1} to F_2^m");
  Certificate cert{"quadratic-concat", true, {}};
  const int k = f.n();
  std::vector<std::uint32_t> cols(k);
  for (std::uint32_t A = 0; A < f.size(); ++A) {
    for (int i = 0; i < k; ++i) cols[i] = L.columns()[i] ^ bform(f, 1u << i, A);
    const LinearMap map(k, f.m(), cols);
    if (!map.injective()) {
      cert.holds = false;
      cert.witness = {{"A", A}, {"x", map.kernel_basis().front()}};
      return cert;
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Modification by Tr(x) L(x)

/// G(x) = F(x) + Tr(x) L(x).
inline Vbf hyperplane_modify(const FieldSpec& field, const Vbf& F, const LinearMap& L) {
  if (F.n() != field.n() || F.m() != field.n()) throw Error("F must be an (n,n)-function over the field");
  if (L.n_in() != field.n() || L.n_out() != field.n()) throw Error("L must be a linear map on the field");
  std::vector<std::uint32_t> t(F.size());
  for (Elem x = 0; x < t.size(); ++x) t[x] = F(x) ^ (field.trace(x) ? L(x) : 0);
  return Vbf(F.n(), F.m(), std::move(t), F.field());
}

namespace detail {

inline void require_quadratic_apn(const Vbf& F) {
  if (!is_quadratic(F)) throw Error("F must be quadratic");
  if (!is_apn(F)) throw Error("F must be APN");
}

}  // namespace detail

/// For quadratic APN F and Tr(e0) = 1: F + Tr L is APN iff every
/// L_a : T_0 -> F, x -> L(x) + B_F(x, a + e0), a in T_0, has trivial kernel.
/// Each L_a is checked as the rank of its images on a fixed basis of T_0.
inline Certificate trace_linear_kernel_criterion(const FieldSpec& field, const Vbf& F, const LinearMap& L, Elem e0) {
  if (field.trace(e0) != 1) throw Error("e0 must have absolute trace 1");
  detail::require_quadratic_apn(F);
  const auto t0 = HyperplaneSpec::trace_zero(field).linear_basis();
  const int k = field.n() - 1;
  Certificate c{"hyperplane-trace-linear", true, {}};
  std::vector<std::uint32_t> cols(k);
  for (std::uint32_t a : gf2::span(t0)) {
    for (int j = 0; j < k; ++j) cols[j] = L(t0[j]) ^ bform(F, t0[j], a ^ e0);
    if (gf2::rank(cols) == k) continue;
    const auto kb = LinearMap(k, field.n(), cols).kernel_basis();
    std::uint32_t x = 0;
    for (int j = 0; j < k; ++j)
      if ((kb.front() >> j) & 1) x ^= t0[j];
    c.holds = false;
    c.witness = {{"a", a}, {"x", x}};
    return c;
  }
  return c;
}

/// The same criterion in dual form, prepared once for repeated use: for
/// every nonzero x in T_0, L(x) + B_F(x, e0) must avoid the subspace
/// {B_F(x, a) : a in T_0}. Linear maps are given by a code: n-1 blocks of n
/// bits holding the images of the unit vectors e_j, j != p (p the lowest set
/// bit of e0), with L(e0) = 0 fixing the image of e_p.
class TraceLinearCriterion {
 public:
  TraceLinearCriterion(const FieldSpec& field, const Vbf& F, Elem e0) : n_(field.n()), e0_(e0) {
    if (field.trace(e0) != 1) throw Error("e0 must have absolute trace 1");
    detail::require_quadratic_apn(F);
    pivot_ = std::countr_zero(e0);
    const auto t0 = HyperplaneSpec::trace_zero(field).linear_basis();
    points_ = gf2::span(t0);
    const std::size_t count = points_.size();
    words_ = std::max<std::size_t>(1, (std::size_t{1} << n_) / 64);
    forbidden_.assign(count * words_, 0);
    shift_.resize(count);
    // Coordinates of each T_0 basis vector on the free unit vectors.
    free_coords_.resize(t0.size());
    for (std::size_t j = 0; j < t0.size(); ++j) free_coords_[j] = reduce(t0[j]);
    for (std::size_t k = 0; k < count; ++k) {
      const std::uint32_t x = points_[k];
      shift_[k] = bform(F, x, e0);
      for (std::uint32_t a : points_) {
        const std::uint32_t v = bform(F, x, a);
        forbidden_[k * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
      }
    }
  }

  int n() const { return n_; }
  Elem e0() const { return e0_; }
  std::uint64_t space_size() const { return std::uint64_t{1} << (n_ * (n_ - 1)); }

  /// Linear map for a code.
  LinearMap decode(std::uint64_t code) const {
    std::vector<std::uint32_t> cols(n_, 0);
    int slot = 0;
    const std::uint32_t mask = (1u << n_) - 1;
    for (int j = 0; j < n_; ++j) {
      if (j == pivot_) continue;
      cols[j] = static_cast<std::uint32_t>(code >> (slot * n_)) & mask;
      ++slot;
    }
    for (int j = 0; j < n_; ++j)
      if (j != pivot_ && ((e0_ >> j) & 1)) cols[pivot_] ^= cols[j];
    return LinearMap(n_, n_, std::move(cols));
  }

  /// Code of a map with L(e0) = 0.
  std::uint64_t encode(const LinearMap& L) const {
    if (L(e0_) != 0) throw Error("map does not vanish at e0");
    std::uint64_t code = 0;
    int slot = 0;
    for (int j = 0; j < n_; ++j) {
      if (j == pivot_) continue;
      code |= std::uint64_t{L.columns()[j]} << (slot * n_);
      ++slot;
    }
    return code;
  }

  bool holds(std::uint64_t code) const {
    std::uint32_t free_img[32];
    const std::uint32_t mask = (1u << n_) - 1;
    for (int s = 0; s + 1 < n_; ++s) free_img[s] = static_cast<std::uint32_t>(code >> (s * n_)) & mask;
    std::uint32_t basis_img[32];
    for (std::size_t j = 0; j < free_coords_.size(); ++j) {
      std::uint32_t v = 0, cc = free_coords_[j];
      while (cc) {
        v ^= free_img[std::countr_zero(cc)];
        cc &= cc - 1;
      }
      basis_img[j] = v;
    }
    return holds_images(basis_img);
  }

  /// Same test for an arbitrary linear L (only its values on T_0 matter).
  bool holds(const LinearMap& L) const {
    std::uint32_t basis_img[32];
    for (std::size_t j = 0; j < free_coords_.size(); ++j) basis_img[j] = L(basis_vector(j));
    return holds_images(basis_img);
  }

 private:
  std::uint32_t basis_vector(std::size_t j) const { return points_[std::size_t{1} << j]; }

  bool holds_images(const std::uint32_t* basis_img) const {
    std::uint32_t lx[1u << 15];
    lx[0] = 0;
    for (std::size_t k = 1; k < points_.size(); ++k) {
      lx[k] = lx[k & (k - 1)] ^ basis_img[std::countr_zero(k)];
      const std::uint32_t v = lx[k] ^ shift_[k];
      if ((forbidden_[k * words_ + v / 64] >> (v % 64)) & 1) return false;
    }
    return true;
  }

  /// Bitmask over free slots of the coordinates of v in the basis
  /// {e_j : j != p} plus e0.
  std::uint32_t reduce(std::uint32_t v) const {
    if ((v >> pivot_) & 1) v ^= e0_;
    std::uint32_t coords = 0;
    int slot = 0;
    for (int j = 0; j < n_; ++j) {
      if (j == pivot_) continue;
      if ((v >> j) & 1) coords |= 1u << slot;
      ++slot;
    }
    return coords;
  }

  int n_;
  Elem e0_;
  int pivot_ = 0;
  std::vector<std::uint32_t> points_;
  std::vector<std::uint32_t> free_coords_;
  std::vector<std::uint32_t> shift_;
  std::vector<std::uint64_t> forbidden_;
  std::size_t words_ = 1;
};

/// Exponential-sum test for x^3 + Tr(x) L(x):
///   s1 = sum_{x != 0,1} (-1)^Tr(x^2 L(x^2+x) / (x^2+x)^3)
///   s2 = sum_{x != 0,1} (-1)^Tr(L(x^2+x) / (x^2+x)^3)
/// lhs = s1 - s2/2 (s2 is always even); APN iff lhs = 2^{n-1} - 1.
struct ExpSumResult {
  std::int64_t s1 = 0;
  std::int64_t s2 = 0;
  std::int64_t lhs = 0;
  std::int64_t target = 0;
  bool holds = false;
};

inline ExpSumResult exp_sum_condition(const FieldSpec& field, const LinearMap& L) {
  if (L.n_in() != field.n() || L.n_out() != field.n()) throw Error("L must be a linear map on the field");
  ExpSumResult r;
  for (Elem x = 2; x < field.size(); ++x) {
    const Elem y = field.sqr(x) ^ x;
    const Elem q = field.mul(L(y), field.inv(field.mul(y, field.sqr(y))));
    r.s1 += field.trace(field.mul(field.sqr(x), q)) ? -1 : 1;
    r.s2 += field.trace(q) ? -1 : 1;
  }
  if (r.s2 % 2 != 0) throw Error("second exponential sum is odd");  // cannot happen: y = x^2+x is 2-to-1
  r.lhs = r.s1 - r.s2 / 2;
  r.target = (std::int64_t{1} << (field.n() - 1)) - 1;
  r.holds = r.lhs == r.target;
  return r;
}

/// If G = F on h and G = F + A off h for an affine A, returns A normalised to
/// vanish in its linear part on one fixed vector outside the linear
/// hyperplane; otherwise nothing.
inline std::optional<AffineMap> h_equivalence_witness(const Vbf& F, const Vbf& G, const HyperplaneSpec& h) {
  if (F.n() != G.n() || F.m() != G.m() || h.n != F.n()) throw Error("dimension mismatch");
  const std::uint32_t q = static_cast<std::uint32_t>(F.size());
  std::uint32_t p = q;
  for (std::uint32_t x = 0; x < q; ++x) {
    const std::uint32_t d = F(x) ^ G(x);
    if (h.contains(x)) {
      if (d) return std::nullopt;
    } else if (p == q) {
      p = x;
    }
  }
  const auto basis = h.linear_basis();
  const std::uint32_t outside = h.beta == 0 ? p : (1u << std::countr_zero(h.functional));
  const std::uint32_t dp = F(p) ^ G(p);
  // values of the linear part on basis + {outside}
  std::vector<std::uint32_t> full_basis(basis);
  full_basis.push_back(outside);
  std::vector<std::uint32_t> img(full_basis.size(), 0);
  for (std::size_t j = 0; j < basis.size(); ++j) img[j] = (F(p ^ basis[j]) ^ G(p ^ basis[j])) ^ dp;
  std::vector<std::uint32_t> lin(q, 0);
  const auto pts = gf2::span(full_basis);
  const auto vals = gf2::span(img);
  for (std::size_t i = 0; i < pts.size(); ++i) lin[pts[i]] = vals[i];
  std::vector<std::uint32_t> cols(F.n());
  for (int i = 0; i < F.n(); ++i) cols[i] = lin[1u << i];
  AffineMap A{LinearMap(F.n(), F.m(), std::move(cols)), 0};
  A.constant = dp ^ A.linear(p);
  for (std::uint32_t x = 0; x < q; ++x)
    if (!h.contains(x) && (F(x) ^ G(x)) != A(x)) return std::nullopt;
  return A;
}

/// L_1..L_13 defining the quadratic APN functions x^3 + Tr(x) L_i(x) on
/// GF(2^6) with alpha^6 + alpha^4 + alpha^3 + alpha + 1 = 0. Entry j of a row
/// is the exponent of alpha in the coefficient of x^(2^j); -1 marks a zero
/// coefficient.
inline const std::array<std::array<int, 6>, 13>& tabulated_exponents() {
  static const std::array<std::array<int, 6>, 13> rows{{
      {-1, -1, -1, -1, -1, -1},
      {42, 3, 34, 59, 59, 12},
      {18, 60, 17, 4, 17, 4},
      {18, 60, 57, 7, 32, 62},
      {42, 1, 29, 55, 9, 56},
      {42, 21, -1, 4, 48, 16},
      {42, 19, 51, 59, 26, 38},
      {42, 19, 60, 11, 25, 13},
      {42, 21, 22, 31, 15, 61},
      {42, 47, 35, 54, 23, 27},
      {42, 21, 23, 32, 14, 51},
      {42, 21, 4, 56, 17, 20},
      {42, 21, -1, 27, 34, 52},
  }};
  return rows;
}

inline std::vector<LinearMap> tabulated_maps(const FieldSpec& field) {
  if (field.n() != 6 || field.modulus() != 0x5B || field.generator() != 2)
    throw Error("the table is defined over GF(2^6) with modulus 0x5b and generator alpha");
  std::vector<LinearMap> out;
  for (const auto& row : tabulated_exponents()) {
    std::vector<Elem> coeffs(6, 0);
    for (int j = 0; j < 6; ++j) coeffs[j] = row[j] < 0 ? 0 : field.gen_pow(row[j]);
    out.push_back(LinearMap::linearized(field, coeffs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constants on the four cosets of a codimension-2 subspace

using CosetConstants = std::array<std::uint32_t, 4>;

inline Vbf coset_modify(const Vbf& F, const CosetDecomposition& dec, const CosetConstants& a) {
  if (dec.n() != F.n()) throw Error("decomposition dimension differs from F");
  std::vector<std::uint32_t> t(F.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = F(x) ^ a[dec.coset_of(x)];
  return Vbf(F.n(), F.m(), std::move(t), F.field());
}

/// Sums F(x1)+F(x2)+F(x3)+F(x4) over the 2-flats meeting every coset once
/// (x_i in U_i, x4 = x1+x2+x3), and the admissible set A = their complement.
struct AdmissibleSums {
  std::vector<std::uint32_t> admissible;
  std::vector<std::uint8_t> realized;  // indexed by value
  std::vector<std::array<std::uint32_t, 4>> flat;  // first flat realizing each value

  bool is_admissible(std::uint32_t s) const { return !realized.at(s); }
};

inline AdmissibleSums admissible_sums(const Vbf& F, const CosetDecomposition& dec, bool require_apn = true) {
  if (dec.n() != F.n()) throw Error("decomposition dimension differs from F");
  if (require_apn && !is_apn(F)) throw Error("coset criterion needs an APN function");
  AdmissibleSums r;
  const std::size_t outs = std::size_t{1} << F.m();
  r.realized.assign(outs, 0);
  r.flat.assign(outs, {});
  const auto& U = dec.subspace();
  const auto& u = dec.reps();
  for (auto a : U) {
    const std::uint32_t x1 = a ^ u[0];
    for (auto b : U) {
      const std::uint32_t x2 = b ^ u[1];
      const std::uint32_t s12 = F(x1) ^ F(x2), x12 = x1 ^ x2;
      for (auto c : U) {
        const std::uint32_t x3 = c ^ u[2], x4 = x12 ^ x3;
        const std::uint32_t s = s12 ^ F(x3) ^ F(x4);
        if (!r.realized[s]) {
          r.realized[s] = 1;
          r.flat[s] = {x1, x2, x3, x4};
        }
      }
    }
  }
  for (std::uint32_t s = 0; s < outs; ++s)
    if (!r.realized[s]) r.admissible.push_back(s);
  return r;
}

/// G = coset_modify(F, dec, a) is APN iff a1+a2+a3+a4 is admissible.
inline Certificate coset_criterion(const Vbf& F, const CosetDecomposition& dec, const CosetConstants& a) {
  const auto sums = admissible_sums(F, dec);
  const std::uint32_t s = a[0] ^ a[1] ^ a[2] ^ a[3];
  if (s >= sums.realized.size()) throw Error("coset constants out of range");
  Certificate c{"coset-constants", !sums.realized[s], {}};
  if (!c.holds) {
    const auto& fl = sums.flat[s];
    c.witness = {{"x1", fl[0]}, {"x2", fl[1]}, {"x3", fl[2]}, {"x4", fl[3]}};
  }
  return c;
}

// ---------------------------------------------------------------------------
// Extended-affine transforms

/// A1 o F o A2 + A3.
inline Vbf ea_transform(const Vbf& F, const AffineMap& A1, const AffineMap& A2, const AffineMap& A3) {
  if (A1.n_in() != F.m() || A1.n_out() != F.m()) throw Error("A1 must act on F_2^m");
  if (A2.n_in() != F.n() || A2.n_out() != F.n()) throw Error("A2 must act on F_2^n");
  if (A3.n_in() != F.n() || A3.n_out() != F.m()) throw Error("A3 must map F_2^n to F_2^m");
  if (!A1.invertible() || !A2.invertible()) throw Error("A1 and A2 must be invertible");
  std::vector<std::uint32_t> t(F.size());
  for (std::uint32_t x = 0; x < t.size(); ++x) t[x] = A1(F(A2(x))) ^ A3(x);
  return Vbf(F.n(), F.m(), std::move(t));
}

}  // namespace apn
