#pragma once

// Window-truncated formal calculus in two variables x1, x2.
//
// A commutator identity [A(x1), B(x2)] = sum of DeltaTerms is checked one
// coefficient at a time: the left side comes from a realization's bracket,
// the right side from expanding each DeltaTerm. Realizations are duck-typed:
//
//   using Value = ...;
//   Value zero() const;
//   Value field(const FieldSymbol&, int p) const;  // coefficient of x^p
//   Value central() const;
//   Value identity() const;
//   Value commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const;
//
// and Value supports add_scaled(v, c), is_zero() and value_text(v).

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvir/affine.hpp"
#include "qvir/lie.hpp"

namespace qvir {

struct Window {
  int bound = 5;
  explicit Window(int w);
  bool contains(int i, int j) const { return std::abs(i) <= bound && std::abs(j) <= bound; }
};

// Field families and their mode conventions.
//   D        sum D^a(n) x^{-n-1}
//   Dtilde   D^a(x) - c x^{-1} / (q^{-a} - q^a)
//   Dar      q^r Dtilde^a(q^r x)
//   Dbar     x D^a(x)
//   Dhat     x Dtilde^a(x)
//   Dhat_ar  Dhat^a(q^r x)
//   d_aff    sum d^{a,r}_n x^{-n-1} in the affine algebra
enum class Family : std::uint8_t { D, Dtilde, Dar, Dbar, Dhat, Dhat_ar, d_aff };

struct FieldSymbol {
  Family family = Family::D;
  int alpha = 0;
  int r = 0;

  std::string to_string() const;
  auto operator<=>(const FieldSymbol&) const = default;
};

// Mode n carried by the coefficient of x^p.
int mode_of_exponent(Family f, int p);
int exponent_of_mode(Family f, int n);

struct Payload {
  enum class Kind : std::uint8_t { Field, Central, Identity };
  Kind kind = Kind::Identity;
  FieldSymbol field;
  int scale = 0;  // the field enters as F(q^scale x2)

  static Payload of_field(const FieldSymbol& f, int scale = 0) { return {Kind::Field, f, scale}; }
  static Payload central() { return {Kind::Central, {}, 0}; }
  static Payload identity() { return {Kind::Identity, {}, 0}; }

  std::string to_string() const;
  auto operator<=>(const Payload&) const = default;
};

enum class Flavor : std::uint8_t { D2, X2D2 };

// prefactor * payload(x2) * x2^x2_power * [derivative of] x1^{-e} delta(q^shift x2 / x1)
struct DeltaTerm {
  int shift = 0;
  int order = 0;  // 0 or 1
  Flavor flavor = Flavor::D2;
  RatQ prefactor = RatQ(1);
  bool x1_inverse = true;
  int x2_power = 0;
  Payload payload;

  std::string to_string() const;
};

template <class V>
using BiSeries = std::map<std::pair<int, int>, V>;

// Scalar part of a term (payload treated as 1) at (x1^i, x2^j), before any
// payload exponent bookkeeping: returns (delta coefficient, x2 exponent).
std::optional<std::pair<RatQ, int>> delta_coefficient(const DeltaTerm& t, int i);

BiSeries<RatQ> expand_delta(const DeltaTerm& t, const Window& w);

// iota_{x1,x2} (x1 - c x2)^m, truncated to the window.
BiSeries<RatQ> expand_iota_binomial(const RatQ& c, int m, const Window& w);

template <class V>
void add_scaled_into(V& acc, const V& v, const RatQ& c) {
  acc.add_scaled(v, c);
}
inline void add_scaled_into(RatQ& acc, const RatQ& v, const RatQ& c) { acc += v * c; }

// f * s for a finite f, evaluated at every position of the output window.
template <class V>
BiSeries<V> multiply(const BiSeries<RatQ>& f, const BiSeries<V>& s, const Window& out, const V& zero) {
  BiSeries<V> result;
  for (int i = -out.bound; i <= out.bound; ++i)
    for (int j = -out.bound; j <= out.bound; ++j) {
      V acc = zero;
      for (const auto& [ab, c] : f) {
        auto it = s.find({i - ab.first, j - ab.second});
        if (it != s.end()) add_scaled_into(acc, it->second, c);
      }
      if (!acc.is_zero()) result.emplace(std::make_pair(i, j), std::move(acc));
    }
  return result;
}

// ---------------------------------------------------------------------------
// Identities

enum class IdentityId : std::uint8_t { GEN_2_8, GEN_2_17, GEN_2_9, GEN_3_2, GEN_3_4, AFF_2_13, PHI_3_6, THM_3_9 };

std::string identity_name(IdentityId id);
IdentityId parse_identity(const std::string& name);
bool identity_uses_rs(IdentityId id);

struct IdentityParams {
  int alpha = 0;
  int beta = 0;
  int r = 0;
  int s = 0;
  RatQ level = RatQ(1);  // only PHI-3.6 and THM-3.9 carry an explicit level
};

// The two fields whose commutator the identity describes.
std::pair<FieldSymbol, FieldSymbol> identity_fields(IdentityId id, const IdentityParams& p);
// The right-hand side as a list of DeltaTerms, degenerate branches included.
std::vector<DeltaTerm> identity_rhs(IdentityId id, const IdentityParams& p);

// Three-term display of the commutator rebuilt from e-products (Borcherds form).
std::vector<DeltaTerm> borcherds_display(const IdentityParams& p);

// ---------------------------------------------------------------------------
// Evaluation against a realization

template <class R>
typename R::Value payload_value(const R& real, const Payload& pl, int p) {
  switch (pl.kind) {
    case Payload::Kind::Field: {
      auto v = real.field(pl.field, p);
      if (pl.scale != 0 && !v.is_zero()) {
        auto scaled = real.zero();
        scaled.add_scaled(v, RatQ::q_power(pl.scale * p));
        return scaled;
      }
      return v;
    }
    case Payload::Kind::Central:
      if (p == 0) return real.central();
      return real.zero();
    case Payload::Kind::Identity:
      if (p == 0) return real.identity();
      return real.zero();
  }
  return real.zero();
}

template <class R>
void accumulate_term(const R& real, const DeltaTerm& t, int i, int j, typename R::Value& acc) {
  if (t.prefactor.is_zero()) return;
  auto dc = delta_coefficient(t, i);
  if (!dc) return;
  const int p = j - dc->second - t.x2_power;
  if (t.payload.kind != Payload::Kind::Field && p != 0) return;
  auto v = payload_value(real, t.payload, p);
  if (!v.is_zero()) acc.add_scaled(v, t.prefactor * dc->first);
}

template <class R>
typename R::Value rhs_coefficient(const R& real, const std::vector<DeltaTerm>& terms, int i, int j) {
  auto acc = real.zero();
  for (const auto& t : terms) accumulate_term(real, t, i, j, acc);
  return acc;
}

struct IdentityVerdict {
  bool holds = true;
  int positions = 0;
  std::string witness;  // first failing position, lexicographic in (i, j)
  // One entry per specialization point: the first failing position, if any.
  std::vector<std::optional<std::string>> specialized;
};

// Whether lhs and rhs agree after q -> q0; a pole counts as disagreement.
template <class V>
std::optional<std::string> specialized_mismatch(const V& lhs, const V& rhs, const Rational& q0) {
  try {
    if (lhs.specialize(q0) == rhs.specialize(q0)) return std::nullopt;
    return "values differ at q = " + q0.get_str();
  } catch (const std::exception& e) {
    return std::string("evaluation at q = ") + q0.get_str() + " failed: " + e.what();
  }
}

// With q0s given, every position that passes exactly is also compared
// after specialization at each q0.
template <class R>
IdentityVerdict check_terms_against_commutator(const R& real, const FieldSymbol& a, const FieldSymbol& b,
                                               const std::vector<DeltaTerm>& terms, const Window& w,
                                               const std::vector<Rational>& q0s = {}) {
  IdentityVerdict out;
  out.specialized.resize(q0s.size());
  for (int i = -w.bound; i <= w.bound; ++i)
    for (int j = -w.bound; j <= w.bound; ++j) {
      ++out.positions;
      auto lhs = real.commutator(a, i, b, j);
      auto rhs = rhs_coefficient(real, terms, i, j);
      auto residual = lhs;
      residual.add_scaled(rhs, RatQ(-1));
      const std::string where = "coefficient x1^" + std::to_string(i) + " x2^" + std::to_string(j);
      if (!residual.is_zero()) {
        out.holds = false;
        out.witness = where + ": lhs = " + value_text(lhs) + "; rhs = " + value_text(rhs) +
                      "; residual = " + value_text(residual);
        return out;
      }
      for (std::size_t k = 0; k < q0s.size(); ++k) {
        if (out.specialized[k]) continue;
        if (auto m = specialized_mismatch(lhs, rhs, q0s[k])) out.specialized[k] = where + ": " + *m;
      }
    }
  return out;
}

template <class R>
IdentityVerdict check_generating_identity(IdentityId id, const IdentityParams& p, const Window& w, const R& real,
                                          const std::vector<Rational>& q0s = {}) {
  auto [a, b] = identity_fields(id, p);
  return check_terms_against_commutator(real, a, b, identity_rhs(id, p), w, q0s);
}

// Compares two DeltaTerm sums coefficientwise (LHS-free).
template <class R>
IdentityVerdict compare_term_sums(const R& real, const std::vector<DeltaTerm>& x, const std::vector<DeltaTerm>& y,
                                  const Window& w) {
  IdentityVerdict out;
  for (int i = -w.bound; i <= w.bound; ++i)
    for (int j = -w.bound; j <= w.bound; ++j) {
      ++out.positions;
      auto residual = rhs_coefficient(real, x, i, j);
      residual.add_scaled(rhs_coefficient(real, y, i, j), RatQ(-1));
      if (!residual.is_zero()) {
        out.holds = false;
        out.witness = "coefficient x1^" + std::to_string(i) + " x2^" + std::to_string(j) +
                      ": residual = " + value_text(residual);
        return out;
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Realizations in D and in the affine algebra

// Coefficient of x^p of a D-family field, as an element of D.
LieElement d_family_coefficient(const FieldSymbol& f, int p);

inline std::string value_text(const LieElement& v) { return v.to_string(); }
inline std::string value_text(const AffineElement& v) { return to_string(v); }

struct LieRealization {
  using Value = LieElement;
  Value zero() const { return LieElement(Algebra::D); }
  Value field(const FieldSymbol& f, int p) const { return d_family_coefficient(f, p); }
  Value central() const { return d_central(); }
  Value identity() const;  // not an element of D; throws
  Value commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const {
    return bracket_D(field(a, i), field(b, j));
  }
};

struct AffineRealization {
  using Value = AffineElement;
  Value zero() const { return AffineElement(); }
  Value field(const FieldSymbol& f, int p) const;
  Value central() const { return aff_central(); }
  Value identity() const;  // throws
  Value commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const {
    return bracket_affine(field(a, i), field(b, j));
  }
};

// Formal symbols: each (payload, exponent) is an independent basis vector.
struct SymbolicKey {
  Payload payload;
  int p = 0;
  auto operator<=>(const SymbolicKey&) const = default;
};
using SymbolicValue = LinComb<SymbolicKey>;
std::string value_text(const SymbolicValue& v);

struct SymbolicRealization {
  using Value = SymbolicValue;
  Value zero() const { return {}; }
  Value field(const FieldSymbol& f, int p) const;
  Value central() const { return Value(SymbolicKey{Payload::central(), 0}); }
  Value identity() const { return Value(SymbolicKey{Payload::identity(), 0}); }
  Value commutator(const FieldSymbol&, int, const FieldSymbol&, int) const;  // throws
};

// Mode identity: coefficients of q^r Dtilde^a(q^r x) equal those of D^{a,r}(x).
IdentityVerdict check_mode_identity(int alpha, int r, const Window& w);

// The two degenerate displays: for gamma != 0 the coefficient of
// (x1^{-n-1} x2^n) in (1/(q^{-g}-q^{g}))[delta(q^g .) - delta(q^{-g} .)] is
// -[n]_{q^g}; at q = 1 it must match -n, the x2 d/dx2 replacement.
IdentityVerdict check_degenerate_limit(int gamma, const Window& w);

// ---------------------------------------------------------------------------
// Quasi-locality certificates

struct CertificateFactor {
  int shift = 0;
  int multiplicity = 0;
  auto operator<=>(const CertificateFactor&) const = default;
};
using Certificate = std::vector<CertificateFactor>;

std::string certificate_text(const Certificate& c);

// Expansion of prod (x1 - q^k x2)^m as a finite scalar series.
BiSeries<RatQ> certificate_polynomial(const Certificate& c);

// Nonzero terms of the decomposition: multiplicity 1 per plain delta and 2
// per derivative delta, merged by shift with the larger multiplicity.
Certificate structural_certificate(const std::vector<DeltaTerm>& terms, const std::vector<bool>& term_is_zero);

class NoCertificate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Whether f(x1,x2) [A(x1), B(x2)] vanishes at every window position.
template <class R>
std::optional<std::string> certificate_residual(const R& real, const FieldSymbol& a, const FieldSymbol& b,
                                                const Certificate& cert, const Window& w) {
  const auto poly = certificate_polynomial(cert);
  for (int i = -w.bound; i <= w.bound; ++i)
    for (int j = -w.bound; j <= w.bound; ++j) {
      auto acc = real.zero();
      for (const auto& [ab, c] : poly) acc.add_scaled(real.commutator(a, i - ab.first, b, j - ab.second), c);
      if (!acc.is_zero()) {
        return "f = " + certificate_text(cert) + " leaves coefficient x1^" + std::to_string(i) + " x2^" +
               std::to_string(j) + " = " + value_text(acc);
      }
    }
  return std::nullopt;
}

// Minimal certificate over a set of realizations (e.g. one per test vector):
// start from the structural candidate, verify it, then greedily drop factors
// while annihilation persists in every realization.
template <class R>
Certificate quasi_locality_certificate(const std::vector<R>& contexts, const FieldSymbol& a, const FieldSymbol& b,
                                       const std::vector<DeltaTerm>& terms, const Window& w) {
  std::vector<bool> zero(terms.size(), false);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    bool all_zero = true;
    for (const auto& ctx : contexts) {
      // a term is structurally zero if its payload vanishes at every exponent tried
      for (int p = -w.bound - 2; p <= w.bound + 2 && all_zero; ++p) {
        if (t.payload.kind != Payload::Kind::Field && p != 0) continue;
        if (!t.prefactor.is_zero() && !payload_value(ctx, t.payload, p).is_zero()) all_zero = false;
      }
      if (!all_zero) break;
    }
    zero[k] = all_zero;
  }
  Certificate cert = structural_certificate(terms, zero);
  // a window narrower than the candidate's degree cannot see why a factor is needed
  int degree = 0;
  for (const auto& f : cert) degree += f.multiplicity;
  const Window cw(std::max(w.bound, degree + 2));
  auto fails = [&](const Certificate& c) -> std::optional<std::string> {
    for (const auto& ctx : contexts) {
      if (auto r = certificate_residual(ctx, a, b, c, cw)) return r;
    }
    return std::nullopt;
  };
  if (auto r = fails(cert)) throw NoCertificate("no certificate from candidate shifts: " + *r);
  for (std::size_t k = 0; k < cert.size();) {
    Certificate trial = cert;
    if (--trial[k].multiplicity == 0) trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
    if (!fails(trial)) {
      cert = std::move(trial);
      k = 0;
    } else {
      ++k;
    }
  }
  return cert;
}

// ---------------------------------------------------------------------------
// e-products

// n -> combination of payloads; only shift-0 terms in x2 d/dx2 flavour
// contribute (order 0 to product 0, order 1 to product 1).
using EProducts = std::map<int, LinComb<Payload>>;
EProducts extract_e_products(const std::vector<DeltaTerm>& terms);
std::string e_products_text(const EProducts& e);

// The three displayed product formulas for Dhat^{a,r}, Dhat^{b,s}.
EProducts displayed_e_products(const IdentityParams& p);

// sum_n Y(product_n, x2) (1/n!) d/dx2^n x1^{-1} delta(x2/x1)
std::vector<DeltaTerm> borcherds_rebuild(const EProducts& e);

}  // namespace qvir
