#pragma once

// Induced highest-weight modules with PBW straightening:
//
//   Vacuum  the vacuum module V of the affinization of frakD at level l,
//           spanned by d[a,r](-n) ... |vac>
//   Verma   the D-module M_D(l) induced from the zero character on the
//           nonnegative modes, c acting as l, spanned by D[a](-n) ... |hw>
//
// Monomials are kept in PBW order: modes ascending, ties by (alpha, r).

#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qvir/affine.hpp"
#include "qvir/formal.hpp"
#include "qvir/lie.hpp"
#include "qvir/lincomb.hpp"

namespace qvir {

enum class ModuleKind : std::uint8_t { Vacuum, Verma };

struct ModeLabel {
  int mode = 0;
  int alpha = 1;
  int r = 0;  // always 0 in M_D(l)

  auto operator<=>(const ModeLabel&) const = default;
};

struct Monomial {
  std::vector<ModeLabel> factors;

  int degree() const;
  auto operator<=>(const Monomial&) const = default;
};

using PBWVector = LinComb<Monomial>;

class Inhomogeneous : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InducedModule {
 public:
  InducedModule(ModuleKind kind, RatQ level);

  ModuleKind kind() const { return kind_; }
  const RatQ& level() const { return level_; }

  PBWVector highest_weight() const { return PBWVector(Monomial{}); }

  // a(n) v for a generator label; finitely many terms always.
  PBWVector act(const ModeLabel& x, const PBWVector& v) const;
  // Elements: D with c -> l (Verma) or the affine algebra with K -> l (Vacuum).
  PBWVector act_element(const LieElement& e, const PBWVector& v) const;
  PBWVector act_element(const AffineElement& e, const PBWVector& v) const;

  // Applies the factors right to left to the highest-weight vector.
  PBWVector pbw_normalize(const std::vector<ModeLabel>& factors, const RatQ& coeff = RatQ(1)) const;

  std::string monomial_text(const Monomial& m) const;
  std::string to_string(const PBWVector& v) const;
  PBWVector parse(std::string_view text) const;

  // [x, y] as (generator terms, central scalar already multiplied by l).
  std::pair<std::vector<std::pair<ModeLabel, RatQ>>, RatQ> bracket(const ModeLabel& x, const ModeLabel& y) const;

  std::size_t cache_size() const;

 private:
  PBWVector act_monomial(const ModeLabel& x, const Monomial& m) const;
  PBWVector act_bracket(const ModeLabel& x, const ModeLabel& y, const Monomial& rest) const;

  ModuleKind kind_;
  RatQ level_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<ModeLabel, Monomial>, PBWVector> cache_;
};

// Sum of -mode over factors; throws Inhomogeneous naming two distinct degrees.
int weight_grade(const PBWVector& v);
// Largest degree of a monomial in v (0 for the zero vector).
int max_degree(const PBWVector& v);

// sigma_m: r -> r + m on every factor (Vacuum).
PBWVector sigma_on_V(int m, const PBWVector& v);
// R_{sigma_m} = q^{-m L(0)} sigma_m.
PBWVector R_g(int m, const PBWVector& v);

// u_m w in V by normal-ordered reconstruction.
PBWVector vertex_coeff(const InducedModule& V, const PBWVector& u, int m, const PBWVector& w);

// The identification a -> a(-1)|vac>.
PBWVector generator_vector(int alpha, int r);

struct ModuleVerdict {
  bool holds = true;
  std::string witness;
};

// u_m(v_n w) - v_n(u_m w) = sum_i binom(m, i) (u_i v)_{m+n-i} w
ModuleVerdict commutator_check_borcherds(const InducedModule& V, const PBWVector& u, const PBWVector& v, int m,
                                         int n, const PBWVector& w);

// sum_i binom(p,i)(u_{l+i}v)_{m+p-i} w
//   = sum_i (-1)^i binom(l,i) (u_{p+l-i} v_{m+i} w - (-1)^l v_{m+l-i} u_{p+i} w)
ModuleVerdict borcherds_identity_check(const InducedModule& V, const PBWVector& u, const PBWVector& v,
                                       const PBWVector& w, int p, int l, int m);

// q^{-rn} Dtilde^a(n) w in M_D(l): the n-th coefficient of q^r Dtilde^a(q^r x).
PBWVector quasi_field_apply(const InducedModule& M, int alpha, int r, int n, const PBWVector& w);
// The coefficient of x^{-n} in Dhat^a(q^r x), namely q^{-rn} Dtilde^a(n), applied to w.
PBWVector phi_field_apply(const InducedModule& M, int alpha, int r, int n, const PBWVector& w);

// Generalized binomial coefficient binom(x, k), k >= 0.
Rational binomial(long x, long k);

// Fields of D acting on a fixed vector of M_D(l), as a formal-calculus realization.
struct ModuleRealization {
  using Value = PBWVector;
  const InducedModule* module = nullptr;
  PBWVector w;

  Value zero() const { return {}; }
  Value field(const FieldSymbol& f, int p) const { return module->act_element(d_family_coefficient(f, p), w); }
  Value central() const { return module->level() * w; }
  Value identity() const { return w; }
  Value commutator(const FieldSymbol& a, int i, const FieldSymbol& b, int j) const;
};

std::string value_text(const PBWVector& v);

}  // namespace qvir
