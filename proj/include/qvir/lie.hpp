#pragma once

// Canonical bases, brackets, invariant forms and structure maps for the
// q-Virasoro algebra D, the Lie algebra frakD (generators d^{a,r}) and
// gl_infinity (matrix units E_{i,j}).
//
// The relations D^{-a}(n) = -D^{a}(n) and d^{-a,r} = -d^{a,r} are never
// stored: every label kept inside an element has a >= 1, and canon_label is
// the normal-form map onto that basis.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "qvir/lincomb.hpp"
#include "qvir/qq_field.hpp"

namespace qvir {

enum class Algebra : std::uint8_t { D, FrakD, Gl };

std::string_view algebra_name(Algebra a);

class TagMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LieLabel {
  enum class Kind : std::uint8_t { DGen, DCentral, FrakD, GlUnit };

  Kind kind = Kind::DCentral;
  int a = 0;  // alpha, or row index i for GlUnit
  int b = 0;  // mode n, r-index, or column index j

  static constexpr LieLabel d_gen(int alpha, int n) { return {Kind::DGen, alpha, n}; }
  static constexpr LieLabel central() { return {Kind::DCentral, 0, 0}; }
  static constexpr LieLabel frak(int alpha, int r) { return {Kind::FrakD, alpha, r}; }
  static constexpr LieLabel unit(int i, int j) { return {Kind::GlUnit, i, j}; }

  Algebra algebra() const;
  std::string to_string() const;
  static LieLabel parse(std::string_view text);

  auto operator<=>(const LieLabel&) const = default;
};

class LieElement {
 public:
  explicit LieElement(Algebra tag) : tag_(tag) {}
  LieElement(Algebra tag, const LieLabel& label, const RatQ& coeff = RatQ(1));

  Algebra tag() const { return tag_; }
  const LinComb<LieLabel>& terms() const { return terms_; }
  bool is_zero() const { return terms_.is_zero(); }
  RatQ coeff(const LieLabel& label) const { return terms_.coeff(label); }

  void add(const LieLabel& label, const RatQ& coeff);
  void add_scaled(const LieElement& other, const RatQ& c);

  LieElement& operator+=(const LieElement& rhs);
  LieElement& operator-=(const LieElement& rhs);
  LieElement& operator*=(const RatQ& c);
  friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
  friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
  friend LieElement operator*(const RatQ& c, LieElement a) { return a *= c; }
  LieElement operator-() const;

  friend bool operator==(const LieElement& a, const LieElement& b) {
    return a.tag_ == b.tag_ && a.terms_ == b.terms_;
  }

  std::map<LieLabel, Rational> specialize(const Rational& q0) const { return terms_.specialize(q0); }

  std::string to_string() const;
  static LieElement parse(Algebra tag, std::string_view text);

 private:
  void check_label(const LieLabel& label) const;

  Algebra tag_;
  LinComb<LieLabel> terms_;
};

// Result of an identity check: on failure, residual is the nonzero defect.
template <class T>
struct Verdict {
  bool holds = true;
  T residual;
  explicit operator bool() const { return holds; }
};

// ---------------------------------------------------------------------------
// Basis elements

// Signed canonical basis element. For Algebra::Gl this is simply E_{alpha,index}.
LieElement canon_label(Algebra tag, int alpha, int index);
LieElement d_gen(int alpha, int n);
LieElement d_central();
LieElement frak(int alpha, int r);
LieElement gl_unit(int i, int j);

// ---------------------------------------------------------------------------
// Brackets

LieElement bracket_D(const LieElement& a, const LieElement& b);
LieElement bracket_frakD(const LieElement& a, const LieElement& b);
LieElement bracket_gl(const LieElement& a, const LieElement& b);
// Dispatches on the (common) tag.
LieElement bracket(const LieElement& a, const LieElement& b);

// Generator-level structure constants, without the memo cache.
LieElement bracket_D_generators(int alpha, int n, int beta, int m);
LieElement bracket_frakD_generators(int alpha, int r, int beta, int s);

// ---------------------------------------------------------------------------
// Maps and forms

LieElement tau_map(const LieElement& a);
// G^tau_{alpha,m} = E_{alpha+m, m-alpha} - E_{m-alpha, m+alpha}
LieElement gtau(int alpha, int m);
// d^{alpha,r} -> G^tau_{-alpha,r}
LieElement embed_frakD(const LieElement& a);
// Invariant bilinear form on frakD (d-form) or gl_infinity (trace form).
RatQ pair_form(const LieElement& a, const LieElement& b);
// d^{alpha,r} -> d^{alpha,r+m}
LieElement sigma_shift(int m, const LieElement& a);

Verdict<LieElement> check_jacobi(const LieElement& a, const LieElement& b, const LieElement& c);
Verdict<RatQ> check_invariance(const LieElement& a, const LieElement& b, const LieElement& c);

// ---------------------------------------------------------------------------
// Structure-constant memo cache (generator pairs of D and frakD).
//
// Reads are concurrent; insertions take an exclusive lock. Loaded entries
// are trusted as-is, which is what lets a corrupted cache file surface as
// failing checks downstream.

class StructureCache {
 public:
  std::optional<LieElement> lookup(const LieLabel& x, const LieLabel& y) const;
  void insert(const LieLabel& x, const LieLabel& y, const LieElement& value);
  std::size_t size() const;

  void load(const std::string& path);
  void save(const std::string& path) const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<LieLabel, LieLabel>, LieElement> entries_;
};

// Installs (or clears, with nullptr) the process-wide cache consulted by
// bracket_D and bracket_frakD.
void set_structure_cache(std::shared_ptr<StructureCache> cache);
std::shared_ptr<StructureCache> structure_cache();

}  // namespace qvir
